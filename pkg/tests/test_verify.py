import pytest

from quartwist import henn
from quartwist import twistgen as tg
from quartwist.exactfield import CommonTowerRequired, define_automorphism, identity_aut
from quartwist.projgroup import projective_order
from quartwist.qforms import ProjMatrix, TernaryQuartic
from quartwist.verify import (
    MissingGaloisData, aut_group, check_cocycle, check_equivalence, check_isomorphism,
    check_rationality, cocycle_identity, cocycle_value, fermat_diagonal_equivalent,
    verify_twist,
)


def identity_twist(t):
    return tg.Twist(t.case, {}, {}, t.source, ProjMatrix.identity(t.tower), t.source, t.aut,
                    [identity_aut(t.tower)])


@pytest.fixture(scope="module")
def fd23():
    return tg.fermat_diagonal(2, 3)


def test_identity_twist(fd23):
    t = identity_twist(fd23)
    ok, lam = check_isomorphism(t)
    assert ok and lam == 1
    (entry,) = check_cocycle(t)
    assert entry.ok and entry.xi.is_scalar()


def test_diagonal_iso(fd23):
    ok, lam = check_isomorphism(fd23)
    assert ok and lam == 1
    assert check_rationality(fd23)


def test_non_automorphism_matrix(fd23):
    T = fd23.tower
    bad = tg.Twist("x", {}, {}, fd23.curve, ProjMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]], T),
                   fd23.source, fd23.aut)
    assert check_isomorphism(bad)[0] is False


def test_corrupted_curve(fd23):
    T = fd23.tower
    i = T.gen("i")
    coeffs = dict(fd23.curve.items())
    coeffs[(4, 0, 0)] = coeffs[(4, 0, 0)] * i
    bad = tg.Twist("x", {}, {}, TernaryQuartic(T, coeffs), fd23.iso, fd23.source, fd23.aut,
                   fd23.galois)
    assert not check_rationality(bad)
    r = verify_twist(bad)
    assert not r.ok() and r.offending[0][0] == (4, 0, 0)


def test_diagonal_cocycle_value(fd23):
    T = fd23.tower
    i, r2, r3 = (T.gen(g) for g in T.gens)
    sigma = define_automorphism(T, {"i": i, "r4_2": i * r2, "r4_3": r3})
    xi = cocycle_value(fd23, sigma)
    assert xi.proj_eq(ProjMatrix.diag(-i, 1, 1, T))
    assert aut_group(fd23).index(xi) is not None


def test_klein_row_two_cocycle():
    t = tg.klein_twist(2, {"m": 2})
    T = t.tower
    sigma = define_automorphism(T, {"sqrtm7": T.gen("sqrtm7"), "sqrt2": -T.gen("sqrt2")})
    xi = cocycle_value(t, sigma)
    assert projective_order(xi) == 2
    assert aut_group(t).index(xi) is not None
    assert all(e.ok for e in check_cocycle(t))


def test_cocycle_identity_on_generators(fd23):
    gal = fd23.galois
    for s in gal:
        for u in gal:
            assert cocycle_identity(fd23, s, u)


def test_missing_galois():
    fb = tg.new_builder()
    t = tg.fermat_diagonal(2, 3, builder=fb)
    assert t.galois is None
    with pytest.raises(MissingGaloisData):
        check_cocycle(t)
    r = verify_twist(t)
    assert r.cocycle is None and not r.ok() and r.ok(allow_no_galois=True)
    assert r.to_json()["cocycle"] == "skipped"


def test_equivalence_reflexive(fd23):
    w = check_equivalence(fd23, fd23)
    assert w is not None and w.index == 0 and w.N.is_scalar()


def test_case_one_square_classes():
    fb = tg.new_builder()
    p = henn.SAMPLE_PARAMS["I"]
    a = tg.henn_case_twist("I", p, {"m": 2}, builder=fb)
    b = tg.henn_case_twist("I", p, {"m": 8}, builder=fb)
    c = tg.henn_case_twist("I", p, {"m": 3}, builder=fb)
    T = fb.tower
    a, b, c = (x.lift_to(T) for x in (a, b, c))
    assert check_equivalence(a, b) is not None
    assert check_equivalence(a, c) is None


def test_diagonal_inequivalent():
    fb = tg.new_builder()
    a = tg.fermat_diagonal(2, 3, builder=fb)
    b = tg.fermat_diagonal(1, 1, builder=fb)
    T = fb.tower
    assert check_equivalence(a.lift_to(T), b.lift_to(T)) is None
    assert not fermat_diagonal_equivalent(2, 3, 1, 1)


def test_sixteen_is_trivial():
    fb = tg.new_builder()
    a = tg.fermat_diagonal(16, 1, builder=fb)
    b = tg.fermat_diagonal(1, 1, builder=fb)
    T = fb.tower
    assert check_equivalence(a.lift_to(T), b.lift_to(T)) is not None
    assert fermat_diagonal_equivalent(1, 1, 16, 1)


def test_set_criterion():
    assert fermat_diagonal_equivalent(2, 3, 2, 3)
    assert fermat_diagonal_equivalent(2, 3, 3, 2)
    assert fermat_diagonal_equivalent(2, 1, 8, 8)          # m = 2 gives {16, 16, 2}
    assert not fermat_diagonal_equivalent(2, 1, 1, 8)
    with pytest.raises(tg.ZeroParameter):
        fermat_diagonal_equivalent(0, 1, 1, 1)


def test_unrelated_towers():
    a = tg.fermat_diagonal(2, 3)
    b = tg.fermat_diagonal(5, 1)
    with pytest.raises(CommonTowerRequired):
        check_equivalence(a, b)


def test_almost_diagonal_classes():
    # 16 + 16√2 = 2^4 (1 + √2); (1 + √2)/(7 ± 5√2) is (1+√2)^-2 or -(1+√2)^4
    fb = tg.new_builder()
    ts = [tg.fermat_almost_diagonal(*p, builder=fb) for p in [(1, 1, 2), (7, 5, 2), (16, 16, 2),
                                                              (2, 2, 2)]]
    T = fb.tower
    a, b, c, d = (x.lift_to(T) for x in ts)
    assert check_equivalence(a, c) is not None
    assert check_equivalence(a, b) is None
    assert check_equivalence(a, d) is None
    assert check_equivalence(c, a) is not None


def test_report_json(fd23):
    r = verify_twist(fd23).to_json()
    assert r["iso_ok"] and r["rational_ok"] and r["cocycle_ok"]
    assert r["lambda"] == "1"
