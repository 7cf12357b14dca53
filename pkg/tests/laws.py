"""Randomized laws, 1000 examples each (LAW_EXAMPLES overrides for quick local runs)."""

import os
from fractions import Fraction
from functools import lru_cache

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from quartwist import twistgen as tg
from quartwist.exactfield import build_tower, define_automorphism, nth_power_free
from quartwist.projgroup import generate_group
from quartwist.qforms import EXPONENTS, ProjMatrix, TernaryQuartic, evaluate, proportionality, substitute
from quartwist.verify import check_equivalence, cocycle_identity, cocycle_value

LAWS = settings(max_examples=int(os.environ.get("LAW_EXAMPLES", 1000)), deadline=None,
                suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large,
                                             HealthCheck.large_base_example])

QIR = build_tower([("i", [1, 0, 1]), ("r", [-2, 0, 0, 0, 1])])
# Q(w, c) with w a cube root of unity and c^3 = 5: a second shape, odd degrees
QWC = build_tower([("w", [1, 1, 1]), ("c", [-5, 0, 0, 1])])
TOWERS = [QIR, QWC]

small = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero_small = small.filter(bool)


def elems(t):
    return st.tuples(st.lists(st.integers(-30, 30), min_size=t.degree, max_size=t.degree),
                     st.integers(1, 5)).map(
        lambda p: sum((Fraction(x, p[1]) * b for x, b in zip(p[0], basis(t)) if x), t.zero()))


@lru_cache(maxsize=None)
def basis(t):
    out = [t.one()]
    for j in range(1, t.height + 1):
        g = t.gen(j)
        out = [b * g ** k for k in range(t.degrees[j]) for b in out]
    return tuple(out)


@lru_cache(maxsize=None)
def automorphisms(t):
    if t is QIR or t == QIR:
        i, r = t.gen(1), t.gen(2)
        return tuple(define_automorphism(t, [s * i, i ** k * r]) for s in (1, -1) for k in range(4))
    w, c = t.gen(1), t.gen(2)
    return tuple(define_automorphism(t, [wi, w ** k * c]) for wi in (w, w * w) for k in range(3))


towers = st.sampled_from(TOWERS)


@st.composite
def tower_and(draw, n):
    t = draw(towers)
    return (t,) + tuple(draw(elems(t)) for _ in range(n))


# --- ring axioms ---------------------------------------------------------------------

@LAWS
@given(tower_and(3))
def test_ring_axioms(x):
    t, a, b, c = x
    assert (a * b) * c == a * (b * c)
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a and a + b == b + a
    assert a - a == t.zero() and a * t.one() == a
    if a:
        assert a * a.inv() == t.one()
        assert (b / a) * a == b


# --- field automorphisms -----------------------------------------------------------

@LAWS
@given(tower_and(2), st.integers(0, 5))
def test_homomorphism_laws(x, k):
    t, a, b = x
    auts = automorphisms(t)
    s = auts[k % len(auts)]
    assert s(a + b) == s(a) + s(b)
    assert s(a * b) == s(a) * s(b)
    assert s(t.one()) == t.one()
    if a:
        assert s(a.inv()) == s(a).inv()


@LAWS
@given(tower_and(1), st.integers(0, 5), st.integers(0, 5))
def test_composition_law(x, j, k):
    t, a = x
    auts = automorphisms(t)
    s, u = auts[j % len(auts)], auts[k % len(auts)]
    assert s.compose(u)(a) == s(u(a))


@LAWS
@given(small)
def test_base_field_fixed(q):
    for t in TOWERS:
        a = t.elem(q)
        for s in automorphisms(t):
            assert s(a) == a and s(a).level() == 0


@LAWS
@given(st.integers(2, 200).filter(lambda a: nth_power_free(a, 4) == a and a not in (1,)))
def test_fourth_root_rotation_has_order_four(a):
    t = build_tower([("i", [1, 0, 1]), ("r", [-a, 0, 0, 0, 1])])
    i, r = t.gen(1), t.gen(2)
    s = define_automorphism(t, [i, i * r])
    assert s.order() == 4
    assert not s.compose(s).is_identity()


# --- n-th power classes ------------------------------------------------------------

@LAWS
@given(nonzero_small, nonzero_small, st.integers(2, 9))
def test_nth_power_free_laws(x, y, n):
    c = nth_power_free(x, n)
    assert nth_power_free(c, n) == c
    assert nth_power_free(x * y ** n, n) == c
    assert Fraction(int(c.numerator), int(c.denominator)) / x == 1 or \
        _is_nth_power(Fraction(int(c.numerator), int(c.denominator)) / x, n)


def _is_nth_power(q, n):
    from quartwist.exactfield import nth_root_rational_exact
    return nth_root_rational_exact(q, n) is not None


# --- forms ---------------------------------------------------------------------------

def _flat(t, n, lo=-3, hi=3, den=2):
    """n tower elements from one flat integer draw (coefficients over a fixed denominator)."""
    d = t.degree
    B = basis(t)
    def build(xs):
        return [sum((Fraction(x, den) * b for x, b in zip(xs[k * d:(k + 1) * d], B) if x), t.zero())
                for k in range(n)]
    return st.lists(st.integers(lo, hi), min_size=n * d, max_size=n * d).map(build)


def forms(t):
    return _flat(t, 15).map(lambda cs: TernaryQuartic(t, cs))


def matrices(t):
    return _flat(t, 9).map(lambda e: ProjMatrix([e[0:3], e[3:6], e[6:9]], t, check=False)) \
        .filter(lambda M: bool(M.det()))


def tiny_elems(t, n):
    return _flat(t, n)


QI = build_tower([("i", [1, 0, 1])])


@LAWS
@given(forms(QI), matrices(QI), matrices(QI))
def test_substitution_functorial(F, M, N):
    assert substitute(substitute(F, M), N) == substitute(F, M @ N)


@LAWS
@given(forms(QI), matrices(QI), tiny_elems(QI, 3))
def test_evaluate_consistent(F, M, p):
    assert evaluate(substitute(F, M), p) == evaluate(F, M.apply_vec(p))


@LAWS
@given(forms(QI), matrices(QI), tiny_elems(QI, 1).map(lambda e: e[0]).filter(bool))
def test_projective_scaling(F, M, c):
    G = substitute(F, M)
    if G.is_zero():
        return
    assert proportionality(G, G) == 1
    assert proportionality(substitute(F, M.scale(c)), G) == c ** 4


# --- cocycles ------------------------------------------------------------------------

@LAWS
@given(matrices(QIR), st.integers(0, 7), st.integers(0, 7))
def test_cocycle_identity_any_phi(phi, j, k):
    auts = automorphisms(QIR)
    s, u = auts[j], auts[k]
    t = tg.Twist("probe", {}, {}, TernaryQuartic.fermat(QIR), phi, TernaryQuartic.fermat(QIR), [])
    assert cocycle_identity(t, s, u)


def galois_closure(gens):
    t = gens[0].tower
    key = lambda s: tuple(x.data for x in s.images)
    out = {key(g): g for g in gens}
    todo = list(gens)
    while todo:
        a = todo.pop()
        for g in gens:
            b = g.compose(a)
            if key(b) not in out:
                out[key(b)] = b
                todo.append(b)
    return [out[k] for k in sorted(out)]


@lru_cache(maxsize=None)
def verified_twists():
    pool = [tg.fermat_diagonal(2, 3), tg.fermat_almost_diagonal(1, 1, 2),
            tg.fermat_nondiagonal([-4, 0, 0], 2), tg.klein_twist(2, {"m": 2}),
            tg.henn_case_twist("II", {"cubic": [-2, 0, 0]}, {})]
    return [(t, galois_closure(t.galois), generate_group(t.aut, tower=t.tower)) for t in pool]


@LAWS
@given(st.integers(0, 4), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_cocycle_identity_on_twists(n, j, k):
    t, gal, G = verified_twists()[n]
    s, u = gal[j % len(gal)], gal[k % len(gal)]
    assert cocycle_identity(t, s, u)
    assert G.index(cocycle_value(t, s.compose(u))) is not None


# --- equivalence ---------------------------------------------------------------------

GRID = (1, 2, 3, 4, 16, 48)


@lru_cache(maxsize=None)
def pool():
    fb = tg.new_builder()
    ts = {(a, b): tg.fermat_diagonal(a, b, builder=fb) for a in GRID for b in GRID}
    T = fb.tower
    ts = {k: v.lift_to(T) for k, v in ts.items()}
    G = generate_group(ts[(1, 1)].aut, tower=T)
    return ts, G


@lru_cache(maxsize=None)
def witness(p, q):
    ts, G = pool()
    return check_equivalence(ts[p], ts[q], G)


def holds(t1, t2, alpha, N):
    """alpha phi1 is proportional to phi2 N."""
    return (alpha @ t1.iso).proj_eq(t2.iso @ N)


pairs = st.tuples(st.sampled_from(GRID), st.sampled_from(GRID))


@LAWS
@given(pairs, pairs, pairs)
def test_equivalence_relation(p, q, r):
    ts, G = pool()
    w = witness(p, p)
    assert w is not None and holds(ts[p], ts[p], w.alpha, w.N)
    wpq, wqp = witness(p, q), witness(q, p)
    assert (wpq is None) == (wqp is None)
    if wpq is not None:
        assert holds(ts[p], ts[q], wpq.alpha, wpq.N)
        # the inverse witness works in the other direction
        assert holds(ts[q], ts[p], wpq.alpha.proj_inverse(), wpq.N.proj_inverse())
        wqr = witness(q, r)
        if wqr is not None:
            assert witness(p, r) is not None
            assert holds(ts[p], ts[r], wqr.alpha @ wpq.alpha, wqr.N @ wpq.N)


@LAWS
@given(pairs, pairs, st.sampled_from([2, -1, "1/3", 5]))
def test_equivalence_rescaling_invariant(p, q, c):
    ts, G = pool()
    t = ts[q]
    scaled = tg.Twist(t.case, t.params, t.twist_params, t.curve, t.iso.scale(t.tower.elem(c)),
                      t.source, t.aut, t.galois)
    assert (check_equivalence(ts[p], scaled, G) is None) == (witness(p, q) is None)
