import json
from fractions import Fraction

import pytest
import sympy

from quartwist.exactfield import build_tower
from quartwist.qforms import (
    EXPONENTS, Form, ProjMatrix, SingularMatrix, TernaryQuartic, TowerMismatch, ZeroForm,
    coeffs_in_level, evaluate, proportionality, substitute,
)
from quartwist.twistgen import klein_models


def quartic(t, terms):
    return TernaryQuartic(t, terms)


def klein(t):
    return quartic(t, {(3, 1, 0): 1, (0, 3, 1): 1, (1, 0, 3): 1})


def test_exponent_order():
    assert len(EXPONENTS) == 15
    assert EXPONENTS[0] == (4, 0, 0) and EXPONENTS[-1] == (0, 0, 4)
    assert list(EXPONENTS) == sorted(EXPONENTS, reverse=True)


def test_identity_substitution(qi):
    F = klein(qi)
    assert substitute(F, ProjMatrix.identity(qi)) == F


def test_diagonal_fourth_roots():
    t = build_tower([("a", [-2, 0, 0, 0, 1]), ("b", [-3, 0, 0, 0, 1])])
    M = ProjMatrix.diag(t.gen("a"), t.gen("b"), 1, t)
    G = substitute(TernaryQuartic.fermat(t), M)
    assert G == quartic(t, {(4, 0, 0): 2, (0, 4, 0): 3, (0, 0, 4): 1})
    assert coeffs_in_level(G, 0)


def test_klein_to_s4_model():
    fb, models, mats = klein_models()
    G = substitute(models["K"], mats["phi1"])
    lam = proportionality(G, models["S4"])
    assert lam is not None and lam
    # S4 model has the expected shape x^4+y^4+z^4 + c (x^2y^2+y^2z^2+z^2x^2)
    S4 = models["S4"]
    c = S4[(2, 2, 0)]
    assert S4[(0, 2, 2)] == c and S4[(2, 0, 2)] == c and S4[(4, 0, 0)] == 1
    eps = c / 3
    assert (2 * eps + 1) ** 2 == -7


def test_substitute_against_sympy_expansion():
    x, y, z = sympy.symbols("x y z")
    t = build_tower([])
    F = quartic(t, {(3, 1, 0): 2, (1, 1, 2): -5, (0, 0, 4): 7, (2, 2, 0): "1/3"})
    rows = [[1, 2, 0], [0, -1, 3], ["1/2", 1, 1]]
    M = ProjMatrix(rows, t)
    sF = 2 * x ** 3 * y - 5 * x * y * z ** 2 + 7 * z ** 4 + sympy.Rational(1, 3) * x ** 2 * y ** 2
    v = sympy.Matrix([[sympy.Rational(c) for c in r] for r in rows]) * sympy.Matrix([x, y, z])
    poly = sympy.Poly(sympy.expand(sF.subs({x: v[0], y: v[1], z: v[2]}, simultaneous=True)),
                      x, y, z)
    G = substitute(F, M)
    for e in EXPONENTS:
        want = poly.coeff_monomial(x ** e[0] * y ** e[1] * z ** e[2])
        assert G[e].to_rational() == Fraction(int(want.p), int(want.q))


def test_proportionality_basic(qi):
    F = klein(qi)
    assert proportionality(F.scale(qi.elem(3)), F) == 3
    assert proportionality(TernaryQuartic.fermat(qi), F) is None
    assert proportionality(F, F) == 1
    with pytest.raises(ZeroForm):
        proportionality(F, quartic(qi, {}))


def test_coeffs_in_level(qi):
    i = qi.gen("i")
    assert coeffs_in_level(TernaryQuartic.fermat(qi), 0)
    assert not coeffs_in_level(quartic(qi, {(4, 0, 0): i, (0, 4, 0): 1, (0, 0, 4): 1}), 0)


def test_evaluate_points(qi):
    one, zero = qi.one(), qi.zero()
    assert evaluate(TernaryQuartic.fermat(qi), (one, zero, zero)) == 1
    assert evaluate(klein(qi), (one, -one, zero)) == -1


def test_singular_matrix(qi):
    with pytest.raises(SingularMatrix):
        ProjMatrix([[1, 2, 3], [2, 4, 6], [0, 0, 1]], qi)


def test_mismatched_towers(qi, qr):
    with pytest.raises(TowerMismatch):
        substitute(TernaryQuartic.fermat(qi), ProjMatrix.identity(qr))


def test_projective_normal_form(qi):
    i = qi.gen("i")
    M = ProjMatrix([[0, 2 * i, 0], [1, 0, 0], [0, 0, i]], qi)
    N = M.normal_form()
    assert N.rows[0][1] == 1
    assert N.proj_eq(M.scale(5 + i))
    assert (M @ M.proj_inverse()).is_scalar()


def test_form_json(qi):
    F = quartic(qi, {(2, 1, 1): qi.gen("i"), (0, 0, 4): "-3/4"})
    obj = json.loads(json.dumps(F.to_json()))
    assert [c["exp"] for c in obj["coeffs"]] == [list(e) for e in EXPONENTS]
    assert TernaryQuartic.from_json(qi, obj) == F


def test_form_arithmetic(qi):
    x, y, z = (Form.var(qi, k) for k in range(3))
    F = ((x + y) ** 2 * (z - x) * y).quartic()
    assert F[(3, 1, 0)] == -1 and F[(1, 2, 1)] == 2 and F[(0, 3, 1)] == 1
