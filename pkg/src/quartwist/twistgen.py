"""Concrete twists: a rational curve C', an isomorphism phi: C' -> C and the
tower L it lives in.

Every constructor builds one tower in a fixed order: first whatever the
automorphism group of the source curve needs (so Aut(C) and phi share L),
then the radicals of the twist.  Curves that have a closed formula are built
from the formula, never from phi, so the isomorphism check compares two
independent computations.
"""

import os
from math import comb

from gmpy2 import mpq

from . import henn
from .exactfield import (CommonTowerRequired, Tower, TowerElem, aut_from_json, build_tower,
                         common_tower, elem_from_json, nth_power_free, nth_root_rational_exact,
                         rat_str, rational)
from .expr import evaluate
from .fieldbuild import (FieldBuilder, TowerTooLarge, cubic_discriminant, galois_generators,
                         rational_roots)
from .qforms import EXPONENTS, Form, ProjMatrix, TernaryQuartic, substitute

DEFAULT_MAX_DEGREE = 512


class TwistError(ValueError):
    pass


class RelationViolated(TwistError):
    pass


class ZeroParameter(TwistError):
    pass


class SquareM(TwistError):
    pass


class DegenerateParameters(TwistError):
    pass


class PolNotInClass(TwistError):
    pass


class RepeatedAlpha(TwistError):
    pass


class BadConjugation(TwistError):
    pass


def max_tower_degree():
    v = os.environ.get("QUARTWIST_MAX_TOWER_DEGREE")
    if not v:
        return DEFAULT_MAX_DEGREE
    try:
        return int(v)
    except ValueError:
        raise TwistError("QUARTWIST_MAX_TOWER_DEGREE must be an integer, got %r" % v)


def new_builder():
    return FieldBuilder(max_degree=max_tower_degree())


# ---------------------------------------------------------------------------
# the Twist record

def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (str, bool)) or v is None:
        return v
    if isinstance(v, int):
        return str(v)
    try:
        return rat_str(rational(v))
    except (TypeError, ValueError):
        return str(v)


class Twist:
    """A twist C' of a source curve C.

    ``iso`` satisfies substitute(source, iso) ∝ curve; ``aut`` generates
    Aut(source) over the same tower; ``galois`` generates Gal(L/k) where k is
    the first ``base_level`` levels of the tower (Q when base_level is 0), or
    is None when the tower is not known to be normal.
    """

    def __init__(self, case, params, twist_params, curve, iso, source, aut,
                 galois=None, base_level=0, notes=()):
        t = common_tower(curve.tower, iso.tower, source.tower, *[g.tower for g in aut])
        self.case = case
        self.params = dict(params or {})
        self.twist_params = dict(twist_params or {})
        self.curve = curve.lift_to(t)
        self.iso = iso.lift_to(t)
        self.source = source.lift_to(t)
        self.aut = [g.lift_to(t) for g in aut]
        self.galois = None if galois is None else list(galois)
        self.base_level = base_level
        self.notes = list(notes)

    @property
    def tower(self):
        return self.iso.tower

    def lift_to(self, t):
        if t == self.tower:
            return self
        if self.galois:
            raise CommonTowerRequired("cannot lift a twist carrying Galois data")
        return Twist(self.case, self.params, self.twist_params, self.curve, self.iso.lift_to(t),
                     self.source, self.aut, self.galois, self.base_level, self.notes)

    def __repr__(self):
        return "Twist(%s, %s, %s: %s)" % (self.case, _jsonable(self.params),
                                          _jsonable(self.twist_params), self.curve)

    def to_json(self):
        return {
            "case": self.case,
            "params": _jsonable(self.params),
            "twist_params": _jsonable(self.twist_params),
            "curve": self.curve.to_json(),
            "iso": self.iso.to_json(),
            "tower": self.tower.to_json(),
            "galois": None if self.galois is None else [s.to_json() for s in self.galois],
            "source": self.source.to_json(),
            "aut": [g.to_json() for g in self.aut],
            "base_level": self.base_level,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, obj):
        for key in ("case", "curve", "iso", "tower", "source", "aut"):
            if key not in obj:
                raise ValueError("twist JSON lacks %r" % key)
        t = build_tower(obj["tower"])
        gal = obj.get("galois")
        return cls(obj["case"], obj.get("params", {}), obj.get("twist_params", {}),
                   TernaryQuartic.from_json(t, obj["curve"]), ProjMatrix.from_json(t, obj["iso"]),
                   TernaryQuartic.from_json(t, obj["source"]),
                   [ProjMatrix.from_json(t, g) for g in obj["aut"]],
                   None if gal is None else [aut_from_json(t, s) for s in gal],
                   int(obj.get("base_level", 0)), obj.get("notes", []))


def attach_galois(fb, base_level=0, limit=4000):
    """Generators of Gal(L/k) when the builder can see the whole group."""
    try:
        auts, complete = fb.galois_group(base_level, limit=limit)
    except TowerTooLarge:
        return None
    if not complete:
        return None
    return galois_generators(auts)


def _finish(fb, case, params, twist_params, curve, iso, source, aut, base_level=0,
            notes=(), galois=True):
    t = fb.tower
    gal = attach_galois(fb, base_level) if galois else None
    notes = list(notes)
    if galois and gal is None:
        notes.append("Galois group of the tower not determined; cocycle check needs "
                     "--allow-no-galois")
    return Twist(case, params, twist_params, curve.lift_to(t), iso.lift_to(t),
                 source.lift_to(t), [g.lift_to(t) for g in aut], gal, base_level, notes)


def normalised(F):
    """F divided by its first nonzero coefficient."""
    p = next((c for c in F.coeffs if c), None)
    if p is None:
        raise DegenerateParameters("the transformed quartic vanishes identically")
    return F.scale(p.inv())


def _diag(t, *d):
    z = t.zero()
    rows = [[z] * 3 for _ in range(3)]
    for k, v in enumerate(d):
        rows[k][k] = v
    return ProjMatrix(rows, t)


def _block(t, a, b, g, d):
    """[[a, b, 0], [g, d, 0], [0, 0, 1]]."""
    z, o = t.zero(), t.one()
    return ProjMatrix([[a, b, z], [g, d, z], [z, z, o]], t)


def _rat(x, name):
    try:
        return rational(x)
    except (TypeError, ValueError):
        raise TwistError("parameter %s must be rational, got %r" % (name, x))


def _nonzero(x, name):
    x = _rat(x, name)
    if not x:
        raise ZeroParameter("parameter %s must be nonzero" % name)
    return x


def _nonsquare(m, name="m"):
    m = _nonzero(m, name)
    if nth_root_rational_exact(m, 2) is not None:
        raise SquareM("%s = %s is a rational square" % (name, rat_str(m)))
    return m


def _quartic(t, terms):
    """TernaryQuartic from {exponent: rational}."""
    return TernaryQuartic(t, {e: terms.get(e, 0) for e in EXPONENTS})


def _xyz(t):
    return [Form.var(t, k) for k in range(3)]


# ---------------------------------------------------------------------------
# cubics

class CubicData:
    """A monic rational cubic T^3 + e T^2 + f T + g with its roots in a tower.

    ``coeffs`` is given constant term first: [g, f, e] or [g, f, e, 1].
    """

    def __init__(self, coeffs, builder=None):
        cs = [rational(c) for c in coeffs]
        if len(cs) == 3:
            cs.append(rational(1))
        if len(cs) != 4 or cs[3] != 1:
            raise TwistError("cubic must be monic, given as [g, f, e] or [g, f, e, 1]")
        self.coeffs = tuple(cs)
        g, f, e, _ = cs
        self.disc = cubic_discriminant(e, f, g)
        if not self.disc:
            raise TwistError("cubic is not separable")
        self.builder = builder if builder is not None else new_builder()
        self.rational_roots = rational_roots(cs)
        self.roots = self.builder.cubic_roots(cs, name="alpha")

    @property
    def galois_type(self):
        n = len(self.rational_roots)
        if n == 3:
            return "split"
        if n == 1:
            return "C2"
        return "C3" if nth_root_rational_exact(self.disc, 2) is not None else "S3"

    def power_sum(self, j):
        """S_j by Newton's identities (rational)."""
        g, f, e, _ = self.coeffs
        p = [rational(3), -e, e * e - 2 * f]
        while len(p) <= j:
            p.append(-e * p[-1] - f * p[-2] - g * p[-3])
        return p[j]

    def power_sum_from_roots(self, j):
        return sum((self.builder.lift(r) ** j for r in self.roots), self.builder.tower.zero())

    def poly_str(self):
        g, f, e, _ = self.coeffs
        return "T^3 + (%s)*T^2 + (%s)*T + (%s)" % (rat_str(e), rat_str(f), rat_str(g))


def _cubic(P, fb):
    if isinstance(P, CubicData):
        if P.builder is fb:
            return P
        P = P.coeffs
    return CubicData(P, fb)


def _radical_rows(fb, values, n, prod_root=None, name="rho"):
    """n-th roots r_i of the three values; r_3 from the rational n-th root of
    the product when supplied (this keeps the tower one level smaller)."""
    if n == 1:
        return [fb.tower.one()] * 3
    r1 = fb.nth_root(values[0], n, name=name)
    r2 = fb.nth_root(values[1], n, name=name)
    if prod_root is not None:
        r3 = fb.lift(prod_root) / (fb.lift(r1) * fb.lift(r2))
        fb.register_root(values[2], n, r3)
    else:
        r3 = fb.nth_root(values[2], n, name=name)
    return [fb.lift(r) for r in (r1, r2, r3)]


def _vandermonde_radical(fb, vals, rads):
    t = fb.tower
    rows = []
    for a, r in zip(vals, rads):
        a, r = fb.lift(a), fb.lift(r)
        rows.append([r, a * r, a * a * r])
    return ProjMatrix(rows, t)


# ---------------------------------------------------------------------------
# twists of the Fermat quartic

def _fermat_source(fb):
    gens = henn.fermat_generators(fb)
    return TernaryQuartic.fermat(fb.tower), [gens[k] for k in sorted(gens)]


def fermat_diagonal(a, b, builder=None):
    """a x^4 + b y^4 + z^4 with phi = diag(a^(1/4), b^(1/4), 1)."""
    a, b = _nonzero(a, "a"), _nonzero(b, "b")
    fb = builder if builder is not None else new_builder()
    F, aut = _fermat_source(fb)
    ra = fb.nth_root_rational(a, 4)
    rb = fb.nth_root_rational(b, 4)
    t = fb.tower
    iso = _diag(t, fb.lift(ra), fb.lift(rb), t.one())
    curve = _quartic(t, {(4, 0, 0): a, (0, 4, 0): b, (0, 0, 4): 1})
    return _finish(fb, "fermat-diagonal", {}, {"a": a, "b": b}, curve, iso, F, aut,
                   galois=builder is None)


def fermat_almost_diagonal(a, b, m, builder=None):
    """The almost-diagonal family; phi is the 2x2 block
    [[alpha, alpha sqrt(m)], [gamma, -gamma sqrt(m)]] with
    alpha^4 = a + b sqrt(m), gamma^4 = a - b sqrt(m)."""
    a, b = _rat(a, "a"), _rat(b, "b")
    m = _nonsquare(m)
    if not a and not b:
        raise DegenerateParameters("(a, b) = (0, 0)")
    N = a * a - m * b * b
    if not N:
        raise DegenerateParameters("a^2 - m b^2 = 0")
    fb = builder if builder is not None else new_builder()
    F, aut = _fermat_source(fb)
    sm = fb.sqrt_rational(m)
    rN = fb.nth_root_rational(N, 4)
    al = fb.nth_root(fb.lift(sm) * b + a, 4, name="alpha")
    ga = fb.lift(rN) / fb.lift(al)
    fb.register_root(fb.lift(sm) * (-b) + a, 4, ga)
    t = fb.tower
    sm, al = fb.lift(sm), fb.lift(al)
    iso = _block(t, al, al * sm, ga, -ga * sm)
    curve = _quartic(t, {(4, 0, 0): 2 * a, (3, 1, 0): 8 * b * m, (2, 2, 0): 12 * m * a,
                         (1, 3, 0): 8 * b * m * m, (0, 4, 0): 2 * a * m * m, (0, 0, 4): 1})
    return _finish(fb, "fermat-almost-diagonal", {}, {"a": a, "b": b, "m": m}, curve, iso, F,
                   aut, galois=builder is None)


E_N = {1: 0, 2: 2, 4: 1}
NONDIAGONAL_VARIANTS = ("roots", "cubes", "ratios", "ratio-cubes")


def nondiagonal_formula(S, n, t):
    """sum C(4,j) C(4-j,k) S_{e_n + k + 2l} x^j y^k z^l."""
    e = E_N[n]
    terms = {}
    for (j, k, l) in EXPONENTS:
        terms[(j, k, l)] = comb(4, j) * comb(4 - j, k) * S(e + k + 2 * l)
    return _quartic(t, terms)


def fermat_nondiagonal(P, n, variant=0, builder=None):
    """Twist attached to a cubic P in Pol_3^n and n in {1, 2, 4}.

    ``variant`` picks the triple the rows are built from: 0 the roots,
    1 their cubes, 2 the ratios alpha/beta, beta/gamma, gamma/alpha,
    3 the cubes of those ratios.
    """
    n = int(n)
    if n not in E_N:
        raise TwistError("n must be 1, 2 or 4")
    vname = variant if isinstance(variant, str) else NONDIAGONAL_VARIANTS[int(variant)]
    if vname not in NONDIAGONAL_VARIANTS:
        raise TwistError("unknown variant %r" % (variant,))
    fb = builder if builder is not None else new_builder()
    F, aut = _fermat_source(fb)
    cub = _cubic(P, fb)
    g = cub.coeffs[0]
    prod_root = nth_root_rational_exact(-g, n)
    if prod_root is None:
        raise PolNotInClass("the product of the roots, %s, is not a rational %d-th power"
                            % (rat_str(-g), n))
    al = [fb.lift(r) for r in cub.roots]
    rads = _radical_rows(fb, al, n, prod_root, name="rho")
    al = [fb.lift(x) for x in al]
    if vname in ("cubes",):
        vals, rads = [x ** 3 for x in al], [r ** 3 for r in rads]
    elif vname == "ratios":
        vals = [al[0] / al[1], al[1] / al[2], al[2] / al[0]]
        rads = [rads[0] / rads[1], rads[1] / rads[2], rads[2] / rads[0]]
    elif vname == "ratio-cubes":
        vals = [(al[0] / al[1]) ** 3, (al[1] / al[2]) ** 3, (al[2] / al[0]) ** 3]
        rads = [(rads[0] / rads[1]) ** 3, (rads[1] / rads[2]) ** 3, (rads[2] / rads[0]) ** 3]
    else:
        vals = al
    t = fb.tower
    if n == 1:
        rads = [t.one()] * 3
    iso = _vandermonde_radical(fb, vals, rads)
    if vname == "roots":
        S = cub.power_sum
    else:
        cache = {}

        def S(j):
            if j not in cache:
                s = sum((v ** j for v in vals), t.zero())
                if not s.is_rational():
                    raise PolNotInClass("power sum S_%d of the %s is not rational" % (j, vname))
                cache[j] = s.to_rational()
            return cache[j]
    curve = nondiagonal_formula(S, n, t)
    return _finish(fb, "fermat-nondiagonal", {}, {"cubic": list(cub.coeffs[:3]), "n": n,
                                                  "variant": vname},
                   curve, iso, F, aut, notes=["Galois type of P: %s" % cub.galois_type],
                   galois=builder is None)


def nondiagonal_oracle(P, n, variant=0):
    """F_Fermat(iso v) computed by expanding sum_r rho_r^4 (x + a_r y + a_r^2 z)^4
    term by term; independent of the power-sum formula."""
    tw = fermat_nondiagonal(P, n, variant)
    t = tw.tower
    x, y, z = _xyz(t)
    acc = Form(t, {})
    for row in tw.iso.rows:
        lin = x * row[0] + y * row[1] + z * row[2]
        acc = acc + lin ** 4
    return tw, acc.quartic()


# ---------------------------------------------------------------------------
# the first ten cases

def _check_curve_params(cid, modified, params, strict):
    c = henn.get_case(cid, modified)
    p = henn._normalise(c, params)
    rep = henn.check_restrictions(c, p, strict=strict)
    if not rep.ok:
        raise henn.RestrictionViolated(c.id, rep.violations)
    return c, p


def _source(fb, cid, modified, params, strict):
    c, p = _check_curve_params(cid, modified, params, strict)
    gens = henn.automorphism_generators(c, p, builder=fb, check=False)
    F = henn.representative_curve(c, p, builder=fb, check=False)
    return c, p, F, gens


def _twist_keys(tp, required, optional=()):
    tp = dict(tp or {})
    extra = set(tp) - set(required) - set(optional)
    if extra:
        raise TwistError("unexpected twist parameters %s" % sorted(extra))
    missing = [k for k in required if k not in tp]
    if missing:
        raise TwistError("missing twist parameters %s" % missing)
    return tp


def _case_i(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "I", False, params, strict)
    tp = _twist_keys(tp, ["m"])
    m = _nonzero(tp["m"], "m")
    sm = fb.sqrt_rational(m)
    t = fb.tower
    x, y, z = _xyz(t)
    F1 = henn._parse_binary(p["F1"], t, c.binary_forms["F1"], "F1")
    F2 = henn._parse_binary(p["F2"], t, c.binary_forms["F2"], "F2")
    curve = (x ** 4 * (m * m) + x ** 2 * F1 * m + F2).quartic()
    iso = _diag(t, fb.lift(sm), t.one(), t.one())
    return p, {"m": m}, curve, iso, F, gens, 0, []


def _case_ii(params, tp, fb, strict):
    c, p = _check_curve_params("II", True, params, strict)
    cub = _cubic(p["cubic"], fb)
    typ = cub.galois_type
    t = fb.tower
    r = [fb.lift(x) for x in cub.roots]
    if typ == "split":
        tp = _twist_keys(tp, ["m", "n"])
        m, n = _nonzero(tp["m"], "m"), _nonzero(tp["n"], "n")
        roots = r
        F, gens = henn.modified_ii_data(roots, fb)
        sm, sn = fb.sqrt_rational(m), fb.sqrt_rational(n)
        t = fb.tower
        phi = _diag(t, fb.lift(sm), fb.lift(sn), t.one())
        al, be, ga = [x.to_rational() for x in roots]
        curve = _quartic(t, {(4, 0, 0): al * m * m, (0, 4, 0): be * n * n, (0, 0, 4): ga,
                             (2, 2, 0): m * n, (0, 2, 2): n, (2, 0, 2): m})
        tpo = {"m": m, "n": n}
    elif typ == "C2":
        tp = _twist_keys(tp, ["c", "d"])
        cc, dd = _rat(tp["c"], "c"), _rat(tp["d"], "d")
        roots = [r[1], r[2], r[0]]          # alpha, beta conjugate, gamma rational
        F, gens = henn.modified_ii_data(roots, fb)
        # sqrt(m) as it appears in alpha = u + v sqrt(m)
        q = roots[0] - roots[1]
        m = nth_power_free((q * q).to_rational(), 2)
        sm = fb.sqrt_rational(m)
        N = cc * cc - dd * dd * m
        if not N:
            raise DegenerateParameters("c^2 - d^2 m = 0")
        sN = fb.sqrt_rational(N)
        s1 = fb.nth_root(fb.lift(sm) * dd + cc, 2, name="s")
        s2 = fb.lift(sN) / fb.lift(s1)
        fb.register_root(fb.lift(sm) * (-dd) + cc, 2, s2)
        t = fb.tower
        sm, s1 = fb.lift(sm), fb.lift(s1)
        phi = _block(t, s1, s1 * sm, s2, -s2 * sm)
        curve = None
        tpo = {"c": cc, "d": dd}
    else:
        tp = _twist_keys(tp, [], ["p"])
        pc = [rational(x) for x in tp.get("p", [0, 1])]
        roots = r
        F, gens = henn.modified_ii_data(roots, fb)
        vals = [sum((cf * x ** k for k, cf in enumerate(pc)), t.zero()) for x in roots]
        if any(not v for v in vals):
            raise DegenerateParameters("p vanishes at a root of the cubic")
        prod = vals[0] * vals[1] * vals[2]
        pr = None
        if prod.is_rational():
            pr = nth_root_rational_exact(prod.to_rational(), 2)
        rads = _radical_rows(fb, vals, 2, pr, name="s")
        phi = _vandermonde_radical(fb, vals, rads)
        t = fb.tower
        curve = None
        tpo = {"p": pc}
    t = fb.tower
    env = dict(zip(("alpha", "beta", "gamma"), (fb.lift(x) for x in roots)))
    V = henn._vandermonde(env, t)
    iso = V.inverse() @ phi.lift_to(t)
    if curve is None:
        curve = normalised(substitute(F.lift_to(t), iso))
    notes = ["Galois group of the cubic: %s" % typ]
    return p, tpo, curve, iso, F, gens, 0, notes


def _case_iii(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "III", True, params, strict)
    tp = _twist_keys(tp, ["m"])
    m = _nonzero(tp["m"], "m")
    r = fb.nth_root_rational(m, 3)
    t = fb.tower
    x, y, z = _xyz(t)
    P = henn._parse_binary(p["P"], t, c.binary_forms["P"], "P")
    curve = (z ** 3 * y * m + P).quartic()
    iso = _diag(t, t.one(), t.one(), fb.lift(r))
    return p, {"m": m}, curve, iso, F, gens, 0, []


def _block_radicals(fb, m, top, n, name):
    """sqrt(m) and alpha with alpha^n = top(sqrt m) (a tower element)."""
    sm = fb.sqrt_rational(m)
    al = fb.nth_root(top(fb.lift(sm)), n, name=name)
    return fb.lift(sm), al


def _case_iv(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "IV", False, params, strict)
    tp = _twist_keys(tp, ["m", "a1", "a2", "q"])
    m = _nonzero(tp["m"], "m")
    a1, a2, q = _rat(tp["a1"], "a1"), _rat(tp["a2"], "a2"), _rat(tp["q"], "q")
    if a1 * a1 - m * a2 * a2 != q ** 3:
        raise RelationViolated("a1^2 - m a2^2 = %s but q^3 = %s"
                               % (rat_str(a1 * a1 - m * a2 * a2), rat_str(q ** 3)))
    if not q:
        raise DegenerateParameters("q = 0 makes the isomorphism singular")
    sm, al = _block_radicals(fb, m, lambda s: s * a2 + a1, 3, "alpha")
    t = fb.tower
    sm, al = fb.lift(sm), fb.lift(al)
    ga = al.inv() * q
    fb.register_root(sm * (-a2) + a1, 3, ga)
    iso = _block(t, al, al * sm, ga, -ga * sm)
    x, y, z = _xyz(t)
    a, b = p["a"], p["b"]
    u = x ** 2 - y ** 2 * m
    curve = ((x ** 3 * z + x * y ** 2 * z * (3 * m)) * (2 * a1)
             + (x ** 2 * y * z * 3 + y ** 3 * z * m) * (2 * a2 * m)
             + u ** 2 * (q * q) + u * z ** 2 * (a * q) + z ** 4 * b).quartic()
    return p, {"m": m, "a1": a1, "a2": a2, "q": q}, curve, iso, F, gens, 0, []


def _case_v(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "V", True, params, strict)
    tp = _twist_keys(tp, ["m", "c", "d", "q"])
    m = _nonsquare(tp["m"])
    cc, dd, q = _rat(tp["c"], "c"), _rat(tp["d"], "d"), _rat(tp["q"], "q")
    a, b = p["a"], p["b"]
    if cc * cc - dd * dd * m != q ** 4 * a:
        raise RelationViolated("c^2 - d^2 m = %s but q^4 a = %s"
                               % (rat_str(cc * cc - dd * dd * m), rat_str(q ** 4 * a)))
    if not q:
        raise DegenerateParameters("q = 0 makes the isomorphism singular")
    sm, al = _block_radicals(fb, m, lambda s: (s * dd + cc) / a, 4, "alpha")
    t = fb.tower
    sm, al = fb.lift(sm), fb.lift(al)
    ga = al.inv() * q
    # the conjugate of alpha is gamma / a^(1/4); telling the builder lets it
    # see the whole Galois group
    fb.register_root((sm * (-dd) + cc) / a, 4, ga / fb.nth_root_rational(a, 4))
    iso = _block(t, al, al * sm, ga, -ga * sm)
    x, y, z = _xyz(t)
    u = x ** 2 - y ** 2 * m
    curve = (x ** 4 * (2 * cc) + x ** 3 * y * (8 * dd * m) + x ** 2 * y ** 2 * (12 * cc * m)
             + x * y ** 3 * (8 * dd * m * m) + y ** 4 * (2 * cc * m * m)
             + u ** 2 * (b * q * q) + u * z ** 2 * q + z ** 4).quartic()
    return p, {"m": m, "c": cc, "d": dd, "q": q}, curve, iso, F, gens, 0, []


def _case_vi(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "VI", True, params, strict)
    tp = _twist_keys(tp, ["m", "n"])
    m, n = _nonzero(tp["m"], "m"), _nonzero(tp["n"], "n")
    sm = fb.sqrt_rational(m)
    rn = fb.nth_root_rational(n, 3)
    t = fb.tower
    iso = _diag(t, fb.lift(sm), t.one(), fb.lift(rn))
    x, y, z = _xyz(t)
    a = p["a"]
    curve = (z ** 3 * y * n + x ** 4 * (a * m * m) + x ** 2 * y ** 2 * m + y ** 4).quartic()
    return p, {"m": m, "n": n}, curve, iso, F, gens, 0, []


def _case_vii(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "VII", True, params, strict)
    tp = _twist_keys(tp, ["m", "b", "c", "q"])
    m = _nonsquare(tp["m"])
    bb, cc, q = _rat(tp["b"], "b"), _rat(tp["c"], "c"), _nonzero(tp["q"], "q")
    a = p["a"]
    if bb * bb - cc * cc * m != q * q * a:
        raise RelationViolated("b^2 - c^2 m = %s but q^2 a = %s"
                               % (rat_str(bb * bb - cc * cc * m), rat_str(q * q * a)))
    sq = fb.sqrt_rational(q)
    sm, al = _block_radicals(fb, m, lambda s: (s * cc + bb) / a, 4, "alpha")
    t = fb.tower
    sm, al = fb.lift(sm), fb.lift(al)
    ga = fb.lift(sq) / al
    fb.register_root((sm * (-cc) + bb) / a, 4, ga / fb.nth_root_rational(a, 4))
    iso = _block(t, al, al * sm, ga, -ga * sm)
    x, y, z = _xyz(t)
    u = x ** 2 - y ** 2 * m
    curve = (x ** 4 * (2 * bb) + x ** 3 * y * (8 * cc * m) + x ** 2 * y ** 2 * (12 * bb * m)
             + x * y ** 3 * (8 * cc * m * m) + y ** 4 * (2 * bb * m * m)
             + u ** 2 * q + z ** 4).quartic()
    return p, {"m": m, "b": bb, "c": cc, "q": q}, curve, iso, F, gens, 0, []


def _case_viii(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "VIII", False, params, strict)
    tp = _twist_keys(tp, ["cubic"])
    cub = _cubic(tp["cubic"], fb)
    g = cub.coeffs[0]
    pr = nth_root_rational_exact(-g, 2)
    if pr is None:
        raise PolNotInClass("alpha beta gamma = %s is not a rational square" % rat_str(-g))
    r = [fb.lift(x) for x in cub.roots]
    rads = _radical_rows(fb, r, 2, pr, name="s")
    iso = _vandermonde_radical(fb, r, rads)
    t = fb.tower
    curve = normalised(substitute(F.lift_to(t), iso))
    return (p, {"cubic": list(cub.coeffs[:3])}, curve, iso, F, gens, 0,
            ["Galois group of the cubic: %s" % cub.galois_type])


def _case_ix(params, tp, fb, strict):
    c, p, F, gens = _source(fb, "IX", False, params, strict)
    tp = _twist_keys(tp, ["a"])
    a = _nonzero(tp["a"], "a")
    r = fb.lift(fb.nth_root_rational(a, 9))
    t = fb.tower
    iso = _diag(t, r ** 3, t.one(), r)
    curve = _quartic(t, {(4, 0, 0): a, (1, 3, 0): 1, (0, 1, 3): 1})
    return p, {"a": a}, curve, iso, F, gens, 0, []


def case_x_beta(a, fb):
    """A root beta != 0 of T^4 + a T^2 - T - a^2/12, adjoined if needed.

    Returns (beta, adjoined) with beta already lifted to the builder's tower.
    """
    a = rational(a)
    coeffs = [-a * a / 12, rational(-1), a, rational(0), rational(1)]
    good = lambda b: b and (b * b + a / 2) != -2 * b * b  # beta != delta
    for r in rational_roots(coeffs):
        if good(r):
            return fb.tower.elem(r), False
    import sympy
    T = sympy.Symbol("T")
    poly = sympy.Poly([sympy.Rational(str(rat_str(c))) for c in reversed(coeffs)], T)
    facs = sorted((f for f, _ in poly.factor_list()[1] if f.degree() >= 2),
                  key=lambda f: f.degree())
    f = facs[0].monic()
    mod = [rational(str(c)) for c in reversed(f.all_coeffs())]
    kind = ("root", tuple(mod[:-1]))
    if kind in fb.kinds:
        # a second twist with the same a reuses the level already adjoined
        return fb.tower.gen(fb.kinds.index(kind) + 1), True
    beta = fb.adjoin("beta", mod, "root-of(case X quartic)", kind)
    return fb.lift(beta), True


def _case_x(params, tp, fb, strict):
    tp = _twist_keys(tp, ["a", "b"])
    a, b = _rat(tp["a"], "a"), _nonzero(tp["b"], "b")
    c, p = _check_curve_params("X", False, params, strict)
    # beta first: the K constants (i, zeta3) then sit on top of Q(beta)
    beta, adjoined = case_x_beta(a, fb)
    gens = henn.automorphism_generators(c, p, builder=fb, check=False)
    F = henn.representative_curve(c, p, builder=fb, check=False)
    beta = fb.lift(beta)
    delta = -(beta * beta + a / 2) / (beta * 2)
    A = -(beta + delta * 3) / ((beta - delta) * 3)
    B = beta * 4 / ((beta - delta) * 3)
    rho = fb.lift(fb.nth_root(B / A, 3, name="rho"))
    eta = fb.lift(fb.nth_root(fb.lift(A).inv() * b, 4, name="eta"))
    t = fb.tower
    beta, delta = fb.lift(beta), fb.lift(delta)
    z0, o = t.zero(), t.one()
    iso = ProjMatrix([[o, z0, beta], [z0, eta, z0], [rho, z0, rho * delta]], t)
    curve = _quartic(t, {(4, 0, 0): 1, (2, 0, 2): a, (1, 0, 3): 1, (0, 0, 4): -a * a / 12,
                         (0, 4, 0): b})
    notes = []
    if adjoined:
        notes.append("beta adjoined as a root of an irreducible factor of "
                     "T^4 + a T^2 - T - a^2/12")
    return p, {"a": a, "b": b}, curve, iso, F, gens, 0, notes


_CASES = {"I": _case_i, "II": _case_ii, "III": _case_iii, "IV": _case_iv, "V": _case_v,
          "VI": _case_vi, "VII": _case_vii, "VIII": _case_viii, "IX": _case_ix, "X": _case_x}

# source model used by each constructor (plain or modified classification)
TWIST_SOURCE = {"I": "I", "II": "II*", "III": "III*", "IV": "IV", "V": "V*", "VI": "VI*",
                "VII": "VII*", "VIII": "VIII", "IX": "IX", "X": "X"}

CURVE_PARAMS = {k: henn.get_case(k.rstrip("*"), k.endswith("*")).params
                for k in TWIST_SOURCE.values()}


def curve_param_names(case):
    return list(CURVE_PARAMS[TWIST_SOURCE[str(case).upper()]])


def henn_case_twist(case, params=None, twist_params=None, builder=None, strict=False,
                    galois=None):
    """Twist of the representative curve of case I..X.

    ``params`` are the source curve's parameters, ``twist_params`` the twist's.
    """
    cid = str(case).upper()
    if cid not in _CASES:
        raise henn.UnknownCase("no twist constructor for case %r" % case)
    fb = builder if builder is not None else new_builder()
    p, tp, curve, iso, F, gens, base, notes = _CASES[cid](params or {}, twist_params or {},
                                                          fb, strict)
    if galois is None:
        galois = builder is None
    return _finish(fb, "case-" + cid.lower(), p, tp, curve, iso, F, gens, base, notes,
                   galois=galois)


def henn_case_twist_flat(case, flat, builder=None, strict=False):
    """Same as henn_case_twist with curve and twist parameters in one dict."""
    names = set(curve_param_names(case))
    params = {k: v for k, v in flat.items() if k in names}
    tp = {k: v for k, v in flat.items() if k not in names}
    return henn_case_twist(case, params, tp, builder, strict)


# ---------------------------------------------------------------------------
# the Klein quartic

def klein_models(builder=None):
    """The models C_K, C_S4, C_0, C_D4 and the matrices phi0..phi3 over Q(zeta7, i)."""
    fb = builder if builder is not None else new_builder()
    henn.klein_env(fb, with_i=True)
    models = {n: henn.klein_model(n, fb) for n in ("K", "S4", "0", "D4")}
    mats = {n: henn.klein_matrix(n, fb) for n in ("phi1", "phi1_literal", "phi2", "phi3")}
    t = fb.tower
    models = {k: v.lift_to(t) for k, v in models.items()}
    mats = {k: v.lift_to(t) for k, v in mats.items()}
    mats["phi0"] = mats["phi1"] @ mats["phi2"]
    return fb, models, mats


def _klein_source(fb):
    s = fb.sqrt_rational(-7)
    gens = henn.klein_c0_generators(fb)
    F = henn.klein_model("0", fb)
    return F, [gens[k] for k in ("g", "h", "s")]


def _s4_source(fb, conjugate):
    """C_S4 (or its conjugate) with Aut = phi2 Aut(C0) phi2^-1, over Q(sqrt -7)."""
    F0, gens0 = _klein_source(fb)
    phi2 = henn.klein_matrix("phi2", fb)
    t = fb.tower
    s7 = fb.known_sqrt(-7)
    if conjugate:
        tau = _sqrtm7_conj(fb)
        phi2 = phi2.apply_aut(tau)
    F = henn.klein_model("S4", fb).lift_to(t)
    if conjugate:
        F = F.apply_aut(_sqrtm7_conj(fb))
    inv = phi2.inverse()
    gens = [phi2 @ g.lift_to(t) @ inv for g in gens0]
    return F, gens, phi2


def _sqrtm7_conj(fb):
    """The automorphism sqrt(-7) -> -sqrt(-7) of a tower whose top is Q(sqrt -7)."""
    from .exactfield import FieldAut
    t = fb.tower
    if t.height != 1:
        raise BadConjugation("conjugation only defined on Q(sqrt -7) here")
    return FieldAut(t, [-t.gen(1)])


def _klein_cols(fb, roots, first):
    al, be, ga = [fb.lift(r) for r in roots]
    c1 = [first] * 3
    c2 = [-3 * al + 2 * be + ga, al - 3 * be + 2 * ga, 2 * al + be - 3 * ga]
    c3 = [al * be - 3 * be * ga + 2 * ga * al, 2 * al * be + be * ga - 3 * ga * al,
          -3 * al * be + 2 * be * ga + ga * al]
    t = fb.tower
    return ProjMatrix([[fb.lift(c1[k]), c2[k], c3[k]] for k in range(3)], t)


def _klein_row(row, params, variant, fb):
    F, gens = _klein_source(fb)
    s7 = fb.known_sqrt(-7)
    notes = []
    row = int(row)
    if row == 1:
        _twist_keys(params, [])
        iso = ProjMatrix.identity(fb.tower)
        tp = {}
    elif row == 2:
        tp = _twist_keys(params, ["m"])
        m = _nonsquare(tp["m"])
        sm = fb.lift(fb.sqrt_rational(m))
        t = fb.tower
        z, o = t.zero(), t.one()
        iso = ProjMatrix([[o * 2, sm, z], [o * -3, z, sm], [o, sm * -2, sm * 3]], t)
        tp = {"m": m}
    elif row in (3, 4, 8):
        tp = _twist_keys(params, ["cubic"])
        cub = _cubic(tp["cubic"], fb)
        D = cub.disc
        if row == 3 and nth_root_rational_exact(D / -7, 2) is None:
            raise RelationViolated("row 3 needs disc = -7 q^2, got %s" % rat_str(D))
        if row == 4 and nth_root_rational_exact(D, 2) is None:
            raise RelationViolated("row 4 needs disc = q^2, got %s" % rat_str(D))
        first = {3: s7, 4: fb.tower.one(), 8: None}[row]
        if first is None:
            first = fb.sqrt_rational(D)
        iso = _klein_cols(fb, cub.roots, first)
        tp = {"cubic": list(cub.coeffs[:3])}
        notes.append("Galois group of the cubic: %s" % cub.galois_type)
    elif row == 7:
        tp = _twist_keys(params, ["a", "b", "m", "q"])
        a, b, q = _rat(tp["a"], "a"), _rat(tp["b"], "b"), _nonzero(tp["q"], "q")
        m = _nonsquare(tp["m"])
        if a * a - m * b * b != -7 * m * q * q:
            raise RelationViolated("a^2 - m b^2 = %s but -7 m q^2 = %s"
                                   % (rat_str(a * a - m * b * b), rat_str(-7 * m * q * q)))
        s7 = fb.sqrt_rational(-7)
        sm = fb.sqrt_rational(m)
        S2 = fb.lift(sm) * b + a
        S = fb.lift(fb.nth_root(S2, 2, name="S"))
        t = fb.tower
        sm, S2 = fb.lift(sm), fb.lift(S2)
        # the conjugate square root, so the normal closure is visible
        fb.register_root(fb.lift(sm) * -b + a, 2, fb.lift(s7) * sm * q / S)
        # sqrt(a - b sqrt m) is taken as q sqrt(-7) sqrt(m) / S, hence A = q sqrt(m) / S^2
        A = sm * q / S2
        o = t.one()
        iso = ProjMatrix([[o * 3, (5 * A - 1) * S, sm * (5 * A + 1) * S],
                          [-o, (3 * A - 3) * S, sm * (3 * A + 3) * S],
                          [o * -2, 6 * A * S, 6 * sm * A * S]], t)
        tp = {"a": a, "b": b, "m": m, "q": q}
    elif row == 9 and "m" in (params or {}):
        tp = _twist_keys(params, ["m"])
        m = _nonzero(tp["m"], "m")
        if int(variant):
            m = m ** 6
        fb.unity(7)
        r = fb.lift(fb.nth_root_rational(m, 7))
        t = fb.tower
        D = _diag(t, r, r ** 4, r ** 2)
        phi0 = henn.klein_matrix("phi1", fb) @ henn.klein_matrix("phi2", fb)
        t = fb.tower
        iso = phi0.lift_to(t).inverse() @ D.lift_to(t)
        tp = {"m": tp["m"], "variant": int(variant)}
    elif row in (5, 9):
        if row == 5:
            tp = _twist_keys(params, ["beta"])
            P = THETA_CUBIC
            z = fb.lift(fb.unity(7))
            x1 = z + z ** 6
        else:
            tp = _twist_keys(params, ["cubic"], ["beta"])
            fb.unity(7)
            cub = _cubic(tp["cubic"], fb)
            if cub.galois_type != "C3":
                raise RelationViolated("row 9 needs a cyclic cubic, got %s" % cub.galois_type)
            P = cub.coeffs
            x1 = fb.lift(cub.roots[0])
        cs = [rational(c) for c in tp.get("beta", [0, 1])]
        power = 6 if int(variant) else 1
        betas, rads = kummer_class_roots(fb, P, x1, cs, power)
        V = _vandermonde_radical(fb, betas, rads)
        phi0 = henn.klein_matrix("phi1", fb) @ henn.klein_matrix("phi2", fb)
        t = fb.tower
        iso = phi0.lift_to(t).inverse() @ V.lift_to(t)
        tp = dict(tp, beta=cs, variant=int(variant))
        if row == 9:
            tp["cubic"] = list(P[:3])
    elif row in (6, 10):
        raise TwistError("rows 6 and 10 need a base field containing i and sqrt(2); "
                         "they have no instance over Q")
    elif row == 11:
        raise TwistError("row 11 has no desk-scale instance; see klein_psl_fourteen")
    else:
        raise henn.UnknownIndex("Klein table has no row %r" % row)
    t = fb.tower
    curve = normalised(substitute(F.lift_to(t), iso.lift_to(t)))
    return tp, curve, iso, F, gens, notes


def klein_twist(row, params=None, variant=0, builder=None):
    """Twist of the Klein quartic (model C_0) from row 1..11 of the table over Q."""
    fb = builder if builder is not None else new_builder()
    tp, curve, iso, F, gens, notes = _klein_row(row, params or {}, variant, fb)
    return _finish(fb, "klein", {"row": int(row)}, tp, curve, iso, F, gens, 0, notes,
                   galois=builder is None)


SQRT7_CASES = (5, 6, 12, 13, 14, 15)


def klein_sqrt7_twist(case, params=None, builder=None):
    """Twists over k = Q(sqrt -7) that have no analogue over Q (cases 5, 6,
    12-15).  Odd cases map onto C_S4, even ones onto its conjugate."""
    case = int(case)
    if case not in SQRT7_CASES:
        raise henn.UnknownIndex("sqrt(-7) cases are %s" % (SQRT7_CASES,))
    fb = builder if builder is not None else new_builder()
    conj = case in (6, 13, 15)
    F, gens, _ = _s4_source(fb, conj)
    params = params or {}
    if case in (5, 6):
        tp = _twist_keys(params, ["a", "b"])
        a, b = _nonzero(tp["a"], "a"), _nonzero(tp["b"], "b")
        sa, sb = fb.sqrt_rational(a), fb.sqrt_rational(b)
        t = fb.tower
        iso = _diag(t, fb.lift(sa), fb.lift(sb), t.one())
        tp = {"a": a, "b": b}
        notes = []
    else:
        tp = _twist_keys(params, ["cubic"])
        cub = _cubic(tp["cubic"], fb)
        want = "C3" if case in (12, 13) else "S3"
        if cub.galois_type != want:
            raise RelationViolated("case %d needs a cubic with Galois group %s over Q, got %s"
                                   % (case, want, cub.galois_type))
        r = [fb.lift(x) for x in cub.roots]
        g = cub.coeffs[0]
        pr = nth_root_rational_exact(-g, 2)
        rads = _radical_rows(fb, r, 2, pr, name="s")
        iso = _vandermonde_radical(fb, r, rads)
        tp = {"cubic": list(cub.coeffs[:3])}
        notes = ["Galois group of the cubic: %s" % cub.galois_type]
    t = fb.tower
    curve = normalised(substitute(F.lift_to(t), iso.lift_to(t)))
    model = "conjugate C_S4" if conj else "C_S4"
    return _finish(fb, "klein-sqrt-7", {"case": case, "model": model}, tp, curve, iso, F,
                   gens, 1, notes, galois=builder is None)


# ---------------------------------------------------------------------------
# Kummer data for Klein rows 5 and 9: beta in a cyclic cubic field whose
# class modulo 7th powers is an eigenvector of the cubic Galois action

THETA_CUBIC = (mpq(-1), mpq(-2), mpq(1), mpq(1))   # min poly of zeta7 + zeta7^-1


def _pmod(a, P):
    a = list(a)
    while len(a) > 3:
        c = a.pop()
        for k in range(3):
            a[len(a) - 3 + k] -= c * P[k]
    return a + [mpq(0)] * (3 - len(a))


def _pmul(a, b, P):
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _pmod(out, P)


def _pcompose(a, R, P):
    """a(R(T)) mod P."""
    out, pw = [mpq(0)] * 3, [mpq(1), mpq(0), mpq(0)]
    for c in a:
        out = [u + c * v for u, v in zip(out, pw)]
        pw = _pmul(pw, R, P)
    return out


def _ptower(cs, x):
    return sum((c * x ** j for j, c in enumerate(cs)), x.tower.zero())


def _fit_quadratic(xs, ys):
    """Rational coefficients (low first) of the quadratic through three points,
    read off a high-precision solve; callers verify the result exactly."""
    import mpmath
    from fractions import Fraction
    A = mpmath.matrix([[1, x, x * x] for x in xs])
    sol = mpmath.lu_solve(A, mpmath.matrix(ys))
    return [mpq(Fraction(mpmath.nstr(c, 90)).limit_denominator(10 ** 40)) for c in sol]


def cubic_cycle(P):
    """R in Q[T], deg <= 2, with P(R(T)) = 0 mod P and R != T: a generator
    of Gal for a cyclic cubic, as a polynomial map on its roots."""
    import mpmath
    with mpmath.workdps(100):
        ns = sorted(mpmath.polyroots([mpmath.mpf(int(c.numerator)) / int(c.denominator)
                                      for c in reversed(P)], maxsteps=200, extraprec=200),
                    key=lambda r: mpmath.re(r))
        if any(abs(mpmath.im(r)) > mpmath.mpf(10) ** -50 for r in ns):
            raise RelationViolated("cubic field is not totally real")
        ns = [mpmath.re(r) for r in ns]
        R = _fit_quadratic(ns, [ns[1], ns[2], ns[0]])
    if _pcompose(list(P), R, P) != [0, 0, 0]:
        raise RelationViolated("cubic is not cyclic")
    return R, ns


def kummer_beta(gamma, P=THETA_CUBIC):
    """beta = gamma rho(gamma)^2 rho^2(gamma)^4 for gamma in Q[T]/P; then
    rho(beta) = beta^4 times a 7th power, the class rows 5 and 9 need."""
    P = tuple(rational(c) for c in P) + ((mpq(1),) if len(P) == 3 else ())
    g = _pmod([rational(c) for c in gamma], P)
    R, _ = cubic_cycle(P)
    g1 = _pcompose(g, R, P)
    g2 = _pcompose(g1, R, P)
    out = g
    for h, e in ((g1, 2), (g2, 4)):
        for _ in range(e):
            out = _pmul(out, h, P)
    return out


def kummer_class_roots(fb, P, x1, cs, power=1):
    """Conjugates beta_1, beta_2, beta_3 of beta = sum cs[j] x1^j (raised to
    ``power``) and seventh roots r_i, ordered so that the diagonal Galois
    action on the r_i is diag(z, z^4, z^2).  Only r_1 is adjoined: r_2 and
    r_3 are r_1^4 and r_2^4 times elements of the cubic field."""
    import mpmath
    R, ns = cubic_cycle(P)
    xs = [x1]
    xs.append(_ptower(R, xs[0]))
    xs.append(_ptower(R, xs[1]))
    bs = [_ptower(cs, x) ** power for x in xs]
    if any(not b for b in bs):
        raise ZeroParameter("beta is zero")
    prod = bs[0] * bs[1] * bs[2]
    if not prod.is_rational() or nth_root_rational_exact(prod.to_rational(), 7) is None:
        raise PolNotInClass("beta1 beta2 beta3 is not a rational 7th power")
    with mpmath.workdps(100):
        nb = [sum(mpmath.mpf(int(c.numerator)) / int(c.denominator) * n ** j
                  for j, c in enumerate(cs)) ** power for n in ns]
        root7 = lambda v: mpmath.sign(v) * abs(v) ** (mpmath.mpf(1) / 7)
        for o in (1, 2):
            D = _fit_quadratic(ns, [root7(nb[(i + o) % 3] / nb[i] ** 4) for i in range(3)])
            d1 = _ptower(D, xs[0])
            if d1 and d1 ** 7 * bs[0] ** 4 == bs[o]:
                break
        else:
            raise PolNotInClass("beta is not an eigenvector modulo 7th powers: no conjugate "
                                "is beta^4 times a 7th power in the cubic field")
    order = [0, o, (2 * o) % 3]
    betas = [bs[k] for k in order]
    r1 = fb.lift(fb.nth_root(betas[0], 7, name="rho"))
    r2 = r1 ** 4 * _ptower(D, fb.lift(xs[0]))
    r3 = r2 ** 4 * _ptower(D, fb.lift(xs[o]))
    fb.register_root(betas[1], 7, r2)
    fb.register_root(betas[2], 7, r3)
    return [fb.lift(b) for b in betas], [r1, r2, r3]


# ---------------------------------------------------------------------------
# row 11: the 14 x 14 construction

def _mat_mul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    return [[sum((A[i][j] * B[j][c] for j in range(k)), A[0][0] * 0) for c in range(m)]
            for i in range(n)]


def klein_E(z):
    """E with entries zeta^(4^(r-1) j), r = 1..3, j = 0..6."""
    return [[z ** ((4 ** r * j) % 7) for j in range(7)] for r in range(3)]


def klein_psl_fourteen(alphas, conj, zeta=None):
    """(E, calE, calF, M, phi) with phi = calE M calF.

    ``alphas`` are seven tower elements; ``conj`` is an involution of their
    tower sending sqrt(-7) to -sqrt(-7) (it acts as complex conjugation on
    zeta).  ``zeta`` defaults to the level-two generator of a tower built as
    Q(sqrt -7, zeta7, ...).
    """
    al = list(alphas)
    if len(al) != 7:
        raise TwistError("need seven alphas")
    t = common_tower(conj.tower, *[a.tower for a in al if isinstance(a, TowerElem)])
    al = [a.lift_to(t) if isinstance(a, TowerElem) else t.elem(a) for a in al]
    for i in range(7):
        for j in range(i):
            if al[i] == al[j]:
                raise RepeatedAlpha("alpha_%d = alpha_%d" % (j + 1, i + 1))
    s7 = t.gen(1)
    if s7 * s7 != -7:
        raise BadConjugation("the first level of the tower must be sqrt(-7)")
    if conj(s7) != -s7 or not conj.compose(conj).is_identity():
        raise BadConjugation("conj must be an involution with sqrt(-7) -> -sqrt(-7)")
    z = zeta if zeta is not None else t.gen(2)
    z = z.lift_to(t)
    E = klein_E(z)
    Eb = [[conj(x) for x in r] for r in E]
    calE = [E[r] + Eb[r] for r in range(3)]
    Fm = [[Eb[r][j] for r in range(3)] for j in range(7)]      # F = conj(E)^T
    Fb = [[conj(x) for x in r] for r in Fm]
    calF = Fm + Fb
    Phi = [[a ** k for k in range(7)] for a in al]
    Phib = [[conj(x) for x in r] for r in Phi]
    M = [Phi[i] + [s7 * x for x in Phi[i]] for i in range(7)] + \
        [Phib[i] + [-s7 * x for x in Phib[i]] for i in range(7)]
    phi = _mat_mul(_mat_mul(calE, M), calF)
    return E, calE, calF, M, ProjMatrix(phi, t, check=False)


def scaled_permutation(A):
    """(scale, permutation) if A = scale * P for a permutation matrix P, else None.
    The permutation maps column j to the row holding its nonzero entry."""
    n = len(A)
    perm, scale = [None] * n, None
    for j in range(n):
        nz = [i for i in range(n) if A[i][j]]
        if len(nz) != 1:
            return None
        i = nz[0]
        if scale is None:
            scale = A[i][j]
        elif A[i][j] != scale:
            return None
        perm[j] = i
    if sorted(perm) != list(range(n)):
        return None
    return scale, perm


def row11_intertwiner(E, w, Fm):
    """Permutations P of 7 points with E P F proportional to w (3x3), by search."""
    from itertools import permutations
    out = []
    t = w.tower
    for p in permutations(range(7)):
        # E P F = sum_j E[:, p(j)] F[j, :]
        acc = [[t.zero()] * 3 for _ in range(3)]
        for j in range(7):
            pj = p[j]
            for r in range(3):
                e = E[r][pj]
                for c in range(3):
                    acc[r][c] = acc[r][c] + e * Fm[j][c]
        M = ProjMatrix(acc, t, check=False)
        try:
            if M.proj_eq(w):
                out.append(p)
        except StopIteration:
            continue
    return out


# ---------------------------------------------------------------------------
# bounded searches for admissible parameters (test tooling)

def search_case_iv(bound=20):
    """(m, a1, a2, q) with a1^2 - m a2^2 = q^3, m not a square, a2 != 0."""
    out = []
    cubes = {q ** 3: q for q in range(-60, 61) if q}
    for m in range(-bound, bound + 1):
        if m in (0,) or (m > 0 and int(m ** 0.5) ** 2 == m):
            continue
        for a1 in range(-bound, bound + 1):
            for a2 in range(1, bound + 1):
                v = a1 * a1 - m * a2 * a2
                if v in cubes:
                    out.append((m, a1, a2, cubes[v]))
    return out


def search_quartic_relation(a, bound=12, power=4):
    """(m, c, d, q) with c^2 - d^2 m = q^power a, m a nonsquare, d != 0."""
    a = rational(a)
    out = []
    for m in range(-bound, bound + 1):
        if m == 0 or (m > 0 and int(m ** 0.5) ** 2 == m):
            continue
        for q in range(1, bound + 1):
            for d in range(1, bound + 1):
                c2 = q ** power * a + d * d * m
                if c2 < 0:
                    continue
                c = nth_root_rational_exact(c2, 2)
                if c is not None:
                    out.append((m, c, d, q))
    return out


def search_klein_row7(bound=30):
    """(a, b, m, q) with a^2 - m b^2 = -7 m q^2, m a nonsquare, b != 0."""
    out = []
    for m in range(-bound, bound + 1):
        if m == 0 or (m > 0 and int(m ** 0.5) ** 2 == m):
            continue
        for b in range(1, bound + 1):
            for q in range(1, bound + 1):
                a2 = m * b * b - 7 * m * q * q
                if a2 < 0:
                    continue
                a = nth_root_rational_exact(a2, 2)
                if a is not None and abs(a) <= bound:
                    out.append((int(a), b, m, q))
    return out
