"""Henn's twelve cases of plane quartics with non-trivial automorphisms.

The numbers live in ``data/henn.json`` (models, generator matrices with
symbolic entries, restrictions, the (G, H) pair tables).  This module turns
those templates into exact objects over a tower built on demand.
"""

import json
import re
from functools import lru_cache
from importlib import resources

from .exactfield import TowerElem, common_tower, rational
from .expr import ExprError, evaluate, names
from .fieldbuild import FieldBuilder, cubic_discriminant
from .qforms import Form, ProjMatrix, substitute

CASE_IDS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII")
MODIFIED_IDS = ("II", "III", "IV", "V", "VI", "VII")
FAMILIES = ("fermat-diagonal", "fermat-almost-diagonal", "fermat-nondiagonal",
            "klein", "klein-sqrt-7")


class RestrictionViolated(ValueError):
    def __init__(self, case, violations):
        self.case = case
        self.violations = list(violations)
        super().__init__("case %s: parameter restriction violated: %s"
                         % (case, ", ".join(self.violations)))


class TowerMissingConstant(LookupError):
    pass


class UnknownCase(KeyError):
    pass


class UnknownIndex(KeyError):
    pass


@lru_cache(maxsize=None)
def _raw():
    with resources.files("quartwist").joinpath("data/henn.json").open() as f:
        return json.load(f)


def data():
    """A fresh copy of the shipped table (safe to mutate)."""
    return json.loads(json.dumps(_raw()))


def data_path():
    return str(resources.files("quartwist").joinpath("data/henn.json"))


class HennCase:
    """One row of the classification, plain or modified."""

    def __init__(self, cid, rec, modified=False):
        self.id = cid
        self.modified = modified
        self.model = rec["model"]
        self.params = list(rec["params"])
        self.binary_forms = rec.get("binary_forms", {})
        self.aut_label = rec["aut"]
        self.order = rec["order"]
        self.constants = list(rec["constants"])
        self.generators = rec["generators"]
        self.restrictions = rec["restrictions"]
        self.errata = rec.get("errata", [])
        self.raw = rec

    def __repr__(self):
        return "HennCase(%s%s, %s)" % (self.id, "*" if self.modified else "", self.aut_label)


def get_case(cid, modified=False):
    cid = str(cid).upper()
    table = _raw()["modified" if modified else "cases"]
    if cid not in table:
        raise UnknownCase("no %scase %r" % ("modified " if modified else "", cid))
    return HennCase(cid, table[cid], modified)


# ---------------------------------------------------------------------------
# parameters and constants

def _parse_binary(src, tower, spec, pname):
    if isinstance(src, Form):
        F = src
    else:
        env = {v: Form.var(tower, k) for k, v in enumerate("xyz")}
        try:
            F = evaluate(str(src), env)
        except ExprError as e:
            raise ValueError("binary form %s: %s" % (pname, e))
        if not isinstance(F, Form):
            F = Form.const(tower, F)
    missing = "xyz".index(next(v for v in "xyz" if v not in spec["vars"]))
    if not F.binary_degree_ok(spec["degree"], missing):
        raise ValueError("%s must be a binary form of degree %d in %s"
                         % (pname, spec["degree"], ", ".join(spec["vars"])))
    return F


def _normalise(case, params):
    params = dict(params or {})
    unknown = set(params) - set(case.params)
    if unknown:
        raise ValueError("case %s takes parameters %s, got %s"
                         % (case.id, case.params or "none", sorted(unknown)))
    missing = [p for p in case.params if p not in params]
    if missing:
        raise ValueError("case %s: missing parameters %s" % (case.id, missing))
    out = {}
    for p, v in params.items():
        if p in case.binary_forms:
            out[p] = v
        elif p == "cubic":
            cs = [rational(c) for c in v]
            if len(cs) == 3:
                cs = cs + [rational(1)]
            if len(cs) != 4 or cs[3] != 1:
                raise ValueError("cubic must be given as [g, f, e] or [g, f, e, 1] (monic)")
            out[p] = cs
        else:
            out[p] = rational(v)
    return out


def _constant(fb, name, params):
    if name == "i":
        return {"i": fb.unity(4)}
    if name == "zeta3":
        return {"zeta3": fb.unity(3)}
    if name == "zeta9":
        return {"zeta9": fb.unity(9)}
    if name == "zeta7":
        return {"zeta7": fb.unity(7)}
    if name == "sqrt3":
        return {"sqrt3": fb.sqrt_rational(3)}
    if name == "sqrtm7":
        s = fb.sqrt_rational(-7)
        return {"sqrtm7": s, "eps": (s - 1) / 2}
    if name == "qa":
        return {"qa": fb.nth_root_rational(params["a"], 4)}
    if name == "roots":
        al, be, ga = fb.cubic_roots(params["cubic"], name="alpha")
        return {"alpha": al, "beta": be, "gamma": ga}
    raise ExprError("unknown constant %r" % name)


def _known_constant(fb, name, params):
    """The constant if the builder already has it, else None (no adjoining)."""
    if name == "i":
        return fb.known_unity(4)
    if name == "zeta3":
        return fb.known_unity(3)
    if name == "zeta9":
        return fb.known_unity(9)
    if name == "zeta7":
        return fb.known_unity(7)
    if name == "sqrt3":
        return fb.known_sqrt(3)
    if name == "sqrtm7":
        return fb.known_sqrt(-7)
    if name == "qa":
        return fb.known_root(params["a"], 4)
    return None


def environment(case, params, builder=None, extend=True):
    """Bind every name a case's templates use, extending ``builder``.

    With ``extend=False`` the builder's tower must already contain the
    constants; otherwise TowerMissingConstant is raised.
    """
    fb = builder if builder is not None else FieldBuilder()
    env = {}
    for c in case.constants:
        if not extend and c != "roots":
            v = _known_constant(fb, c, params)
            if v is None:
                raise TowerMissingConstant("case %s needs %s in the tower" % (case.id, c))
            env[c] = v
            if c == "sqrtm7":
                env["eps"] = (v - 1) / 2
        else:
            env.update(_constant(fb, c, params))
    for p, v in params.items():
        if p not in case.binary_forms and p != "cubic":
            env[p] = v
    t = fb.tower
    env = {k: (v.lift_to(t) if isinstance(v, TowerElem) else v) for k, v in env.items()}
    return fb, env


def _matrix(rows, env, tower):
    vals = [[evaluate(e, env) for e in r] for r in rows]
    return ProjMatrix(vals, tower)


def _vandermonde(env, tower):
    return _matrix(_raw()["modified"]["II"]["conjugator"], env, tower)


# ---------------------------------------------------------------------------
# restrictions

class RestrictionReport:
    def __init__(self, violations, skipped, unchecked):
        self.violations = violations
        self.skipped = skipped
        self.unchecked = unchecked

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self):
        return {"ok": self.ok, "violations": self.violations,
                "skipped_irrational": self.skipped, "unchecked": self.unchecked}

    def __repr__(self):
        return "RestrictionReport(ok=%s, violations=%s, skipped=%s)" % (
            self.ok, self.violations, self.skipped)


class _Irrational(Exception):
    pass


def _rational_sqrt(x):
    x = rational(x)
    if x < 0:
        raise _Irrational()
    n, d = int(x.numerator), int(x.denominator)
    from math import isqrt
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise _Irrational()
    return rational(rn) / rd


def _is_zero(v):
    if isinstance(v, Form):
        return not v.terms
    if isinstance(v, TowerElem):
        return not v
    return v == 0


def check_restrictions(case, params=None, modified=False, strict=False):
    """Evaluate the parameter restrictions of a case.

    Irrational restrictions are decided only when the quantity they involve is
    rational for the given parameters; otherwise they are listed as skipped.
    Moduli conditions ("not below") are listed as unchecked.
    """
    c = case if isinstance(case, HennCase) else get_case(case, modified)
    p = _normalise(c, params)
    violations, skipped, unchecked = [], [], []
    env = {}
    fb = FieldBuilder()
    for k, v in p.items():
        if k in c.binary_forms:
            env[k] = _parse_binary(v, fb.tower, c.binary_forms[k], k)
        elif k != "cubic":
            env[k] = v
    for r in c.restrictions:
        label = r.get("label", r["expr"])
        kind = r["kind"]
        if kind == "moduli":
            unchecked.append(label)
            continue
        if kind == "strict" and not strict:
            continue
        if kind == "structural":
            g, f, e, _ = p["cubic"]
            if not cubic_discriminant(e, f, g):
                violations.append(label)
            continue
        lhs, rhs = [s.strip() for s in r["expr"].split("!=")]
        try:
            diff = evaluate("(%s) - (%s)" % (lhs, rhs), env, {"sqrt": _rational_sqrt})
        except _Irrational:
            skipped.append(label)
            continue
        except ZeroDivisionError:
            # the excluded value is undefined for these parameters
            continue
        if kind == "irrational" and "sqrt" not in r["expr"]:
            # the excluded value is irrational; it cannot equal a rational
            # parameter, so the condition is vacuous over Q
            if not _is_zero(diff):
                skipped.append(label)
                continue
        if _is_zero(diff):
            violations.append(label)
    return RestrictionReport(violations, skipped, unchecked)


# ---------------------------------------------------------------------------
# models and generators

def _model_modified_ii(env, tower):
    X, Y, Z = (Form.var(tower, k) for k in range(3))
    outer = evaluate(_raw()["modified"]["II"]["outer"], dict(env, X=X, Y=Y, Z=Z))
    return substitute(outer.quartic(), _vandermonde(env, tower))


def representative_curve(case, params=None, modified=False, builder=None, strict=False,
                         check=True):
    """The model of a case with its parameters substituted.

    Returns the TernaryQuartic; its tower includes any constants the model
    needs (only modified case II needs some: the roots of the cubic).
    """
    c = case if isinstance(case, HennCase) else get_case(case, modified)
    p = _normalise(c, params)
    if check:
        rep = check_restrictions(c, p, strict=strict)
        if not rep.ok:
            raise RestrictionViolated(c.id, rep.violations)
    fb = builder if builder is not None else FieldBuilder()
    if c.modified and c.id == "II":
        fb, env = environment(c, p, fb)
        return _model_modified_ii(env, fb.tower)
    t = fb.tower
    env = {}
    for k, v in p.items():
        env[k] = _parse_binary(v, t, c.binary_forms[k], k) if k in c.binary_forms else v
    for k, v in enumerate("xyz"):
        env[v] = Form.var(t, k)
    return evaluate(c.model, env).quartic()


def automorphism_generators(case, params=None, modified=False, builder=None, extend=True,
                            strict=False, check=True):
    """Generator matrices of Aut(C) for the model of ``case``.

    The matrices live in the builder's tower after the needed constants
    (roots of unity, sqrt(3), 4th root of a, roots of the cubic) are adjoined.
    """
    c = case if isinstance(case, HennCase) else get_case(case, modified)
    p = _normalise(c, params)
    if check:
        rep = check_restrictions(c, p, strict=strict)
        if not rep.ok:
            raise RestrictionViolated(c.id, rep.violations)
    fb, env = environment(c, p, builder, extend)
    t = fb.tower
    gens = [_matrix(g, env, t) for g in c.generators]
    if c.modified and c.id == "II":
        V = _vandermonde(env, t)
        Vi = V.inverse()
        gens = [Vi @ D @ V for D in gens]
    return gens


def modified_ii_data(roots, builder):
    """Model and Aut generators of modified case II for explicitly ordered
    roots (alpha, beta, gamma) already living in ``builder``'s tower."""
    t = builder.tower
    env = dict(zip(("alpha", "beta", "gamma"), (builder.lift(r) for r in roots)))
    rec = _raw()["modified"]["II"]
    V = _vandermonde(env, t)
    Vi = V.inverse()
    gens = [Vi @ _matrix(g, env, t) @ V for g in rec["generators"]]
    return _model_modified_ii(env, t), gens


def case_data(case, params=None, modified=False, strict=False):
    """(builder, curve, generators) sharing one tower."""
    c = case if isinstance(case, HennCase) else get_case(case, modified)
    gens = automorphism_generators(c, params, builder=(fb := FieldBuilder()), strict=strict)
    F = representative_curve(c, params, builder=fb, check=False)
    t = common_tower(F.tower, fb.tower)
    return fb, F.lift_to(t), [g.lift_to(t) for g in gens]


SAMPLE_PARAMS = {
    "I": {"F1": "y^2 + 3*z^2", "F2": "y^4 + 2*y*z^3 + 5*z^4"},
    "II": {"a": 1, "b": 2, "c": 3},
    "III": {"a": 2, "b": 3},
    "IV": {"a": 1, "b": 2},
    "V": {"a": 1, "b": 3},
    "VI": {"a": 1},
    "VII": {"a": 1},
    "VIII": {"a": 1},
    "IX": {}, "X": {}, "XI": {}, "XII": {},
}

SAMPLE_MODIFIED = {
    "II": {"cubic": [-1, -1, 0, 1]},
    "III": {"P": "x^4 + 2*x*y^3 + y^4"},
    "IV": {"a": 1, "b": 2},
    "V": {"a": 2, "b": 1},
    "VI": {"a": 2},
    "VII": {"a": 2},
}


# ---------------------------------------------------------------------------
# named generators and words

def fermat_generators(builder=None):
    """The matrices s, t, u generating Aut of the Fermat quartic."""
    fb = builder if builder is not None else FieldBuilder()
    i = fb.unity(4)
    env = {"i": i}
    mats = _raw()["fermat"]["generators"]
    return {k: _matrix(v, env, fb.tower) for k, v in mats.items()}


def klein_env(builder=None, with_i=False):
    """Builder holding sqrt(-7) and zeta7 (in that order), plus i on request."""
    fb = builder if builder is not None else FieldBuilder()
    s = fb.sqrt_rational(-7)
    z = fb.unity(7)
    env = {"sqrtm7": s, "zeta7": z}
    if with_i:
        env["i"] = fb.unity(4)
    env["eps"] = (env["sqrtm7"] - 1) / 2
    t = fb.tower
    return fb, {k: v.lift_to(t) for k, v in env.items()}


def klein_c0_generators(builder=None):
    """g, h, s generating Aut(C0), with entries in Q(sqrt(-7))."""
    fb = builder if builder is not None else FieldBuilder()
    s = fb.sqrt_rational(-7)
    env = {"sqrtm7": s.lift_to(fb.tower)}
    return {k: _matrix(v, env, fb.tower) for k, v in _raw()["klein"]["aut0"].items()}


def _klein_env_for(src_names, builder):
    """Builder and bindings for a Klein template, adjoining only what it uses
    (sqrt(-7) always comes first, so Aut(C0) lives on level one)."""
    fb = builder if builder is not None else FieldBuilder()
    s = fb.sqrt_rational(-7)
    env = {"sqrtm7": s}
    if "zeta7" in src_names:
        env["zeta7"] = fb.unity(7)
    if "i" in src_names:
        env["i"] = fb.unity(4)
    env["eps"] = (s - 1) / 2
    t = fb.tower
    return fb, {k: v.lift_to(t) for k, v in env.items()}


def _names_in(rows):
    out = set()
    for r in rows:
        for e in (r if isinstance(r, list) else [r]):
            out.update(names(e))
    return out


def klein_model(name, builder=None):
    """One of the Klein models K, S4, 0, D4 as a TernaryQuartic."""
    src = _raw()["klein"]["models"][name]
    fb, env = _klein_env_for(names(src), builder)
    t = fb.tower
    env.update({v: Form.var(t, k) for k, v in enumerate("xyz")})
    return evaluate(src, env).quartic()


def klein_matrix(name, builder=None):
    """A change of model: phi1, phi1_literal, phi2 or phi3."""
    rows = _raw()["klein"]["matrices"][name]
    fb, env = _klein_env_for(_names_in(rows), builder)
    return _matrix(rows, env, fb.tower)


_TOKEN = re.compile(r"([a-z])(?:\^(\d+))?")


def parse_word(word):
    """'t^3utu^3' -> [('t', 3), ('u', 1), ('t', 1), ('u', 3)]; '1' -> []."""
    w = word.replace(" ", "").replace("*", "")
    if w in ("", "1"):
        return []
    out, pos = [], 0
    for m in _TOKEN.finditer(w):
        if m.start() != pos:
            raise ValueError("bad word %r" % word)
        out.append((m.group(1), int(m.group(2) or 1)))
        pos = m.end()
    if pos != len(w):
        raise ValueError("bad word %r" % word)
    return out


def eval_word(word, gens, tower=None):
    """The product of a word in named generators, multiplied left to right."""
    letters = parse_word(word)
    if tower is None:
        tower = next(iter(gens.values())).tower
    M = ProjMatrix.identity(tower)
    for name, k in letters:
        if name not in gens:
            raise ValueError("unknown generator %r in %r" % (name, word))
        g = gens[name]
        for _ in range(k):
            M = M @ g
    return M.normal_form()


# ---------------------------------------------------------------------------
# pair tables

class PairRecord:
    __slots__ = ("family", "index", "G", "H", "gens", "h", "n", "extra")

    def __init__(self, family, rec):
        self.family = family
        self.index = rec["index"]
        self.G = rec["G"]
        self.H = rec["H"]
        self.gens = list(rec["gens"])
        self.h = rec["h"]
        self.n = rec["n"]
        self.extra = {k: v for k, v in rec.items()
                      if k not in ("index", "G", "H", "gens", "h", "n")}

    def to_json(self):
        d = {"family": self.family, "index": self.index, "G": self.G, "H": self.H,
             "gens": self.gens, "h": self.h, "n": self.n}
        d.update(self.extra)
        return d

    def __repr__(self):
        return "PairRecord(%s #%d: G=%s H=%s gens=%s h=%s n=%d)" % (
            self.family, self.index, self.G, self.H, self.gens, self.h, self.n)


def pair_table(family, index=None):
    """A record of a (G, H) table, or the whole table when index is None."""
    pairs = _raw()["pairs"]
    if family not in pairs:
        raise UnknownIndex("unknown family %r (have %s)" % (family, ", ".join(FAMILIES)))
    rows = pairs[family]
    if index is None:
        return [PairRecord(family, r) for r in rows]
    for r in rows:
        if r["index"] == int(index):
            return PairRecord(family, r)
    raise UnknownIndex("%s has no row %s" % (family, index))


def family_generators(family, builder=None):
    """Named generators the words of a family refer to."""
    if family.startswith("fermat"):
        return fermat_generators(builder)
    return klein_c0_generators(builder)
