"""Symbolic checks on twists: isomorphism, rationality, cocycle, equivalence.

All comparisons are exact identities in the tower; nothing here samples or
approximates.
"""

from .exactfield import CommonTowerRequired, common_tower, nth_power_free, rat_str, rational
from .projgroup import CapExceeded, generate_group
from .twistgen import ZeroParameter
from .qforms import EXPONENTS, ProjMatrix, TowerMismatch, proportionality, substitute


class MissingGaloisData(ValueError):
    pass


def check_isomorphism(t, source=None):
    """(ok, lambda) with substitute(source, iso) == lambda * curve."""
    F = t.source if source is None else source
    if F.tower != t.iso.tower:
        try:
            common_tower(F.tower, t.iso.tower)
        except CommonTowerRequired:
            raise TowerMismatch("source and isomorphism live in unrelated towers")
    G = substitute(F, t.iso)
    if G.is_zero():
        return False, None
    lam = proportionality(G, t.curve.lift_to(G.tower))
    return lam is not None and bool(lam), lam


def offending_coefficients(t):
    lvl = t.base_level
    return [(e, c) for e, c in t.curve.items() if c.level() > lvl]


def check_rationality(t):
    """Curve coefficients lie in the base field (Q unless base_level > 0)."""
    return not offending_coefficients(t)


def aut_group(t, cap=400):
    return generate_group(t.aut, cap=cap, tower=t.tower)


def check_aut_fixes_source(t):
    """Indices of supplied Aut generators that do not fix the source curve."""
    bad = []
    for k, g in enumerate(t.aut):
        if proportionality(substitute(t.source, g), t.source) is None:
            bad.append(k)
    return bad


class CocycleEntry:
    __slots__ = ("sigma", "index", "xi")

    def __init__(self, sigma, index, xi):
        self.sigma = sigma
        self.index = index
        self.xi = xi

    @property
    def ok(self):
        return self.index is not None

    def to_json(self):
        return {"sigma": self.sigma, "aut_index": self.index, "ok": self.ok}


def cocycle_value(t, sigma):
    """xi_sigma = phi * sigma(phi)^-1 in projective normal form."""
    return (t.iso @ t.iso.apply_aut(sigma).proj_inverse()).normal_form()


def check_cocycle(t, aut=None):
    """Membership of xi_sigma in Aut(source) for every Galois generator."""
    if t.galois is None:
        raise MissingGaloisData("the twist carries no Galois generators")
    G = aut if aut is not None else aut_group(t)
    out = []
    for k, s in enumerate(t.galois):
        xi = cocycle_value(t, s)
        out.append(CocycleEntry(k, G.index(xi), xi))
    return out


def galois_fixes_base(t):
    """Supplied Galois generators must fix the base field levels."""
    bad = []
    for k, s in enumerate(t.galois or []):
        for j in range(1, t.base_level + 1):
            g = t.tower.gen(j)
            if s(g) != g:
                bad.append(k)
                break
    return bad


def cocycle_identity(t, s1, s2):
    """xi_{s1 s2} == xi_{s1} * s1(xi_{s2}) projectively."""
    lhs = cocycle_value(t, s1.compose(s2))
    rhs = cocycle_value(t, s1) @ cocycle_value(t, s2).apply_aut(s1)
    return lhs.proj_eq(rhs)


class VerificationReport:
    def __init__(self, iso_ok, lam, rational_ok, offending, cocycle, aut_bad, notes):
        self.iso_ok = iso_ok
        self.lam = lam
        self.rational_ok = rational_ok
        self.offending = offending
        self.cocycle = cocycle            # list of CocycleEntry, or None when skipped
        self.aut_bad = aut_bad
        self.notes = list(notes)

    @property
    def cocycle_ok(self):
        if self.cocycle is None:
            return None
        return all(c.ok for c in self.cocycle)

    def ok(self, allow_no_galois=False):
        if not (self.iso_ok and self.rational_ok) or self.aut_bad:
            return False
        if self.cocycle is None:
            return allow_no_galois
        return self.cocycle_ok

    def to_json(self):
        return {
            "iso_ok": self.iso_ok,
            "lambda": None if self.lam is None else str(self.lam),
            "rational_ok": self.rational_ok,
            "offending": [{"exp": list(e), "coeff": str(c)} for e, c in self.offending],
            "aut_generators_fix_source": not self.aut_bad,
            "cocycle": "skipped" if self.cocycle is None else [c.to_json() for c in self.cocycle],
            "cocycle_ok": self.cocycle_ok,
            "notes": self.notes,
        }


def verify_twist(t, aut=None):
    """Run every check and collect the results (never raises on a failed check)."""
    notes = []
    iso_ok, lam = check_isomorphism(t)
    off = offending_coefficients(t)
    aut_bad = check_aut_fixes_source(t)
    cocycle = None
    if t.galois is None:
        notes.append("no Galois data: cocycle check skipped")
    else:
        bad = galois_fixes_base(t)
        if bad:
            notes.append("Galois generators %s move the base field" % bad)
            aut_bad = aut_bad + ["galois"]
        try:
            cocycle = check_cocycle(t, aut)
        except CapExceeded:
            notes.append("automorphism closure exceeded its cap")
            cocycle = []
            aut_bad = aut_bad + ["closure"]
    return VerificationReport(iso_ok, lam, not off, off, cocycle, aut_bad, notes)


# ---------------------------------------------------------------------------
# equivalence

def _same_source(t1, t2, tower):
    return proportionality(t1.source.lift_to(tower), t2.source.lift_to(tower)) is not None


class Witness:
    __slots__ = ("index", "alpha", "N")

    def __init__(self, index, alpha, N):
        self.index = index
        self.alpha = alpha
        self.N = N

    def to_json(self):
        return {"aut_index": self.index, "N": [[str(x) for x in r] for r in self.N.rows]}


def _rational_product(B, P, lvl):
    """B @ P normalised, or None as soon as an entry leaves level ``lvl``."""
    cols = [[P.rows[r][c] for r in range(3)] for c in range(3)]
    piv = None
    out = []
    for r in range(3):
        br = B.rows[r]
        row = []
        for c in range(3):
            pc = cols[c]
            v = br[0] * pc[0] + br[1] * pc[1] + br[2] * pc[2]
            if piv is None:
                if v:
                    piv = v.inv()
                    v = v.tower.one()
            else:
                v = v * piv
            if v.level() > lvl:
                return None
            row.append(v)
        out.append(row)
    if piv is None:
        return None
    return ProjMatrix(out, P.tower, check=False)


def check_equivalence(t1, t2, aut=None):
    """A witness (alpha, N) with alpha phi1 = phi2 N and N over the base field,
    or None when no automorphism gives one."""
    try:
        T = common_tower(t1.tower, t2.tower)
    except CommonTowerRequired:
        raise CommonTowerRequired("the two twists do not share a tower; build them "
                                  "in one FieldBuilder")
    if not _same_source(t1, t2, T):
        raise ValueError("the twists have different source curves")
    G = aut if aut is not None else generate_group([g.lift_to(T) for g in t1.aut], tower=T)
    if G.tower != T:
        G = generate_group([g.lift_to(T) for g in G.generators], tower=T)
    phi1 = t1.iso.lift_to(T)
    phi2_inv = t2.iso.lift_to(T).proj_inverse()
    lvl = max(t1.base_level, t2.base_level)
    for k, a in enumerate(G.elements):
        N = _rational_product(phi2_inv @ a, phi1, lvl)
        if N is not None:
            return Witness(k, a, N)
    return None


def fermat_diagonal_equivalent(a, b, a2, b2):
    """The set criterion for diagonal Fermat twists: some m makes
    {a, b, 1} and {m a2, m b2, m} agree modulo fourth powers."""
    vals = [rational(x) for x in (a, b, a2, b2)]
    if any(not v for v in vals):
        raise ZeroParameter("parameters must be nonzero")
    a, b, a2, b2 = vals
    cls = lambda x: nth_power_free(x, 4)
    target = sorted([cls(a), cls(b), 1])
    for m in (1 / a2, 1 / b2, rational(1)):
        if sorted([cls(m * a2), cls(m * b2), cls(m)]) == target:
            return True
    return False


def describe_offending(off):
    return ", ".join("%s: %s" % ("x^%d y^%d z^%d" % e, c) for e, c in off)
