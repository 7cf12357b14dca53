"""Ternary forms, 3x3 projective matrices and substitution.

Convention: ``substitute(F, M)`` is F(M v) with v = (x, y, z) as a column,
so substitute(substitute(F, M), N) == substitute(F, M N).
"""

from .exactfield import (CommonTowerRequired, TowerElem, Tower, common_tower,
                         is_scalar_like, rational, to_elem, elem_from_json, ZeroInverse)


class TowerMismatch(CommonTowerRequired):
    pass


class ZeroForm(ValueError):
    pass


class SingularMatrix(ValueError):
    pass


def exponents(d):
    """Degree-d exponent triples, lexicographically descending."""
    return [(j, k, d - j - k) for j in range(d, -1, -1) for k in range(d - j, -1, -1)]


EXPONENTS = exponents(4)
_EXP_INDEX = {e: n for n, e in enumerate(EXPONENTS)}


def _tower_of(*xs):
    ts = [x.tower for x in xs if isinstance(x, (TowerElem, Form, TernaryQuartic, ProjMatrix))]
    return common_tower(*ts) if ts else Tower()


class Form:
    """Homogeneous (or not) polynomial in x, y, z; sparse dict of monomials."""

    __slots__ = ("tower", "terms")

    def __init__(self, tower, terms=None):
        self.tower = tower
        self.terms = {}
        for e, c in (terms or {}).items():
            c = to_elem(tower, c)
            if c:
                self.terms[tuple(e)] = c

    @classmethod
    def var(cls, tower, k):
        e = [0, 0, 0]
        e[k] = 1
        return cls(tower, {tuple(e): 1})

    @classmethod
    def const(cls, tower, c):
        return cls(tower, {(0, 0, 0): c})

    def _other(self, o):
        if isinstance(o, Form):
            if o.tower == self.tower:
                return self, o
            t = common_tower(self.tower, o.tower)
            return self.lift_to(t), o.lift_to(t)
        if isinstance(o, TowerElem) or is_scalar_like(o):
            t = self.tower if not isinstance(o, TowerElem) else common_tower(self.tower, o.tower)
            return self.lift_to(t), Form.const(t, o)
        return None

    def lift_to(self, t):
        if t == self.tower:
            return self
        return Form(t, {e: c.lift_to(t) for e, c in self.terms.items()})

    def __add__(self, o):
        p = self._other(o)
        if p is None:
            return NotImplemented
        a, b = p
        out = dict(a.terms)
        for e, c in b.terms.items():
            out[e] = out[e] + c if e in out else c
        return Form(a.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.tower, {e: -c for e, c in self.terms.items()})

    def __sub__(self, o):
        p = self._other(o)
        if p is None:
            return NotImplemented
        return p[0] + (-p[1])

    def __rsub__(self, o):
        p = self._other(o)
        if p is None:
            return NotImplemented
        return p[1] + (-p[0])

    def __mul__(self, o):
        if is_scalar_like(o):
            r = rational(o)
            return Form(self.tower, {e: c * r for e, c in self.terms.items()})
        p = self._other(o)
        if p is None:
            return NotImplemented
        a, b = p
        out = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return Form(a.tower, out)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Form):
            if set(o.terms) != {(0, 0, 0)}:
                raise ValueError("can only divide a form by a constant")
            o = o.terms[(0, 0, 0)]
        inv = (to_elem(self.tower, o) if not isinstance(o, TowerElem) else o).inv()
        return self * inv

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        r = Form.const(self.tower, 1)
        b = self
        while n:
            if n & 1:
                r = r * b
            n >>= 1
            if n:
                b = b * b
        return r

    def __eq__(self, o):
        p = self._other(o) if not isinstance(o, TernaryQuartic) else self._other(o.to_form())
        if p is None:
            return NotImplemented
        return p[0].terms == p[1].terms

    def is_constant(self):
        return set(self.terms) <= {(0, 0, 0)}

    def constant(self):
        return self.terms.get((0, 0, 0), self.tower.zero())

    def degrees(self):
        return {sum(e) for e in self.terms}

    def quartic(self):
        ds = self.degrees()
        if ds - {4}:
            raise ValueError("not a homogeneous quartic (degrees %s)" % sorted(ds))
        return TernaryQuartic(self.tower, [self.terms.get(e, 0) for e in EXPONENTS])

    def binary_degree_ok(self, d, var_index):
        """True if this is homogeneous of degree d and free of variable var_index."""
        return all(sum(e) == d and e[var_index] == 0 for e in self.terms)

    def __repr__(self):
        return "Form(%s)" % _fmt_terms(self.terms)


def _fmt_terms(terms):
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        mono = "*".join(v if k == 1 else "%s^%d" % (v, k) for v, k in zip("xyz", e) if k)
        cs = str(c)
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append("-" + mono)
        else:
            if " " in cs:
                cs = "(" + cs + ")"
            parts.append(cs + "*" + mono)
    return " + ".join(parts).replace("+ -", "- ")


class TernaryQuartic:
    """A ternary quartic with all 15 coefficients stored, order ``EXPONENTS``."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower, coeffs):
        if isinstance(coeffs, dict):
            bad = [e for e in coeffs if tuple(e) not in _EXP_INDEX]
            if bad:
                raise ValueError("not degree-4 exponents: %s" % bad)
            coeffs = [coeffs.get(e, 0) for e in EXPONENTS]
        if len(coeffs) != 15:
            raise ValueError("a ternary quartic has 15 coefficients")
        self.tower = tower
        self.coeffs = tuple(to_elem(tower, c) for c in coeffs)

    @classmethod
    def fermat(cls, tower=None):
        t = tower or Tower()
        return cls(t, {(4, 0, 0): 1, (0, 4, 0): 1, (0, 0, 4): 1})

    def __getitem__(self, e):
        return self.coeffs[_EXP_INDEX[tuple(e)]]

    def items(self):
        return zip(EXPONENTS, self.coeffs)

    def lift_to(self, t):
        if t == self.tower:
            return self
        return TernaryQuartic(t, [c.lift_to(t) for c in self.coeffs])

    def to_form(self):
        return Form(self.tower, dict(zip(EXPONENTS, self.coeffs)))

    def is_zero(self):
        return not any(self.coeffs)

    def scale(self, c):
        return TernaryQuartic(self.tower, [x * c for x in self.coeffs])

    def __mul__(self, c):
        if isinstance(c, (TernaryQuartic, Form)):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __add__(self, other):
        t = common_tower(self.tower, other.tower)
        a, b = self.lift_to(t), other.lift_to(t)
        return TernaryQuartic(t, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, TernaryQuartic):
            return NotImplemented
        try:
            t = common_tower(self.tower, other.tower)
        except CommonTowerRequired:
            return False
        return all(x == y for x, y in zip(self.lift_to(t).coeffs, other.lift_to(t).coeffs))

    def __hash__(self):
        return hash(tuple(hash(c) for c in self.coeffs))

    def apply_aut(self, sigma):
        return TernaryQuartic(self.tower, [sigma(c) for c in self.coeffs])

    def restrict_to(self, t):
        return TernaryQuartic(t, [c.restrict_to(t) for c in self.coeffs])

    def __str__(self):
        return _fmt_terms({e: c for e, c in self.items() if c})

    def __repr__(self):
        return "TernaryQuartic(%s)" % self

    def to_json(self):
        return {"coeffs": [{"exp": list(e), "val": c.to_json()} for e, c in self.items()]}

    @classmethod
    def from_json(cls, tower, obj):
        entries = obj["coeffs"]
        if len(entries) != 15:
            raise ValueError("form JSON needs 15 coefficients")
        d = {}
        for ent in entries:
            e = tuple(ent["exp"])
            if e not in _EXP_INDEX or e in d:
                raise ValueError("bad or repeated exponent %s" % (e,))
            d[e] = elem_from_json(tower, ent["val"])
        return cls(tower, d)


class ProjMatrix:
    """Invertible 3x3 matrix over a tower, read up to scalars."""

    __slots__ = ("tower", "rows")

    def __init__(self, rows, tower=None, check=True):
        if tower is None:
            tower = _tower_of(*[x for r in rows for x in r])
        self.tower = tower
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("need a 3x3 matrix")
        self.rows = tuple(tuple(to_elem(tower, x) for x in r) for r in rows)
        if check and not self.det():
            raise SingularMatrix("matrix is singular")

    @classmethod
    def identity(cls, tower=None):
        t = tower or Tower()
        return cls([[1, 0, 0], [0, 1, 0], [0, 0, 1]], t, check=False)

    @classmethod
    def diag(cls, a, b, c, tower=None):
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]], tower)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        return [x for r in self.rows for x in r]

    def lift_to(self, t):
        if t == self.tower:
            return self
        return ProjMatrix([[x.lift_to(t) for x in r] for r in self.rows], t, check=False)

    def _pair(self, other):
        if other.tower == self.tower:
            return self, other
        t = common_tower(self.tower, other.tower)
        return self.lift_to(t), other.lift_to(t)

    def __matmul__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        a, b = self._pair(other)
        A, B = a.rows, b.rows
        out = []
        for i in range(3):
            row = []
            for j in range(3):
                s = None
                for k in range(3):
                    x, y = A[i][k], B[k][j]
                    if x and y:
                        p = x * y
                        s = p if s is None else s + p
                row.append(s if s is not None else a.tower.zero())
            out.append(row)
        return ProjMatrix(out, a.tower, check=False)

    def __mul__(self, other):
        if isinstance(other, ProjMatrix):
            return self @ other
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        return ProjMatrix([[x * c for x in r] for r in self.rows], self.tower, check=False)

    def det(self):
        m = self.rows
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    def adjugate(self):
        m = self.rows

        def cof(i, j):
            r = [a for a in range(3) if a != i]
            c = [b for b in range(3) if b != j]
            v = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
            return v if (i + j) % 2 == 0 else -v
        return ProjMatrix([[cof(j, i) for j in range(3)] for i in range(3)], self.tower, check=False)

    def inverse(self):
        d = self.det()
        if not d:
            raise SingularMatrix("matrix is singular")
        return self.adjugate().scale(d.inv())

    def proj_inverse(self):
        """Inverse up to scalar (the adjugate)."""
        return self.adjugate()

    def transpose(self):
        return ProjMatrix([[self.rows[j][i] for j in range(3)] for i in range(3)], self.tower, check=False)

    def pivot(self):
        for x in self.entries():
            if x:
                return x
        raise SingularMatrix("zero matrix")

    def normal_form(self):
        p = self.pivot()
        if p == 1:
            return self
        return self.scale(p.inv())

    def key(self):
        return tuple(x.data for x in self.normal_form().entries())

    def proj_eq(self, other):
        """Equality up to a nonzero scalar, by cross multiplication."""
        a, b = self._pair(other)
        ea, eb = a.entries(), b.entries()
        k = next(n for n, x in enumerate(eb) if x)
        if not ea[k]:
            return False
        pa, pb = ea[k], eb[k]
        return all(x * pb == y * pa for x, y in zip(ea, eb))

    def is_scalar(self):
        m = self.rows
        return (not any(m[i][j] for i in range(3) for j in range(3) if i != j)
                and m[0][0] == m[1][1] == m[2][2])

    def __eq__(self, other):
        if not isinstance(other, ProjMatrix):
            return NotImplemented
        try:
            a, b = self._pair(other)
        except CommonTowerRequired:
            return False
        return all(x == y for x, y in zip(a.entries(), b.entries()))

    def __hash__(self):
        return hash(self.key())

    def apply_aut(self, sigma):
        return ProjMatrix([[sigma(x) for x in r] for r in self.rows], self.tower, check=False)

    def max_level(self):
        return max(x.level() for x in self.entries())

    def apply_vec(self, p):
        t = common_tower(self.tower, *[x.tower for x in p if isinstance(x, TowerElem)])
        v = [to_elem(t, x) for x in p]
        m = self.lift_to(t).rows
        return tuple(m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2] for i in range(3))

    def to_json(self):
        return [[x.to_json() for x in r] for r in self.rows]

    @classmethod
    def from_json(cls, tower, obj):
        return cls([[elem_from_json(tower, x) for x in r] for r in obj], tower)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"

    def __repr__(self):
        return "ProjMatrix(%s)" % self


# ---------------------------------------------------------------------------

def _powers_of_linear(row, tower, n):
    """[L^0, ..., L^n] as dicts over degree-k exponents, L = a x + b y + c z."""
    lin = {}
    for k, c in enumerate(row):
        if c:
            e = [0, 0, 0]
            e[k] = 1
            lin[tuple(e)] = c
    out = [{(0, 0, 0): tower.one()}]
    for _ in range(n):
        prev = out[-1]
        nxt = {}
        for e1, c1 in prev.items():
            for e2, c2 in lin.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                v = c1 * c2
                nxt[e] = nxt[e] + v if e in nxt else v
        out.append(nxt)
    return out


def _dmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
            v = c1 * c2
            out[e] = out[e] + v if e in out else v
    return out


def substitute(F, M):
    """F(M v): replace (x, y, z) by the rows of M applied to (x, y, z)."""
    if F.tower != M.tower:
        try:
            t = common_tower(F.tower, M.tower)
        except CommonTowerRequired:
            raise TowerMismatch("form and matrix live in different towers")
        F, M = F.lift_to(t), M.lift_to(t)
    t = F.tower
    pw = [_powers_of_linear(M.rows[r], t, 4) for r in range(3)]
    acc = {e: t.zero() for e in EXPONENTS}
    xy_cache = {}
    for (j, k, l), c in F.items():
        if not c:
            continue
        key = (j, k)
        if key not in xy_cache:
            xy_cache[key] = _dmul(pw[0][j], pw[1][k])
        prod = _dmul(xy_cache[key], pw[2][l])
        for e, v in prod.items():
            if v:
                acc[e] = acc[e] + c * v
    return TernaryQuartic(t, [acc[e] for e in EXPONENTS])


def proportionality(F1, F2):
    """lambda with F1 == lambda * F2, or None."""
    if F1.tower != F2.tower:
        t = common_tower(F1.tower, F2.tower)
        F1, F2 = F1.lift_to(t), F2.lift_to(t)
    piv = next((n for n, c in enumerate(F2.coeffs) if c), None)
    if piv is None:
        raise ZeroForm("second form is identically zero")
    a, b = F1.coeffs[piv], F2.coeffs[piv]
    if not a:
        return None
    for x, y in zip(F1.coeffs, F2.coeffs):
        if x * b != y * a:
            return None
    return a / b


def coeffs_in_level(F, j):
    return all(c.level() <= j for c in F.coeffs)


def evaluate(F, p):
    t = common_tower(F.tower, *[x.tower for x in p if isinstance(x, TowerElem)])
    F = F.lift_to(t)
    x, y, z = [to_elem(t, v) for v in p]
    px = [t.one()]
    py = [t.one()]
    pz = [t.one()]
    for _ in range(4):
        px.append(px[-1] * x)
        py.append(py[-1] * y)
        pz.append(pz[-1] * z)
    s = t.zero()
    for (j, k, l), c in F.items():
        if c:
            s = s + c * px[j] * py[k] * pz[l]
    return s
