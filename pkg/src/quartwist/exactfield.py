"""Exact arithmetic in towers of simple extensions of Q.

A tower is a list of levels; level j adjoins a generator t_j subject to a
monic modulus M_j(t) whose coefficients live in level j-1.  Elements are
stored densely as nested tuples: a level-0 element is a gmpy2 ``mpq``, a
level-j element is a tuple of deg(M_j) level-(j-1) elements (constant term
first).  Everything is reduced on every operation, so equality of raw data
is equality of field elements.

Irreducibility of the moduli is not checked up front.  Inversion runs the
extended Euclidean algorithm and raises ReducibleModulus when it meets a
zero divisor.
"""

from fractions import Fraction
import re

from gmpy2 import mpq, mpz


class FieldError(Exception):
    pass


class MalformedSpec(FieldError, ValueError):
    pass


class ZeroInverse(FieldError, ZeroDivisionError):
    pass


class ReducibleModulus(FieldError, ArithmeticError):
    def __init__(self, level, msg=None):
        self.level = level
        super().__init__(msg or "modulus of level %d is reducible" % level)


class NotAnAutomorphism(FieldError, ValueError):
    pass


class CommonTowerRequired(FieldError, ValueError):
    pass


class ZeroInput(FieldError, ValueError):
    pass


ZERO = mpq(0)
ONE = mpq(1)

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rational(x):
    """Coerce ints, Fractions, mpq and "p/q" strings to mpq."""
    if isinstance(x, type(ZERO)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, type(mpz(0)))):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        m = _RAT_RE.match(x)
        if not m:
            raise ValueError("not a rational literal: %r" % x)
        d = int(m.group(2)) if m.group(2) else 1
        if d == 0:
            raise ZeroDivisionError("zero denominator in %r" % x)
        return mpq(int(m.group(1)), d)
    if isinstance(x, TowerElem):
        return x.to_rational()
    raise TypeError("cannot interpret %r as a rational" % (x,))


def rat_str(q):
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def is_scalar_like(x):
    return isinstance(x, (int, Fraction, str, type(ZERO), type(mpz(0)))) and not isinstance(x, bool)


class Tower:
    """A tower of simple extensions.  Immutable; compare by structure.

    Build one with ``Tower()`` (that is Q) and ``extend``.
    """

    def __init__(self, _levels=()):
        # _levels: tuple of (gen, neg_low, annotation); neg_low[i] is the raw
        # level-(j-1) value of -m_i, so t^d = sum neg_low[i] t^i.
        self._levels = tuple(_levels)
        self.gens = tuple(lv[0] for lv in self._levels)
        self.annotations = tuple(lv[2] for lv in self._levels)
        self.degrees = (1,) + tuple(len(lv[1]) for lv in self._levels)
        self.height = len(self._levels)
        zero, one = [ZERO], [ONE]
        for d in self.degrees[1:]:
            zero.append((zero[-1],) * d)
            one.append((one[-1],) + (zero[-2],) * (d - 1))
        self._zero = tuple(zero)
        self._one = tuple(one)
        self._neg = (None,) + tuple(lv[1] for lv in self._levels)
        self.key = tuple((lv[0], lv[1]) for lv in self._levels)
        self._hash = hash(self.key)

    # -- structure ---------------------------------------------------------
    @property
    def degree(self):
        d = 1
        for x in self.degrees:
            d *= x
        return d

    def __eq__(self, other):
        return isinstance(other, Tower) and self.key == other.key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "Tower(%s)" % ", ".join(
            "%s:%d" % (g, d) for g, d in zip(self.gens, self.degrees[1:])) if self.gens else "Tower(Q)"

    def is_prefix_of(self, other):
        return other.key[:self.height] == self.key

    def prefix(self, h):
        return Tower(self._levels[:h])

    def extend(self, gen, modulus, annotation=None):
        """Adjoin a root of ``modulus`` (coefficients constant term first).

        Coefficients may be rationals or elements of this tower.  Returns
        the new tower.
        """
        if not isinstance(gen, str) or not gen:
            raise MalformedSpec("generator name must be a non-empty string")
        if gen in self.gens:
            raise MalformedSpec("duplicate generator name %r" % gen)
        coeffs = []
        for c in modulus:
            if isinstance(c, TowerElem):
                if not c.tower.is_prefix_of(self):
                    raise MalformedSpec("modulus coefficient from a foreign tower")
                coeffs.append(self._lift_raw(c.data, c.tower.height, self.height))
            else:
                try:
                    coeffs.append(self._lift_raw(rational(c), 0, self.height))
                except (TypeError, ValueError) as e:
                    raise MalformedSpec(str(e))
        if len(coeffs) < 3:
            raise MalformedSpec("modulus for %r must have degree >= 2" % gen)
        if coeffs[-1] != self._one[self.height]:
            raise MalformedSpec("modulus for %r is not monic" % gen)
        h = self.height
        neg_low = tuple(self._neg_raw(h, c) for c in coeffs[:-1])
        return Tower(self._levels + ((gen, neg_low, annotation),))

    def modulus(self, j):
        """Coefficients of M_j (constant first) as raw level-(j-1) data."""
        return tuple(self._neg_raw(j - 1, c) for c in self._neg[j]) + (self._one[j - 1],)

    def level_index(self, gen):
        try:
            return self.gens.index(gen) + 1
        except ValueError:
            raise KeyError("no generator %r in %r" % (gen, self))

    # -- element constructors ---------------------------------------------
    def elem(self, x):
        if isinstance(x, TowerElem):
            return x.lift_to(self)
        return TowerElem(self, self._lift_raw(rational(x), 0, self.height))

    def zero(self):
        return TowerElem(self, self._zero[self.height])

    def one(self):
        return TowerElem(self, self._one[self.height])

    def gen(self, g):
        j = g if isinstance(g, int) else self.level_index(g)
        if not 1 <= j <= self.height:
            raise KeyError(g)
        d = self.degrees[j]
        raw = (self._zero[j - 1], self._one[j - 1]) + (self._zero[j - 1],) * (d - 2)
        return TowerElem(self, self._lift_raw(raw, j, self.height))

    def generators(self):
        return [self.gen(j) for j in range(1, self.height + 1)]

    def from_coeffs(self, coeffs, level=None):
        """Build an element from nested lists (rationals at the leaves)."""
        level = self.height if level is None else level
        raw = self._parse_nested(coeffs, level)
        return TowerElem(self, self._lift_raw(raw, level, self.height))

    def _parse_nested(self, c, j):
        if j == 0:
            if isinstance(c, (list, tuple)):
                if len(c) != 1:
                    raise MalformedSpec("rational leaf must be a scalar or singleton")
                c = c[0]
            return rational(c)
        if not isinstance(c, (list, tuple)) or len(c) != self.degrees[j]:
            raise MalformedSpec("level %d needs %d coefficients" % (j, self.degrees[j]))
        return tuple(self._parse_nested(x, j - 1) for x in c)

    def basis_size(self):
        return self.degree

    # -- raw arithmetic (level-indexed) ------------------------------------
    def _lift_raw(self, a, i, j):
        for lvl in range(i + 1, j + 1):
            a = (a,) + (self._zero[lvl - 1],) * (self.degrees[lvl] - 1)
        return a

    def _is_zero(self, j, a):
        return a == self._zero[j]

    def _neg_raw(self, j, a):
        if j == 0:
            return -a
        if j == 1:
            return tuple(-x for x in a)
        return tuple(self._neg_raw(j - 1, x) for x in a)

    def _add(self, j, a, b):
        if j == 0:
            return a + b
        if j == 1:
            return tuple(x + y for x, y in zip(a, b))
        z = self._zero[j - 1]
        add = self._add
        return tuple(y if x == z else (x if y == z else add(j - 1, x, y)) for x, y in zip(a, b))

    def _sub(self, j, a, b):
        return self._add(j, a, self._neg_raw(j, b))

    def _scale(self, j, a, r):
        """Multiply raw level-j data by the rational r."""
        if j == 0:
            return a * r
        if j == 1:
            return tuple(x * r for x in a)
        return tuple(self._scale(j - 1, x, r) for x in a)

    def _mul(self, j, a, b):
        if j == 0:
            return a * b
        d = len(a)
        neg = self._neg[j]
        if j == 1:
            # plain rationals; the common case, kept tight
            nzb = [(q, y) for q, y in enumerate(b) if y]
            prod = [ZERO] * (2 * d - 1)
            for p, x in enumerate(a):
                if x:
                    for q, y in nzb:
                        prod[p + q] += x * y
            for k in range(2 * d - 2, d - 1, -1):
                c = prod[k]
                if c:
                    base = k - d
                    for i, m in enumerate(neg):
                        if m:
                            prod[base + i] += c * m
            return tuple(prod[:d])
        z = self._zero[j - 1]
        mul, add = self._mul, self._add
        nzb = [(q, y) for q, y in enumerate(b) if y != z]
        nzm = [(i, m) for i, m in enumerate(neg) if m != z]
        prod = [z] * (2 * d - 1)
        for p, x in enumerate(a):
            if x == z:
                continue
            for q, y in nzb:
                t = mul(j - 1, x, y)
                prod[p + q] = t if prod[p + q] == z else add(j - 1, prod[p + q], t)
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c == z:
                continue
            base = k - d
            for i, m in nzm:
                t = mul(j - 1, c, m)
                prod[base + i] = t if prod[base + i] == z else add(j - 1, prod[base + i], t)
        return tuple(prod[:d])

    def _is_one(self, j, a):
        return a == self._one[j]

    def _pow(self, j, a, n):
        result = self._one[j]
        base = a
        while n:
            if n & 1:
                result = self._mul(j, result, base)
            n >>= 1
            if n:
                base = self._mul(j, base, base)
        return result

    # polynomials over level j-1, as lists constant first, trimmed
    def _ptrim(self, j, p):
        z = self._zero[j]
        while p and p[-1] == z:
            p.pop()
        return p

    def _pdivmod(self, j, a, b):
        """Divide polynomials over level j (lists, trimmed)."""
        a = list(a)
        db = len(b) - 1
        lead_inv = self._inv(j, b[-1])
        q = [self._zero[j]] * max(len(a) - db, 1)
        z = self._zero[j]
        while len(a) - 1 >= db and a:
            c = a[-1]
            if c == z:
                a.pop()
                continue
            c = self._mul(j, c, lead_inv)
            s = len(a) - 1 - db
            q[s] = c
            for i, bi in enumerate(b):
                if bi != z:
                    a[s + i] = self._sub(j, a[s + i], self._mul(j, c, bi))
            a.pop()
        return self._ptrim(j, q), self._ptrim(j, a)

    def _pmul(self, j, a, b):
        if not a or not b:
            return []
        z = self._zero[j]
        out = [z] * (len(a) + len(b) - 1)
        for p, x in enumerate(a):
            if x == z:
                continue
            for q, y in enumerate(b):
                if y != z:
                    out[p + q] = self._add(j, out[p + q], self._mul(j, x, y))
        return self._ptrim(j, out)

    def _psub(self, j, a, b):
        n = max(len(a), len(b))
        z = self._zero[j]
        a = list(a) + [z] * (n - len(a))
        b = list(b) + [z] * (n - len(b))
        return self._ptrim(j, [self._sub(j, x, y) for x, y in zip(a, b)])

    def _inv(self, j, a):
        if j == 0:
            if not a:
                raise ZeroInverse("inverse of zero")
            return 1 / a
        if a == self._zero[j]:
            raise ZeroInverse("inverse of zero")
        lo = j - 1
        r0 = list(self.modulus(j))
        r1 = self._ptrim(lo, list(a))
        s0, s1 = [], [self._one[lo]]
        while len(r1) > 1:
            q, r = self._pdivmod(lo, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self._psub(lo, s0, self._pmul(lo, q, s1))
            if not r1:
                raise ReducibleModulus(j)
        c = self._inv(lo, r1[0])
        out = [self._mul(lo, c, x) for x in s1]
        d = self.degrees[j]
        out += [self._zero[lo]] * (d - len(out))
        return tuple(out[:d])

    def _level_of(self, a, j):
        while j > 0:
            z = self._zero[j - 1]
            if all(x == z for x in a[1:]):
                a = a[0]
                j -= 1
            else:
                return j
        return 0

    def _lower(self, a, j, target):
        while j > target:
            a = a[0]
            j -= 1
        return a

    # -- json ---------------------------------------------------------------
    def to_json(self):
        levels = []
        for j in range(1, self.height + 1):
            mod = [_raw_json(c, j - 1) for c in self.modulus(j)]
            ann = self.annotations[j - 1]
            levels.append({"gen": self.gens[j - 1], "modulus": mod,
                           "annotation": ann if ann is not None else "opaque"})
        return {"levels": levels}


def _raw_json(a, j):
    if j == 0:
        return [rat_str(a)]
    return [_raw_json(x, j - 1) for x in a]


def build_tower(spec):
    """Build a Tower from a TowerSpec dict ``{"levels": [...]}``.

    Each level is a mapping with keys gen, modulus, annotation, or a tuple
    (gen, modulus[, annotation]).  Modulus coefficients are nested arrays
    over the previous levels, or TowerElems / rationals.
    """
    if isinstance(spec, Tower):
        return spec
    levels = spec["levels"] if isinstance(spec, dict) else spec
    if not isinstance(levels, (list, tuple)):
        raise MalformedSpec("levels must be a list")
    tower = Tower()
    for lv in levels:
        if isinstance(lv, dict):
            gen, mod, ann = lv.get("gen"), lv.get("modulus"), lv.get("annotation")
        else:
            gen, mod = lv[0], lv[1]
            ann = lv[2] if len(lv) > 2 else None
        if not isinstance(mod, (list, tuple)):
            raise MalformedSpec("modulus of %r must be a list" % (gen,))
        coeffs = []
        for c in mod:
            if isinstance(c, TowerElem):
                coeffs.append(c)
            elif isinstance(c, (list, tuple)):
                coeffs.append(tower.from_coeffs(c, tower.height))
            else:
                try:
                    coeffs.append(tower.elem(c))
                except (TypeError, ValueError) as e:
                    raise MalformedSpec(str(e))
        if ann == "opaque":
            ann = None
        tower = tower.extend(gen, coeffs, ann)
    return tower


QQ = Tower()


class TowerElem:
    """An element of a Tower, in reduced dense form."""

    __slots__ = ("tower", "data")

    def __init__(self, tower, data):
        self.tower = tower
        self.data = data

    # coercion
    def _coerce(self, other):
        if isinstance(other, TowerElem):
            if other.tower is self.tower or other.tower == self.tower:
                return self.tower, self.data, other.data
            if other.tower.is_prefix_of(self.tower):
                t = self.tower
                return t, self.data, t._lift_raw(other.data, other.tower.height, t.height)
            if self.tower.is_prefix_of(other.tower):
                t = other.tower
                return t, t._lift_raw(self.data, self.tower.height, t.height), other.data
            raise CommonTowerRequired("elements live in different towers")
        if is_scalar_like(other):
            t = self.tower
            return t, self.data, t._lift_raw(rational(other), 0, t.height)
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return TowerElem(t, t._add(t.height, a, b))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return TowerElem(t, t._sub(t.height, a, b))

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return TowerElem(t, t._sub(t.height, b, a))

    def __mul__(self, other):
        if is_scalar_like(other):
            t = self.tower
            return TowerElem(t, t._scale(t.height, self.data, rational(other)))
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return TowerElem(t, t._mul(t.height, a, b))

    __rmul__ = __mul__

    def __neg__(self):
        t = self.tower
        return TowerElem(t, t._neg_raw(t.height, self.data))

    def __pos__(self):
        return self

    def inv(self):
        t = self.tower
        j = t._level_of(self.data, t.height)
        low = t._lower(self.data, t.height, j)
        return TowerElem(t, t._lift_raw(t._inv(j, low), j, t.height))

    def __truediv__(self, other):
        if is_scalar_like(other):
            r = rational(other)
            if not r:
                raise ZeroInverse("division by zero")
            return self * (1 / r)
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        t, a, b = c
        return TowerElem(t, a) * TowerElem(t, b).inv()

    def __rtruediv__(self, other):
        if not is_scalar_like(other):
            return NotImplemented
        return self.inv() * rational(other)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        t = self.tower
        return TowerElem(t, t._pow(t.height, self.data, n))

    def __eq__(self, other):
        if isinstance(other, TowerElem) or is_scalar_like(other):
            try:
                c = self._coerce(other)
            except CommonTowerRequired:
                return False
            return c[1] == c[2]
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        # rationals hash as their value so that embedding is invisible
        if self.level() == 0:
            return hash(self.to_rational())
        return hash((self.tower, self.data))

    def __bool__(self):
        return self.data != self.tower._zero[self.tower.height]

    def is_zero(self):
        return not self

    # structure
    def level(self):
        return self.tower._level_of(self.data, self.tower.height)

    def is_rational(self):
        return self.level() == 0

    def lower(self, j):
        """Raw data at level j (requires level() <= j)."""
        if self.level() > j:
            raise ValueError("element does not lie in level %d" % j)
        return self.tower._lower(self.data, self.tower.height, j)

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("%r is not rational" % (self,))
        return self.tower._lower(self.data, self.tower.height, 0)

    def lift_to(self, tower):
        if tower == self.tower:
            return TowerElem(tower, self.data)
        if not self.tower.is_prefix_of(tower):
            raise CommonTowerRequired("cannot lift into a tower that does not extend this one")
        return TowerElem(tower, tower._lift_raw(self.data, self.tower.height, tower.height))

    def restrict_to(self, tower):
        """Move to a prefix tower; the element must lie in its top level."""
        if not tower.is_prefix_of(self.tower):
            raise CommonTowerRequired("not a prefix tower")
        return TowerElem(tower, self.lower(tower.height))

    def coefficients(self):
        """Flat list of rational coordinates (basis of monomials in the gens)."""
        out = []

        def walk(a, j):
            if j == 0:
                out.append(a)
            else:
                for x in a:
                    walk(x, j - 1)
        walk(self.data, self.tower.height)
        return out

    def to_json(self):
        return _raw_json(self.data, self.tower.height)

    def __repr__(self):
        return "TowerElem(%s)" % self

    def __str__(self):
        t = self.tower
        terms = []

        def walk(a, j, mono):
            if j == 0:
                if a:
                    terms.append((a, mono))
                return
            g = t.gens[j - 1]
            for k, x in enumerate(a):
                m = mono
                if k == 1:
                    m = [g] + mono
                elif k > 1:
                    m = ["%s^%d" % (g, k)] + mono
                walk(x, j - 1, m)
        walk(self.data, t.height, [])
        if not terms:
            return "0"
        parts = []
        for c, mono in terms:
            if not mono:
                parts.append(rat_str(c))
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(rat_str(c) + "*" + "*".join(mono))
        return " + ".join(parts).replace("+ -", "- ")


def elem_from_json(tower, obj):
    return tower.from_coeffs(obj)


def to_elem(tower, x):
    return x.lift_to(tower) if isinstance(x, TowerElem) else tower.elem(x)


def common_tower(*towers):
    """The longest of a chain of prefix-related towers."""
    best = None
    for t in towers:
        if best is None or best.is_prefix_of(t):
            best = t
        elif not t.is_prefix_of(best):
            raise CommonTowerRequired("towers are not nested")
    return best


# ---------------------------------------------------------------------------
# automorphisms

class FieldAut:
    """A field automorphism given by the images of the tower generators.

    ``fixed`` is the number of bottom levels whose generators are fixed.
    """

    def __init__(self, tower, images, _validate=True):
        self.tower = tower
        self.images = tuple(to_elem(tower, x) for x in images)
        if len(self.images) > tower.height:
            raise NotAnAutomorphism("too many generator images")
        self._setup()
        if _validate:
            for j in range(1, len(self.images) + 1):
                self._check_level(j)
        self.fixed = 0
        for j, img in enumerate(self.images, 1):
            if img.data != tower.gen(j).data:
                break
            self.fixed = j

    def _setup(self):
        t = self.tower
        n = len(self.images)
        tgt = [0]
        for j in range(1, n + 1):
            tgt.append(max(tgt[-1], j, self.images[j - 1].level()))
        self._tgt = tgt
        self._pows = [None]
        for j in range(1, n + 1):
            L = tgt[j]
            g = self.images[j - 1].lower(L)
            pw = [t._one[L], g]
            for _ in range(t.degrees[j] - 2):
                pw.append(t._mul(L, pw[-1], g))
            self._pows.append(pw)

    def _apply_raw(self, j, a):
        """Image of raw level-j data, returned at level _tgt[j]."""
        if j == 0:
            return a
        t = self.tower
        L = self._tgt[j]
        Lb = self._tgt[j - 1]
        zin = t._zero[j - 1]
        zout = t._zero[L]
        res = zout
        pw = self._pows[j]
        for k, c in enumerate(a):
            if c == zin:
                continue
            sc = self._apply_raw(j - 1, c)
            if Lb < L:
                sc = t._lift_raw(sc, Lb, L)
            term = sc if k == 0 else t._mul(L, sc, pw[k])
            res = term if res == zout else t._add(L, res, term)
        return res

    def _check_level(self, j):
        t = self.tower
        L = self._tgt[j]
        Lb = self._tgt[j - 1]
        g = self.images[j - 1].lower(L)
        mod = t.modulus(j)
        val = t._zero[L]
        # Horner with mapped coefficients
        for c in reversed(mod):
            sc = self._apply_raw(j - 1, c)
            if Lb < L:
                sc = t._lift_raw(sc, Lb, L)
            val = t._add(L, t._mul(L, val, g), sc)
        if val != t._zero[L]:
            raise NotAnAutomorphism("modulus of %r does not vanish at the proposed image"
                                    % t.gens[j - 1])

    def __call__(self, a):
        return self.apply(a)

    def apply(self, a):
        t = self.tower
        if not isinstance(a, TowerElem):
            return t.elem(a)
        if a.tower != t:
            if a.tower.is_prefix_of(t):
                a = a.lift_to(t)
            else:
                raise CommonTowerRequired("automorphism and element live in different towers")
        n = len(self.images)
        j = a.level()
        if j > n:
            raise ValueError("partial automorphism does not reach level %d" % j)
        if j == 0:
            return a
        raw = self._apply_raw(j, t._lower(a.data, t.height, j))
        return TowerElem(t, t._lift_raw(raw, self._tgt[j], t.height))

    def compose(self, other):
        """self after other."""
        return FieldAut(self.tower, [self.apply(x) for x in other.images], _validate=False)

    __mul__ = compose

    def is_identity(self):
        return all(img.data == self.tower.gen(j).data for j, img in enumerate(self.images, 1))

    def order(self, limit=10000):
        s = self
        for k in range(1, limit + 1):
            if s.is_identity():
                return k
            s = self.compose(s)
        raise ValueError("order exceeds %d" % limit)

    def inverse(self):
        k = self.order()
        r = identity_aut(self.tower)
        for _ in range(k - 1):
            r = self.compose(r)
        return r

    def __eq__(self, other):
        return isinstance(other, FieldAut) and self.tower == other.tower and \
            all(a.data == b.data for a, b in zip(self.images, other.images))

    def __hash__(self):
        return hash(tuple(img.data for img in self.images))

    def to_json(self):
        return {"images": {g: img.to_json() for g, img in zip(self.tower.gens, self.images)},
                "fixed": self.fixed}

    def __repr__(self):
        return "FieldAut(%s)" % ", ".join(
            "%s->%s" % (g, img) for g, img in zip(self.tower.gens, self.images))


def define_automorphism(tower, images):
    """Validated automorphism from a generator->image mapping (or list)."""
    if isinstance(images, dict):
        missing = [g for g in tower.gens if g not in images]
        if missing:
            raise NotAnAutomorphism("no image given for %s" % ", ".join(missing))
        extra = [g for g in images if g not in tower.gens]
        if extra:
            raise NotAnAutomorphism("unknown generators %s" % ", ".join(extra))
        images = [images[g] for g in tower.gens]
    elif len(images) != tower.height:
        raise NotAnAutomorphism("one image per generator required")
    return FieldAut(tower, images)


def apply_automorphism(sigma, a):
    return sigma.apply(a)


def identity_aut(tower):
    return FieldAut(tower, tower.generators(), _validate=False)


def aut_from_json(tower, obj):
    imgs = obj["images"] if "images" in obj else obj
    return define_automorphism(tower, {g: tower.from_coeffs(v) for g, v in imgs.items()})


# ---------------------------------------------------------------------------
# n-th power classes of rationals

def _factor(n):
    from sympy import factorint
    return factorint(int(n))


def nth_power_free(x, n):
    """Canonical representative of x in Q*/Q*^n.

    The result is an integer with every prime exponent in [0, n).  For odd
    n the sign is absorbed (-1 is an n-th power); for even n it is kept.
    """
    x = rational(x)
    if n < 2:
        raise ValueError("n must be >= 2")
    if not x:
        raise ZeroInput("zero has no n-th power class")
    sign = -1 if x < 0 else 1
    out = mpz(1)
    for part, s in ((abs(x.numerator), 1), (x.denominator, -1)):
        for p, e in _factor(part).items():
            out *= mpz(p) ** ((s * e) % n)
    if n % 2 == 0:
        out *= sign
    return mpq(out)


def nth_root_rational_exact(x, n):
    """The rational n-th root of x if it exists, else None."""
    import gmpy2
    x = rational(x)
    if not x:
        return ZERO
    neg = x < 0
    if neg and n % 2 == 0:
        return None
    num, den = abs(x.numerator), x.denominator
    rn, ex1 = gmpy2.iroot(num, n)
    rd, ex2 = gmpy2.iroot(den, n)
    if not (ex1 and ex2):
        return None
    r = mpq(rn, rd)
    return -r if neg else r
