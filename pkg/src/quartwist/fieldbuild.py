"""Incremental construction of radical / cyclotomic / cubic towers.

FieldBuilder keeps track of what is already known in the current tower
(square classes, roots of unity, registered n-th roots) so that it only
adjoins a new level when it has to.  It also remembers what each level is,
which is enough to enumerate the automorphism group of the towers built
here (``galois_group``).
"""

from itertools import product
from math import gcd

from gmpy2 import mpq

from .exactfield import (CommonTowerRequired, FieldAut, NotAnAutomorphism,
                         ReducibleModulus, TowerElem, Tower, nth_power_free,
                         nth_root_rational_exact, rational, identity_aut)


class TowerTooLarge(Exception):
    pass


def _key(n, x):
    lv = x.level()
    return (n, lv, x.lower(lv))


def _prime_factors(n):
    from sympy import factorint
    return factorint(int(n))


class FieldBuilder:
    def __init__(self, tower=None, max_degree=None):
        self.tower = tower if tower is not None else Tower()
        self.max_degree = max_degree
        self.kinds = [None] * self.tower.height   # per level: ('cyclo', n) | ('radical', c, n) | ('root', coeffs)
        self._sq = {1: mpq(1)}                     # squarefree d -> sqrt(d) (elem or rational)
        self._unity = {1: mpq(1), 2: mpq(-1)}
        self._roots = {}                           # (n, level, raw) -> elem
        self._root_list = []                       # (value, n, root), registration order
        self._prime_roots = {}                     # (p, n) -> elem
        self._cubic_roots = {}                     # level index -> [roots]

    # -- basics -----------------------------------------------------------
    def lift(self, x):
        if isinstance(x, TowerElem):
            return x.lift_to(self.tower)
        return self.tower.elem(x)

    def _fresh(self, name):
        if name not in self.tower.gens:
            return name
        k = 2
        while "%s_%d" % (name, k) in self.tower.gens:
            k += 1
        return "%s_%d" % (name, k)

    def adjoin(self, name, modulus, annotation=None, kind=None):
        new = self.tower.extend(self._fresh(name), modulus, annotation)
        if self.max_degree is not None and new.degree > self.max_degree:
            raise TowerTooLarge("tower degree %d exceeds limit %d" % (new.degree, self.max_degree))
        self.tower = new
        self.kinds.append(kind)
        return new.gen(new.height)

    # -- square classes -------------------------------------------------------
    def _add_square_class(self, d, root):
        new = {}
        for e, s in self._sq.items():
            de = d * e
            f = nth_power_free(de, 2)
            if f not in self._sq and f not in new:
                cof = nth_root_rational_exact(mpq(de) / f, 2)
                new[f] = self.lift(root) * self.lift(s) / cof
        new.setdefault(d, root)
        self._sq.update(new)

    def known_sqrt(self, c):
        c = rational(c)
        r = nth_root_rational_exact(c, 2)
        if r is not None:
            return self.tower.elem(r)
        d = nth_power_free(c, 2)
        if d in self._sq:
            return self.lift(self._sq[d]) * nth_root_rational_exact(c / d, 2)
        return None

    def sqrt_rational(self, c):
        s = self.known_sqrt(c)
        if s is not None:
            return s
        c = rational(c)
        d = nth_power_free(c, 2)
        name = "i" if d == -1 else ("sqrt%d" % d if d > 0 else "sqrtm%d" % -d)
        t = self.adjoin(name, [-d, 0, 1], "radical(%s,2)" % d, ("radical", self.tower.elem(d), 2))
        self._add_square_class(d, t)
        self.register_root(self.tower.elem(d), 2, t)
        return t * nth_root_rational_exact(c / d, 2)

    # -- roots of unity -------------------------------------------------------
    def known_unity(self, n):
        if n in self._unity:
            return self.lift(self._unity[n])
        return None

    def unity(self, n):
        """A primitive n-th root of unity, adjoining what is needed."""
        z = self.known_unity(n)
        if z is not None:
            return z
        if n == 4:
            z = self.sqrt_rational(-1)
        elif n == 3:
            s = self.known_sqrt(-3)
            if s is not None:
                z = (s - 1) / 2
            else:
                z = self.adjoin("z3", [1, 1, 1], "cyclotomic(3)", ("cyclo", 3))
                self._add_square_class(-3, 2 * z + 1)
        elif n == 6:
            z = -self.unity(3) ** 2
        elif n == 12:
            z = -self.unity(4) * self.unity(3)
        elif n == 8:
            i = self.unity(4)
            s = self.known_sqrt(2)
            if s is not None:
                z = (1 + i) / s
            else:
                z = self.adjoin("z8", [-i, 0, 1], "cyclotomic(8)", ("cyclo", 8))
                self._add_square_class(2, (1 - i) * z)
        elif n == 7:
            s = self.known_sqrt(-7)
            if s is not None:
                eps = (s - 1) / 2
                z = self.adjoin("z7", [-1, -1 - eps, -eps, 1], "cyclotomic(7)", ("cyclo", 7))
            else:
                z = self.adjoin("z7", [1] * 7, "cyclotomic(7)", ("cyclo", 7))
                self._add_square_class(-7, 2 * (z + z ** 2 + z ** 4) + 1)
        elif n == 9:
            w = self.unity(3)
            z = self.adjoin("z9", [-w, 0, 0, 1], "cyclotomic(9)", ("cyclo", 9))
        elif n == 14:
            z = -self.unity(7) ** 4
        else:
            raise NotImplementedError("roots of unity of order %d" % n)
        self._unity[n] = z
        return self.lift(z)

    # -- radicals -------------------------------------------------------------
    def register_root(self, value, n, root):
        """Record root**n == value (checked)."""
        value, root = self.lift(value), self.lift(root)
        if root ** n != value:
            raise ValueError("registered root does not satisfy root^n = value")
        k = _key(n, value)
        if k not in self._roots:
            self._roots[k] = root
            self._root_list.append((value, n, root))

    def known_root(self, value, n):
        value = self.lift(value)
        if value.is_rational():
            r = nth_root_rational_exact(value.to_rational(), n)
            if r is not None:
                return self.tower.elem(r)
            if n == 2:
                return self.known_sqrt(value.to_rational())
        r = self._roots.get(_key(n, value))
        return None if r is None else self.lift(r)

    def _prime_root(self, p, n):
        """n-th root of the prime p (n>1)."""
        if n == 1:
            return self.tower.elem(p)
        if (p, n) in self._prime_roots:
            return self.lift(self._prime_roots[(p, n)])
        if n == 2:
            r = self.sqrt_rational(p)
        else:
            # reuse the largest already known root of p
            m = 1
            for dd in range(n - 1, 1, -1):
                if n % dd == 0 and ((p, dd) in self._prime_roots or (dd == 2 and self.known_sqrt(p) is not None)):
                    m = dd
                    break
            base = self._prime_root(p, m) if m > 1 else self.tower.elem(p)
            k = n // m
            name = "r%d_%d" % (n, p)
            r = self.adjoin(name, [-base] + [0] * (k - 1) + [1], "radical(%s,%d)" % (p, n),
                            ("radical", base, k))
            self.register_root(base, k, r)
        self._prime_roots[(p, n)] = r
        for dd in range(2, n):
            if n % dd == 0:
                self._prime_roots.setdefault((p, dd), r ** (n // dd))
        self.register_root(self.tower.elem(p), n, r)
        return self.lift(r)

    def nth_root_rational(self, c, n):
        """Some y with y**n == c, adjoining prime radicals as needed."""
        c = rational(c)
        if not c:
            return self.tower.zero()
        r = self.known_root(self.tower.elem(c), n)
        if r is not None:
            return r
        out = self.tower.one()
        num, den = abs(c.numerator), c.denominator
        for part, sgn in ((num, 1), (den, -1)):
            for p, e in _prime_factors(part).items():
                e = (sgn * e) % n
                if not e:
                    continue
                g = gcd(e, n)
                out = out * self._prime_root(p, n // g) ** (e // g)
        y = out ** n
        # fix the rational cofactor
        cof = c / y.to_rational()
        if cof < 0:
            if n % 2:
                out, cof = -out, -cof
            else:
                out = out * self.unity(2 * n)
                cof = -cof
        q = nth_root_rational_exact(cof, n)
        assert q is not None
        out = out * q
        self.register_root(self.tower.elem(c), n, out)
        return out

    def nth_root(self, value, n, name="rho"):
        """n-th root of a tower element; adjoins t^n - value if unknown."""
        value = self.lift(value)
        if value.is_rational():
            return self.nth_root_rational(value.to_rational(), n)
        r = self.known_root(value, n)
        if r is not None:
            return r
        r = self._root_by_power(value, n)
        if r is None:
            r = self._root_by_ratio(value, n)
        if r is not None:
            self.register_root(value, n, r)
            return r
        t = self.adjoin(name, [-value] + [0] * (n - 1) + [1], "radical(%s,%d)" % (name, n),
                        ("radical", value, n))
        self.register_root(value, n, t)
        return t

    def _root_by_power(self, value, n, dmax=12):
        """If value^d = c is rational with gcd(n, d) = 1, then
        value^u / c^k is an n-th root of value, where n u = 1 + d k.
        (cuberoot(4) has the square root cuberoot(4)^2 / 2, for instance.)"""
        p = value
        for d in range(2, dmax + 1):
            p = p * value
            if not p.is_rational():
                continue
            if gcd(n, d) != 1:
                return None
            c = p.to_rational()
            u = pow(n, -1, d)
            k = (n * u - 1) // d
            return value ** u / self.nth_root_rational(c ** k, n)
        return None

    def _root_by_ratio(self, value, n):
        """n-th root of value from a registered root of a value differing by a
        rational factor or by a root of unity (conjugates of a radicand in a
        pure cubic splitting field, say).  Adjoining t^n - value there would
        give a reducible modulus."""
        for v0, n0, r0 in list(self._root_list):
            if n0 != n:
                continue
            v0 = self.lift(v0)
            if v0.is_rational():
                continue
            ratio = value / v0
            if ratio.is_rational():
                return self.lift(r0) * self.nth_root_rational(ratio.to_rational(), n)
            d = _unity_order(ratio, 14)
            if d is None or n * d not in _UNITY_ORDERS:
                continue
            z = self.unity(n * d)
            ratio = self.lift(ratio)
            w = self.tower.one()
            for _ in range(n * d):
                if w ** n == ratio:
                    return self.lift(r0) * w
                w = w * z
        return None

    # -- cubics ---------------------------------------------------------------
    def cubic_roots(self, coeffs, name="a"):
        """Roots of the monic rational cubic with coefficients (g, f, e, 1).

        Returns [alpha, beta, gamma] in the (possibly extended) tower.
        """
        g, f, e, one = [rational(c) for c in coeffs]
        if one != 1:
            raise ValueError("cubic must be monic")
        disc = cubic_discriminant(e, f, g)
        if not disc:
            raise ValueError("cubic is not separable")
        rr = rational_roots([g, f, e, 1])
        if rr:
            r = rr[0]
            # quotient T^2 + (e + r) T + (f + r(e + r))
            b1 = e + r
            b0 = f + r * b1
            s = self.sqrt_rational(b1 * b1 - 4 * b0)
            return [self.tower.elem(r), (-b1 + s) / 2, (-b1 - s) / 2]
        alpha = self.adjoin(name, [g, f, e, 1], "root-of(%s,%s,%s,1)" % (g, f, e), ("root", (g, f, e)))
        lvl = self.tower.height
        sd = self.sqrt_rational(disc)
        alpha = self.lift(alpha)
        dp = 3 * alpha ** 2 + 2 * e * alpha + f
        w = sd / dp
        beta = (-(alpha + e) + w) / 2
        gamma = (-(alpha + e) - w) / 2
        roots = [alpha, beta, gamma]
        for r in roots:
            assert r ** 3 + e * r ** 2 + f * r + g == 0
        self._cubic_roots[lvl] = roots
        return [self.lift(r) for r in roots]

    # -- galois -----------------------------------------------------------------
    def _candidates(self, j, partial):
        """Candidate images of generator j given a partial automorphism on levels < j."""
        t = self.tower
        gen = t.gen(j)
        kind = self.kinds[j - 1]
        if kind is None:
            return [gen]
        if kind[0] == "cyclo":
            n = kind[1]
            return [gen ** k for k in range(1, n) if gcd(k, n) == 1]
        if kind[0] == "root":
            roots = self._cubic_roots.get(j)
            return [self.lift(r) for r in roots] if roots else [gen]
        if kind[0] == "radical":
            c, n = self.lift(kind[1]), kind[2]
            sc = partial.apply(c)
            ys = []
            y = self.known_root(sc, n)
            if y is not None:
                ys.append(y)
            ratio = sc / c
            rr = self.known_root(ratio, n)
            if rr is not None:
                ys.append(rr * gen)
            w = self.known_unity(n)
            out = []
            for y in ys:
                if w is not None:
                    out.extend(y * w ** k for k in range(n))
                else:
                    out.append(y)
                    if n % 2 == 0:
                        out.append(-y)
            return out
        return [gen]


    def galois_group(self, base_level=0, limit=2000):
        """All automorphisms of the tower fixing the first ``base_level`` levels
        that this builder can see.  Returns (auts, complete) where complete
        means the count reaches [L : level base_level]."""
        t = self.tower
        results = []
        seen = set()

        def dfs(j, images):
            if j > t.height:
                key = tuple(x.data for x in images)
                if key not in seen:
                    seen.add(key)
                    results.append(FieldAut(t, images, _validate=False))
                    if len(results) > limit:
                        raise TowerTooLarge("too many automorphisms")
                return
            partial = FieldAut(t, images, _validate=False)
            cands = [t.gen(j)] if j <= base_level else self._candidates(j, partial)
            used = set()
            for c in cands:
                if c.data in used:
                    continue
                used.add(c.data)
                trial = FieldAut(t, images + [c], _validate=False)
                try:
                    trial._check_level(j)
                except NotAnAutomorphism:
                    continue
                dfs(j + 1, images + [c])

        dfs(1, [])
        rel = 1
        for d in t.degrees[base_level + 1:]:
            rel *= d
        return results, len(results) == rel


_UNITY_ORDERS = (1, 2, 3, 4, 6, 7, 8, 9, 12, 14)


def _unity_order(x, limit):
    p = x
    for k in range(1, limit + 1):
        if p == 1:
            return k
        p = p * x
    return None


def galois_generators(auts):
    """Greedy generating set of a list of automorphisms (a group)."""
    if not auts:
        return []
    tower = auts[0].tower
    ident = identity_aut(tower)
    group = {ident}
    gens = []
    for a in auts:
        if a in group:
            continue
        gens.append(a)
        queue = list(group)
        while queue:
            x = queue.pop()
            for g in gens:
                y = g.compose(x)
                if y not in group:
                    group.add(y)
                    queue.append(y)
    return gens


def cubic_discriminant(e, f, g):
    """Discriminant of T^3 + e T^2 + f T + g."""
    e, f, g = rational(e), rational(f), rational(g)
    return e * e * f * f - 4 * f ** 3 - 4 * e ** 3 * g - 27 * g * g + 18 * e * f * g


def rational_roots(coeffs):
    """Rational roots of a polynomial with rational coefficients (constant first)."""
    import sympy
    T = sympy.Symbol("T")
    poly = sympy.Poly(list(reversed([sympy.Rational(int(rational(c).numerator), int(rational(c).denominator))
                                     for c in coeffs])), T)
    out = []
    for r in sympy.roots(poly, filter="Q").keys():
        out.append(mpq(int(r.p), int(r.q)))
    return sorted(set(out))


def check_is_field(tower, seed=1):
    """Decide whether the tower's quotient ring is a field.

    Computes the characteristic polynomial over Q of a pseudo-random element
    and tests it for irreducibility; a product of fields always yields a
    reducible characteristic polynomial, while an irreducible one of full
    degree proves the ring is a field.  Retries a few elements before
    declaring the tower reducible.
    """
    import random
    import flint
    rng = random.Random(seed)
    D = tower.degree
    if D == 1:
        return True
    basis = []

    # same order as TowerElem.coefficients(): top level outermost
    def walk(j, acc):
        if j == 0:
            basis.append(acc)
            return
        g = tower.gen(j)
        p = tower.one()
        for _ in range(tower.degrees[j]):
            walk(j - 1, acc * p)
            p = p * g
    walk(tower.height, tower.one())
    for attempt in range(6):
        theta = tower.zero()
        for g in tower.generators():
            theta = theta + g * rng.randint(1, 7)
        theta = theta + theta * theta * rng.randint(0, 3)
        cols = [(theta * b).coefficients() for b in basis]
        M = flint.fmpq_mat(D, D)
        for c, col in enumerate(cols):
            for r, v in enumerate(col):
                M[r, c] = flint.fmpq(int(v.numerator), int(v.denominator))
        cp = M.charpoly()
        fac = cp.factor()[1]
        if len(fac) == 1 and fac[0][1] == 1:
            return True
        sq = cp.gcd(cp.derivative())
        if sq.degree() == 0:
            # squarefree but reducible: ring is a product of fields
            return False
    return False
