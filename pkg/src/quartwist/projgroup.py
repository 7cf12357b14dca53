"""Finite subgroups of PGL3 over a tower: closure, fingerprints, labels.

Elements are kept in projective normal form (first nonzero entry 1), so
deduplication is exact dictionary lookup on the raw entry data.
"""

from collections import Counter

from .exactfield import CommonTowerRequired, common_tower
from .qforms import ProjMatrix


class CapExceeded(RuntimeError):
    pass


class ProjGroup:
    """A closed finite set of projective matrices."""

    def __init__(self, elements, generators, tower):
        self.elements = list(elements)
        self.generators = list(generators)
        self.tower = tower
        self._index = {m.key(): n for n, m in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, n):
        return self.elements[n]

    def index(self, M):
        if M.tower != self.tower:
            M = M.lift_to(common_tower(self.tower, M.tower))
            if M.tower != self.tower:
                raise CommonTowerRequired("matrix lives in a larger tower than the group")
        return self._index.get(M.key())

    def to_json(self):
        return [m.to_json() for m in self.elements]


def generate_group(gens, cap=400, tower=None):
    """Closure of ``gens`` under multiplication (worklist, left multiplication)."""
    gens = list(gens)
    if tower is None:
        tower = common_tower(*[g.tower for g in gens]) if gens else None
    if tower is None:
        from .exactfield import Tower
        tower = Tower()
    gens = [g.lift_to(tower).normal_form() for g in gens]
    ident = ProjMatrix.identity(tower)
    elements = [ident]
    seen = {ident.key()}
    queue = [ident]
    while queue:
        x = queue.pop()
        for g in gens:
            y = (g @ x).normal_form()
            k = y.key()
            if k not in seen:
                seen.add(k)
                elements.append(y)
                queue.append(y)
                if len(elements) > cap:
                    raise CapExceeded("closure exceeds %d elements" % cap)
    return ProjGroup(elements, gens, tower)


def projective_order(M, limit=1000):
    p = M
    for k in range(1, limit + 1):
        if p.is_scalar():
            return k
        p = p @ M
    raise ValueError("projective order exceeds %d" % limit)


def commute(a, b):
    return (a @ b).proj_eq(b @ a)


class GroupFingerprint:
    __slots__ = ("order", "abelian", "stats", "center")

    def __init__(self, order, abelian, stats, center):
        self.order = order
        self.abelian = abelian
        self.stats = dict(sorted(stats.items()))
        self.center = center

    def key(self):
        return (self.order, self.abelian, tuple(sorted(self.stats.items())), self.center)

    def __eq__(self, other):
        return isinstance(other, GroupFingerprint) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self):
        return {"order": self.order, "abelian": self.abelian,
                "stats": {str(k): v for k, v in self.stats.items()}, "center": self.center}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["order"], obj["abelian"], {int(k): v for k, v in obj["stats"].items()},
                   obj["center"])

    def __repr__(self):
        return "GroupFingerprint(order=%d, abelian=%s, stats=%s, center=%d)" % (
            self.order, self.abelian, self.stats, self.center)


def _fingerprint(els, gens, mul, key):
    ident = key(els[0])
    stats = Counter()
    for m in els:
        k, p = 1, m
        while key(p) != ident:
            p = mul(p, m)
            k += 1
        stats[k] += 1
    gens = gens or els
    comm = lambda a, b: key(mul(a, b)) == key(mul(b, a))
    center = sum(1 for m in els if all(comm(m, g) for g in gens))
    abelian = all(comm(a, b) for a in gens for b in gens)
    return GroupFingerprint(len(els), abelian, stats, center)


def fingerprint(G):
    """Order statistics, center size and commutativity of a closed group.

    Element orders come from walking powers until the identity key appears;
    the center is read off by commuting with the generators.
    """
    if isinstance(G, SemidirectGroup):
        return _fingerprint(G.elements, G.generators, _sd_mul, _sd_key)
    return _fingerprint(G.elements, G.generators, lambda a, b: (a @ b).normal_form(),
                        lambda m: m.normal_form().key())


# Fingerprints of every group that occurs: the twelve automorphism groups
# and all G, H of the (G, H) tables.  Each value was computed once by
# closure (H from its generator words, G as pairs with Gal(K/k)) and frozen;
# the small labels are cross-checked against sympy permutation groups in
# the test suite.
_FP = {
    "<1,1>": (1, True, {1: 1}, 1),
    "C2 = <2,1>": (2, True, {1: 1, 2: 1}, 2),
    "C3 = <3,1>": (3, True, {1: 1, 3: 2}, 3),
    "<4,1>": (4, True, {1: 1, 2: 1, 4: 2}, 4),
    "V4 = <4,2>": (4, True, {1: 1, 2: 3}, 4),
    "S3 = <6,1>": (6, False, {1: 1, 2: 3, 3: 2}, 1),
    "C6 = <6,2>": (6, True, {1: 1, 2: 1, 3: 2, 6: 2}, 6),
    "<7,1>": (7, True, {1: 1, 7: 6}, 7),
    "<8,1>": (8, True, {1: 1, 2: 1, 4: 2, 8: 4}, 8),
    "<8,2>": (8, True, {1: 1, 2: 3, 4: 4}, 8),
    "D4 = <8,3>": (8, False, {1: 1, 2: 5, 4: 2}, 2),
    "<8,4>": (8, False, {1: 1, 2: 1, 4: 6}, 2),
    "<8,5>": (8, True, {1: 1, 2: 7}, 8),
    "C9 = <9,1>": (9, True, {1: 1, 3: 2, 9: 6}, 9),
    "<12,3>": (12, False, {1: 1, 2: 3, 3: 8}, 1),
    "<12,4>": (12, False, {1: 1, 2: 7, 3: 2, 6: 2}, 2),
    "<14,1>": (14, False, {1: 1, 2: 7, 7: 6}, 1),
    "<16,2>": (16, True, {1: 1, 2: 3, 4: 12}, 16),
    "<16,6>": (16, False, {1: 1, 2: 3, 4: 4, 8: 8}, 4),
    "<16,7>": (16, False, {1: 1, 2: 9, 4: 2, 8: 4}, 2),
    "<16,8>": (16, False, {1: 1, 2: 5, 4: 6, 8: 4}, 2),
    "<16,11>": (16, False, {1: 1, 2: 11, 4: 4}, 4),
    "<16,13>": (16, False, {1: 1, 2: 7, 4: 8}, 4),
    "<21,1>": (21, False, {1: 1, 3: 14, 7: 6}, 1),
    "S4 = <24,12>": (24, False, {1: 1, 2: 9, 3: 8, 4: 6}, 1),
    "<24,13>": (24, False, {1: 1, 2: 7, 3: 8, 6: 8}, 2),
    "<32,7>": (32, False, {1: 1, 2: 11, 4: 4, 8: 16}, 2),
    "<32,11>": (32, False, {1: 1, 2: 7, 4: 16, 8: 8}, 4),
    "<32,34>": (32, False, {1: 1, 2: 19, 4: 12}, 4),
    "<32,43>": (32, False, {1: 1, 2: 15, 4: 8, 8: 8}, 2),
    "<32,49>": (32, False, {1: 1, 2: 19, 4: 12}, 2),
    "<42,1>": (42, False, {1: 1, 2: 7, 3: 14, 6: 14, 7: 6}, 1),
    "<48,3>": (48, False, {1: 1, 2: 3, 3: 32, 4: 12}, 1),
    "<48,33>": (48, False, {1: 1, 2: 7, 3: 8, 4: 8, 6: 8, 12: 16}, 4),
    "<48,48>": (48, False, {1: 1, 2: 19, 3: 8, 4: 12, 6: 8}, 2),
    "<64,134>": (64, False, {1: 1, 2: 27, 4: 20, 8: 16}, 2),
    "<96,64>": (96, False, {1: 1, 2: 15, 3: 32, 4: 24, 8: 24}, 1),
    "<96,72>": (96, False, {1: 1, 2: 19, 3: 32, 4: 12, 6: 32}, 1),
    "PSL2(F7) = <168,42>": (168, False, {1: 1, 2: 21, 3: 56, 4: 42, 7: 48}, 1),
    "<192,956>": (192, False, {1: 1, 2: 43, 3: 32, 4: 36, 6: 32, 8: 48}, 1),
    "<336,208>": (336, False, {1: 1, 2: 49, 3: 56, 4: 42, 6: 56, 7: 48, 8: 84}, 1),
}

FINGERPRINTS = {lab: GroupFingerprint(*v) for lab, v in _FP.items()}


def _check_injective():
    seen = {}
    for lab, fp in FINGERPRINTS.items():
        k = fp.key()
        assert k not in seen, "fingerprint table not injective: %s / %s" % (seen[k], lab)
        seen[k] = lab


_check_injective()


def identify(fp):
    """Label of a fingerprint from the table, or None."""
    for lab, ref in FINGERPRINTS.items():
        if ref == fp:
            return lab
    return None


def label_order(label):
    """Order encoded in a label such as '<16,13>' or 'S4 = <24,12>'."""
    import re
    m = re.search(r"<\s*(\d+)\s*,\s*(\d+)\s*>", label)
    if not m:
        raise ValueError("no <N,r> id in %r" % label)
    return int(m.group(1))


def find_label(gap_id):
    """Table label containing the GAP-style id '<N,r>'."""
    gap_id = gap_id.replace(" ", "")
    for lab in FINGERPRINTS:
        if lab.replace(" ", "").endswith(gap_id):
            return lab
    return None


def contains(G, M):
    return G.index(M)


# ---------------------------------------------------------------------------
# Aut(C) x| Gal(K/k): pairs (matrix, field automorphism)

class SemidirectGroup:
    """Closed set of pairs (M, sigma) in Aut(C) x| Gal(K/k)."""

    def __init__(self, elements, generators):
        self.elements = list(elements)
        self.generators = list(generators)

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _sd_key(pair):
    M, sigma = pair
    return (M.normal_form().key(), tuple(x.data for x in sigma.images))


def _sd_mul(x, y):
    (A, s), (B, t) = x, y
    return ((A @ B.apply_aut(s)).normal_form(), s.compose(t))


def semidirect_closure(gens, cap=800):
    """Closure of pairs (M, sigma) with (A, s)(B, t) = (A s(B), s t)."""
    from .exactfield import identity_aut
    if not gens:
        raise ValueError("need at least one generator")
    tower = common_tower(*[g[0].tower for g in gens])
    ftower = gens[0][1].tower
    gens = [(M.lift_to(tower).normal_form(), s) for M, s in gens]
    ident = (ProjMatrix.identity(tower), identity_aut(ftower))
    out = [ident]
    seen = {_sd_key(ident)}
    queue = [ident]
    while queue:
        x = queue.pop()
        for g in gens:
            y = _sd_mul(g, x)
            k = _sd_key(y)
            if k not in seen:
                seen.add(k)
                out.append(y)
                queue.append(y)
                if len(out) > cap:
                    raise CapExceeded("closure exceeds %d elements" % cap)
    return SemidirectGroup(out, gens)
