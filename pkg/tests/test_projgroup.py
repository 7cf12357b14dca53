from itertools import permutations

import pytest

from quartwist import henn
from quartwist.exactfield import CommonTowerRequired
from quartwist.fieldbuild import FieldBuilder
from quartwist.projgroup import (
    FINGERPRINTS, CapExceeded, GroupFingerprint, contains, fingerprint, generate_group,
    identify, projective_order,
)
from quartwist.qforms import ProjMatrix, TernaryQuartic, proportionality, substitute

FERMAT_STATS = {1: 1, 2: 15, 3: 32, 4: 24, 8: 24}
S4_STATS = {1: 1, 2: 9, 3: 8, 4: 6}
PSL_STATS = {1: 1, 2: 21, 3: 56, 4: 42, 7: 48}


@pytest.fixture(scope="module")
def fermat():
    fb = FieldBuilder()
    gens = henn.fermat_generators(fb)
    return fb.tower, generate_group([gens[k] for k in "stu"])


def test_order_two(qi):
    G = generate_group([ProjMatrix.diag(-1, 1, 1, qi)])
    assert G.order == 2
    fp = fingerprint(G)
    assert fp.stats == {1: 1, 2: 1} and fp.abelian
    assert identify(fp) == "C2 = <2,1>"


def monomial_oracle(t):
    """All P·diag(i^a, i^b, 1): the 6·16 projective monomial symmetries of x^4+y^4+z^4."""
    i = t.gen(1)
    out = []
    for p in permutations(range(3)):
        for a in range(4):
            for b in range(4):
                d = [i ** a, i ** b, t.one()]
                rows = [[d[c] if p[c] == r else 0 for c in range(3)] for r in range(3)]
                out.append(ProjMatrix(rows, t))
    return out


def test_fermat_group_matches_monomial_oracle(fermat):
    t, G = fermat
    assert G.order == 96
    oracle = monomial_oracle(t)
    assert all(G.index(M) is not None for M in oracle)
    assert len({M.key() for M in G}) == 96
    stats = {}
    for M in oracle:
        k = projective_order(M)
        stats[k] = stats.get(k, 0) + 1
    assert stats == FERMAT_STATS == fingerprint(G).stats
    assert identify(fingerprint(G)) == "<96,64>"


def test_membership(fermat):
    t, G = fermat
    i = t.gen(1)
    assert contains(G, ProjMatrix.diag(-i, 1, 1, t)) is not None
    assert contains(G, ProjMatrix.identity(t)) == 0
    fb = FieldBuilder(t)
    z3 = fb.unity(3)
    T = fb.tower
    M = ProjMatrix.diag(z3, 1, 1, T)
    with pytest.raises(CommonTowerRequired):
        contains(G, M)
    G3 = generate_group(G.generators, tower=T)
    assert contains(G3, M) is None


def test_case_viii_is_s4():
    _, _, gens = henn.case_data("VIII", henn.SAMPLE_PARAMS["VIII"])
    fp = fingerprint(generate_group(gens))
    assert (fp.order, fp.abelian, fp.stats) == (24, False, S4_STATS)
    assert identify(fp) == "S4 = <24,12>"


def test_klein_group():
    _, F, gens = henn.case_data("XII")
    G = generate_group(gens)
    fp = fingerprint(G)
    assert fp.stats == PSL_STATS and fp.center == 1
    assert identify(fp) == "PSL2(F7) = <168,42>"
    assert all(proportionality(substitute(F, g), F) is not None for g in G)


def test_fingerprint_table_injective():
    keys = [fp.key() for fp in FINGERPRINTS.values()]
    assert len(set(keys)) == len(keys)
    for fp in FINGERPRINTS.values():
        assert sum(fp.stats.values()) == fp.order and fp.stats[1] == 1


def test_fingerprint_json():
    fp = FINGERPRINTS["<96,64>"]
    assert GroupFingerprint.from_json(fp.to_json()) == fp


def test_cap(fermat):
    t, G = fermat
    with pytest.raises(CapExceeded):
        generate_group(G.generators, cap=50)


@pytest.mark.parametrize("case", ["III", "V", "VIII"])
def test_fingerprint_conjugation_invariant(case):
    _, _, gens = henn.case_data(case, henn.SAMPLE_PARAMS[case])
    t = gens[0].tower
    P = ProjMatrix([[1, 2, 0], [0, 1, -1], [3, 0, 1]], t)
    Pi = P.inverse()
    conj = [Pi @ g @ P for g in gens]
    assert fingerprint(generate_group(conj)) == fingerprint(generate_group(gens))


def test_fermat_source_fixed(fermat):
    t, G = fermat
    F = TernaryQuartic.fermat(t)
    assert all(proportionality(substitute(F, g), F) is not None for g in G)
