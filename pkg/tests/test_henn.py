import json

import pytest

from quartwist import henn
from quartwist.fieldbuild import FieldBuilder
from quartwist.projgroup import fingerprint, generate_group, identify, label_order
from quartwist.qforms import proportionality, substitute

ORDERS = dict(zip(henn.CASE_IDS, (2, 4, 3, 6, 8, 6, 16, 24, 9, 48, 96, 168)))


def test_representative_curves():
    assert str(henn.representative_curve("XI")) == "x^4 + y^4 + z^4"
    assert str(henn.representative_curve("XII")) == "x^3*y + x*z^3 + y^3*z"
    assert str(henn.representative_curve("IV", {"a": 1, "b": 2})) == \
        "x^3*z + x^2*y^2 + x*y*z^2 + y^3*z + 2*z^4"
    assert str(henn.representative_curve("V", {"a": 2, "b": 1}, modified=True)) == \
        "2*x^4 + x^2*y^2 + x*y*z^2 + y^4 + z^4"


def test_case_one_generator():
    (g,) = henn.automorphism_generators("I", henn.SAMPLE_PARAMS["I"])
    assert g.proj_eq(g.diag(-1, 1, 1, g.tower))


def test_case_eleven_generators():
    gens = henn.automorphism_generators("XI")
    assert len(gens) == 2
    assert generate_group(gens).order == 96


def test_modified_v_antidiagonal():
    gens = henn.automorphism_generators("V", {"a": 2, "b": 1}, modified=True)
    anti = gens[0]
    r = anti.rows[1][0]
    assert r ** 4 == 2
    assert anti.rows[0][1] * r == 1
    assert all(x == 0 for x in (anti.rows[0][0], anti.rows[1][1], anti.rows[2][0]))


@pytest.mark.parametrize("case,params,bad", [
    ("IV", {"a": 1, "b": 1}, "a != b"),
    ("VII", {"a": 2}, "±a != 2"),
])
def test_restriction_violations(case, params, bad):
    rep = henn.check_restrictions(case, params)
    assert not rep.ok and bad in rep.violations
    with pytest.raises(henn.RestrictionViolated):
        henn.representative_curve(case, params)


def test_irrational_restrictions_skipped():
    rep = henn.check_restrictions("VII", {"a": 3})
    assert rep.ok and rep.skipped == ["±a != 2 sqrt(-3)"]
    assert henn.check_restrictions("XI").ok


def test_modified_vii_strictness():
    lax = lambda a: henn.check_restrictions("VII", {"a": a}, modified=True).ok
    strict = lambda a: henn.check_restrictions("VII", {"a": a}, modified=True, strict=True).ok
    for a in ("1/4", "1/36", "-1/12"):
        assert not lax(a) and not strict(a)
    for a in ("-1/4", "1/12", "-1/36"):
        assert lax(a) and not strict(a)
    assert lax(2) and strict(2)


def test_missing_constant():
    with pytest.raises(henn.TowerMissingConstant):
        henn.automorphism_generators("XII", builder=FieldBuilder(), extend=False)


def test_unknown_lookups():
    with pytest.raises(henn.UnknownCase):
        henn.get_case("XIII")
    with pytest.raises(henn.UnknownIndex):
        henn.pair_table("klein", 12)
    with pytest.raises(henn.UnknownIndex):
        henn.pair_table("no-such-family")


def test_pair_records():
    r = henn.pair_table("klein", 11)
    assert (r.G, r.H, r.gens, r.h, r.n) == ("<336,208>", "<168,42>", ["s", "g", "h"], "1", 2)
    r = henn.pair_table("fermat-nondiagonal", 9)
    assert (r.G, r.H, r.n) == ("<192,956>", "<96,64>", 2)
    assert r.extra == {"disc": "!=±1", "root_degree": 4}
    r = henn.pair_table("fermat-diagonal", 1)
    assert (r.G, r.H, r.h, r.n) == ("<2,1>", "<1,1>", "1", 1)


def test_table_sizes():
    sizes = {f: len(henn.pair_table(f)) for f in henn.FAMILIES}
    assert sizes["klein"] == 11 and sizes["fermat-nondiagonal"] == 9
    assert all(r.n >= 1 for f in henn.FAMILIES for r in henn.pair_table(f))


def test_data_file_is_plain_json():
    with open(henn.data_path()) as fh:
        d = json.load(fh)
    assert {"cases", "modified", "fermat", "klein", "pairs"} <= set(d)
    assert len(d["cases"]) == 12


def test_word_parsing():
    assert henn.parse_word("g^2h") == [("g", 2), ("h", 1)]


@pytest.mark.parametrize("modified,case", [(False, c) for c in henn.CASE_IDS] +
                         [(True, c) for c in henn.MODIFIED_IDS])
def test_case_groups(modified, case):
    params = (henn.SAMPLE_MODIFIED if modified else henn.SAMPLE_PARAMS)[case]
    _, F, gens = henn.case_data(case, params, modified=modified)
    G = generate_group(gens)
    assert G.order == ORDERS[case]
    assert all(proportionality(substitute(F, g), F) is not None for g in G)
    c = henn.get_case(case, modified)
    lab = identify(fingerprint(G))
    assert lab == c.aut_label and label_order(lab) == c.order == ORDERS[case]
