"""quartwist command line: gen, verify, equiv, catalog, data.

Exit codes: 0 ok, 1 a check failed or the twists are inequivalent, 2 bad
parameters or unknown table, 3 tower trouble (including CommonTowerRequired),
4 I/O or parse errors.  Every JSON document is written with sorted keys so
identical inputs give identical bytes.
"""

import argparse
import json
import sys

from . import henn, twistgen as tg, verify as vf
from .exactfield import (CommonTowerRequired, FieldError, MalformedSpec, ReducibleModulus,
                         nth_power_free)
from .fieldbuild import TowerTooLarge
from .projgroup import FINGERPRINTS, fingerprint, generate_group, identify
from .qforms import TowerMismatch, substitute

EXIT_OK, EXIT_FAIL, EXIT_PARAM, EXIT_TOWER, EXIT_IO = 0, 1, 2, 3, 4
MAX_BOUND = 50

HENN_TAGS = {"case-" + c.lower(): c for c in tg.TWIST_SOURCE}
CASE_TAGS = ["fermat-diagonal", "fermat-almost-diagonal", "fermat-nondiagonal", "klein",
             "klein-sqrt-7"] + sorted(HENN_TAGS, key=lambda s: henn.CASE_IDS.index(HENN_TAGS[s]))


class ParamError(Exception):
    pass


class CheckFailed(Exception):
    pass


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(obj, out=None):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pop(d, key, default=None, required=False):
    if key not in d:
        if required:
            raise ParamError("missing parameter %r" % key)
        return default
    return d.pop(key)


def build_twist(tag, params, strict=False):
    """Dispatch a case tag and a flat parameter dict to twistgen."""
    p = dict(params)
    if tag == "fermat-diagonal":
        a, b = _pop(p, "a", required=True), _pop(p, "b", required=True)
        _no_extra(p)
        return tg.fermat_diagonal(a, b)
    if tag == "fermat-almost-diagonal":
        a, b, m = (_pop(p, k, required=True) for k in ("a", "b", "m"))
        _no_extra(p)
        return tg.fermat_almost_diagonal(a, b, m)
    if tag == "fermat-nondiagonal":
        cub, n = _pop(p, "cubic", required=True), _pop(p, "n", required=True)
        variant = _pop(p, "variant", 0)
        _no_extra(p)
        return tg.fermat_nondiagonal(cub, int(n), variant)
    if tag == "klein":
        row = _pop(p, "row", required=True)
        variant = _pop(p, "variant", 0)
        return tg.klein_twist(int(row), p, variant)
    if tag == "klein-sqrt-7":
        case = _pop(p, "case", required=True)
        return tg.klein_sqrt7_twist(int(case), p)
    if tag in HENN_TAGS:
        return tg.henn_case_twist_flat(HENN_TAGS[tag], p, strict=strict)
    raise ParamError("unknown case tag %r (known: %s)" % (tag, ", ".join(CASE_TAGS)))


def _no_extra(p):
    if p:
        raise ParamError("unexpected parameters %s" % sorted(p))


def _read_twist(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise IOError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise IOError("%s is not JSON: %s" % (path, e))
    try:
        return tg.Twist.from_json(obj)
    except (KeyError, TypeError, IndexError, ValueError, MalformedSpec) as e:
        if isinstance(e, (CommonTowerRequired, ReducibleModulus)):
            raise
        raise IOError("%s is not a twist: %s" % (path, e))


def iso_mismatch(t):
    """Monomials where substitute(source, iso) and curve disagree after
    matching their first nonzero coefficients."""
    G = substitute(t.source, t.iso)
    C = t.curve.lift_to(G.tower)
    lam = None
    for e, c in C.items():
        if c and G[e]:
            lam = G[e] / c
            break
    if lam is None:
        return [e for e, _ in C.items()]
    return [e for e, c in C.items() if G[e] != lam * c] + \
        [e for e, g in G.items() if g and not C[e]]


def report_for(t, allow_no_galois=False):
    r = vf.verify_twist(t)
    d = r.to_json()
    ok = r.ok(allow_no_galois)
    d["ok"] = ok
    if not r.iso_ok:
        d["iso_mismatch"] = ["x^%d y^%d z^%d" % e for e in sorted(set(iso_mismatch(t)))]
    return r, d, ok


# ---------------------------------------------------------------------------
# commands

def cmd_gen(args):
    try:
        params = json.loads(args.params) if args.params else {}
    except json.JSONDecodeError as e:
        raise IOError("parameters are not JSON: %s" % e)
    if not isinstance(params, dict):
        raise ParamError("parameters must be a JSON object")
    t = build_twist(args.case, params, strict=args.strict_restrictions)
    for n in t.notes:
        print("note: %s" % n, file=sys.stderr)
    _emit(t.to_json(), args.out)
    return EXIT_OK


def cmd_verify(args):
    t = _read_twist(args.twist)
    r, d, ok = report_for(t, args.allow_no_galois)
    _emit(d, args.out)
    if not r.iso_ok:
        print("isomorphism check failed at %s" % ", ".join(d["iso_mismatch"]), file=sys.stderr)
    if r.offending:
        print("coefficients outside the base field: %s" % vf.describe_offending(r.offending),
              file=sys.stderr)
    if r.cocycle is None and not args.allow_no_galois:
        print("no Galois data: cocycle check skipped (pass --allow-no-galois to accept)",
              file=sys.stderr)
    if r.cocycle:
        bad = [c.sigma for c in r.cocycle if not c.ok]
        if bad:
            print("cocycle values outside Aut for Galois generators %s" % bad, file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_equiv(args):
    t1, t2 = _read_twist(args.first), _read_twist(args.second)
    try:
        w = vf.check_equivalence(t1, t2)
    except CommonTowerRequired:
        raise
    except ValueError as e:
        raise ParamError(str(e))
    if w is None:
        _emit({"equivalent": False}, args.out)
        return EXIT_FAIL
    _emit({"equivalent": True, "witness": w.to_json()}, args.out)
    return EXIT_OK


# catalog ---------------------------------------------------------------------

def _squarefree(bound):
    out = {nth_power_free(m, 2) for m in range(-bound, bound + 1) if m}
    return sorted((m for m in out if abs(m) <= bound), key=lambda m: (abs(m), m < 0))


def _power_free_pos(bound, n):
    return sorted({int(nth_power_free(m, n)) for m in range(1, bound + 1)} & set(range(1, bound + 1)))


def _catalog_family(family, bound):
    """(provenance, [flat params], notes) for a family."""
    if family == "case-i":
        base = dict(henn.SAMPLE_PARAMS["I"])
        return [dict(base, m=m) for m in _squarefree(bound)], []
    if family == "case-iii":
        base = dict(henn.SAMPLE_MODIFIED["III"])
        return [dict(base, m=m) for m in _power_free_pos(bound, 3)], []
    if family == "case-ix":
        return [{"a": a} for a in _power_free_pos(bound, 9)], ["all k-bar-isomorphic"]
    if family == "fermat-diagonal":
        vals = sorted({int(nth_power_free(m, 4)) for m in range(-bound, bound + 1) if m}
                      & set(range(-bound, bound + 1)), key=lambda m: (abs(m), m < 0))
        return [{"a": a, "b": b} for a in vals for b in vals], []
    raise ParamError("no catalog for %r (have case-i, case-iii, case-ix, fermat-diagonal)"
                     % family)


def _build_in(family, p, fb):
    q = dict(p)
    if family == "fermat-diagonal":
        return tg.fermat_diagonal(q["a"], q["b"], builder=fb)
    return tg.henn_case_twist_flat(HENN_TAGS[family], q, builder=fb)


def _dedupe(family, cands):
    """Indices of pairwise inequivalent candidates, first of each class kept.
    All twists go into one builder when the tower allows it; otherwise each
    comparison gets a builder of its own."""
    try:
        fb = tg.new_builder()
        tws = [_build_in(family, p, fb) for p in cands]
        T = fb.tower
        tws = [t.lift_to(T) for t in tws]
        G = None
        reps = []
        for k, t in enumerate(tws):
            if G is None:
                G = generate_group(t.aut, tower=T)
            if all(vf.check_equivalence(t, tws[r], G) is None for r in reps):
                reps.append(k)
        return reps
    except TowerTooLarge:
        pass
    reps = []
    for k, p in enumerate(cands):
        new = True
        for r in reps:
            fb = tg.new_builder()
            t1 = _build_in(family, p, fb)
            t2 = _build_in(family, cands[r], fb)
            T = fb.tower
            if vf.check_equivalence(t1.lift_to(T), t2.lift_to(T)) is not None:
                new = False
                break
        if new:
            reps.append(k)
    return reps


def catalog(family, bound):
    if not 0 <= bound <= MAX_BOUND:
        raise ParamError("bound must lie in [0, %d]" % MAX_BOUND)
    cands, notes = _catalog_family(family, bound)
    reps = _dedupe(family, cands) if cands else []
    out = []
    for k in reps:
        p = cands[k]
        t = build_twist(family, p)
        _, rep, _ = report_for(t)
        if not (rep["iso_ok"] and rep["rational_ok"]):
            raise CheckFailed("catalog entry %s failed verification" % p)
        fp = fingerprint(vf.aut_group(t))
        out.append({"twist": t.to_json(), "report": rep, "provenance": family,
                    "fingerprint": dict(fp.to_json(), label=identify(fp)),
                    "notes": list(notes)})
    return out


def cmd_catalog(args):
    bound = args.bound if args.bound is not None else args.bound_pos
    if bound is None:
        raise ParamError("catalog needs a bound")
    _emit(catalog(args.family, int(bound)), args.out)
    return EXIT_OK


# data ------------------------------------------------------------------------

def _henn_aut(modified):
    ids = henn.MODIFIED_IDS if modified else henn.CASE_IDS
    return [{"case": c, "model": k.model, "params": k.params, "aut": k.aut_label,
             "order": k.order, "generators": k.generators, "errata": k.errata}
            for c in ids for k in [henn.get_case(c, modified)]]


TABLES = {
    "henn-aut": lambda: _henn_aut(False),
    "henn-modified-aut": lambda: _henn_aut(True),
    "fingerprints": lambda: {lab: fp.to_json() for lab, fp in FINGERPRINTS.items()},
    "exit-codes": lambda: {"0": "ok", "1": "check failed or inequivalent",
                           "2": "parameter error or unknown table",
                           "3": "tower error or CommonTowerRequired",
                           "4": "I/O or parse error"},
}
for _fam in henn.FAMILIES:
    TABLES[_fam + "-pairs"] = (lambda f: lambda: [r.to_json() for r in henn.pair_table(f)])(_fam)


def cmd_data(args):
    if args.table not in TABLES:
        raise ParamError("unknown table %r (have %s)" % (args.table, ", ".join(sorted(TABLES))))
    _emit(TABLES[args.table](), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------

def parser():
    ap = argparse.ArgumentParser(prog="quartwist",
                                 description="Twists of smooth plane quartics over Q, "
                                             "built and checked in exact arithmetic.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="construct a twist and write its JSON")
    g.add_argument("case", help="case tag: " + ", ".join(CASE_TAGS))
    g.add_argument("params", nargs="?", default="{}", help="parameters as a JSON object")
    g.add_argument("--strict-restrictions", action="store_true",
                   help="literal +/- reading of the case VII exclusions")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check isomorphism, rationality and cocycle")
    v.add_argument("twist")
    v.add_argument("--allow-no-galois", action="store_true",
                   help="accept twists whose Galois group is not attached")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("equiv", help="decide equivalence of two twists")
    e.add_argument("first")
    e.add_argument("second")
    e.set_defaults(func=cmd_equiv)

    c = sub.add_parser("catalog", help="inequivalent twists with small parameters")
    c.add_argument("family", help="case-i, case-iii, case-ix or fermat-diagonal")
    c.add_argument("bound_pos", nargs="?", type=int, metavar="bound")
    c.add_argument("--bound", type=int)
    c.set_defaults(func=cmd_catalog)

    d = sub.add_parser("data", help="dump a classification table")
    d.add_argument("table", help=", ".join(sorted(TABLES)))
    d.set_defaults(func=cmd_data)

    for p in (g, v, e, c, d):
        p.add_argument("--out", help="write JSON here instead of stdout")
    return ap


def main(argv=None):
    args = parser().parse_args(argv)
    try:
        return args.func(args)
    except (TowerTooLarge, ReducibleModulus, CommonTowerRequired, TowerMismatch) as e:
        print("tower error: %s" % e, file=sys.stderr)
        return EXIT_TOWER
    except IOError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_IO
    except CheckFailed as e:
        print("check failed: %s" % e, file=sys.stderr)
        return EXIT_FAIL
    except (ParamError, tg.TwistError, henn.RestrictionViolated, henn.UnknownCase,
            henn.UnknownIndex, FieldError, ValueError, KeyError, TypeError) as e:
        print("parameter error: %s" % (e.args[0] if e.args else e), file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
