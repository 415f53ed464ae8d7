"""Command-line interface: ``python -m multiperm <group> <verb> ...``.

Exit codes: 0 ok, 1 negative answer where a check was asked for, 2 bad input,
3 a size cap was hit, 4 an internal invariant came out false.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import blurred, dsm, galois, green, monoid, regular
from .config import Config, cached_lattice, cached_monoid
from .errors import CapExceeded, InvariantViolation
from .relcore import (Multipermutation, Permutation, Relation, inverse, is_difunctional,
                      parse, then)

EXIT_PARSE, EXIT_CAP, EXIT_INVARIANT = 2, 3, 4


class _Exit(Exception):
    def __init__(self, code):
        self.code = code


def _out(args, data, text=None):
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text if text is not None else data)


def _mp(text: str) -> Relation:
    return parse(text)


def _need_mp(text: str) -> Multipermutation:
    rel = parse(text)
    if not rel.is_multipermutation():
        raise ValueError(f"{text!r} is not a multipermutation")
    return rel.as_multipermutation()


def _table(args, n):
    table = cached_monoid(n, args.cfg)
    monoid.install_table(table)
    return table


def _load_gens(args) -> list[Multipermutation]:
    texts = list(args.elements or [])
    if args.gens:
        data = json.loads(Path(args.gens).read_text())
        texts += data["generators"] if isinstance(data, dict) else data
    gens = [_need_mp(t) for t in texts]
    n = getattr(args, "n", None)
    if n is not None and any(g.n != n for g in gens):
        raise ValueError(f"generators must all live on [{n}]")
    if not gens and n is None:
        raise ValueError("give generators or -n")
    return gens


def _matrices(rels) -> str:
    return "\n\n".join(r.matrix_str() for r in rels)


# ---------------------------------------------------------------------------
# mp


def cmd_mp_compose(args):
    rels = [_mp(t) for t in args.elements]
    acc = rels[0]
    for r in rels[1:]:
        acc = then(acc, r)
    _out(args, {"result": str(acc)}, str(acc))


def cmd_mp_inverse(args):
    r = inverse(_mp(args.element))
    _out(args, {"result": str(r)}, str(r))


def cmd_mp_check(args):
    r = _mp(args.element)
    info = {"element": str(r), "n": r.n, "multipermutation": r.is_multipermutation(),
            "permutation": r.is_permutation(), "difunctional": is_difunctional(r),
            "blurred": blurred.is_blurred(r)}
    text = "\n".join(f"{k}: {str(v).lower() if isinstance(v, bool) else v}"
                     for k, v in info.items())
    _out(args, info, text)
    if not info["multipermutation"]:
        raise _Exit(1)


# ---------------------------------------------------------------------------
# monoid


def cmd_monoid_enum(args):
    table = _table(args, args.n)
    if args.count:
        _out(args, {"n": args.n, "count": len(table)}, str(len(table)))
    else:
        _out(args, {"n": args.n, "elements": [str(e) for e in table]},
             "\n".join(str(e) for e in table))


def cmd_monoid_closure(args):
    gens = _load_gens(args)
    got = sorted(monoid.closure(gens, args.n))
    if args.count:
        _out(args, {"count": len(got)}, str(len(got)))
    else:
        _out(args, {"elements": [str(e) for e in got]}, "\n".join(str(e) for e in got))


def cmd_monoid_generators(args):
    gens = _load_gens(args)
    n = args.n if args.n is not None else gens[0].n
    ok, missing = monoid.is_generating_set(gens, _table(args, n))
    _out(args, {"generates": ok, "missing": str(missing) if missing else None},
         "true" if ok else f"false\nmissing: {missing}")
    if not ok:
        raise _Exit(1)


def cmd_monoid_primes(args):
    _table(args, args.n)
    cap = args.cap if args.cap is not None else monoid.PRIME_CAP
    classes = monoid.prime_elements(args.n, cap=cap)
    data = [{"representative": str(c.representative), "size": len(c.members)}
            for c in classes]
    text = "\n".join(f"{d['representative']}  ({d['size']} in class)" for d in data)
    _out(args, {"n": args.n, "classes": data}, text or "none")


# ---------------------------------------------------------------------------
# green


def cmd_green_classify(args):
    table = _table(args, args.n)
    gc = green.classify(table, cap=args.cfg.n_cap)
    if args.relation:
        _out(args, gc.report(args.relation),
             "\n".join("{" + ", ".join(str(e) for e in c) + "}"
                       for c in gc.classes(args.relation)))
    else:
        counts = gc.counts()
        _out(args, {"n": args.n, "counts": counts, "eggbox": gc.eggbox()},
             " ".join(f"{k}={v}" for k, v in counts.items()))


def cmd_green_test(args):
    a, b = _need_mp(args.a), _need_mp(args.b)
    if a.n != b.n:
        raise ValueError("elements live on different domains")
    res = {"L": green.green_L(a, b), "R": green.green_R(a, b), "H": green.green_H(a, b)}
    if a.n <= args.cfg.n_cap:
        res["D"] = green.green_D(a, b, _table(args, a.n))
    _out(args, res, "\n".join(f"{k}: {str(v).lower()}" for k, v in res.items()))


# ---------------------------------------------------------------------------
# regular


def cmd_regular_check(args):
    a = _need_mp(args.element)
    verdict = regular.has_inverse_in_Mn(a)
    data = {"element": str(a), "schein_regular": regular.schein_regular(a),
            "inverse_in_Mn": verdict.exists, "reason": verdict.reason}
    _out(args, data, f"{str(verdict.exists).lower()} ({verdict.reason})")


def cmd_regular_inverses(args):
    a = _need_mp(args.element)
    if args.method == "kim-roush":
        found = regular.kim_roush_inverses(a, within="B" if args.bn else "M")
    elif args.method == "brute":
        found = (regular.brute_inverses_bn(a) if args.bn
                 else regular.brute_inverses(a, _table(args, a.n)))
    else:
        v = regular.has_inverse_in_Mn(a)
        _out(args, {"exists": v.exists, "reason": v.reason},
             f"{str(v.exists).lower()} ({v.reason})")
        return
    found = sorted(found)
    _out(args, {"element": str(a), "inverses": [str(x) for x in found]},
         _matrices(found) if found else "none")


# ---------------------------------------------------------------------------
# dsm


def cmd_dsm_closure(args):
    gens = _load_gens(args)
    M = dsm.dsm_closure(gens, args.n)
    _out(args, {"n": M.n, "label": M.label(), "elements": M.strings()},
         f"{M.label()}  ({len(M)} elements)\n" + "\n".join(M.strings()))


def cmd_dsm_lattice(args):
    if args.n > dsm.LATTICE_CAP and not args.cfg.force:
        raise CapExceeded(f"lattice of DSMs on [{args.n}]", "--force")
    lat = cached_lattice(args.n, args.cfg)
    if args.dot:
        Path(args.dot).write_text(lat.to_dot())
    if args.count:
        _out(args, {"n": args.n, "count": len(lat)}, str(len(lat)))
    elif args.json:
        print(lat.to_json())
    else:
        print("\n".join(d.label() for d in lat.dsms))


def cmd_dsm_bps_check(args):
    gens = _load_gens(args)
    M = dsm.dsm_closure(gens, args.n)
    st = dsm.is_bps(M)
    if st is None:
        _out(args, {"bps": False, "label": M.label()}, "false (not closed under inverse)")
        raise _Exit(1)
    _out(args, {"bps": True, **st.to_dict()},
         f"true\npartition: {st.partition}\ngroup: {' '.join(sorted(g.cycles() for g in st.group))}")


# ---------------------------------------------------------------------------
# galois


def _structure(args) -> galois.FiniteStructure:
    text = Path(args.structure).read_text() if args.structure != "-" else sys.stdin.read()
    return galois.FiniteStructure.from_json(text)


def cmd_galois_she(args):
    B = _structure(args)
    _table(args, B.n)
    S = galois.she_set(B, cap=args.cfg.n_cap)
    _out(args, {"n": B.n, "shes": S.strings(), "label": S.label()},
         "\n".join(S.strings()))


def cmd_galois_classify(args):
    B = _structure(args)
    _table(args, B.n)
    v = galois.classify(B)
    if args.json:
        print(v.to_json())
    else:
        print(v.verdict)
        for k, val in v.witness.items():
            print(f"{k}: {val}")


# ---------------------------------------------------------------------------
# blurred


def cmd_blurred_check(args):
    f = _mp(args.element)
    st = blurred.recognize_blur(f)
    if st is None:
        _out(args, {"blurred": False}, "false")
        raise _Exit(1)
    _out(args, {"blurred": True, "partition": str(st.partition), "perm": st.perm.cycles()},
         f"true\npartition: {st.partition}\nblock permutation: {st.perm.cycles()}")


def cmd_blurred_make(args):
    P = blurred.Partition.parse(args.partition)
    g = Permutation.parse(args.perm, P.m)
    f = blurred.blur(g, P)
    _out(args, {"result": str(f)}, str(f))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=1, help="worker cap")
    common.add_argument("--cap", type=int, default=None, help="largest n to enumerate")
    common.add_argument("--force", action="store_true", help="lift size caps")
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--no-cache", action="store_true")

    p = argparse.ArgumentParser(prog="multiperm",
                                description="Multipermutations and down-shop-monoids")
    groups = p.add_subparsers(dest="group", required=True)

    def verb(group, name, fn, help=None):
        sp = group.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    def gen_args(sp, n_required=False):
        sp.add_argument("elements", nargs="*", help="multipermutations, e.g. 12|2|3")
        sp.add_argument("--gens", help="JSON file with a generator list")
        sp.add_argument("-n", type=int, required=n_required)

    g = groups.add_parser("mp", help="single multipermutations").add_subparsers(dest="verb", required=True)
    sp = verb(g, "compose", cmd_mp_compose, "left-to-right product")
    sp.add_argument("elements", nargs="+")
    verb(g, "inverse", cmd_mp_inverse).add_argument("element")
    verb(g, "check", cmd_mp_check).add_argument("element")

    g = groups.add_parser("monoid", help="the monoid M_n").add_subparsers(dest="verb", required=True)
    sp = verb(g, "enum", cmd_monoid_enum)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--count", action="store_true")
    sp = verb(g, "closure", cmd_monoid_closure)
    gen_args(sp)
    sp.add_argument("--count", action="store_true")
    gen_args(verb(g, "generators", cmd_monoid_generators))
    verb(g, "primes", cmd_monoid_primes).add_argument("-n", type=int, required=True)

    g = groups.add_parser("green", help="Green's relations").add_subparsers(dest="verb", required=True)
    sp = verb(g, "classify", cmd_green_classify)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--relation", choices=list("LRHD"))
    sp = verb(g, "test", cmd_green_test)
    sp.add_argument("a")
    sp.add_argument("b")

    g = groups.add_parser("regular", help="regularity and inverses").add_subparsers(dest="verb", required=True)
    verb(g, "check", cmd_regular_check).add_argument("element")
    sp = verb(g, "inverses", cmd_regular_inverses)
    sp.add_argument("element")
    sp.add_argument("--method", choices=["kim-roush", "brute", "theorem"], default="kim-roush")
    sp.add_argument("--bn", action="store_true", help="search all boolean matrices")

    g = groups.add_parser("dsm", help="down-shop-monoids").add_subparsers(dest="verb", required=True)
    gen_args(verb(g, "closure", cmd_dsm_closure))
    sp = verb(g, "lattice", cmd_dsm_lattice)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--count", action="store_true")
    sp.add_argument("--dot", metavar="PATH")
    gen_args(verb(g, "bps-check", cmd_dsm_bps_check))

    g = groups.add_parser("galois", help="shes of finite structures").add_subparsers(dest="verb", required=True)
    verb(g, "she", cmd_galois_she).add_argument("structure", help="structure JSON file or -")
    verb(g, "classify", cmd_galois_classify).add_argument("structure")

    g = groups.add_parser("blurred", help="blurred permutations").add_subparsers(dest="verb", required=True)
    verb(g, "check", cmd_blurred_check).add_argument("element")
    sp = verb(g, "make", cmd_blurred_make)
    sp.add_argument("--partition", required=True, help="e.g. {1|234}")
    sp.add_argument("--perm", required=True, help="block permutation, e.g. (1 2)")
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        kw = {"force": args.force, "threads": args.threads, "use_cache": not args.no_cache}
        if args.cap is not None:
            kw["n_cap"] = args.cap
        if args.cache_dir:
            kw["cache_dir"] = args.cache_dir
        args.cfg = Config(**kw)
        args.fn(args)
    except _Exit as e:
        return e.code
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as e:
        print(f"invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    return 0


if __name__ == "__main__":
    sys.exit(main())
