"""Command-line interface.

Exit codes: 0 success, 1 a verifier found counterexamples, 2 usage error,
3 search state budget exceeded.
"""

import argparse
import json
import sys
import time

from . import BACKEND, SCHEMA_VERSION, __version__
from .catalog import CatalogRecord, append_record, default_path
from .ffield import field_from_q, make_field
from .fibctor import MAX_N, construct_counterexample, rank_of_apparition
from .matspace import Matrix, MatrixParseError, parse_matrix
from .rystov import RysQuery, rys_number
from .verify import verify_corollary, verify_lemma_abc, verify_minimal_shape
from .wordsearch import DEFAULT_MAX_STATES, BudgetExceeded, shortest_zero_product


class UsageError(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, sort_keys=True)


def load_generator_file(path):
    """Read ``{"q", "p", "e", "n", "generators": [[[codes]]]}``."""
    with open(path) as fh:
        d = json.load(fh)
    try:
        f = field_from_q(int(d["q"]), d.get("p"), d.get("e"))
        gens = [Matrix.from_rows(rows, f) for rows in d["generators"]]
    except KeyError as exc:
        raise UsageError(f"{path}: missing key {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None
    n = d.get("n")
    for i, g in enumerate(gens):
        if n is not None and g.n != n:
            raise UsageError(f"{path}: generator {i} is {g.n}x{g.n}, file declares n={n}")
    return f, gens


def generator_file_dict(gens):
    f = gens[0].field
    return {"q": f.q, "p": f.p, "e": f.e, "n": gens[0].n, "generators": [g.rows() for g in gens]}


def _maybe_catalog(args, kind, payload, q, n, t0, always=False):
    path = getattr(args, "catalog", None)
    if getattr(args, "no_catalog", False):
        return
    if path is None and not always:
        return
    rec = CatalogRecord(kind, payload, q, n, (time.perf_counter() - t0) * 1000)
    append_record(rec, path or default_path())


def cmd_shortest(args):
    t0 = time.perf_counter()
    if args.generators:
        if args.gen:
            raise UsageError("use either --generators or --gen, not both")
        f, gens = load_generator_file(args.generators)
        if args.q is not None and args.q != f.q:
            raise UsageError(f"--q {args.q} disagrees with q={f.q} in {args.generators}")
    else:
        if args.q is None or not args.gen:
            raise UsageError("need --q and at least one --gen (or --generators FILE)")
        f = field_from_q(args.q, args.p, args.e)
        gens = []
        for i, text in enumerate(args.gen):
            try:
                gens.append(parse_matrix(text, f, args.n))
            except MatrixParseError as exc:
                raise UsageError(f"--gen #{i + 1}: {exc}") from None
    if args.n is not None and any(g.n != args.n for g in gens):
        raise UsageError(f"generators are not {args.n}x{args.n}")
    if len({g.n for g in gens}) > 1:
        raise UsageError("generators have different sizes")
    res = shortest_zero_product(gens, max_len=args.max_len, count_minimal=args.count_minimal,
                                max_states=args.max_states)
    payload = res.to_dict()
    print(_dump(payload))
    _maybe_catalog(args, "shortest", payload, f.q, gens[0].n, t0)
    return 0


def cmd_construct(args):
    t0 = time.perf_counter()
    if not 1 <= args.min_length <= MAX_N:
        raise UsageError(f"--min-length must be in [1, {MAX_N}] (F_(N+1) must fit 64 bits)")
    b = construct_counterexample(args.min_length)
    payload = b.to_dict()
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")
    print(_dump(payload))
    _maybe_catalog(args, "construct", payload, b.p, 2, t0)
    return 0


def _parse_kmax(text):
    if text.lower() == "all":
        return None
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'all', got {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("k-max must be >= 1")
    return k


def cmd_rys(args):
    t0 = time.perf_counter()
    f = field_from_q(args.q)
    query = RysQuery(args.n, f, args.k_max, args.orbits, args.max_sets, args.threads, args.checkpoint)
    rec = rys_number(query)
    payload = rec.to_dict(volatile=not args.reproducible)
    if not args.json:
        kdesc = "all" if rec.k_max is None else rec.k_max
        print(f"Rys({rec.n},{rec.q}) {'=' if rec.mode == 'exact' else '>='} {rec.value}"
              f"   mode={rec.mode}  k_max={kdesc}  orbits={'on' if rec.use_orbits else 'off'}")
        print(f"  sets examined {rec.sets_examined}, mortal {rec.mortal_sets}, {rec.elapsed:.2f}s")
        print("  k   value")
        for k, v in sorted(rec.per_k.items()):
            print(f"  {k:<3} {v}")
        print("  witness: " + " | ".join(str(M) for M in rec.witness_set)
              + f"   word {list(rec.witness_word or [])}")
    print(_dump(payload))
    _maybe_catalog(args, "rys", rec.to_dict(), rec.q, rec.n, t0, always=True)
    return 0


def cmd_rank(args):
    try:
        alpha = rank_of_apparition(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(_dump({"p": args.p, "alpha": alpha}) if args.json else alpha)
    return 0


def cmd_verify(args):
    t0 = time.perf_counter()
    if args.statement == "lemma":
        rep = verify_lemma_abc(args.q, large=args.large, workers=args.threads)
    elif args.statement == "corollary":
        rep = verify_corollary(args.q)
    else:
        rep = verify_minimal_shape(args.q, args.k_max)
    payload = rep.to_dict(volatile=not args.reproducible)
    print(_dump(payload))
    _maybe_catalog(args, "verify", rep.to_dict(), args.q, 2, t0)
    return 0 if rep.passed else 1


def _poly_str(coeffs):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        coef = str(c) if (c != 1 or i == 0) else ""
        terms.append(coef + mono)
    return " + ".join(terms)


def cmd_field(args):
    f = make_field(args.p, args.e)
    d = {"p": f.p, "e": f.e, "q": f.q,
         "modulus": list(f.modulus) if f.modulus else None,
         "primitive_element": f.generator}
    if args.show_table:
        if f.q > 64:
            raise UsageError("--show-table is limited to q <= 64")
        d["add"] = [[f.add(a, b) for b in range(f.q)] for a in range(f.q)]
        d["mul"] = [[f.mul(a, b) for b in range(f.q)] for a in range(f.q)]
    if args.json:
        print(_dump(d))
        return 0
    print(f"{f}: q={f.q}")
    if f.modulus:
        print(f"modulus: {_poly_str(f.modulus)}   primitive element code {f.generator}")
    if args.show_table:
        for name in ("add", "mul"):
            print(name)
            for row in d[name]:
                print("  " + " ".join(f"{x:>2}" for x in row))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="zeroprod", description="Shortest zero products of matrix sets over finite fields.")
    ap.add_argument("--version", action="version",
                    version=f"zeroprod {__version__} (catalog schema {SCHEMA_VERSION}, kernels {BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, catalog=True):
        p.add_argument("--json", action="store_true", help="machine-readable output only")
        if catalog:
            p.add_argument("--catalog", metavar="FILE", help="append a record to this JSONL catalog")

    p = sub.add_parser("shortest", help="shortest zero product of a generator set")
    p.add_argument("--q", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--e", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--generators", metavar="FILE")
    p.add_argument("--gen", action="append", metavar="ROWS", help="matrix literal such as 1,0;0,0")
    p.add_argument("--max-len", type=int)
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--count-minimal", action="store_true")
    p.add_argument("--threads", type=int, default=1, help="accepted for symmetry; the search is sequential")
    common(p)
    p.set_defaults(func=cmd_shortest)

    p = sub.add_parser("construct", help="Fibonacci pair whose shortest zero product exceeds N")
    p.add_argument("--min-length", type=int, required=True, metavar="N")
    p.add_argument("--emit", metavar="FILE", help="also write a generator file")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("rys", help="Rystov number by exhaustive enumeration")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k-max", type=_parse_kmax, required=True, metavar="K|all")
    p.add_argument("--orbits", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--max-sets", type=int)
    p.add_argument("--checkpoint", metavar="FILE")
    p.add_argument("--no-catalog", action="store_true")
    p.add_argument("--reproducible", action="store_true", help="omit elapsed/timestamp from printed JSON")
    common(p)
    p.set_defaults(func=cmd_rys)

    p = sub.add_parser("rank", help="rank of apparition of p in the Fibonacci sequence")
    p.add_argument("--p", type=int, required=True)
    common(p, catalog=False)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("verify", help="exhaustive lemma/corollary/shape checks over GF(q)")
    p.add_argument("statement", choices=["lemma", "corollary", "shape"])
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--large", action="store_true", help="allow q > 3 for the lemma")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--reproducible", action="store_true")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("field", help="describe GF(p^e)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--e", type=int, default=1)
    p.add_argument("--show-table", action="store_true")
    common(p, catalog=False)
    p.set_defaults(func=cmd_field)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"zeroprod {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceeded as exc:
        print(f"zeroprod {args.command}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
