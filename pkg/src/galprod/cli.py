"""Command-line entry point.

Every subcommand prints exactly one JSON document on stdout and exits 0.
Domain errors print an error document on stderr and exit 1; usage errors
exit 2 (argparse's own convention).
"""
import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, _kernels, bounds, groups, lmfdb
from .curves import bad_primes, torsion_dims, trace_table
from .errors import GalprodError, SchemaError
from .sieve import DEFAULT_ELL_CEILING, DEFAULT_PMAX, SieveInput, sieve_product

DEFAULT_SEED = 1


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _str_list(text):
    return [x.strip() for x in text.split(",") if x.strip()]


def _global_options(parser, suppress):
    """Options accepted both before and after the subcommand."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--pmax", type=int, default=d(None), help=f"largest prime scanned (default {DEFAULT_PMAX})")
    parser.add_argument("--precision", type=int, default=d(bounds.DEFAULT_DIGITS),
                        help="significant decimal digits for bound evaluation")
    parser.add_argument("--offline", action="store_true", default=d(False), help="never touch the network")
    parser.add_argument("--cache-dir", default=d(None), help="label cache directory")
    parser.add_argument("--api-url", default=d(None), help="curve database endpoint")
    parser.add_argument("--seed", type=int, default=d(DEFAULT_SEED), help="seed for randomized verification")
    parser.add_argument("--timing", action="store_true", default=d(False),
                        help="report elapsed_ms (makes output run-dependent)")


def _version_doc():
    return {
        "version": __version__,
        "backend": _kernels.BACKEND,
        "defaults": {
            "pmax": DEFAULT_PMAX,
            "ell_ceiling": DEFAULT_ELL_CEILING,
            "precision": bounds.DEFAULT_DIGITS,
            "seed": DEFAULT_SEED,
            "bs_constants": bounds.DEFAULT_BS.to_json(),
            "ec_constant": bounds.EC_CONSTANT,
            "cache_dir_env": lmfdb.CACHE_ENV,
        },
    }


class _Version(argparse.Action):
    def __init__(self, option_strings, dest, **kw):
        super().__init__(option_strings, dest, nargs=0, default=argparse.SUPPRESS, **kw)

    def __call__(self, parser, namespace, values, option_string=None):
        sys.stdout.write(_dump(_version_doc()))
        parser.exit(0)


def build_parser():
    common = _Parser(add_help=False)
    _global_options(common, suppress=True)

    parser = _Parser(prog="galprod", description="Mod-ell image computations for products of elliptic curves.")
    parser.add_argument("--version", action=_Version, help="print version and defaults as JSON")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def curve_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--curve", help="curve JSON file")
        g.add_argument("--label", help="curve label, resolved via the cache")

    p = sub.add_parser("ap", parents=[common], help="Frobenius trace table")
    curve_args(p)

    p = sub.add_parser("torsion-dims", parents=[common], help="dimensions of E(F_p)[2] and E(F_p)[3]")
    curve_args(p)
    p.add_argument("--p", "--prime", type=int, dest="prime", help="single prime (default: every good 3 < p <= pmax)")

    p = sub.add_parser("sieve", parents=[common], help="surjectivity sieve for a product of curves")
    p.add_argument("--curves", required=True, help="JSON file with the curve list")
    p.add_argument("--ell-ceiling", type=int, default=DEFAULT_ELL_CEILING)
    p.add_argument("--out", help="also write the report here")

    p = sub.add_parser("bound", parents=[common], help="evaluate an explicit bound")
    bsub = p.add_subparsers(dest="formula", metavar="FORMULA", parser_class=_Parser)
    bsub.required = True

    def bs_args(q):
        q.add_argument("--a-tilde", default=bounds.DEFAULT_BS.a_tilde)
        q.add_argument("--b-tilde", default=bounds.DEFAULT_BS.b_tilde)
        q.add_argument("--c-tilde", default=bounds.DEFAULT_BS.c_tilde)

    def field_args(q):
        q.add_argument("--dK", type=int, default=1, help="|d_K|")
        q.add_argument("--degree", type=int, default=1, help="[K:Q]")

    q = bsub.add_parser("mw20", parents=[common])
    q.add_argument("--conductor", type=int, required=True)
    q = bsub.add_parser("faltings", parents=[common])
    q.add_argument("--g", type=int, default=1)
    q.add_argument("--N1", type=int, required=True)
    q.add_argument("--N2", type=int, required=True)
    field_args(q)
    bs_args(q)
    q = bsub.add_parser("product-av", parents=[common])
    q.add_argument("--g", type=int, default=1)
    q.add_argument("--conductors", type=_int_list, required=True)
    q.add_argument("--c-individual", type=_str_list, help="per-variety constants (default all 0)")
    field_args(q)
    bs_args(q)
    q = bsub.add_parser("product-ec", parents=[common])
    q.add_argument("--conductors", type=_int_list, required=True)
    q.add_argument("--constant", default=bounds.EC_CONSTANT, help="decimal constant or 'exact'")
    q = bsub.add_parser("pair", parents=[common])
    q.add_argument("--g", type=int, default=1)
    q.add_argument("--B", required=True)
    q.add_argument("--c1", default="0")
    q.add_argument("--c2", default="0")
    q = bsub.add_parser("bach-sorenson", parents=[common])
    q.add_argument("--log-dL", required=True)
    q.add_argument("--degree-LK", type=int, required=True)
    bs_args(q)
    q = bsub.add_parser("log-disc", parents=[common])
    field_args(q)
    q.add_argument("--degree-LK", type=int, required=True)
    q.add_argument("--degree-LQ", type=int, required=True)
    q.add_argument("--rad-disc-LK", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="re-check a structural statement by computation")
    vsub = p.add_subparsers(dest="check", metavar="CHECK", parser_class=_Parser)
    vsub.required = True
    q = vsub.add_parser("smallprimes", parents=[common])
    q.add_argument("--ell", type=int, required=True, choices=(2, 3))
    q = vsub.add_parser("propclass", parents=[common])
    q.add_argument("--ell", type=int, default=5)
    q.add_argument("--trials", type=int, default=200)
    q.add_argument("--target", type=int, help="keep sampling until this many surjective subgroups")
    q.add_argument("--mode", default="mixed", choices=("mixed",) + groups.PROPCLASS_MODES + ("diagonal",))
    q = vsub.add_parser("ordrad", parents=[common])
    q.add_argument("--ells", type=_int_list, default=[5, 7, 11, 13])
    q = vsub.add_parser("orderdelta", parents=[common])
    q.add_argument("--ells", type=_int_list, default=[3, 5])
    q = vsub.add_parser("autmult", parents=[common])
    q.add_argument("--ell", type=int, default=5)
    q.add_argument("--g", type=int, default=1)
    q.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("fetch", parents=[common], help="resolve labels into the cache")
    p.add_argument("labels", nargs="+")
    return parser


# -- command handlers ----------------------------------------------------------

def _mode(args):
    return lmfdb.OFFLINE if args.offline else lmfdb.ONLINE


def _source(args):
    return lmfdb.CurveSource(args.api_url) if args.api_url else None


def _resolve(args, spec):
    return lmfdb.resolve_curve(spec, _mode(args), args.cache_dir, _source(args))


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}", path=str(path)) from None
    except ValueError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}", path=str(path)) from None


def _single_curve(args):
    if args.label:
        return _resolve(args, lmfdb.CurveSpec(label=args.label))
    return _resolve(args, lmfdb.CurveSpec.from_json(_read_json(args.curve)))


def _pmax(args):
    return DEFAULT_PMAX if args.pmax is None else args.pmax


def cmd_ap(args):
    curve = _single_curve(args)
    pmax = _pmax(args)
    return {"curve": curve.to_json(), "pmax": pmax, "traces": [r.to_json() for r in trace_table(curve, pmax)]}


def cmd_torsion(args):
    curve = _single_curve(args)
    if args.prime is not None:
        rows = [torsion_dims(curve, args.prime).to_json()]
        pmax = None
    else:
        pmax = _pmax(args)
        bad = set(bad_primes(curve))
        rows = [torsion_dims(curve, r.p, bad).to_json() for r in trace_table(curve, pmax) if r.status == "Good"]
    return {"curve": curve.to_json(), "pmax": pmax, "rows": rows}


def _sieve_input(args):
    doc = _read_json(args.curves)
    entries = doc.get("curves") if isinstance(doc, dict) else doc
    if not isinstance(entries, list):
        raise SchemaError("curves file must be a list or an object with a 'curves' list")
    curves, sets = [], []
    for entry in entries:
        curves.append(_resolve(args, lmfdb.CurveSpec.from_json(entry)))
        ns = entry.get("nonsurjective", []) if isinstance(entry, dict) else []
        if not isinstance(ns, list):
            raise SchemaError("'nonsurjective' must be a list of primes")
        sets.append(ns)
    return SieveInput(curves, sets, pmax=_pmax(args), ell_ceiling=args.ell_ceiling)


def cmd_sieve(args):
    report = sieve_product(_sieve_input(args)).to_json()
    if args.out:
        Path(args.out).write_text(_dump(report))
    return report


def _bs(args):
    return bounds.BSConstants(args.a_tilde, args.b_tilde, args.c_tilde)


def _field(args):
    return bounds.FieldInvariants(args.dK, args.degree)


def cmd_bound(args):
    d = args.precision
    f = args.formula
    if f == "mw20":
        rep = bounds.mw20_bound(args.conductor, d)
    elif f == "faltings":
        rep = bounds.faltings_bound(args.g, _field(args), args.N1, args.N2, _bs(args), d)
    elif f == "product-av":
        n = len(args.conductors)
        ci = args.c_individual or ["0"] * n
        rep = bounds.product_av_bound(args.g, n, _field(args), args.conductors, ci, _bs(args), d)
    elif f == "product-ec":
        rep = bounds.product_ec_bound(args.conductors, args.constant, d)
    elif f == "pair":
        rep = bounds.pair_report(args.g, args.B, args.c1, args.c2, d)
    elif f == "bach-sorenson":
        rep = bounds.bach_sorenson_report(args.log_dL, args.degree_LK, _bs(args), d)
    else:
        rep = bounds.log_disc_report(_field(args), args.degree_LK, args.degree_LQ, args.rad_disc_LK, d)
    return rep.to_json()


def cmd_verify(args):
    c = args.check
    if c == "smallprimes":
        rep = groups.verify_smallprimes_lemma(args.ell)
    elif c == "propclass":
        rep = groups.verify_propclass_sampling(args.ell, args.trials, args.seed, args.mode, args.target)
    elif c == "ordrad":
        rep = groups.verify_ordrad(args.ells)
    elif c == "orderdelta":
        rep = groups.verify_order_delta(args.ells)
    else:
        rep = groups.verify_autmult_charpoly(args.ell, args.g, args.samples, args.seed)
    out = rep.to_json(timing=args.timing)
    out["passed"] = rep.passed
    return out


def cmd_fetch(args):
    entries = []
    for label in args.labels:
        entry = lmfdb.fetch_entry(label, _mode(args), args.cache_dir, _source(args))
        entries.append({"label": entry.label, "payload": entry.payload})
    return {"entries": entries}


HANDLERS = {
    "ap": cmd_ap,
    "torsion-dims": cmd_torsion,
    "sieve": cmd_sieve,
    "bound": cmd_bound,
    "verify": cmd_verify,
    "fetch": cmd_fetch,
}


def run_command(argv, stdout=None, stderr=None):
    """Parse ``argv``, run the subcommand, return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.pmax is not None and args.pmax < 2:
        parser.print_usage(stderr)
        stderr.write("galprod: error: --pmax must be at least 2\n")
        return 2
    if args.precision < 15:
        parser.print_usage(stderr)
        stderr.write("galprod: error: --precision must be at least 15\n")
        return 2
    t0 = time.perf_counter()
    try:
        result = HANDLERS[args.command](args)
    except GalprodError as exc:
        stderr.write(_dump(exc.to_json()))
        return 1
    except ValueError as exc:
        stderr.write(_dump({"error": "InvalidInput", "message": str(exc), "details": {}}))
        return 1
    if args.timing and "elapsed_ms" not in result:
        result["elapsed_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    stdout.write(_dump(result))
    return 0


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
