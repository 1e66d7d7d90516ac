"""Command-line front end: ``qbroadcast <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import broadcast, reporting
from .cloning import ClonerSpec, Dependence, Locality, clone_closed_form
from .discord import discord_local_output_sd, geometric_discord
from .errors import QBroadcastError
from .separability import is_separable
from .states import bell_diagonal, from_bloch, pure_schmidt, random_bloch_state, validate, werner_like

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PARAM_HELP = "werner: p alpha_sq; bell: c1 c2 c3; pure: s; omitted: a random state drawn with --seed"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbroadcast", description="Broadcasting of two-qubit correlations with Buzek-Hillery cloners.")
    p.add_argument("command", choices=["state", "clone", "check", "scan", "discord", "tables", "verify"])
    p.add_argument("--family", choices=[f.value for f in broadcast.Family])
    p.add_argument("--params", type=float, nargs="+", help=PARAM_HELP)
    p.add_argument("--locality", choices=[v.value for v in Locality], default="local")
    p.add_argument("--dependence", choices=[v.value for v in Dependence], default="si")
    p.add_argument("--lambda", dest="lam", type=float, help="machine parameter of the state-dependent cloner")
    p.add_argument("--kind", choices=[k.value for k in broadcast.Kind], default="entanglement",
                   help="scan verdicts from entanglement or from geometric discord")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--out", help="output file (default: standard output)")
    p.add_argument("--seed", type=int, default=reporting.DEFAULT_SEED,
                   help=f"seed for random corpora (default {reporting.DEFAULT_SEED})")
    p.add_argument("--checks", help="comma-separated subset of: " + ",".join(reporting.CHECKS))
    p.add_argument("--tables", help="comma-separated subset of table names, e.g. I(i),IV")
    # test hook: makes every verify tolerance unattainable
    p.add_argument("--corrupt-tolerance", action="store_true", help=argparse.SUPPRESS)
    return p


def _spec(args) -> ClonerSpec:
    if args.dependence == Dependence.DEPENDENT.value:
        if args.lam is None:
            raise UsageError("--dependence sd needs --lambda")
        return ClonerSpec.sd(args.locality, args.lam)
    if args.lam is not None:
        raise UsageError("--lambda only applies with --dependence sd")
    return ClonerSpec.si(args.locality)


def _state(args):
    n_expected = {"werner": 2, "bell": 3, "pure": 1}
    if args.family is None:
        if args.params:
            raise UsageError("--params needs --family")
        if args.seed < 0:
            raise UsageError("--seed must be non-negative")
        return random_bloch_state(np.random.default_rng(args.seed))
    if not args.params or len(args.params) != n_expected[args.family]:
        raise UsageError(f"--family {args.family} needs {n_expected[args.family]} --params values")
    if args.family == "werner":
        return werner_like(*args.params)
    if args.family == "bell":
        return bell_diagonal(args.params)
    return pure_schmidt(args.params[0])


def _r(v):
    return np.round(np.asarray(v, dtype=float), reporting.SIG_DIGITS).tolist()


def _bloch_json(s) -> dict:
    return {"x": _r(s.x), "y": _r(s.y), "T": _r(s.T)}


def _verdict_json(v: broadcast.BroadcastVerdict) -> dict:
    return {
        "cross_pairs_entangled": v.cross_pairs_entangled,
        "side_pairs_separable": v.side_pairs_separable,
        "broadcastable": v.broadcastable,
        "optimally_broadcastable": v.optimally_broadcastable,
        "boundary": v.boundary,
        "cross_min_pt": float(_r(v.cross_min_pt)),
        "side_min_pt": float(_r(v.side_min_pt)),
        "discord_cross": float(_r(v.discord_cross)),
        "discord_side": float(_r(v.discord_side)),
    }


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_state(args) -> int:
    s = _state(args)
    rep = validate(from_bloch(s))
    sep = is_separable(from_bloch(s)) if rep.valid else None
    doc = {
        "state": _bloch_json(s),
        "valid": rep.valid,
        "min_eigenvalue": float(_r(rep.min_eigenvalue)),
        "separable": None if sep is None else sep.separable,
        "discord": float(_r(geometric_discord(s).value)) if rep.valid else None,
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_clone(args) -> int:
    s, spec = _state(args), _spec(args)
    out = clone_closed_form(s, spec)
    doc = {"cloner": spec.label(), "input": _bloch_json(s), "pairs": {k: _bloch_json(p) for k, p in out.pairs.items()}}
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_check(args) -> int:
    s, spec = _state(args), _spec(args)
    doc = {
        "cloner": spec.label(),
        "input": _bloch_json(s),
        "entanglement": _verdict_json(broadcast.classify_entanglement_broadcast(s, spec)),
        "discord": _verdict_json(broadcast.classify_qcsbe_broadcast(s, spec)),
    }
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_discord(args) -> int:
    s, spec = _state(args), _spec(args)
    out = clone_closed_form(s, spec)
    doc = {
        "cloner": spec.label(),
        "input": float(_r(geometric_discord(s).value)),
        "pairs": {k: float(_r(geometric_discord(p, check=False).value)) for k, p in out.pairs.items()},
    }
    if spec.dependence is Dependence.DEPENDENT:
        # the closed-form same-side expression, reported next to the direct values
        nsq = float(s.x @ s.x)
        doc["side_expression"] = float(_r(discord_local_output_sd(spec.locality, spec.lam, nsq)))
    _emit(_dump(doc), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.family is None:
        raise UsageError("scan needs --family")
    report = broadcast.scan(args.family, _spec(args), args.resolution, kind=args.kind)
    fmt = args.format or "csv"
    text = reporting.scan_to_csv(report) if fmt == "csv" else reporting.scan_to_json(report, args.seed)
    _emit(text, args.out)
    return EXIT_OK


def cmd_tables(args) -> int:
    names = None if args.tables is None else [t.strip() for t in args.tables.split(",")]
    rows = reporting.table_rows(names)
    fmt = args.format or "csv"
    _emit(reporting.tables_csv(rows) if fmt == "csv" else reporting.tables_json(rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = None if args.checks is None else [c.strip() for c in args.checks.split(",")]
    results = reporting.verify(checks, seed=args.seed, corrupt=args.corrupt_tolerance)
    if args.format == "json":
        text = reporting.verify_json(results)
    else:
        text = "".join(r.line() + "\n" for r in results)
    _emit(text, args.out)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


COMMANDS = {
    "state": cmd_state,
    "clone": cmd_clone,
    "check": cmd_check,
    "scan": cmd_scan,
    "discord": cmd_discord,
    "tables": cmd_tables,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.resolution < 16 and args.command == "scan":
        print(f"qbroadcast: error: --resolution must be at least 16, got {args.resolution}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (UsageError, QBroadcastError) as exc:
        print(f"qbroadcast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qbroadcast: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
