from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from .errors import CoverError, HypothesesNotMet, InvalidSpec, MalformedSpec
from .export import export_problems_csv
from .journal import append_record, build_payload, new_record, read_records, replay_matches
from .problem import ProblemSpec
from .report import build_report_pdf
from .schema import validate_payload
from .solver import ERROR, FAIL, ToleranceSet

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_SOLVER = 3
EXIT_USAGE = 64
EXIT_INVALID = 65

log = logging.getLogger("equivariant_covers.cli")


def setup_logging(log_file: Optional[Path], level: str = "INFO") -> None:
    lvl = getattr(logging, level.upper(), logging.INFO)
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=lvl,
        format="%(asctime)sZ %(levelname)s %(name)s: %(message)s",
        handlers=handlers,
    )


def require(name: str, value: Any) -> Any:
    if value is None or value == "":
        raise SystemExit(f"Missing required value: {name}")
    return value


def split_ints(s: str) -> List[int]:
    try:
        return [int(x) for x in (s or "").replace(",", " ").split()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a list of integers, got {s!r}") from e


def positive_int(s: str) -> int:
    try:
        v = int(s)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected an integer, got {s!r}") from e
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 64 rather than argparse's 2, which means FAIL here."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    p = _Parser(prog="equivariant_covers")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def add_common(x):
        x.add_argument("--journal", type=Path, default=os.getenv("COVERS_JOURNAL") or None,
                       help="Append a JSON-lines run record to this file.")
        x.add_argument("--json", action="store_true", help="Print the JSON payload instead of text.")
        x.add_argument("--log-level", default=os.getenv("LOG_LEVEL", "INFO"))
        x.add_argument("--log-file", type=Path, default=None)

    for name, help_ in (
        ("validate", "Check a problem against every constraint."),
        ("count", "Closed-form number of covers."),
        ("theta", "Theta characteristic of a hyperelliptic odd-cover problem."),
    ):
        x = sub.add_parser(name, help=help_)
        add_common(x)
        x.add_argument("spec", type=Path, help="Problem JSON file.")

    pe = sub.add_parser("enumerate", help="All valid problems over (r, xi) up to a degree.")
    add_common(pe)
    pe.add_argument("--r", type=int, required=True)
    pe.add_argument("--xi", type=split_ints, required=True, help="Comma separated, e.g. 1,1,2,2")
    pe.add_argument("--dmax", type=int, required=True)
    pe.add_argument("--csv", type=Path, default=None, help="Also write the problems to CSV.")

    pv = sub.add_parser("verify", help="Count covers numerically and compare with the formula.")
    add_common(pv)
    pv.add_argument("spec", type=Path, help="Problem JSON file.")
    pv.add_argument("--trials", type=positive_int, default=1)
    pv.add_argument("--seed", type=int, default=os.getenv("COVERS_SEED", "0"))
    pv.add_argument("--residual-tol", type=float, default=os.getenv("COVERS_RESIDUAL_TOL", "1e-10"))
    pv.add_argument("--dedup-radius", type=float, default=os.getenv("COVERS_DEDUP_RADIUS", "1e-6"))
    pv.add_argument("--singular-tol", type=float, default=os.getenv("COVERS_SINGULAR_TOL", "1e-8"))
    pv.add_argument("--divergence-norm", type=float, default=os.getenv("COVERS_DIVERGENCE_NORM", "1e8"))
    pv.add_argument("--step-budget", type=int, default=os.getenv("COVERS_STEP_BUDGET", "10000"))
    pv.add_argument("--cluster-radius", type=float, default=os.getenv("COVERS_CLUSTER_RADIUS", "1e-5"))
    pv.add_argument("--precision", type=int, default=os.getenv("COVERS_PRECISION", "53"))
    pv.add_argument("--threads", type=int, default=os.getenv("COVERS_THREADS", "1"))

    pr = sub.add_parser("replay", help="Re-run journal records and compare payloads.")
    add_common(pr)
    pr.add_argument("source", type=Path, help="Journal to replay.")
    pr.add_argument("--index", type=int, default=None, help="Replay only this record (0-based).")

    pp = sub.add_parser("report", help="Render a journal as PDF.")
    add_common(pp)
    pp.add_argument("--out", type=Path, required=True)
    pp.add_argument("--title", default="Equivariant cover runs")

    return p.parse_args(argv)


def load_spec(path: Path) -> ProblemSpec:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise MalformedSpec(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise MalformedSpec(f"{path}: not JSON ({e.msg})") from e
    return ProblemSpec.from_json(raw)


def tolerances(args: argparse.Namespace) -> ToleranceSet:
    try:
        return ToleranceSet(
            residual_tol=args.residual_tol,
            dedup_radius=args.dedup_radius,
            singular_tol=args.singular_tol,
            divergence_norm=args.divergence_norm,
            step_budget=args.step_budget,
            cluster_radius=args.cluster_radius,
            precision=args.precision,
            threads=args.threads,
        )
    except ValueError as e:
        raise SystemExit(f"Bad tolerance: {e}")


def _emit(args: argparse.Namespace, kind: str, payload: Any, lines: List[str]) -> None:
    validate_payload(kind, payload)
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _journal(args, command, spec, seed, params, payload) -> None:
    if args.journal:
        record = new_record(command, spec, seed, params, payload)
        validate_payload("record", record.to_json())
        append_record(args.journal, record)


def run_validate(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    payload = build_payload("validate", spec, None, {})
    lines = ["OK" if payload["ok"] else "INVALID"]
    lines += [f"  [{v['tag']}] {v['message']}" for v in payload["violations"]]
    if payload["derived"]:
        d = payload["derived"]
        lines.append(f"  genus={d['genus']} d={d['d']} k={d['k']} b={d['b']} L={d['L']}")
    _emit(args, "validation", payload, lines)
    _journal(args, "validate", spec, None, {}, payload)
    return EXIT_OK if payload["ok"] else EXIT_INVALID


def run_count(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    payload = build_payload("count", spec, None, {})
    lines = [
        f"segre={payload['segre']} rho={payload['rho']} total={payload['total']}",
        f"  ({payload['specialization']})",
    ]
    _emit(args, "count", payload, lines)
    _journal(args, "count", spec, None, {}, payload)
    return EXIT_OK


def run_theta(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    payload = build_payload("theta", spec, None, {})
    lines = [f"hCoeff={payload['hCoeff']} pointCoeffs={payload['pointCoeffs']} degree={payload['degree']}"]
    _emit(args, "theta", payload, lines)
    _journal(args, "theta", spec, None, {}, payload)
    return EXIT_OK


def run_enumerate(args: argparse.Namespace) -> int:
    params: Dict[str, Any] = {"r": args.r, "xi": args.xi, "dmax": args.dmax}
    payload = build_payload("enumerate", None, None, params)
    lines = [
        f"d={p['d']} ord={p['spec']['ord']} B={p['spec']['B']} t0={p['spec']['t0']} "
        f"tinf={p['spec']['tinf']} total={p['total']}"
        for p in payload
    ]
    lines.append(f"{len(payload)} problem(s)")
    _emit(args, "enumerate", payload, lines)
    if args.csv:
        specs = [ProblemSpec.from_json(p["spec"]) for p in payload]
        path = export_problems_csv(specs, args.csv)
        log.info("CSV written: %s", path)
    _journal(args, "enumerate", None, None, params, payload)
    return EXIT_OK


def run_verify(args: argparse.Namespace) -> int:
    spec = load_spec(args.spec)
    params = tolerances(args)
    record_params = {"trials": args.trials, **params.to_json(include_execution=True)}
    payload = build_payload("verify", spec, args.seed, record_params)
    lines = [
        f"trial {r['trial']}: {r['verdict']} accepted={r['accepted']} expected={r['expected']} "
        f"max_residual={r['max_residual']} min_rcond={r['min_rcond']}"
        + (f" error={r['error']}" if r["error"] else "")
        for r in payload
    ]
    _emit(args, "verify", payload, lines)
    _journal(args, "verify", spec, args.seed, record_params, payload)
    verdicts = {r["verdict"] for r in payload}
    if ERROR in verdicts:
        return EXIT_SOLVER
    if FAIL in verdicts:
        return EXIT_FAIL
    return EXIT_OK


def run_replay(args: argparse.Namespace) -> int:
    records = read_records(args.source)
    if args.index is not None:
        if not 0 <= args.index < len(records):
            raise SystemExit(f"No record {args.index} in {args.source} ({len(records)} records)")
        records = [records[args.index]]
    mismatches = 0
    for n, record in enumerate(records):
        ok = replay_matches(record)
        mismatches += not ok
        print(f"{n}: {record.command} {'match' if ok else 'MISMATCH'}")
    return EXIT_OK if not mismatches else EXIT_FAIL


def run_report(args: argparse.Namespace) -> int:
    journal = require("COVERS_JOURNAL/--journal", args.journal)
    pdf = build_report_pdf(args.title, read_records(journal))
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_bytes(pdf)
    log.info("PDF written: %s", args.out)
    print(args.out)
    return EXIT_OK


COMMANDS = {
    "validate": run_validate,
    "count": run_count,
    "theta": run_theta,
    "enumerate": run_enumerate,
    "verify": run_verify,
    "replay": run_replay,
    "report": run_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = parse_args(argv)
    setup_logging(args.log_file, args.log_level)
    try:
        return COMMANDS[args.cmd](args)
    except (MalformedSpec, InvalidSpec, HypothesesNotMet) as e:
        log.error("%s: %s", type(e).__name__, e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except CoverError as e:
        log.error("%s: %s", type(e).__name__, e)
        return EXIT_SOLVER

