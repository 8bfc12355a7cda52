"""Command-line interface.

Five subcommands cover the public workflows:

* decompose    split a sequence through the quadratic map and emit the
               four component sequences
* analyze      detect the orthogonality order of a sequence
* derive       detect whether the derivative sequence keeps the same
               orthogonality order (the classical character)
* verify-case  check every claim of one case at explicit or seeded
               random parameter tuples
* sweep        run seeded verification across one or all cases and
               aggregate the outcome

Exit codes: 0 success, 1 verification mismatch, 2 malformed input,
3 mathematical domain error (degenerate parameters, range too small),
4 case or family dispatch mismatch. All randomness flows from --seed
(default: the QUADMPS_SEED environment variable, else 0), and reports
with the same configuration and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .analysis import check_hahn_classical, detect_orthogonality_order
from .decomposition import QuadMap, decompose
from .errors import (
    DispatchError,
    MathDomainError,
    ParseError,
    RangeError,
)
from .families import (
    CASE_IDS,
    CaseParams,
    family_corecursive,
    family_main,
    family_pert2_I,
    family_pert2_II,
)
from .polynomials import format_poly, poly_from_strings
from .rationals import parse_rational
from .sequences import StructureCoefficients
from .verification import verify_case, verify_sampled

_BASE_PARAMS = ("beta", "alpha1", "alpha2", "gamma", "p", "q", "a")
_EXTRA_PARAMS = ("tau", "tau1", "tau2", "eta1", "eta2", "xi")

_FAMILIES = {
    "main": (family_main, frozenset()),
    "corecursive": (family_corecursive, frozenset({"tau"})),
    "pert2-I": (family_pert2_I, frozenset({"tau", "eta1", "eta2", "xi"})),
    "pert2-II": (family_pert2_II, frozenset({"tau1", "tau2"})),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run-wide knobs shared by the subcommands."""

    command: str
    nmax: int
    dmax: int
    samples: int
    seed: int
    format: str

    def __post_init__(self):
        if self.nmax < 4:
            raise RangeError(f"nmax must be at least 4, got {self.nmax}")
        if not 1 <= self.dmax <= self.nmax:
            raise RangeError(
                f"dmax must lie in 1..nmax, got {self.dmax} (nmax {self.nmax})"
            )
        if self.samples < 1:
            raise RangeError(f"samples must be at least 1, got {self.samples}")


def _rational(text: str):
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    for name in _BASE_PARAMS + _EXTRA_PARAMS:
        sub.add_argument(f"--{name}", type=_rational, default=None)


def _add_shared_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--nmax", type=int, default=12)
    sub.add_argument("--dmax", type=int, default=None)
    sub.add_argument("--samples", type=int, default=20)
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--format", choices=("json", "table"), default="json")
    sub.add_argument("--output", default=None)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadmps",
        description="quadratic decomposition of 2-orthogonal polynomial sequences",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    decompose_cmd = commands.add_parser(
        "decompose", help="emit the four component sequences of one input"
    )
    analyze_cmd = commands.add_parser(
        "analyze", help="detect the orthogonality order of one input"
    )
    derive_cmd = commands.add_parser(
        "derive", help="compare the orthogonality of a sequence and its derivative"
    )
    for sub in (decompose_cmd, analyze_cmd, derive_cmd):
        sub.add_argument("--family", choices=sorted(_FAMILIES), default=None)
        sub.add_argument("--sc-file", default=None)
        _add_param_flags(sub)
        _add_shared_flags(sub)

    verify_cmd = commands.add_parser(
        "verify-case", help="check the claims of one case at parameter tuples"
    )
    verify_cmd.add_argument("--case", required=True)
    _add_param_flags(verify_cmd)
    _add_shared_flags(verify_cmd)

    sweep_cmd = commands.add_parser(
        "sweep", help="seeded verification across one or all cases"
    )
    sweep_cmd.add_argument(
        "--case", action="append", default=None, help="repeatable; default all cases"
    )
    sweep_cmd.add_argument("--jobs", type=int, default=1)
    _add_shared_flags(sweep_cmd)

    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    seed = args.seed
    if seed is None:
        raw = os.environ.get("QUADMPS_SEED", "0")
        try:
            seed = int(raw)
        except ValueError:
            raise ParseError(f"QUADMPS_SEED must be an integer, got {raw!r}") from None
    return RunConfig(
        command=args.command,
        nmax=args.nmax,
        dmax=args.nmax if args.dmax is None else args.dmax,
        samples=args.samples,
        seed=seed,
        format=args.format,
    )


def _explicit_params(args: argparse.Namespace) -> CaseParams:
    missing = [f"--{n}" for n in _BASE_PARAMS if getattr(args, n) is None]
    if missing:
        raise ParseError(f"missing parameter flags: {' '.join(missing)}")
    kwargs = {n: getattr(args, n) for n in _BASE_PARAMS}
    for name in _EXTRA_PARAMS:
        value = getattr(args, name)
        if value is not None:
            kwargs[name] = value
    return CaseParams(**kwargs)


def _family_input(args: argparse.Namespace):
    """Resolve --family/--sc-file into a sequence spec for the engine."""
    if (args.family is None) == (args.sc_file is None):
        raise ParseError("give exactly one of --family or --sc-file")
    if args.family is not None:
        constructor, allowed = _FAMILIES[args.family]
        params = _explicit_params(args)
        for name in _EXTRA_PARAMS:
            given = getattr(args, name) is not None
            if given and name not in allowed:
                raise DispatchError(f"family {args.family} takes no --{name}")
            if not given and name in allowed:
                raise DispatchError(f"family {args.family} requires --{name}")
        return constructor(params), params
    path = Path(args.sc_file)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return StructureCoefficients.from_json(data), None


def _map_from_args(args: argparse.Namespace) -> QuadMap:
    missing = [f"--{n}" for n in ("p", "q", "a") if getattr(args, n) is None]
    if missing:
        raise ParseError(f"missing quadratic-map flags: {' '.join(missing)}")
    return QuadMap(args.p, args.q, args.a)


def _cmd_decompose(args: argparse.Namespace, cfg: RunConfig):
    spec, params = _family_input(args)
    if params is not None:
        qmap = QuadMap(params.p, params.q, params.a)
        table = spec.table(2 * cfg.nmax)
    else:
        qmap = _map_from_args(args)
        table = spec
    components = decompose(table, qmap, cfg.nmax)
    return components.to_json(), False


def _cmd_analyze(args: argparse.Namespace, cfg: RunConfig):
    spec, _ = _family_input(args)
    table = spec.table(max(cfg.nmax, cfg.dmax + 2)) if hasattr(spec, "bands") else spec
    report = detect_orthogonality_order(table, cfg.dmax)
    return report.to_json(), False


def _cmd_derive(args: argparse.Namespace, cfg: RunConfig):
    spec, _ = _family_input(args)
    base, derived = check_hahn_classical(spec, cfg.nmax, cfg.dmax)
    payload = {
        "base": base.to_json(),
        "derivative": derived.to_json(),
        "classical": base.classical,
    }
    return payload, False


def _cmd_verify_case(args: argparse.Namespace, cfg: RunConfig):
    explicit = any(getattr(args, n) is not None for n in _BASE_PARAMS + _EXTRA_PARAMS)
    if explicit:
        params = _explicit_params(args)
        verdict = verify_case(args.case, params, nmax=cfg.nmax, dmax=cfg.dmax)
        return verdict.to_json(), not verdict.passed
    result = verify_sampled(
        args.case, cfg.samples, cfg.seed, nmax=cfg.nmax, dmax=cfg.dmax
    )
    return result.to_json(), not result.passed


def _cmd_sweep(args: argparse.Namespace, cfg: RunConfig):
    cases = args.case if args.case else list(CASE_IDS)
    for case_id in cases:
        if case_id not in CASE_IDS:
            raise DispatchError(
                f"unknown case {case_id!r}; expected one of {', '.join(CASE_IDS)}"
            )
    jobs = max(1, args.jobs)
    summary = {}
    failed = False
    for case_id in cases:
        result = verify_sampled(
            case_id, cfg.samples, cfg.seed, nmax=cfg.nmax, dmax=cfg.dmax, jobs=jobs
        )
        failed = failed or not result.passed
        summary[case_id] = {
            "passed": result.passed,
            "passes": sum(1 for v in result.verdicts if v.passed),
            "failures": sum(1 for v in result.verdicts if not v.passed),
            "excluded": len(result.excluded),
            "exceptional": [
                v.params.to_json() for v in result.verdicts if not v.passed
            ]
            + [v.params.to_json() for v in result.excluded],
        }
    payload = {
        "nmax": cfg.nmax,
        "dmax": cfg.dmax,
        "samples": cfg.samples,
        "seed": cfg.seed,
        "passed": not failed,
        "cases": summary,
    }
    return payload, failed


_COMMANDS = {
    "decompose": _cmd_decompose,
    "analyze": _cmd_analyze,
    "derive": _cmd_derive,
    "verify-case": _cmd_verify_case,
    "sweep": _cmd_sweep,
}


# table rendering ------------------------------------------------------------

def _fmt_polys(strings: list[str]) -> str:
    return format_poly(poly_from_strings(strings))


def _render_ortho(report: dict, lines: list[str], indent: str = "") -> None:
    lines.append(f"{indent}detected order : {report['detected_d']}")
    lines.append(f"{indent}scanned range  : n <= {report['range']}")
    lines.append(f"{indent}regularity ok  : {report['regularity_ok']}")
    if report["regularity_fail"] is not None:
        fail = report["regularity_fail"]
        lines.append(
            f"{indent}regularity fail: band d={fail['d']} vanishes at n={fail['n']}"
        )
    for w in report["witnesses"]:
        lines.append(
            f"{indent}rejected d={w['d']}: chi[{w['n']}][{w['nu']}] = {w['value']}"
        )


def _render_table(command: str, payload: dict) -> str:
    lines: list[str] = []
    if command == "decompose":
        qmap = payload["map"]
        lines.append(
            f"map: x^2 + ({qmap['p']}) x + ({qmap['q']}), anchor a = {qmap['a']}"
        )
        for record in payload["components"]:
            lines.append(f"n = {record['n']}")
            lines.append(f"  P      = {_fmt_polys(record['P'])}")
            lines.append(f"  a_prev = {_fmt_polys(record['a_prev'])}")
            lines.append(f"  b      = {_fmt_polys(record['b'])}")
            lines.append(f"  R      = {_fmt_polys(record['R'])}")
    elif command == "analyze":
        _render_ortho(payload, lines)
    elif command == "derive":
        lines.append("base sequence:")
        _render_ortho(payload["base"], lines, "  ")
        lines.append("derivative sequence:")
        _render_ortho(payload["derivative"], lines, "  ")
        lines.append(f"classical: {payload['classical']}")
    elif command == "verify-case":
        if "verdicts" in payload:
            for k, verdict in enumerate(payload["verdicts"]):
                lines.append(f"tuple {k}: {'PASS' if verdict['passed'] else 'FAIL'}")
                lines.extend(_verdict_lines(verdict, only_failures=True))
            lines.append(
                f"case {payload['case']}: {payload['passes']} passed, "
                f"{payload['failures']} failed, {payload['excluded']} excluded"
            )
        else:
            lines.append(
                f"case {payload['case']}: {'PASS' if payload['passed'] else 'FAIL'}"
            )
            lines.extend(_verdict_lines(payload, only_failures=False))
    elif command == "sweep":
        for case_id, entry in payload["cases"].items():
            lines.append(
                f"{case_id}: {'PASS' if entry['passed'] else 'FAIL'} "
                f"({entry['passes']} passed, {entry['failures']} failed, "
                f"{entry['excluded']} excluded)"
            )
        lines.append(f"overall: {'PASS' if payload['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _verdict_lines(verdict: dict, only_failures: bool) -> list[str]:
    lines = []
    if verdict.get("excluded"):
        lines.append(f"  excluded: {verdict['excluded']}")
    for name, report in verdict["components"].items():
        notes = []
        if report["orthogonal_d"] is not None:
            notes.append(f"d={report['orthogonal_d']}")
        if report["matches_expected"] is not None:
            notes.append(
                "table ok" if report["matches_expected"] else "TABLE MISMATCH"
            )
        if report["coincides_with"] is not None:
            mark = "==" if report["coincidence_ok"] else "!="
            notes.append(f"{mark} {report['coincides_with']}")
        if report["offset_ok"] is not None:
            notes.append(
                f"offset {report['offset']} ok"
                if report["offset_ok"]
                else "OFFSET MISMATCH"
            )
        if report["leadings_ok"] is not None:
            notes.append(
                "leadings ok" if report["leadings_ok"] else "LEADINGS MISMATCH"
            )
        if report["rejections_complete"] is not None:
            notes.append(
                "all orders rejected"
                if report["rejections_complete"]
                else "REJECTION GAP"
            )
        failed = (
            report["matches_expected"] is False
            or report["coincidence_ok"] is False
            or report["offset_ok"] is False
            or report["leadings_ok"] is False
            or report["rejections_complete"] is False
        )
        if not only_failures or failed:
            lines.append(f"  {name}: {', '.join(notes)}")
        if report["first_mismatch"]:
            m = report["first_mismatch"]
            where = f"beta_{m['n']}" if m["kind"] == "beta" else (
                f"chi[{m['n']}][{m['nu']}]"
            )
            lines.append(
                f"    first mismatch at {where}: "
                f"computed {m['computed']}, expected {m['expected']}"
            )
    for entry in verdict["identities"]:
        if not only_failures or not entry["ok"]:
            lines.append(f"  identity {entry['name']}: {'ok' if entry['ok'] else 'FAILED'}")
    return lines


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = _config(args)
        payload, failed = _COMMANDS[args.command](args, cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DispatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except MathDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if cfg.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = _render_table(args.command, payload)
    if args.output is not None:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
