"""Command-line front end.

Subcommands
-----------
evaluate   evaluate inequalities on a JSON-specified network
scan       sweep a Werner family over a parameter grid
threshold  locate violation thresholds (bisection + closed forms)
oracle     maximise an inequality over hidden-state models
lemmas     operator-norm checks behind the genuine bounds
report     the full reproduction table with cited comparison values

Exit codes: 0 success, 2 input validation, 3 no bound crossing,
4 internal numerical assertion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import InputError, NoCrossingError, SteeringToolError
from .inequalities import InequalityId, applicable_ids, bound_value, evaluate
from .oracle import lemma_norm_check, maximize_blhs_n3, maximize_nlhs
from .states import StarNetwork, network_from_json, werner_network
from .thresholds import reproduction_table, werner_threshold

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CROSSING = 3
EXIT_INTERNAL = 4

_SIG_DIGITS = 12


@dataclass(frozen=True)
class RunConfig:
    command: str
    spec: str | None = None
    inequalities: tuple[str, ...] = ()
    settings: int | None = None
    form: str | None = None
    family: str = "werner"
    n: int | None = None
    grid: tuple[float, float, int] | None = None
    seed: int = 42
    jobs: int = 1
    fmt: str = "json"
    out: str | None = None
    restarts: int | None = None
    which: str | None = None
    include_cited: bool = False
    method: str = "auto"


def _fmt_value(v) -> str:
    if isinstance(v, float):
        return f"{v:.{_SIG_DIGITS}g}"
    return "" if v is None else str(v)


def _emit(rows: list[dict], cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        text = json.dumps(rows, indent=2, default=_fmt_value) + "\n"
    else:
        buf = io.StringIO()
        fieldnames = list(rows[0].keys()) if rows else []
        writer = csv.DictWriter(buf, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt_value(v) for k, v in row.items()})
        text = buf.getvalue()
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _check_out_path(out: str | None) -> None:
    # Validate before compute so a bad destination fails fast.
    if out is not None and not Path(out).parent.exists():
        raise InputError(f"output directory does not exist: {Path(out).parent}")


def _parse_grid(spec: str) -> tuple[float, float, int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must be START:STOP:STEPS, got {spec!r}")
    try:
        start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise InputError(f"grid must be START:STOP:STEPS with numeric fields, got {spec!r}") from exc
    if steps < 2:
        raise InputError(f"grid needs at least 2 steps, got {steps}")
    return start, stop, steps


def _parse_ids(spec: str | None, n: int) -> list[InequalityId]:
    if not spec:
        return applicable_ids(n)
    ids = []
    for token in spec.split(","):
        token = token.strip()
        try:
            ids.append(InequalityId(token))
        except ValueError as exc:
            known = ", ".join(i.value for i in InequalityId)
            raise InputError(f"unknown inequality {token!r}; known ids: {known}") from exc
    return ids


def _select_network(cfg: RunConfig) -> StarNetwork:
    if cfg.spec:
        return network_from_json(cfg.spec)
    raise InputError("this command needs --spec PATH")


def cmd_evaluate(cfg: RunConfig) -> int:
    net = _select_network(cfg)
    ids = _parse_ids(",".join(cfg.inequalities) or None, net.n)
    rows = [evaluate(net, ineq, method=cfg.method).to_dict() for ineq in ids]
    _emit(rows, cfg)
    return EXIT_OK


def _scan_point(args: tuple[float, int, str, str]) -> dict:
    p, n, ineq_name, method = args
    report = evaluate(werner_network(p, n), InequalityId(ineq_name), method=method)
    row = report.to_dict()
    row["p"] = p
    return row


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.grid is None:
        raise InputError("scan needs --n and --grid START:STOP:STEPS")
    if cfg.family != "werner":
        raise InputError(f"unknown family {cfg.family!r}; supported: werner")
    start, stop, steps = cfg.grid
    ids = _parse_ids(",".join(cfg.inequalities) or None, cfg.n)
    ps = [start + (stop - start) * i / (steps - 1) for i in range(steps)]
    tasks = [(p, cfg.n, ineq.value, cfg.method) for ineq in ids for p in ps]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_scan_point, tasks))
    else:
        rows = [_scan_point(t) for t in tasks]
    _emit(rows, cfg)
    return EXIT_OK


def cmd_threshold(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise InputError("threshold needs --n")
    if cfg.family != "werner":
        raise InputError(f"unknown family {cfg.family!r}; supported: werner")
    ids = _parse_ids(",".join(cfg.inequalities) or None, cfg.n)
    rows = []
    for ineq in ids:
        result = werner_threshold(cfg.n, ineq, method="dense" if cfg.method == "auto" else cfg.method)
        rows.append(result.to_dict())
    if cfg.include_cited:
        rows += [r for r in reproduction_table() if r["source_tag"] == "paper-cited"]
    _emit(rows, cfg)
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    if cfg.n is None:
        raise InputError("oracle needs --n")
    ids = _parse_ids(",".join(cfg.inequalities) or None, cfg.n)
    restarts = cfg.restarts
    rows = []
    for ineq in ids:
        if ineq in (InequalityId.T4_GEN_2SET, InequalityId.T4_GEN_3SET) and cfg.n == 3:
            best = maximize_blhs_n3(ineq, restarts=restarts or 16, seed=cfg.seed)
            model = "biseparable"
        else:
            best = maximize_nlhs(ineq, cfg.n, restarts=restarts or 64, seed=cfg.seed)
            model = "product"
        bound = bound_value(ineq, cfg.n)
        rows.append(
            {
                "id": ineq.value,
                "n": cfg.n,
                "model": model,
                "best": best,
                "bound": bound,
                "sound": best <= bound + 1e-6,
            }
        )
    _emit(rows, cfg)
    return EXIT_OK


def cmd_lemmas(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.which is None:
        raise InputError("lemmas needs --n and --which lemma1|lemma2")
    value = lemma_norm_check(cfg.n, cfg.which)
    _emit([{"which": cfg.which, "n": cfg.n, "max_norm": value}], cfg)
    return EXIT_OK


def cmd_report(cfg: RunConfig) -> int:
    rows = reproduction_table()
    if cfg.n is not None and cfg.grid is not None:
        # Optional LHS samples alongside the threshold table.
        start, stop, steps = cfg.grid
        ids = _parse_ids(",".join(cfg.inequalities) or None, cfg.n)
        ps = [start + (stop - start) * i / (steps - 1) for i in range(steps)]
        for ineq in ids:
            for p in ps:
                row = evaluate(werner_network(p, cfg.n), ineq).to_dict()
                row["p"] = p
                row["source_tag"] = "computed"
                rows.append(row)
    _emit(rows, cfg)
    return EXIT_OK


_COMMANDS = {
    "evaluate": cmd_evaluate,
    "scan": cmd_scan,
    "threshold": cmd_threshold,
    "oracle": cmd_oracle,
    "lemmas": cmd_lemmas,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starsteer",
        description="Star-network quantum steering: inequalities, thresholds, oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", help="path to a JSON network specification")
        p.add_argument("--inequality", help="comma-separated inequality ids")
        p.add_argument("--settings", type=int, choices=(2, 3))
        p.add_argument("--form", choices=("squared", "root"))
        p.add_argument("--family", default="werner")
        p.add_argument("--n", type=int)
        p.add_argument("--grid", help="sweep grid START:STOP:STEPS")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--restarts", type=int)
        p.add_argument("--which", choices=("lemma1", "lemma2"))
        p.add_argument("--include-cited", action="store_true")
        p.add_argument("--method", choices=("auto", "dense", "fast"), default="auto")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="output path (default: stdout)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    ids: tuple[str, ...] = ()
    if args.inequality:
        ids = tuple(tok.strip() for tok in args.inequality.split(","))
    elif args.settings is not None or args.form is not None:
        ids = _ids_from_settings_form(args)
    return RunConfig(
        command=args.command,
        spec=args.spec,
        inequalities=ids,
        settings=args.settings,
        form=args.form,
        family=args.family,
        n=args.n,
        grid=_parse_grid(args.grid) if args.grid else None,
        seed=args.seed,
        jobs=args.jobs,
        fmt=args.fmt,
        out=args.out,
        restarts=args.restarts,
        which=args.which,
        include_cited=args.include_cited,
        method=args.method,
    )


def _ids_from_settings_form(args: argparse.Namespace) -> tuple[str, ...]:
    """Map --settings/--form to concrete inequality ids (needs --n for parity)."""
    if args.n is None:
        raise InputError("--settings/--form selection needs --n")
    settings = args.settings if args.settings is not None else 3
    parity = "EVEN" if args.n % 2 == 0 else "ODD"
    part = "T2A" if settings == 2 else "T2B"
    if args.form:
        suffix = "SQ" if args.form == "squared" else "ROOT"
        return (f"{part}_{parity}_{suffix}",)
    return (f"{part}_{parity}_SQ", f"{part}_{parity}_ROOT")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        _check_out_path(cfg.out)
        return _COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NoCrossingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CROSSING
    except SteeringToolError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
