"""Command-line entry point: ``hqs run | scenario | validate | esd``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from ..entanglement import detect_esd
from ..errors import ConfigError, DimensionMismatchError, InvalidTruncationError, NumericalError
from .config import load_config
from .runner import VALIDATION_TOL, run
from .scenarios import SCENARIOS, run_scenario
from .validation import validate_all

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hqs", description="Entanglement dynamics of coupled qubit-oscillator pairs.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evolve one configuration and write a CSV")
    r.add_argument("--config", help="YAML configuration file (defaults apply when omitted)")
    r.add_argument("--out", help="CSV path; overrides output.path")

    s = sub.add_parser("scenario", help="regenerate the data for one figure")
    s.add_argument("name", choices=sorted(SCENARIOS))
    s.add_argument("--out-dir", required=True)

    v = sub.add_parser("validate", help="closed forms against exact propagation")
    v.add_argument("--strict", action="store_true", help="also fail on typeset-form reference cases")
    v.add_argument("--draws", type=int, default=1, help="random mixing angles per case")
    v.add_argument("--seed", type=int, default=0)

    e = sub.add_parser("esd", help="print sudden-death intervals for one configuration")
    e.add_argument("--config")
    return p


def _esd_table(table) -> str:
    rows = ["measure    t_esd                   t_esb                   duration"]
    for col in ("C_qq", "E_oo"):
        rep = detect_esd(table.columns["tau"], table.columns[col])
        if not rep.has_esd:
            rows.append(f"{col:10s} none")
        for a, b in rep.intervals:
            rows.append(f"{col:10s} {a:<23.16e} {b:<23.16e} {b - a:.16e}")
    return "\n".join(rows)


def main(argv: Sequence[str] | None = None) -> int:
    args, extra = _parser().parse_known_args(argv)
    try:
        if args.command in ("run", "esd"):
            overrides = list(extra)
            if getattr(args, "out", None):
                overrides += ["--output.path", args.out]
            config = load_config(args.config, overrides)
            if args.command == "esd":
                print(_esd_table(run(config, write=False)))
                return EXIT_OK
            table = run(config)
            target = config.output.path or "<not written>"
            print(f"{config.label}: {table.n_rows} rows -> {target}")
            if table.max_residual is not None:
                print(f"max |C_qq - {table.metadata['oracle']}| = {table.max_residual:.3e}")
                if table.max_residual > VALIDATION_TOL:
                    return EXIT_VALIDATION
            elif config.validation:
                print("no closed form applies to this configuration; residual column omitted")
            return EXIT_OK
        if extra:
            raise ConfigError(f"unrecognized arguments: {' '.join(extra)}")
        if args.command == "scenario":
            for cfg, table, path in run_scenario(args.name, args.out_dir):
                print(f"{cfg.label}: {table.n_rows} rows -> {path}")
            return EXIT_OK
        report = validate_all(draws=args.draws, seed=args.seed)
        print("\n".join(report.lines()))
        ok = report.ok(strict=args.strict)
        print("validation passed" if ok else "validation FAILED")
        return EXIT_OK if ok else EXIT_VALIDATION
    except (ConfigError, DimensionMismatchError, InvalidTruncationError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
