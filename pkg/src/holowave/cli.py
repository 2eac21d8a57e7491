"""Command-line entry point: ``holowave <experiment> [options]``.

Exit status is 0 when the experiment passes, 1 when a tolerance check
fails and 2 for usage, configuration or numerical errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import ConfigError, HolowaveError, NaNDetected
from .experiments import DEFAULT_CONFIGS, EXPERIMENTS, Report, load_config

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


def write_outputs(report: Report, out_dir: Path, deterministic: bool, config: dict) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = {"experiment": report.experiment, "passed": report.passed, "summary": report.summary, "config": config}
    json_path = out_dir / f"{report.experiment}.json"
    json_path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    written = [json_path]
    if report.columns:
        csv_path = out_dir / f"{report.experiment}.csv"
        with csv_path.open("w", newline="", encoding="utf-8") as fh:
            if not deterministic:
                fh.write(f"# generated {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n")
            writer = csv.writer(fh)
            writer.writerow(report.columns)
            for row in report.rows:
                writer.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
        written.append(csv_path)
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holowave",
        description="Run a verification experiment for deep-water waves with constant vorticity.",
    )
    parser.add_argument("experiment", choices=sorted(EXPERIMENTS), help="experiment to run")
    parser.add_argument("--config", metavar="PATH", help="YAML file merged over the built-in defaults")
    parser.add_argument("--out", metavar="DIR", help="output directory (default: ./results or the config's output)")
    parser.add_argument("--seed", type=int, help="override initial.seed")
    parser.add_argument("--deterministic", action="store_true", help="omit timestamps so outputs are byte-identical")
    parser.add_argument("--show-config", action="store_true", help="print the default YAML config and exit")
    parser.add_argument("--quiet", action="store_true", help="suppress the summary")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_ERROR

    if args.show_config:
        sys.stdout.write(DEFAULT_CONFIGS[args.experiment].lstrip())
        return EXIT_PASS

    try:
        cfg = load_config(args.config, args.experiment, seed=args.seed)
        with np.errstate(over="ignore", invalid="ignore"):
            report = EXPERIMENTS[args.experiment](cfg)
    except ConfigError as exc:
        print(f"holowave: config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (HolowaveError, NaNDetected, ValueError) as exc:
        print(f"holowave: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    out_dir = Path(args.out or cfg.output or "results")
    paths = write_outputs(report, out_dir, args.deterministic, cfg.raw)
    if not args.quiet:
        print("\n".join(report.lines()))
        print("wrote " + ", ".join(str(p) for p in paths))
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
