"""Command-line interface for the experiment harness."""
import argparse
import sys
from pathlib import Path

from .check_dependencies import check_dependencies
from .config import ConfigError, build_config, get_output_dir, load_config_file
from .experiments import EXPERIMENTS, run_named
from .persistence import digest_outputs


def _list() -> int:
    for name, fn in EXPERIMENTS.items():
        summary = (fn.__doc__ or "").strip().splitlines()[0] if fn.__doc__ else ""
        print(f"{name:20s} {summary}")
    return 0


def _print_summary(reports) -> bool:
    ok = True
    print()
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"   {status:4s}  {r.name}  ({len(r.assertions)} assertions)")
        for a in r.failures:
            print(f"         - {a.name}: {a.message}")
        if r.error:
            print(f"         - aborted: {r.error}")
        ok &= r.passed
    return ok


def main(argv=None):
    """CLI entry point."""
    parser = argparse.ArgumentParser(
        description="Simulate the logarithmic fractional Schroedinger equation and check its estimates"
    )
    parser.add_argument(
        "command",
        choices=["list", "run", "check"],
        help="Command to execute"
    )
    parser.add_argument(
        "target",
        nargs="?",
        help="Experiment name or 'all' (run only)"
    )
    parser.add_argument(
        "--config",
        type=Path,
        help="JSON config file overriding the experiment defaults"
    )
    parser.add_argument(
        "--out", "--output",
        dest="output_dir",
        type=Path,
        help="Output directory (default: LOGFRAC_OUTPUT_DIR or ./output)"
    )
    parser.add_argument(
        "--seed",
        type=int,
        help="Random seed (default: LOGFRAC_SEED or 20240607)"
    )
    parser.add_argument(
        "--pdf",
        action="store_true",
        help="Also render each report as a PDF (requires reportlab)"
    )

    args = parser.parse_args(argv)

    if args.command == "list":
        return _list()

    try:
        if args.command == "run":
            if not args.target:
                parser.error("run needs an experiment name or 'all'")
            names = list(EXPERIMENTS) if args.target == "all" else [args.target]
            overrides = load_config_file(args.config) if args.config else None
            if overrides and args.target != "all":
                build_config(args.target, overrides)  # validate before running anything
            reports = run_named(names, overrides, output_dir=args.output_dir, seed=args.seed, pdf=args.pdf)
        else:
            all_ok, issues = check_dependencies()
            for issue in issues:
                print(f"[WARN] {issue}")
            if not all_ok:
                print("❌ Error: required dependencies are missing")
                return 1
            reports = run_named(list(EXPERIMENTS), output_dir=args.output_dir, seed=args.seed, pdf=args.pdf)
            out = args.output_dir or get_output_dir()
            for path, digest in digest_outputs(out).items():
                print(f"[INFO] sha256 {digest}  {path}")
    except ConfigError as e:
        print(f"❌ Error: {e}")
        return 1

    if _print_summary(reports):
        print("✅ All assertions passed")
        return 0
    print("❌ Error: some assertions failed")
    return 1


if __name__ == "__main__":
    sys.exit(main())
