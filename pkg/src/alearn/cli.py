"""``alearn`` command line: run, sweep and report."""
import argparse
import logging
import sys

from .errors import AlearnError, ConfigError, FormatError
from .experiment.config import load_config, with_overrides
from .experiment.runner import SWEEP_AXES, report, run_scenario, sweep

EXIT_CONFIG = 2
EXIT_IO = 3


def _seed_list(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="alearn", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress per (heuristic, seed)")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p):
        p.add_argument("--config", required=True, help="scenario TOML file")
        p.add_argument("--seed-override", type=_seed_list, metavar="SEEDS",
                       help="comma-separated seeds replacing the config's list")
        p.add_argument("--output-dir", help="directory for results (overrides output_dir)")

    run = sub.add_parser("run", help="run one scenario")
    scenario_args(run)
    sw = sub.add_parser("sweep", help="run a scenario once per value of one parameter")
    scenario_args(sw)
    sw.add_argument("--axis", required=True, choices=sorted(SWEEP_AXES))
    sw.add_argument("--values", required=True, help="comma-separated axis values")
    rep = sub.add_parser("report", help="redraw SVG charts from results.csv")
    rep.add_argument("--dir", required=True, help="directory containing results.csv")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if args.command == "report":
            for path in report(args.dir):
                print(path)
            return 0
        cfg = with_overrides(load_config(args.config), args.seed_override, args.output_dir)
        if args.command == "run":
            rows = run_scenario(cfg)
            print(f"{len(rows)} result rows written to {cfg.output_dir}")
        else:
            print(sweep(cfg, args.axis, args.values))
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, FormatError) as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AlearnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
