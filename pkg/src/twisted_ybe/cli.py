"""Command-line entry point: ``twisted-ybe check`` and ``twisted-ybe families list``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import CHECK_NAMES, GROUPS, config_from_mapping, parse_config
from .errors import ConfigError
from .rmatrix import KINDS
from .suite import run_suite

EXIT_CONFIG = 2


def _flag_mapping(args: argparse.Namespace) -> dict:
    doc: dict = {"group": args.group, "N": args.n, "q": args.q, "h": args.h,
                 "gauge": args.gauge, "tolerance": args.tol,
                 "momenta": {"seed": args.seed, "count": args.count}}
    if args.k is not None:
        doc["K"] = args.k
    if args.b0 == "beta":
        if not args.beta:
            raise ConfigError("b0.beta", "--b0 beta needs --beta values")
        doc["b0"] = {"beta": args.beta}
    else:
        doc["b0"] = "canonical"
    if args.checks:
        doc["checks"] = args.checks
    return doc


def _check(args: argparse.Namespace) -> int:
    try:
        if args.config:
            text = Path(args.config).read_text()
            cfg = parse_config(text)
        else:
            missing = [f for f in ("group", "n", "q", "h") if getattr(args, f) is None]
            if missing:
                raise ConfigError(missing[0], "required unless --config is given")
            cfg = config_from_mapping(_flag_mapping(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    report = run_suite(cfg)
    out = args.out or cfg.output
    if out:
        Path(out).write_text(report.to_json())
    if not args.quiet:
        print(report.table())
    return report.exit_code


def _families(args: argparse.Namespace) -> int:
    print("groups:   " + ", ".join(GROUPS))
    print("builders: " + ", ".join(KINDS))
    print("checks:   " + ", ".join(CHECK_NAMES))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twisted-ybe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="run a verification suite")
    check.add_argument("--config", help="YAML configuration file")
    check.add_argument("--group", choices=GROUPS)
    check.add_argument("--n", type=int)
    check.add_argument("--k", type=int, help="number of even indices (slq_super only)")
    check.add_argument("--q", help="deformation parameter, e.g. 2.0 or 0.6+0.3j")
    check.add_argument("--h", type=float)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--count", type=int, default=20)
    check.add_argument("--gauge", default="unitary")
    check.add_argument("--b0", choices=("canonical", "beta"), default="canonical")
    check.add_argument("--beta", nargs="+", help="beta values for --b0 beta")
    check.add_argument("--checks", nargs="+", help="subset of check names (default: all)")
    check.add_argument("--tol", type=float, default=1e-9)
    check.add_argument("--out", help="write the JSON report here")
    check.add_argument("--quiet", action="store_true", help="suppress the summary table")
    check.set_defaults(func=_check)

    fam = sub.add_parser("families", help="list builders and checks")
    fam.add_argument("action", choices=("list",))
    fam.set_defaults(func=_families)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
