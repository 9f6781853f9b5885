"""
``qc`` command-line interface.

Reports go to stdout, logs and audit records to stderr.  Exit codes: 0 every
check passed, 1 some check failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from qcheck import init_runtime
from qcheck.algebra.congruence import LEMMA_IDS
from qcheck.algebra.exactalg import poly_to_json
from qcheck.algebra.qobjects import cyclotomic, q_binomial
from qcheck.cli.report import OUTPUT_FORMATS, format_report
from qcheck.cli.suite import EXIT_OK, EXIT_USAGE, SuiteConfig, run_suite, suite_config_from_json
from qcheck.core.config import Config
from qcheck.core.errors import UsageError
from qcheck.services import numeric, wzengine

logger = logging.getLogger(__name__)


class IntListAction(argparse.Action):
    """Collects integers given as `3 5 7`, `3,5,7` or a mix of both."""

    def __call__(self, parser, namespace, values, option_string=None):
        items = []
        for value in values:
            for part in value.split(","):
                if not part.strip():
                    continue
                try:
                    items.append(int(part))
                except ValueError:
                    parser.error(f"argument {option_string}: invalid int value: {part!r}")
        if not items:
            parser.error(f"argument {option_string}: expected at least one integer")
        setattr(namespace, self.dest, items)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=OUTPUT_FORMATS, default=None, dest="output_format",
                   help="Report format (default: json_lines).")
    p.add_argument("--fail-fast", action="store_true", dest="fail_fast",
                   help="Stop at the first failing check.")
    p.add_argument("--parallelism", type=int, default=None,
                   help="Worker processes, 0 = one per CPU (default: QC_PARALLELISM, else 1 per CPU).")
    p.add_argument("--unsafe-extended", action="store_true", dest="unsafe_extended",
                   help="Lift the documented suite bounds.")


def _add_family(sub, name: str, family: str, ids, help_text: str, **options) -> argparse.ArgumentParser:
    p = sub.add_parser(name, help=help_text, description=help_text)
    if ids:
        p.add_argument("--id", choices=ids, default=None, help="Single variant (default: all variants).")
    if options.get("n_list"):
        flag = options["n_list"]
        p.add_argument(flag, action=IntListAction, nargs="+", default=None, dest="n_list",
                       help="Odd instances to check, e.g. 3,5,7.")
    if options.get("n_max"):
        p.add_argument("--n-max", type=int, default=None, dest="n_max", help="Largest instance index.")
    if options.get("m_max"):
        p.add_argument("--m-max", type=int, default=None, dest="m_max", help="Largest number of summed terms.")
    if options.get("k_range"):
        p.add_argument("--k-min", type=int, default=None, dest="k_min")
        p.add_argument("--k-max", type=int, default=None, dest="k_max")
    if options.get("primes"):
        p.add_argument("--p", action=IntListAction, nargs="+", default=None, dest="primes",
                       help="Primes to check, e.g. 5,7,11.")
    if options.get("r"):
        p.add_argument("--r", type=int, default=None, help="Prime-power exponent for the *_pr variants.")
    _add_common(p)
    p.set_defaults(handler=_run_family, family=family)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qc",
        description="Exact verification of q-supercongruences and their q-WZ proofs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cyclotomic", help="Print the n-th cyclotomic polynomial.")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_run_cyclotomic)

    p = sub.add_parser("qbinom", help="Print the Gaussian binomial [n choose k].")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(handler=_run_qbinom)

    verify = sub.add_parser("verify", help="Symbolic checks.").add_subparsers(dest="target", required=True)
    _add_family(verify, "lemma", "lemma", LEMMA_IDS, "Auxiliary congruences and identities.", n_list="--n-list")
    _add_family(verify, "wz", "wz", None, "The q-WZ pair identity.", n_max=True, k_range=True)
    _add_family(verify, "telescope", "telescope", ("step", "span"), "Telescoping over n.",
                m_max=True, k_range=True)
    _add_family(verify, "theorem", "theorem", wzengine.THEOREM_IDS, "The five q-supercongruences.",
                n_list="--n-list")
    _add_family(verify, "boundary", "boundary", wzengine.BOUNDARY_IDS, "Boundary congruences for G(m,k).",
                n_list="--m-list")
    _add_family(verify, "form", "form", wzengine.BOUNDARY_IDS, "Closed forms of G(m,k).", n_list="--m-list")
    _add_family(verify, "reindex", "reindex", wzengine.REINDEX_IDS, "Sums of F against theorem sums.",
                n_list="--m-list")
    _add_family(verify, "vanishing", "vanishing", None, "The k=m summand vanishes mod [m]^4.",
                n_list="--m-list")
    _add_family(verify, "combination", "combination", wzengine.COMBINATION_IDS,
                "Sums of F(n,+-1) against the sum of F(n,0).", n_list="--m-list")

    check = sub.add_parser("check", help="Numeric and conjecture checks.")
    check = check.add_subparsers(dest="target", required=True)
    _add_family(check, "super", "super", numeric.SUPERCONGRUENCE_IDS, "Classical supercongruences mod p^r.",
                primes=True, r=True)
    _add_family(check, "divisibility", "divisibility", numeric.DIVISIBILITY_IDS,
                "Binomial divisibility claims.", n_max=True)
    _add_family(check, "conjecture", "conjecture", None, "The Laurent-polynomial conjecture.", n_max=True)
    _add_family(check, "bridge", "bridge", numeric.BRIDGE_IDS, "q -> 1 limits of q-summands.", n_max=True)
    _add_family(check, "agreement", "agreement", None, "Half and full truncations agree mod p^3.", primes=True)

    p = sub.add_parser("suite", help="Run a suite of checks.")
    p.add_argument("--config", type=str, default=None, help="JSON file mirroring SuiteConfig (default: all).")
    p.add_argument("--checks", nargs="+", default=None, help="Check ids or families, overriding the config.")
    _add_common(p)
    p.set_defaults(handler=_run_suite_command)
    return parser


def _parallelism(flag: Optional[int], from_file: int) -> int:
    if flag is not None:
        return flag
    from_env = Config.parallelism_from_env()
    if from_env is not None:
        return from_env
    return from_file


def _execute(config: SuiteConfig, args) -> int:
    if args.output_format:
        config.output_format = args.output_format
    config.fail_fast = config.fail_fast or args.fail_fast
    config.unsafe_extended = config.unsafe_extended or args.unsafe_extended
    config.parallelism = _parallelism(args.parallelism, config.parallelism)

    reports, exit_code = run_suite(config)
    sys.stdout.write(format_report(reports, config.output_format))
    return exit_code


def _run_family(args) -> int:
    selected = [f"{args.family}.{args.id}" if getattr(args, "id", None) else args.family]
    primes = getattr(args, "primes", None)
    r = getattr(args, "r", None)
    prime_powers = None
    if args.family == "super":
        if r is not None and args.id and not args.id.endswith("_pr"):
            raise UsageError(f"--r only applies to the *_pr variants, not {args.id}")
        if r is not None or primes is not None:
            exponent = Config.DEFAULT_PRIME_POWER_EXPONENT if r is None else r
            pr_primes = primes or [p for p, _ in Config.DEFAULT_PRIME_POWERS]
            prime_powers = [(p, exponent) for p in pr_primes]

    k_range = None
    if getattr(args, "k_min", None) is not None or getattr(args, "k_max", None) is not None:
        defaults = Config.DEFAULT_WZ_K_RANGE if args.family == "wz" else Config.DEFAULT_TELESCOPE_K_RANGE
        k_lo = defaults[0] if args.k_min is None else args.k_min
        k_hi = defaults[1] if args.k_max is None else args.k_max
        k_range = (k_lo, k_hi)

    config = SuiteConfig(
        selected_checks=selected,
        n_max=getattr(args, "n_max", None),
        m_max=getattr(args, "m_max", None),
        k_range=k_range,
        n_list=getattr(args, "n_list", None),
        primes=primes,
        prime_powers=prime_powers,
    )
    return _execute(config, args)


def _run_suite_command(args) -> int:
    if args.config:
        try:
            raw = Path(args.config).read_text(encoding="utf-8")
        except OSError as e:
            raise UsageError(f"cannot read suite config {args.config}: {e}") from e
        config = suite_config_from_json(raw)
    else:
        config = SuiteConfig()
    if args.checks:
        config.selected_checks = args.checks
    return _execute(config, args)


def _run_cyclotomic(args) -> int:
    print(json.dumps({"n": args.n, "poly": poly_to_json(cyclotomic(args.n))}, sort_keys=True))
    return EXIT_OK


def _run_qbinom(args) -> int:
    if args.n < 0:
        raise UsageError(f"qbinom needs n >= 0, got {args.n}")
    poly = poly_to_json(q_binomial(args.n, args.k))
    print(json.dumps({"n": args.n, "k": args.k, "poly": poly}, sort_keys=True))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    init_runtime()
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as e:
        logger.error(str(e))
        print(f"qc: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
