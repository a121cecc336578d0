"""CLI entry point for flipchains."""

import argparse
import csv
import json
import logging
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from .chains import (CHAINS, OBSERVABLES, build_kernel, make_chain, make_rng,
                     observables_for, simulate, start_state, trajectory)
from .checks import CheckContext, ReplantMeasureCheck, Verifier
from .config import Config
from .enumeration import space_for
from .errors import FlipChainsError
from .flip_paths import FAMILIES, PathAudit, audit_flip_paths, sample_trees
from .maps import PointedQuadrangulation, canonical_code, decode
from .schaeffer import (SignedTree, origin_pointed_inverse, phi, phi_inverse,
                        phi_origin_pointed)
from .spectral import gap_report, law_identity_check, scaling_slopes
from .trees import enumerate_trees, from_code

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SPACES = ("trees", "labelled", "quad", "quad-pointed", "signed")

# state space -> chain whose observables describe it
SPACE_CHAINS = {
    "trees": "translate",
    "labelled": "translate",
    "signed": "xtilde",
    "quad": "flip",
    "quad-pointed": "flip-pointed",
}


class StderrHandler(logging.StreamHandler):
    """Stream handler that writes to whatever ``sys.stderr`` is at emit time."""

    def __init__(self, level: int = logging.NOTSET):
        super().__init__()
        self.setLevel(level)

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """Configure logging.

    Records go to stderr; stdout carries only the command's data.

    Args:
        level: Log level string
        log_file: Optional log file path
    """
    log_level = getattr(logging, level.upper(), logging.INFO)

    handlers = [StderrHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    logging.basicConfig(
        level=log_level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def emit(data: Any, out=None):
    """Write JSON with a fixed key order so identical runs print identical bytes."""
    out = out or sys.stdout
    out.write(json.dumps(data, sort_keys=True, indent=2))
    out.write("\n")


def _number(x: float) -> str:
    return f"{x:g}"


def parse_signed(text: str, eps: Optional[int] = None) -> SignedTree:
    """Parse ``"<labelled tree code> <+|->"``; ``eps`` overrides or supplies the sign."""
    parts = text.split()
    if not parts or len(parts) > 2:
        raise ValueError(f"expected a labelled tree code and a sign, got {text!r}")
    if len(parts) == 2:
        if parts[1] not in ("+", "-"):
            raise ValueError(f"sign must be + or -, got {parts[1]!r}")
        sign = 1 if parts[1] == "+" else -1
    else:
        sign = 1
    return SignedTree(from_code(parts[0], 3), eps if eps is not None else sign)


def parse_state(chain_name: str, text: str, r: int):
    """Decode a start state given in the interchange format of ``chain_name``."""
    if chain_name in ("flip", "flip-pointed"):
        q = decode(text)
        if (chain_name == "flip-pointed") != isinstance(q, PointedQuadrangulation):
            raise ValueError(f"--start {text!r} does not match chain {chain_name}")
        return q
    if chain_name == "xtilde":
        return parse_signed(text)
    return from_code(text, r)


def _read_lines(source: str) -> List[str]:
    if source == "-":
        return [line.strip() for line in sys.stdin if line.strip()]
    return [source]


def cmd_enumerate(args: argparse.Namespace, config: Config) -> int:
    space = space_for(args.what, args.n, args.r, config.state_ceiling)
    report: Dict[str, Any] = {'what': args.what, 'n': args.n, 'count': len(space)}
    if args.what == "trees":
        report['r'] = args.r
    if args.codes:
        report['codes'] = list(space.codes)
    emit(report)
    return EXIT_OK


def cmd_convert(args: argparse.Namespace, config: Config) -> int:
    """Map codes through the Schaeffer bijection, one per line."""
    for line in _read_lines(args.code):
        if args.to == "quad":
            if args.origin:
                out = canonical_code(phi_origin_pointed(from_code(line.split()[0], 3)))
            else:
                out = canonical_code(phi(parse_signed(line, args.eps)))
        else:
            q = decode(line)
            if isinstance(q, PointedQuadrangulation):
                out = phi_inverse(q).code
            else:
                out = origin_pointed_inverse(q).code
        sys.stdout.write(out + "\n")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace, config: Config) -> int:
    chain = make_chain(args.chain, args.n, args.r)
    observables = args.observables or [o for o in config.get("simulation.observables", [])
                                       if o in observables_for(args.chain)]
    observables = observables or list(observables_for(args.chain))
    for name in observables:
        if name not in OBSERVABLES:
            raise ValueError(f"--observables: unknown observable {name!r}")
    s0 = parse_state(args.chain, args.start, args.r) if args.start else start_state(chain)
    seed = config.get("simulation.seed", 0)
    steps = config.get("simulation.steps", 10000)
    rng = make_rng(seed)

    if config.get("output_format", "json") == "csv":
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(["step", *observables, "state"])
        for k, state, values in trajectory(chain, s0, steps, rng, observables):
            if k % args.every == 0 or k == steps:
                writer.writerow([k, *(_number(v) for v in values), chain.code(state)])
        return EXIT_OK

    summary = simulate(chain, s0, steps, rng, observables, seed=seed, count_visits=args.visits)
    emit(summary.to_dict())
    return EXIT_OK


def cmd_gap(args: argparse.Namespace, config: Config) -> int:
    ceiling = config.state_ceiling
    threads = config.get("threads", 1)
    results = []
    for n in args.n:
        kernel = build_kernel(make_chain(args.chain, n, args.r), ceiling, threads)
        results.append(gap_report(kernel, ceiling, power=args.power,
                                  iterations=config.get("solver.power_iterations", 20000),
                                  seed=config.get("simulation.seed", 0)))
    report: Dict[str, Any] = {'chain': args.chain, 'gaps': [r.to_dict() for r in results]}
    if args.chain not in ("flip", "flip-pointed", "xtilde"):
        report['r'] = args.r
    if len(results) >= 2:
        # descriptive only; nothing is asserted about the exponent
        report['slopes'] = scaling_slopes([r.n for r in results], [r.gap for r in results])

    agreement = config.get("solver.agreement", 1e-8)
    if args.power and any(r.power_gap is not None and abs(r.power_gap - r.gap) > agreement
                          for r in results):
        logger.error("power iteration disagrees with the dense eigensolver")
        emit(report)
        return EXIT_FAILED
    emit(report)
    return EXIT_OK


def _chunks(items: Sequence, count: int) -> List[Sequence]:
    size = max(1, -(-len(items) // count))
    return [items[i:i + size] for i in range(0, len(items), size)]


def audit_parallel(n: int, trees: Sequence, threads: int,
                   families: Sequence[str] = FAMILIES) -> PathAudit:
    """Audit ``trees`` in chunks on a thread pool, merging in chunk order."""
    if threads <= 1:
        return audit_flip_paths(n, trees, families)
    audit = PathAudit(n)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        for part in executor.map(lambda chunk: audit_flip_paths(n, chunk, families),
                                 _chunks(trees, threads)):
            if not audit.paths:
                audit = part
            else:
                audit.merge(part)
    return audit


def cmd_verify_paths(args: argparse.Namespace, config: Config) -> int:
    if args.what == "replant":
        check = ReplantMeasureCheck({'n': args.n, 'r': args.r, 'audit_n': args.n})
        failures = check.run(CheckContext(ceiling=config.state_ceiling))
        emit({'what': 'replant', 'n': args.n, 'r': args.r, 'ok': not failures,
              'info': check.info, 'failures': [f.to_dict() for f in failures]})
        return EXIT_FAILED if failures else EXIT_OK

    if args.exhaustive:
        trees = list(enumerate_trees(args.n, 3))
    else:
        count = config.get("samples.count", 10000)
        seed = config.get("samples.seed", 0)
        trees = sample_trees(args.n, count, make_rng(seed))
    families = args.families or FAMILIES
    audit = audit_parallel(args.n, trees, config.get("threads", 1), families)
    report = audit.to_dict()
    report['trees'] = len(trees)
    report['mode'] = 'exhaustive' if args.exhaustive else 'sampled'
    emit(report)
    for label in audit.wrong_end:
        logger.error(f"wrong endpoint: {label}")
    for label in audit.too_long:
        logger.error(f"too long: {label}")
    return EXIT_OK if audit.ok else EXIT_FAILED


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    context = CheckContext(
        seed=config.get("samples.seed", 0),
        samples=config.get("samples.count", 10000),
        ceiling=config.state_ceiling,
        threads=config.get("threads", 1),
    )
    verifier = Verifier(config.get("checks", {}), context, args.checks)
    report = verifier.run()

    emit(Verifier.generate_report(report.results, timings=False))
    full = Verifier.generate_report(report.results)
    if args.report:
        report_path = Path(args.report)
        with open(report_path, 'w', encoding='utf-8') as f:
            json.dump(full, f, indent=2, sort_keys=True)
        logger.info(f"Report saved: {report_path}")

    summary = full['summary']
    logger.info("=" * 50)
    logger.info("Verification complete")
    logger.info(f"  checks: {summary['total']}")
    logger.info(f"  passed: {summary['passed']}")
    logger.info(f"  failed: {summary['failed']}")
    logger.info(f"  errors: {summary['errors']}")
    logger.info(f"  time: {summary['total_time_seconds']:.2f}s")
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_stats(args: argparse.Namespace, config: Config) -> int:
    """Exact observable histograms over a uniformly weighted state space."""
    space = space_for(args.what, args.n, args.r, config.state_ceiling)
    names = args.observables or list(observables_for(SPACE_CHAINS[args.what]))
    histograms = {}
    for name in names:
        if name not in OBSERVABLES:
            raise ValueError(f"--observables: unknown observable {name!r}")
        counts = Counter(OBSERVABLES[name](s) for s in space)
        histograms[name] = {_number(x): c for x, c in sorted(counts.items())}
    report: Dict[str, Any] = {'what': args.what, 'n': args.n, 'states': len(space),
                              'histograms': histograms}
    if args.law:
        if args.what not in ("quad", "quad-pointed"):
            raise ValueError("--law needs --what quad or quad-pointed")
        report['law'] = law_identity_check(args.n, config.state_ceiling).to_dict()
    emit(report)
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "convert": cmd_convert,
    "simulate": cmd_simulate,
    "gap": cmd_gap,
    "verify-paths": cmd_verify_paths,
    "verify": cmd_verify,
    "stats": cmd_stats,
}


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _colours(text: str) -> int:
    value = int(text)
    if value not in (1, 2, 3):
        raise argparse.ArgumentTypeError(f"must be 1, 2 or 3, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default="config",
                        help="Configuration directory (default: config)")
    common.add_argument("--ceiling", type=_positive,
                        help="Largest state space to enumerate")
    common.add_argument("--threads", type=_positive, help="Worker threads")
    common.add_argument("--log-level", type=str, choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Log level (default: from config, INFO)")
    common.add_argument("--log-file", type=str, help="Log file path")

    parser = argparse.ArgumentParser(
        prog="flipchains",
        description="Exact enumeration, simulation and spectral analysis of flip chains "
                    "on quadrangulations and their tree-side counterparts",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Count labelled trees and list them
  flipchains enumerate --what labelled --n 3 --codes

  # Tree to map and back
  echo "(+)(-) +" | flipchains convert --to quad - | flipchains convert --to tree -

  # Spectral gaps of the flip chain with log-log slopes
  flipchains gap --chain flip --n 1 2 3 --power

  # Replay every constructed flip path at n=3
  flipchains verify-paths --what flip --n 3 --exhaustive

  # Run selected checks and keep a timed report
  flipchains verify --checks cardinalities 7 --report report.json

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
        """
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="Count (and list) a state space")
    p.add_argument("--what", choices=SPACES, default="trees")
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--r", type=_colours, default=1)
    p.add_argument("--codes", action="store_true", help="Also list the state codes")

    p = sub.add_parser("convert", parents=[common], help="Convert between tree and map codes")
    p.add_argument("code", help="A code, or - to read one per line from stdin")
    p.add_argument("--to", choices=["quad", "tree"], required=True)
    p.add_argument("--eps", type=int, choices=[-1, 1], help="Sign for tree codes given without one")
    p.add_argument("--origin", action="store_true",
                   help="Use the origin-pointed bijection on non-negative trees")

    p = sub.add_parser("simulate", parents=[common], help="Run a chain and summarize observables")
    p.add_argument("--chain", choices=CHAINS, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--r", type=_colours, default=3)
    p.add_argument("--steps", type=_non_negative)
    p.add_argument("--seed", type=int)
    p.add_argument("--start", type=str, help="Start state code (default: q0 or a star)")
    p.add_argument("--observables", nargs="+", choices=sorted(OBSERVABLES))
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--every", type=_positive, default=1, help="CSV row stride")
    p.add_argument("--visits", action="store_true", help="Count visits per state")

    p = sub.add_parser("gap", parents=[common], help="Exact spectral gaps")
    p.add_argument("--chain", choices=CHAINS, required=True)
    p.add_argument("--n", type=_positive, nargs="+", required=True)
    p.add_argument("--r", type=_colours, default=3)
    p.add_argument("--power", action="store_true", help="Cross-check with power iteration")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("verify-paths", parents=[common], help="Replay constructed paths")
    p.add_argument("--what", choices=["flip", "replant"], required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--r", type=_colours, default=1)
    p.add_argument("--families", nargs="+", choices=FAMILIES)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--samples", type=_positive)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("verify", parents=[common], help="Run the verification checks")
    p.add_argument("--checks", nargs="+", help="Check names or ids (default: all enabled)")
    p.add_argument("--report", type=str, help="Write the full report (with timings) here")
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=_positive)

    p = sub.add_parser("stats", parents=[common], help="Exact observable histograms")
    p.add_argument("--what", choices=SPACES, required=True)
    p.add_argument("--n", type=_non_negative, required=True)
    p.add_argument("--r", type=_colours, default=3)
    p.add_argument("--observables", nargs="+", choices=sorted(OBSERVABLES))
    p.add_argument("--law", action="store_true", help="Add the far-set / ball law comparison")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the flipchains CLI."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = Config(args.config)
        if args.command in ("verify-paths", "verify") and args.seed is not None:
            config.set("samples.seed", args.seed)
        if args.command == "verify" and args.samples is not None:
            config.set("checks.flip_paths.samples", args.samples)
        config.update_from_args(args)
    except FlipChainsError as e:
        setup_logging("INFO", args.log_file)
        logger.error(f"--config: {e}")
        return EXIT_USAGE

    setup_logging(args.log_level or config.get("logging.level", "INFO"), args.log_file)

    try:
        return COMMANDS[args.command](args, config)
    except (FlipChainsError, ValueError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
