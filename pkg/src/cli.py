"""Command-line front end: decide formulas, dump closure tables, saturate, check certificates."""

import argparse
import json
import logging
import sys
from pathlib import Path

from src import save_verdict_report, save_witness
from src.BiboundaryUniverse import BiboundaryUniverse
from src.Budget import Budget, BudgetExceeded
from src.ClosureContext import ClosureContext
from src.Derivation import Certificate, CertificateError
from src.FabricationRules import FabricationRules
from src.Formula import ParseError, parse, reflexive_rewrite
from src.IntervalDecider import check_interval_witness, decide_sat_hs, decide_valid_hs
from src.MinkowskiDecider import check_minkowski_witness, decide_sat_minkowski, decide_valid_minkowski
from src.Saturation import saturate
from src.Verdict import BUDGET, Witness

logger = logging.getLogger(__name__)

FRAMES = ("mink", "mink-reflexive", "hs", "hs-reflexive")
QUERIES = ("sat", "valid")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_REJECTED = 4

DECIDERS = {
    ("mink", "sat"): decide_sat_minkowski,
    ("mink", "valid"): decide_valid_minkowski,
    ("hs", "sat"): decide_sat_hs,
    ("hs", "valid"): decide_valid_hs,
}


class CliConfig:
    def __init__(
            self,
            frame: str = "mink",
            query: str = "valid",
            engine: str = "top-down",
            max_steps: int = 2_000_000,
            max_rounds: int = 1_000,
            max_enumerated: int = 5_000_000,
            max_kt_expansions: int = 2_000_000,
            witness_path: Path = None,
            report_path: Path = None,
            threads: int = 1,
            seed: int = None,
            verbosity: int = 0):
        """
        Settings of one command-line run.

        Parameters:
        - frame (str): mink, mink-reflexive, hs or hs-reflexive.
        - query (str): sat or valid.
        - engine (str): top-down or bottom-up.
        - max_steps (int): Fabrication-step budget.
        - max_rounds (int): Saturation-round budget.
        - max_enumerated (int): Enumeration budget.
        - max_kt_expansions (int): Tableau-expansion budget of the MCS pass.
        - witness_path (Path): Where to write the witness JSON, if anywhere.
        - report_path (Path): Where to write the text report, if anywhere.
        - threads (int): Worker threads for saturation.
        - seed (int): Iteration-order seed for saturation.
        - verbosity (int): Number of -v flags.
        """
        if frame not in FRAMES:
            raise ValueError(f"Frame must be one of {FRAMES}, got {frame!r}")
        if query not in QUERIES:
            raise ValueError(f"Query must be one of {QUERIES}, got {query!r}")
        self.frame = frame
        self.query = query
        self.engine = engine
        self.max_steps = max_steps
        self.max_rounds = max_rounds
        self.max_enumerated = max_enumerated
        self.max_kt_expansions = max_kt_expansions
        self.witness_path = witness_path
        self.report_path = report_path
        self.threads = threads
        self.seed = seed
        self.verbosity = verbosity

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        return cls(
            frame=getattr(args, "frame", "mink"),
            query=getattr(args, "query", "valid"),
            engine=getattr(args, "engine", "top-down"),
            max_steps=args.max_steps,
            max_rounds=args.max_rounds,
            max_enumerated=args.max_enumerated,
            max_kt_expansions=args.max_kt_expansions,
            witness_path=getattr(args, "witness", None),
            report_path=getattr(args, "report", None),
            threads=args.threads,
            seed=args.seed,
            verbosity=args.verbose,
        )

    @property
    def base_frame(self) -> str:
        return self.frame.split("-")[0]

    @property
    def reflexive(self) -> bool:
        return self.frame.endswith("-reflexive")

    def budget(self) -> Budget:
        return Budget(
            max_fabrication_steps=self.max_steps,
            max_saturation_rounds=self.max_rounds,
            max_enumerated=self.max_enumerated,
            max_kt_expansions=self.max_kt_expansions,
        )

    def __repr__(self):
        return f"CliConfig(frame={self.frame!r}, query={self.query!r}, engine={self.engine!r})"

    def __str__(self):
        return (
            f"CLI Configuration:\n"
            f"  Frame: {self.frame}\n"
            f"  Query: {self.query}\n"
            f"  Engine: {self.engine}\n"
            f"  Threads: {self.threads}\n"
        )


def parse_shapes(text: str) -> list:
    """'none,N,NS' -> [frozenset(), {'N'}, {'N', 'S'}]. '-' also names the empty shape."""
    shapes = []
    for token in text.split(","):
        token = token.strip()
        edges = frozenset() if token in ("-", "none") else frozenset(token)
        if not edges <= set("NSEW"):
            raise argparse.ArgumentTypeError(f"Shape {token!r} may only use N, S, E, W, 'none' or '-'")
        shapes.append(edges)
    return shapes


def _add_budget_flags(parser):
    parser.add_argument("--max-steps", type=int, default=2_000_000, help="Fabrication-step budget")
    parser.add_argument("--max-rounds", type=int, default=1_000, help="Saturation-round budget")
    parser.add_argument("--max-enumerated", type=int, default=5_000_000, help="Enumeration budget")
    parser.add_argument("--max-kt-expansions", type=int, default=2_000_000, help="Tableau-expansion budget")
    parser.add_argument("--threads", type=int, default=1, help="Worker threads for saturation")
    parser.add_argument("--seed", type=int, default=None, help="Iteration-order seed for saturation")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="More logging (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stdecide",
        description="Decide temporal formulas over 2D Minkowski spacetime and strict intervals.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    s = subparsers.add_parser("decide", help="Decide satisfiability or validity of a formula")
    s.add_argument("formula")
    s.add_argument("--frame", choices=FRAMES, default="mink")
    s.add_argument("--query", choices=QUERIES, default="valid")
    s.add_argument("--engine", choices=("top-down", "bottom-up"), default="top-down")
    s.add_argument("--witness", type=Path, default=None, help="Write the witness JSON here")
    s.add_argument("--report", type=Path, default=None, help="Write a text report here")
    _add_budget_flags(s)
    s.set_defaults(main=command_decide)

    s = subparsers.add_parser("mcs", help="Dump the MCS and cluster tables of a formula")
    s.add_argument("formula")
    s.add_argument("--reflexive", action="store_true", help="Apply the reflexive rewrite first")
    _add_budget_flags(s)
    s.set_defaults(main=command_mcs)

    s = subparsers.add_parser("fabricate", help="Saturate and dump the fabricated biboundaries")
    s.add_argument("formula")
    s.add_argument("--reflexive", action="store_true", help="Apply the reflexive rewrite first")
    s.add_argument("--max-trace-length", type=int, default=None, help="Longest bi-trace in the universe")
    s.add_argument("--shapes", type=parse_shapes, default=None, help="Allowed edge sets, e.g. 'none,N,NS'")
    _add_budget_flags(s)
    s.set_defaults(main=command_fabricate)

    s = subparsers.add_parser("check-cert", help="Check a certificate or witness file")
    s.add_argument("path", type=Path)
    _add_budget_flags(s)
    s.set_defaults(main=command_check_cert)
    return parser


def _context(args, config: CliConfig) -> ClosureContext:
    formula = parse(args.formula)
    if getattr(args, "reflexive", False):
        formula = reflexive_rewrite(formula)
    return ClosureContext(formula, config.budget())


def command_decide(args, config: CliConfig) -> int:
    formula = parse(args.formula)
    decide = DECIDERS[(config.base_frame, config.query)]
    verdict = decide(
        formula, config.reflexive,
        engine=config.engine, budget=config.budget(), threads=config.threads, order_seed=config.seed,
    )
    print(verdict.answer)
    if config.report_path is not None:
        save_verdict_report(verdict, config.report_path)
    if config.witness_path is not None and verdict.witness is not None:
        save_witness(verdict.witness, config.witness_path)
    return EXIT_BUDGET if verdict.answer == BUDGET else EXIT_OK


def command_mcs(args, config: CliConfig) -> int:
    print(_context(args, config).dump())
    return EXIT_OK


def command_fabricate(args, config: CliConfig) -> int:
    context = _context(args, config)
    universe = BiboundaryUniverse(context, shapes=args.shapes, max_trace_length=args.max_trace_length)
    rules = FabricationRules(context, universe)
    fabricated = saturate(rules, context.budget, config.threads, config.seed)
    for d in fabricated:
        print(f"{fabricated.derivation(d).rule}\t{d}")
    for name, value in fabricated.stats.items():
        print(f"# {name}: {value}")
    return EXIT_OK if fabricated.complete else EXIT_BUDGET


def command_check_cert(args, config: CliConfig) -> int:
    try:
        text = args.path.read_text(encoding="utf-8")
    except OSError as error:
        print(f"cannot read certificate: {error}", file=sys.stderr)
        return EXIT_USAGE
    try:
        data = json.loads(text)
        if isinstance(data, dict) and "quadrants" in data:
            witness = Witness.from_dict(data, config.budget())
            check = check_interval_witness if witness.certificate.frame == "hs" else check_minkowski_witness
            problem = check(witness)
        else:
            failure = Certificate.from_dict(data, config.budget()).check()
            problem = None if failure is None else f"derivation of {failure[0]} rejected at node path {list(failure[1])}"
    except (json.JSONDecodeError, CertificateError, KeyError, TypeError, ValueError) as error:
        problem = f"malformed certificate: {error}"
    if problem is not None:
        print(f"REJECTED: {problem}")
        return EXIT_REJECTED
    print("ACCEPTED")
    return EXIT_OK


def run(argv=None) -> int:
    """
    Execute one command line.

    Returns:
        int: 0 decided or accepted, 2 parse or usage error, 3 budget
        exceeded, 4 certificate rejected.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_request:
        return EXIT_USAGE if exit_request.code else EXIT_OK
    config = CliConfig.from_args(args)
    logging.basicConfig(
        level=max(logging.DEBUG, logging.WARNING - 10 * config.verbosity),
        format="%(levelname)s %(name)s: %(message)s",
    )
    logger.debug("%r", config)
    try:
        return args.main(args, config)
    except ParseError as error:
        print(f"parse error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as error:
        print(BUDGET)
        print(str(error), file=sys.stderr)
        return EXIT_BUDGET


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
