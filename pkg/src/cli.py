"""mixlab command-line entry point"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .commands.commands import COMMANDS_REGISTRY, CONDITIONS
from .config import Config
from .groups.core import Budget, BudgetExceededError, InternalConsistencyError, InvalidInputError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_INTERNAL = 3

LITERAL_HELP = """\
element literals:
  Z, Z/n                 3
  Z^d                    1,0   or  (1,0)
  semidirect A⋊K         ((1,0),2)          A-part then K-part
  wreath Z/2 ≀ Z         ({0:1,3:1},1)      support map {point: value}, shift
  free product Z∗Z       a^2 b^-1           'e' is the identity
sets (--set, --reps) separate elements with ';', e.g. "b;b^-1".
algebra elements (--x, --y) are ';'-separated terms [coefficient*]element,
  e.g. "2*b;-1/2*a b" or "i*((1,0),0)".
On semidirect triples a --set that is not a list of G-literals is read as a
set of A-literals: check ss then searches h with E ∩ α_h(E) = ∅ and check st
reports the stabilizer of the single given a.
"""


def make_budget(radius: int, element_cap: int) -> Budget:
    """
    Raises:
        InvalidInputError: If radius or element cap is not positive
    """
    try:
        return Budget(radius=radius, element_cap=element_cap)
    except ValidationError as e:
        raise InvalidInputError(f"Invalid budget (radius={radius}, element cap={element_cap}): {str(e)}")


def build_parser(config: Config) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixlab",
        description="Certificate-producing mixing checks for group triples H < K < G",
        epilog=LITERAL_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    def with_budget(sub: argparse.ArgumentParser, instance: bool = True) -> argparse.ArgumentParser:
        if instance:
            sub.add_argument("--instance", required=True, help="Built-in instance id (see 'instances')")
        sub.add_argument("--radius", type=int, default=config.DEFAULT_RADIUS, help="Word-length radius")
        sub.add_argument(
            "--max-elements",
            type=int,
            default=config.MAX_ELEMENTS,
            help="Element cap for a single enumeration (env MIXLAB_MAX_ELEMENTS)",
        )
        return sub

    subparsers.add_parser("instances", help="List built-in instances")

    check = with_budget(subparsers.add_parser("check", help="Check a condition", epilog=LITERAL_HELP,
                                              formatter_class=argparse.RawDescriptionHelpFormatter))
    check.add_argument("condition", choices=CONDITIONS)
    check.add_argument("--set", help="Finite set F (or E ⊆ A*)")
    check.add_argument("--g", help="Element g (wss; st with --h)")
    check.add_argument("--h", help="Element h for E(g,h)")

    qn = with_budget(subparsers.add_parser("qn", help="Quasi-normalizer membership"))
    qn.add_argument("--g", required=True)

    orbit = with_budget(subparsers.add_parser("orbit", help="Coset and action orbits"))
    orbit.add_argument("--g", help="Coset gH to follow")
    orbit.add_argument("--a", help="Element of A to follow under α_H")
    orbit.add_argument("--reps", help="Coset representatives to separate")

    decay = with_budget(subparsers.add_parser("decay", help="Decay profile over ball_H"))
    decay.add_argument("--x", required=True)
    decay.add_argument("--y", required=True)
    decay.add_argument("--tsv", help="Also write the profile as TSV")

    counterexample = with_budget(subparsers.add_parser("counterexample", help="Finite-orbit counterexample"))
    counterexample.add_argument("--a0", required=True, help="Element of A*")

    with_budget(subparsers.add_parser("corollary", help="Normalizer and (SS) hypotheses"))

    verify = subparsers.add_parser("verify", help="Replay the certificates of a report")
    verify.add_argument("report")

    repro = with_budget(subparsers.add_parser("repro", help="Run the reproduction suite"), instance=False)
    repro.add_argument("--out", default="repro-out", help="Target directory")

    return parser


def _emit(payload: str) -> None:
    sys.stdout.write(payload)
    sys.stdout.flush()


def _error(message: str, status: str) -> None:
    _emit(json.dumps({"error": message, "status": status}, ensure_ascii=False) + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the process exit status"""
    try:
        config = Config()
        config.validate()
    except ValueError as e:
        _error(str(e), "invalid_config")
        return EXIT_INVALID_INPUT

    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr)

    parser = build_parser(config)
    args = vars(parser.parse_args(argv))
    command = args.pop("command")
    handler = COMMANDS_REGISTRY[command]

    try:
        if "radius" in args:
            args["budget"] = make_budget(args.pop("radius"), args.pop("max_elements"))
        logger.info(f"Running {command} {args.get('condition') or ''}".rstrip())
        result = handler(**args)

        if command == "verify":
            _emit(json.dumps(result) + "\n")
        else:
            _emit(result.body_json())
            logger.info(f"✓ {command} finished in {result.timing.get('seconds', 0.0):.3f}s")
            if command == "repro" and not result.outcome["all_valid"]:
                logger.error("A report produced by the reproduction suite failed verification")
                return EXIT_INTERNAL
        return EXIT_OK

    except InternalConsistencyError as e:
        logger.error(f"Internal consistency violation: {str(e)}", exc_info=True)
        _error(str(e), "internal_consistency")
        return EXIT_INTERNAL
    except BudgetExceededError as e:
        logger.warning(str(e))
        _error(str(e), "budget_exceeded")
        return EXIT_INVALID_INPUT
    except InvalidInputError as e:
        logger.warning(f"Invalid input: {str(e)}")
        _error(str(e), "invalid_input")
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
