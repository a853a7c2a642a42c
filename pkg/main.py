import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

from commands import audit, discharge, hom, kneser, params, pipeline
from internal.utils.config import get_settings

logger = logging.getLogger(__name__)

# Load environment variables
load_dotenv()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crlab",
        description="Kneser-coloring lab: exact parameters, homomorphism search, reductions and audits",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    params.register(subparsers)
    hom.register(subparsers)
    pipeline.register(subparsers)
    audit.register(subparsers)
    discharge.register(subparsers)
    kneser.register(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand.

    Returns:
        int: 0 on success, 1 when an audited claim is violated (audit
        subcommands report violations as their result and still return 0),
        2 on input errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2

    try:
        if args.command == "mad":
            return params.mad_command(args)
        elif args.command == "oddgirth":
            return params.oddgirth_command(args)
        elif args.command == "classify":
            return params.classify_command(args)
        elif args.command == "hom":
            return hom.hom_command(args)
        elif args.command == "conjecture":
            return hom.conjecture_command(args)
        elif args.command == "pipeline":
            return pipeline.pipeline_command(args)
        elif args.command == "experiment":
            return pipeline.experiment_command(args)
        elif args.command == "audit-embedding":
            return audit.audit_embedding_command(args)
        elif args.command == "audit-collapse":
            return audit.audit_collapse_command(args)
        elif args.command == "discharge":
            return discharge.discharge_command(args)
        elif args.command == "kneser":
            return kneser.kneser_command(args)
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"crlab {args.command}: {e}", file=sys.stderr)
        return 2
    return 2


def run() -> None:
    try:
        logging.basicConfig(
            level=get_settings().log_level,
            format="%(asctime)s %(levelname)s %(name)s: %(message)s",
            stream=sys.stderr,
        )
    except ValueError as e:
        print(f"crlab: bad configuration: {e}", file=sys.stderr)
        sys.exit(2)
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    run()
