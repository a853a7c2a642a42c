import argparse
import logging

from internal.custom_types.search import SearchStatus
from internal.handlers.hom_search import HomSearchHandler
from internal.repository.corpus import CorpusRepository
from internal.utils.arguments import budget, parse_target

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    hom = subparsers.add_parser("hom", help="search for a homomorphism into a target graph")
    hom.add_argument("--in", dest="input", required=True, help="graph6 file ('-' for stdin)")
    hom.add_argument("--target", required=True, help="'kneser:n,k' or 'graph6:<string>'")
    hom.add_argument("--budget", type=budget, default=None, help="node budget, e.g. 1e7")
    hom.add_argument("--out", default=None, help="write JSON here instead of stdout")

    conjecture = subparsers.add_parser("conjecture", help="check the premises at level k and search G -> K(2k+1,k)")
    conjecture.add_argument("--in", dest="input", required=True, help="graph6 file ('-' for stdin)")
    conjecture.add_argument("--k", type=int, default=2)
    conjecture.add_argument("--budget", type=budget, default=None, help="node budget, e.g. 1e7")
    conjecture.add_argument("--out", default=None, help="write JSON here instead of stdout")


def hom_command(args: argparse.Namespace) -> int:
    target, name = parse_target(args.target)
    outcomes = [
        HomSearchHandler.find_hom(g, target, args.budget, target_name=name).to_dict()
        for g in CorpusRepository.read_graphs(args.input)
    ]
    CorpusRepository.write_json(args.out, outcomes[0] if len(outcomes) == 1 else outcomes)
    return 0


def conjecture_command(args: argparse.Namespace) -> int:
    """Exit 1 when some premise-passing graph is certified to have no coloring."""
    reports = [
        HomSearchHandler.conjecture_instance(g, args.k, args.budget)
        for g in CorpusRepository.read_graphs(args.input)
    ]
    CorpusRepository.write_json(args.out, [report.to_dict() for report in reports])
    refuted = [
        report for report in reports
        if report.outcome is not None
        and report.outcome.status in (SearchStatus.NONE_EXHAUSTIVE, SearchStatus.REFUTED)
    ]
    if refuted:
        logger.warning(f"{len(refuted)} premise-passing graphs have no homomorphism into K({2 * args.k + 1},{args.k})")
        return 1
    return 0
