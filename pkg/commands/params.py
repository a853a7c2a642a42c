import argparse
import logging

from internal.handlers.parameters import ParameterHandler
from internal.repository.corpus import CorpusRepository
from internal.utils.rational import fraction_str

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    mad = subparsers.add_parser("mad", help="exact maximum average degree, one line per graph")
    mad.add_argument("--in", dest="input", required=True, help="graph6 file, one graph per line ('-' for stdin)")

    odd_girth = subparsers.add_parser("oddgirth", help="odd girth ('inf' if bipartite), one line per graph")
    odd_girth.add_argument("--in", dest="input", required=True, help="graph6 file ('-' for stdin)")

    classify = subparsers.add_parser("classify", help="degree/thread class A-D as JSON lines")
    classify.add_argument("--in", dest="input", required=True, help="graph6 file ('-' for stdin)")
    classify.add_argument("--k", type=int, default=2, help="level used for the default L")
    classify.add_argument("--L", type=int, default=None, help="thread threshold (default 3(2k+1))")


def mad_command(args: argparse.Namespace) -> int:
    for g in CorpusRepository.read_graphs(args.input):
        print(fraction_str(ParameterHandler.mad(g)))
    return 0


def oddgirth_command(args: argparse.Namespace) -> int:
    for g in CorpusRepository.read_graphs(args.input):
        print(ParameterHandler.odd_girth(g))
    return 0


def classify_command(args: argparse.Namespace) -> int:
    L = args.L if args.L is not None else 3 * (2 * args.k + 1)
    records = [ParameterHandler.classify(g, L).to_dict() for g in CorpusRepository.read_graphs(args.input)]
    CorpusRepository.write_json_lines(None, records)
    return 0
