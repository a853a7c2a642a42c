import argparse
import logging

from internal.custom_types.kneser import KneserParams
from internal.handlers.kneser import KneserHandler
from internal.handlers.parameters import ParameterHandler
from internal.repository.corpus import CorpusRepository

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    kneser = subparsers.add_parser("kneser", help="build K(n,k) and report its size, degree and odd girth")
    kneser.add_argument("--n", type=int, required=True)
    kneser.add_argument("--k", type=int, required=True)
    kneser.add_argument("--labels", action="store_true", help="include the label -> subset table")
    kneser.add_argument("--graph6", default=None, help="also write the graph in graph6 to this path")
    kneser.add_argument("--out", default=None, help="write JSON here instead of stdout")


def kneser_command(args: argparse.Namespace) -> int:
    params = KneserParams(n=args.n, k=args.k)
    g, subsets = KneserHandler.kneser_graph(params)
    degrees = set(g.degrees())
    record = {
        "target": str(params),
        "vertices": g.n,
        "edges": g.edge_count(),
        "regular": len(degrees) == 1,
        "degree": degrees.pop() if len(degrees) == 1 else None,
        "oddGirth": ParameterHandler.odd_girth(g).to_dict(),
    }
    if args.labels:
        record["labels"] = [str(s) for s in subsets]
    if args.graph6:
        CorpusRepository.write_graphs(args.graph6, [g])
    CorpusRepository.write_json(args.out, record)
    return 0
