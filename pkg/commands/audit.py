import argparse
import logging

from internal.custom_types.graph import cycle_graph
from internal.custom_types.kneser import KneserParams
from internal.handlers.embedding import EmbeddingHandler
from internal.handlers.kneser import KneserHandler
from internal.handlers.reductions import ReductionHandler
from internal.repository.corpus import CorpusRepository
from internal.utils.arguments import budget, vertex_list

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    embedding = subparsers.add_parser(
        "audit-embedding", help="search for patterns embedding K(2j+1,j) into K(2k+3,k+1)"
    )
    embedding.add_argument("--j", type=int, required=True)
    embedding.add_argument("--k", type=int, required=True)
    embedding.add_argument("--budget", type=budget, default=None, help="node budget, e.g. 1e7")
    embedding.add_argument("--relaxed", action="store_true", help="allow patterns anywhere outside X")
    embedding.add_argument("--scheme", choices=["exhaustive", "pairing"], default="exhaustive")
    embedding.add_argument("--out", default=None, help="write JSON here instead of stdout")

    collapse = subparsers.add_parser("audit-collapse", help="collapse an induced path and audit the result")
    source = collapse.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="input", help="graph6 file; the first graph is used")
    source.add_argument("--cycle", type=int, help="use the cycle C_m on vertices 0..m-1")
    collapse.add_argument("--path", type=vertex_list, help="comma-separated path vertices (with --in)")
    collapse.add_argument("--length", type=int, help="collapse the path 0..length (with --cycle)")
    collapse.add_argument("--k", type=int, default=2, help="threshold level: the audit checks odd girth >= 2k+3")
    collapse.add_argument("--out", default=None, help="write JSON here instead of stdout")


def audit_embedding_command(args: argparse.Namespace) -> int:
    """Any conclusive or inconclusive certificate is a successful audit."""
    if args.scheme == "pairing":
        attempt = EmbeddingHandler.pairing_scheme_embedding(args.j, args.k)
    else:
        attempt = EmbeddingHandler.attempt_embedding(args.j, args.k, args.budget, relaxed=args.relaxed)
    source, _ = KneserHandler.kneser_graph(KneserParams.odd(args.j))
    target, _ = KneserHandler.kneser_graph(KneserParams(n=2 * args.k + 3, k=args.k + 1))
    obstruction = KneserHandler.refute_hom_by_odd_girth(source, target)
    record = attempt.to_dict()
    record["obstruction"] = obstruction.to_dict() if obstruction else None
    CorpusRepository.write_json(args.out, record)
    logger.info(f"Embedding audit ({args.j},{args.k}): {attempt.status.value}")
    return 0


def audit_collapse_command(args: argparse.Namespace) -> int:
    if args.cycle is not None:
        if args.length is None:
            raise ValueError("--cycle needs --length")
        g = cycle_graph(args.cycle)
        path = tuple(range(args.length + 1))
    else:
        if args.path is None:
            raise ValueError("--in needs --path")
        graphs = CorpusRepository.read_graphs(args.input)
        if not graphs:
            raise ValueError(f"No graph in {args.input}")
        g = graphs[0]
        path = args.path
    step = ReductionHandler.collapse_path(g, path, args.k)
    CorpusRepository.write_json(args.out, step.to_dict())
    return 0
