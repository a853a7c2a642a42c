import argparse
import logging

from internal.handlers.pipeline import PipelineHandler
from internal.repository.corpus import CorpusRepository
from internal.utils.arguments import add_pipeline_arguments, pipeline_config

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    pipeline = subparsers.add_parser("pipeline", help="reduce, color the base, lift back; one JSON report per graph")
    pipeline.add_argument("--in", dest="input", required=True, help="graph6 file ('-' for stdin)")
    pipeline.add_argument("--out", default=None, help="write JSON here instead of stdout")
    add_pipeline_arguments(pipeline)

    experiment = subparsers.add_parser("experiment", help="pipeline over seeded random constrained graphs, CSV summary")
    experiment.add_argument("--count", type=int, required=True)
    experiment.add_argument("--n", type=int, required=True, help="vertices per graph")
    experiment.add_argument("--seed", type=int, default=0)
    experiment.add_argument("--threads", type=int, default=None, help="worker processes (default CRLAB_THREADS)")
    experiment.add_argument("--no-timing", action="store_true", help="write 0 in the millis column")
    experiment.add_argument("--out", default=None, help="CSV path (default stdout)")
    add_pipeline_arguments(experiment)


def pipeline_command(args: argparse.Namespace) -> int:
    cfg = pipeline_config(args)
    reports = [PipelineHandler.run_pipeline(g, cfg) for g in CorpusRepository.read_graphs(args.input)]
    CorpusRepository.write_json(args.out, [report.to_dict() for report in reports])
    violations = sum(len(report.claim_violations) for report in reports)
    if violations:
        logger.warning(f"{violations} audited claim violations across {len(reports)} graphs")
        return 1
    return 0


def experiment_command(args: argparse.Namespace) -> int:
    cfg = pipeline_config(args, timing=not args.no_timing)
    table = PipelineHandler.run_experiment(args.count, args.n, cfg, args.seed, threads=args.threads)
    CorpusRepository.write_csv(args.out, table)
    return 1 if table["claimViolations"].sum() > 0 else 0
