import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

from internal.custom_types.errors import TargetMismatch
from internal.custom_types.graph import ClassLabel, Graph, GraphClass
from internal.custom_types.kneser import EmbeddingStatus, KneserParams
from internal.custom_types.pipeline import BaseColoring, ClaimViolation, PipelineConfig, PipelineReport
from internal.custom_types.reduction import ForbiddenKind, ReductionStep
from internal.custom_types.search import SearchOutcome, SearchStatus
from internal.handlers.discharging import DischargingHandler
from internal.handlers.embedding import EmbeddingHandler
from internal.handlers.generator import GeneratorHandler
from internal.handlers.graph6 import Graph6Handler
from internal.handlers.hom_search import HomSearchHandler
from internal.handlers.kneser import KneserHandler
from internal.handlers.parameters import ParameterHandler
from internal.handlers.reductions import ReductionHandler
from internal.utils.config import get_settings, load_rule_variant
from internal.utils.rational import fraction_str

logger = logging.getLogger(__name__)

EXPERIMENT_COLUMNS = [
    "graph6", "mad", "oddGirth", "class", "steps", "homFound", "claimViolations", "nodes", "millis",
]


def _max_degree_vertex(g: Graph) -> int:
    degrees = g.degrees()
    return degrees.index(max(degrees))


def _collapse_longest(g: Graph, level: int) -> Optional[ReductionStep]:
    path = ParameterHandler.longest_induced_path(g, g.n)
    if len(path) < 3:
        return None
    return ReductionHandler.collapse_path(g, path, level)


def _strategy_steps(g: Graph, graph_class: GraphClass, cfg: PipelineConfig) -> List[ReductionStep]:
    """The reduction(s) one pipeline iteration applies for the graph's class.

    A: the first F1 match, else the first F4 match.
    B: delete the smallest-label vertex of maximum degree.
    C: collapse a longest induced path.
    D: collapse a longest induced path, then delete a maximum-degree vertex.
    """
    level = cfg.reduction_level
    label = graph_class.label
    if label == ClassLabel.A:
        matches = ReductionHandler.detect_forbidden(
            g, level, cfg.thread_threshold, kinds={ForbiddenKind.F1, ForbiddenKind.F4}
        )
        for kind in (ForbiddenKind.F1, ForbiddenKind.F4):
            chosen = next((m for m in matches if m.kind == kind), None)
            if chosen is not None:
                return [ReductionHandler.apply_reduction(g, chosen, level)]
        return []
    if label == ClassLabel.B:
        return [ReductionHandler.delete_vertex_step(g, _max_degree_vertex(g), level)]

    collapse = _collapse_longest(g, level)
    if collapse is None:
        return []
    if label == ClassLabel.C or collapse.after.n == 0:
        return [collapse]
    after = collapse.after
    return [collapse, ReductionHandler.delete_vertex_step(after, _max_degree_vertex(after), level)]


def _violation_for(index: int, step: ReductionStep) -> Optional[ClaimViolation]:
    audit = step.audit
    if not audit.claim_violated:
        return None
    claims = {
        "madNotIncreased": audit.mad_not_increased,
        "oddGirthNotDecreased": audit.odd_girth_not_decreased,
        "levelThresholdKept": audit.level_threshold_kept,
    }
    failed = tuple(name for name, holds in claims.items() if not holds)
    detail = (
        f"{step.kind.value}: mad {fraction_str(audit.mad_before)} -> {fraction_str(audit.mad_after)}, "
        f"odd girth {audit.odd_girth_before} -> {audit.odd_girth_after}"
    )
    return ClaimViolation(step=index, claims=failed, detail=detail)


class PipelineHandler:
    @staticmethod
    def run_pipeline(g: Graph, cfg: PipelineConfig) -> PipelineReport:
        """Reduce, solve the base, lift back; fall back to a direct search when needed.

        Graphs failing the premises at level cfg.k are reported and skipped.
        A reduced graph that fell to a lower level is colored there and carried
        up through an embedding (see color_base).
        Every step is audited and every failed audit or lift is listed as a
        claim violation. When the lifted coloring is unavailable the original
        graph is searched directly, so the report always says whether a
        homomorphism into K(2k+1, k) exists within budget.
        """
        premises = HomSearchHandler.check_premises(g, cfg.k)
        L = cfg.thread_threshold
        report = PipelineReport(premises=premises, classification=ParameterHandler.classify(g, L))
        if not premises.passed:
            logger.info(f"Premises fail at k={cfg.k}; pipeline skipped")
            return report

        variant = load_rule_variant(cfg.rule_variant)
        settled = DischargingHandler.run_discharging(
            g, cfg.reduction_level, L, DischargingHandler.init_charges(g), variant
        )
        report.discharging = DischargingHandler.audit_charges(g, settled)

        max_steps = g.n if cfg.max_reduction_steps is None else cfg.max_reduction_steps
        current = g
        while current.n > cfg.base_size and len(report.steps) < max_steps:
            graph_class = report.classification if current is g else ParameterHandler.classify(current, L)
            new_steps = _strategy_steps(current, graph_class, cfg)
            if not new_steps:
                logger.info(f"No reduction applies to class {graph_class.label.value} at {current.n} vertices")
                break
            for step in new_steps:
                if len(report.steps) >= max_steps:
                    break
                violation = _violation_for(len(report.steps), step)
                if violation is not None:
                    report.claim_violations.append(violation)
                report.steps.append(step)
                current = step.after

        params = KneserParams.odd(cfg.k)
        target, _ = KneserHandler.kneser_graph(params)
        base = PipelineHandler.color_base(current, cfg, step=len(report.steps))
        report.base_outcome = base.outcome
        report.level_drop = base.level
        report.embedding = base.embedding
        if base.violation is not None:
            report.claim_violations.append(base.violation)

        if report.base_outcome.found:
            h = report.base_outcome.homomorphism
            for index in range(len(report.steps) - 1, -1, -1):
                outcome = ReductionHandler.lift_coloring(report.steps[index], h, params)
                report.lifts.append(outcome)
                if not outcome.lifted:
                    report.claim_violations.append(ClaimViolation(
                        step=index,
                        claims=("liftSucceeded",),
                        detail=f"{outcome.reason.value}: {outcome.detail}",
                    ))
                    h = None
                    break
                h = outcome.homomorphism
            report.final_hom = h

        if report.final_hom is None:
            logger.info("Lifted coloring unavailable; searching the original graph directly")
            report.fallback_outcome = HomSearchHandler.find_hom(g, target, cfg.node_budget, target_name=str(params))
            if report.fallback_outcome.found:
                report.final_hom = report.fallback_outcome.homomorphism

        if report.final_hom is not None and HomSearchHandler.verify_hom(g, target, report.final_hom):
            logger.error("Final coloring does not verify on the input graph")
            raise RuntimeError("Internal error: final coloring does not verify on the input graph")
        if report.claim_violations:
            logger.warning(f"{len(report.claim_violations)} audited claim violations")
        return report

    @staticmethod
    def fallen_level(g: Graph, k: int) -> Optional[int]:
        """Largest j in 2..k-1 whose premises g meets while missing those at k.

        Returns:
            Optional[int]: None when g still meets the premises at k or meets them at no lower level
        """
        premises = HomSearchHandler.check_premises(g, k)
        if premises.passed:
            return None
        for j in range(k - 1, 1, -1):
            if premises.mad < Fraction(2 * j + 1, j) and premises.odd_girth.at_least(2 * j + 1):
                return j
        return None

    @staticmethod
    def color_base(g: Graph, cfg: PipelineConfig, step: int = 0) -> BaseColoring:
        """Color the fully reduced graph into K(2k+1, k).

        A graph that fell to a lower level j is colored into K(2j+1, j) and
        carried up through an embedding K(2j+1, j) -> K(2k+1, k). When no
        embedding is verified, or the carried coloring does not verify, the
        failure becomes a claim violation and g is searched at level k directly.

        Args:
            g: The reduced graph
            cfg: Pipeline configuration
            step: Index recorded on a violation (the number of reduction steps)
        """
        params = KneserParams.odd(cfg.k)
        target, _ = KneserHandler.kneser_graph(params)
        j = PipelineHandler.fallen_level(g, cfg.k)
        base = BaseColoring(outcome=SearchOutcome(status=SearchStatus.NONE_EXHAUSTIVE), level=j)

        if j is not None:
            logger.info(f"Reduced graph fell to level {j}; trying the embedding into level {cfg.k}")
            low_params = KneserParams.odd(j)
            low_target, _ = KneserHandler.kneser_graph(low_params)
            attempt = EmbeddingHandler.attempt_embedding(j, cfg.k - 1, cfg.node_budget)
            base.embedding = attempt

            if attempt.status != EmbeddingStatus.VERIFIED:
                obstruction = KneserHandler.refute_hom_by_odd_girth(low_target, target)
                certificate = attempt.to_dict()
                certificate["obstruction"] = obstruction.to_dict() if obstruction else None
                base.violation = ClaimViolation(
                    step=step,
                    claims=("embeddingVerified",),
                    detail=f"{low_params} -> {params}: {attempt.status.value}",
                    certificate=certificate,
                )
            else:
                low = HomSearchHandler.find_hom(g, low_target, cfg.node_budget, target_name=str(low_params))
                if low.found:
                    try:
                        lifted = EmbeddingHandler.compose(
                            low.homomorphism, EmbeddingHandler.embedding_map(attempt), g, target
                        )
                        base.outcome = SearchOutcome(status=SearchStatus.FOUND, nodes=low.nodes, homomorphism=lifted)
                        return base
                    except TargetMismatch as e:
                        base.violation = ClaimViolation(
                            step=step,
                            claims=("embeddingLift",),
                            detail=f"{low_params} -> {params}: {str(e)}",
                        )

        if base.violation is not None:
            logger.warning(f"Level-{j} coloring not carried up: {base.violation.detail}")
        base.outcome = HomSearchHandler.find_hom(g, target, cfg.node_budget, target_name=str(params))
        return base

    @staticmethod
    def experiment_row(index: int, n: int, cfg: PipelineConfig, seed: int) -> Dict[str, Any]:
        """Generate one constrained graph, run the pipeline on it and summarize."""
        started = time.perf_counter()
        g = GeneratorHandler.gen_constrained(n, Fraction(2 * cfg.k + 1, cfg.k), 2 * cfg.k + 1, seed)
        report = PipelineHandler.run_pipeline(g, cfg)
        elapsed = round((time.perf_counter() - started) * 1000) if cfg.timing else 0
        logger.info(f"Experiment row {index}: n={n} found={report.hom_found}")
        return {
            "graph6": Graph6Handler.write_graph6(g),
            "mad": fraction_str(report.premises.mad),
            "oddGirth": str(report.premises.odd_girth),
            "class": report.classification.label.value,
            "steps": len(report.steps),
            "homFound": report.hom_found,
            "claimViolations": len(report.claim_violations),
            "nodes": report.nodes,
            "millis": elapsed,
        }

    @staticmethod
    def run_experiment(
        count: int,
        n: int,
        cfg: PipelineConfig,
        seed: int,
        threads: Optional[int] = None
    ) -> pd.DataFrame:
        """Run the pipeline on `count` seeded constrained graphs.

        Row seeds are drawn from one generator seeded with `seed`; rows keep
        generation order whatever the worker count.

        Args:
            count: Number of graphs (>= 1)
            n: Vertices per graph
            cfg: Pipeline configuration; its k fixes the generator bounds
            seed: Experiment seed
            threads: Worker processes (default: CRLAB_THREADS)

        Returns:
            pd.DataFrame: One row per graph with the experiment columns
        """
        if count < 1:
            raise ValueError(f"count must be >= 1, got {count}")
        rng = random.Random(seed)
        jobs: List[Tuple[int, int, PipelineConfig, int]] = [
            (index, n, cfg, rng.randrange(2 ** 32)) for index in range(count)
        ]
        workers = get_settings().threads if threads is None else threads

        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                rows = list(pool.map(PipelineHandler.experiment_row, *zip(*jobs)))
        else:
            rows = [PipelineHandler.experiment_row(*job) for job in jobs]

        logger.info(f"Experiment finished: {count} graphs, {sum(row['homFound'] for row in rows)} colored")
        return pd.DataFrame(rows, columns=EXPERIMENT_COLUMNS)
