import pandas as pd
import pytest

from internal.custom_types.graph import ClassLabel, Graph, complete_graph, cycle_graph, path_graph, petersen_graph
from internal.custom_types.kneser import EmbeddingStatus, KneserParams
from internal.custom_types.pipeline import PipelineConfig
from internal.custom_types.reduction import ReductionKind
from internal.custom_types.search import SearchStatus
from internal.handlers import pipeline as pipeline_module
from internal.handlers.embedding import EmbeddingHandler
from internal.handlers.hom_search import HomSearchHandler
from internal.handlers.kneser import KneserHandler
from internal.handlers.parameters import ParameterHandler
from internal.handlers.pipeline import EXPERIMENT_COLUMNS, PipelineHandler
from internal.handlers.reductions import ReductionHandler
from oracles import constrained_graphs


def test_config_defaults():
    cfg = PipelineConfig(k=2)
    assert cfg.thread_threshold == 15
    assert cfg.reduction_level == 1
    assert cfg.base_size == 8
    assert cfg.to_dict()["L"] == 15
    assert PipelineConfig(k=3, L=4).thread_threshold == 4


@pytest.mark.parametrize("kwargs", [{"k": 1}, {"k": 2, "L": 1}, {"k": 2, "base_size": -1}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        PipelineConfig(**kwargs)


def test_small_graph_goes_straight_to_the_base():
    report = PipelineHandler.run_pipeline(cycle_graph(5), PipelineConfig(k=2))
    assert report.classification.label == ClassLabel.A
    assert report.steps == []
    assert report.base_outcome.found
    assert report.hom_found
    assert report.claim_violations == []
    assert report.discharging.balanced


def test_paths_are_peeled_and_lifted():
    g = path_graph(12)
    report = PipelineHandler.run_pipeline(g, PipelineConfig(k=2))
    assert len(report.steps) == 4
    assert all(lift.lifted for lift in report.lifts)
    assert report.fallback_outcome is None
    mapping = report.final_hom.mapping
    assert len(mapping) == 12
    assert len(set(mapping)) == 2

    target, _ = KneserHandler.kneser_graph(KneserParams(5, 2))
    assert HomSearchHandler.verify_hom(g, target, report.final_hom) == []


def test_odd_collapse_is_reported_and_search_falls_back():
    report = PipelineHandler.run_pipeline(cycle_graph(9), PipelineConfig(k=3, L=4))
    assert report.classification.label == ClassLabel.C
    assert len(report.steps) == 1
    assert report.steps[0].after == complete_graph(3)

    assert len(report.claim_violations) == 1
    violation = report.claim_violations[0]
    assert violation.step == 0
    assert "oddGirthNotDecreased" in violation.claims

    assert report.base_outcome.status == SearchStatus.REFUTED
    assert report.fallback_outcome.found
    assert report.hom_found


def test_premise_failures_are_skipped():
    report = PipelineHandler.run_pipeline(complete_graph(4), PipelineConfig(k=2))
    assert report.skipped
    assert report.base_outcome is None
    assert not report.hom_found
    record = report.to_dict()
    assert record["skipped"] is True
    assert record["steps"] == []


def test_experiment_rows():
    cfg = PipelineConfig(k=2, timing=False)
    frame = PipelineHandler.run_experiment(10, 8, cfg, seed=1)
    assert list(frame.columns) == EXPERIMENT_COLUMNS
    assert len(frame) == 10
    assert frame["homFound"].all()
    assert (frame["millis"] == 0).all()
    assert (frame["claimViolations"] == 0).all()

    pd.testing.assert_frame_equal(frame, PipelineHandler.run_experiment(10, 8, cfg, seed=1))


def test_single_vertex_experiment():
    frame = PipelineHandler.run_experiment(1, 1, PipelineConfig(k=2, timing=False), seed=0)
    row = frame.iloc[0]
    assert row["graph6"] == "@"
    assert row["mad"] == "0/1"
    assert row["oddGirth"] == "inf"
    assert bool(row["homFound"])


def test_higher_level_experiment_has_one_row_per_graph():
    frame = PipelineHandler.run_experiment(5, 12, PipelineConfig(k=3, timing=False), seed=7)
    assert len(frame) == 5
    assert frame["graph6"].nunique() >= 1


def test_experiment_needs_a_graph():
    with pytest.raises(ValueError):
        PipelineHandler.run_experiment(0, 8, PipelineConfig(k=2), seed=1)


@pytest.mark.slow
def test_worker_processes_do_not_change_rows():
    cfg = PipelineConfig(k=2, timing=False)
    pd.testing.assert_frame_equal(
        PipelineHandler.run_experiment(6, 10, cfg, seed=4, threads=1),
        PipelineHandler.run_experiment(6, 10, cfg, seed=4, threads=2),
    )


def test_fallen_level():
    assert PipelineHandler.fallen_level(cycle_graph(5), 3) == 2
    assert PipelineHandler.fallen_level(cycle_graph(5), 4) == 2
    assert PipelineHandler.fallen_level(cycle_graph(7), 4) == 3
    assert PipelineHandler.fallen_level(cycle_graph(7), 3) is None
    assert PipelineHandler.fallen_level(cycle_graph(5), 2) is None
    assert PipelineHandler.fallen_level(complete_graph(3), 3) is None
    assert PipelineHandler.fallen_level(petersen_graph(), 3) is None


def test_base_at_its_own_level_is_searched_directly():
    base = PipelineHandler.color_base(cycle_graph(7), PipelineConfig(k=3))
    assert base.level is None
    assert base.embedding is None
    assert base.violation is None
    assert base.outcome.found


def test_fallen_base_records_the_missing_embedding():
    base = PipelineHandler.color_base(cycle_graph(5), PipelineConfig(k=3), step=4)
    assert base.level == 2
    assert base.embedding.status == EmbeddingStatus.FAILED_EXHAUSTIVE

    violation = base.violation
    assert violation.step == 4
    assert violation.claims == ("embeddingVerified",)
    assert violation.certificate["status"] == "FailedExhaustive"
    assert violation.certificate["obstruction"]["parameters"] == {"sourceOddGirth": 5, "targetOddGirth": 7}

    # C5 cannot reach K(7,3) at all
    assert base.outcome.status == SearchStatus.REFUTED


def test_verified_embedding_carries_the_low_coloring_up(monkeypatch):
    # the pairing patterns, declared verified: a 5-cycle image cannot survive them
    def declared(j, k, budget=None, relaxed=False):
        attempt = EmbeddingHandler.pairing_scheme_embedding(j, k)
        attempt.status = EmbeddingStatus.VERIFIED
        return attempt

    monkeypatch.setattr(EmbeddingHandler, "attempt_embedding", staticmethod(declared))
    base = PipelineHandler.color_base(cycle_graph(5), PipelineConfig(k=3))
    assert base.embedding.status == EmbeddingStatus.VERIFIED
    assert base.violation.claims == ("embeddingLift",)
    assert base.outcome.status == SearchStatus.REFUTED


def test_pipeline_reports_a_level_drop(monkeypatch):
    # C7 -> C5: collapsing a path of length 3 drops the odd girth to 5
    def shorten(g, graph_class, cfg):
        if g.n != 7:
            return []
        return [ReductionHandler.collapse_path(g, (0, 1, 2, 3), cfg.reduction_level)]

    monkeypatch.setattr(pipeline_module, "_strategy_steps", shorten)
    g = cycle_graph(7)
    report = PipelineHandler.run_pipeline(g, PipelineConfig(k=3, base_size=0))
    assert len(report.steps) == 1
    assert report.steps[0].after == cycle_graph(5)
    assert report.level_drop == 2
    assert report.embedding.status == EmbeddingStatus.FAILED_EXHAUSTIVE

    assert [v.step for v in report.claim_violations] == [0, 1]
    assert "oddGirthNotDecreased" in report.claim_violations[0].claims
    assert report.claim_violations[1].claims == ("embeddingVerified",)

    assert report.base_outcome.status == SearchStatus.REFUTED
    assert report.fallback_outcome.found
    target, _ = KneserHandler.kneser_graph(KneserParams(7, 3))
    assert HomSearchHandler.verify_hom(g, target, report.final_hom) == []

    record = report.to_dict()
    assert record["levelDrop"] == 2
    assert record["embedding"]["status"] == "FailedExhaustive"
    assert record["claimViolations"][1]["certificate"]["obstruction"]["kind"] == "odd-girth-obstruction"


def test_no_level_drop_leaves_the_report_fields_empty():
    record = PipelineHandler.run_pipeline(cycle_graph(9), PipelineConfig(k=3, L=4)).to_dict()
    assert record["levelDrop"] is None
    assert record["embedding"] is None
    assert all(v["certificate"] is None for v in record["claimViolations"])


def test_max_steps_caps_a_two_step_iteration():
    # class D: a path of 18 edges whose first vertex also carries four leaves
    tail = [(i, i + 1) for i in range(18)]
    spokes = [(0, 19), (0, 20), (0, 21), (0, 22)]
    g = Graph.from_edges(23, tail + spokes)
    cfg = PipelineConfig(k=2, max_reduction_steps=1)
    assert ParameterHandler.classify(g, cfg.thread_threshold).label == ClassLabel.D

    report = PipelineHandler.run_pipeline(g, cfg)
    assert len(report.steps) == 1
    assert report.steps[0].kind == ReductionKind.PATH_COLLAPSE
    assert report.hom_found


def test_every_pipeline_step_shrinks_the_graph():
    for g in constrained_graphs(15, 2, [10, 12, 14], seed=21):
        report = PipelineHandler.run_pipeline(g, PipelineConfig(k=2, base_size=0))
        for step in report.steps:
            assert step.after.size_key() < step.before.size_key()
            assert step.after.n < step.before.n


@pytest.mark.slow
def test_pipeline_colors_constrained_graphs_at_level_two():
    target, _ = KneserHandler.kneser_graph(KneserParams(5, 2))
    for g in constrained_graphs(500, 2, [8, 10, 12, 14], seed=5):
        report = PipelineHandler.run_pipeline(g, PipelineConfig(k=2))
        assert report.hom_found
        assert HomSearchHandler.verify_hom(g, target, report.final_hom) == []


@pytest.mark.slow
def test_pipeline_colors_constrained_graphs_at_level_three():
    target, _ = KneserHandler.kneser_graph(KneserParams(7, 3))
    for g in constrained_graphs(100, 3, [8, 10, 12, 14], seed=6):
        report = PipelineHandler.run_pipeline(g, PipelineConfig(k=3))
        assert report.hom_found
        assert HomSearchHandler.verify_hom(g, target, report.final_hom) == []
