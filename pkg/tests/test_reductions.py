from fractions import Fraction

import pytest

from internal.custom_types.errors import NotInducedPath, StaleMatch, TargetMismatch
from internal.custom_types.graph import Graph, complete_graph, cycle_graph, path_graph
from internal.custom_types.kneser import KneserParams, KSubset
from internal.custom_types.reduction import ForbiddenKind, LiftFailure, LiftStatus, ReductionKind
from internal.custom_types.search import Homomorphism
from internal.handlers.hom_search import HomSearchHandler
from internal.handlers.kneser import KneserHandler
from internal.handlers.reductions import ReductionHandler
from oracles import brute_threads, constrained_graphs, random_graphs

K52 = KneserParams(5, 2)
K73 = KneserParams(7, 3)


def color(p: KneserParams, text: str) -> int:
    return KneserHandler.label_of(p, KSubset.parse(p.n, text))


def chorded_c5() -> Graph:
    return cycle_graph(5).with_edge(0, 2)


def spider() -> Graph:
    """K1,4 with every spoke subdivided once; the center is 0."""
    return Graph.from_edges(9, [(0, i) for i in range(1, 5)] + [(i, i + 4) for i in range(1, 5)])


def test_detect_on_p3():
    matches = ReductionHandler.detect_forbidden(path_graph(3), 2, 2)
    assert [m.kind for m in matches] == [ForbiddenKind.F1, ForbiddenKind.F1, ForbiddenKind.F5]
    assert matches[0].vertices == (0, 1)
    assert matches[1].vertices == (2, 1)
    assert matches[2].vertices == (0, 1, 2)


def test_detect_chorded_odd_cycle():
    matches = ReductionHandler.detect_forbidden(chorded_c5(), 2, 2)
    assert len(matches) == 1
    match = matches[0]
    assert match.kind == ForbiddenKind.F2
    assert match.cycle == (0, 1, 2, 3, 4)
    assert match.chord == (0, 2)
    assert match.split_lengths() == (3, 4)
    assert match.to_dict()["witness"]["splitLengths"] == [3, 4]


def test_long_cycles_are_not_f2():
    # the 9-cycle exceeds 2k+3 = 7 at k = 2
    g = cycle_graph(9).with_edge(0, 4)
    assert ReductionHandler.detect_forbidden(g, 2, 20, kinds={ForbiddenKind.F2}) == []
    assert len(ReductionHandler.detect_forbidden(g, 3, 20, kinds={ForbiddenKind.F2})) == 1


def test_detect_thread():
    matches = ReductionHandler.detect_forbidden(path_graph(4), 2, 2, kinds={ForbiddenKind.F4})
    assert len(matches) == 1
    assert matches[0].path == (0, 1, 2, 3)


def test_detect_high_degree_center():
    matches = ReductionHandler.detect_forbidden(spider(), 2, 10, kinds={ForbiddenKind.F3})
    assert [m.vertices for m in matches] == [(0, 1, 2, 3, 4)]
    # a leaf hanging off a degree-4 vertex is not F1
    assert ReductionHandler.detect_forbidden(Graph.from_edges(5, [(0, i) for i in range(1, 5)]), 2, 10) == []


@pytest.mark.parametrize("k, L", [(0, 3), (2, 1)])
def test_detect_checks_parameters(k, L):
    with pytest.raises(ValueError):
        ReductionHandler.detect_forbidden(path_graph(3), k, L)


def test_apply_leaf_deletion():
    g = path_graph(3)
    match = ReductionHandler.detect_forbidden(g, 2, 2)[0]
    step = ReductionHandler.apply_reduction(g, match, 2)
    assert step.kind == ReductionKind.F1
    assert step.after == path_graph(2)
    assert step.kept == (1, 2)
    assert step.removed == (0,)
    assert not step.audit.claim_violated


def test_apply_overlap_uses_its_first_part():
    g = path_graph(3)
    overlap = ReductionHandler.detect_forbidden(g, 2, 2)[2]
    step = ReductionHandler.apply_reduction(g, overlap, 2)
    assert step.kind == ReductionKind.F5
    assert step.removed == (0,)


def test_apply_chord_deletion():
    g = chorded_c5()
    match = ReductionHandler.detect_forbidden(g, 2, 2)[0]
    step = ReductionHandler.apply_reduction(g, match, 2)
    assert step.after == cycle_graph(5)
    assert step.deleted_edge == (0, 2)
    assert step.to_dict()["deletedEdges"] == [[0, 2]]
    # removing the chord brings the odd girth from 3 up to 5
    assert step.audit.odd_girth_after.value == 5
    assert not step.audit.claim_violated


def test_apply_high_degree_reduction():
    g = spider()
    match = ReductionHandler.detect_forbidden(g, 2, 10, kinds={ForbiddenKind.F3})[0]
    step = ReductionHandler.apply_reduction(g, match, 2)
    assert step.removed == (1,)
    assert step.after.n == 8


def test_apply_thread_collapse():
    g = path_graph(4)
    match = ReductionHandler.detect_forbidden(g, 2, 2, kinds={ForbiddenKind.F4})[0]
    step = ReductionHandler.apply_reduction(g, match, 2)
    assert step.kind == ReductionKind.F4
    assert step.after == complete_graph(2)
    assert step.removed == (1, 2)
    assert step.added_edge


def test_stale_match():
    g = path_graph(3)
    match = ReductionHandler.detect_forbidden(g, 2, 2)[1]
    with pytest.raises(StaleMatch):
        ReductionHandler.apply_reduction(path_graph(2), match, 2)
    assert not ReductionHandler.revalidate(cycle_graph(3), match)


def test_collapse_even_length_keeps_claims():
    step = ReductionHandler.collapse_path(cycle_graph(9), (0, 1, 2, 3, 4), 3)
    assert step.after == cycle_graph(6)
    assert step.audit.odd_girth_after.is_infinite
    assert not step.audit.claim_violated


def test_collapse_odd_length_breaks_odd_girth():
    step = ReductionHandler.collapse_path(cycle_graph(9), (0, 1, 2, 3), 3)
    assert step.after == cycle_graph(7)
    record = step.audit.to_dict()
    assert record["oddGirthBefore"] == 9
    assert record["oddGirthAfter"] == 7
    assert record["claims"]["oddGirthNotDecreased"] is False
    assert record["claims"]["levelThresholdKept"] is False
    assert record["claimViolated"] is True


def test_collapse_path_to_edge():
    step = ReductionHandler.collapse_path(path_graph(5), (0, 1, 2, 3, 4), 2)
    assert step.after == complete_graph(2)
    assert step.audit.mad_before == Fraction(8, 5)
    assert step.audit.mad_after == Fraction(1)
    assert step.to_dict()["addedEdges"] == [[0, 4]]


@pytest.mark.parametrize("m", [5, 7, 9, 11])
def test_collapse_parity_on_cycles(m):
    for length in range(2, m - 1):
        path = tuple(range(length + 1))
        step = ReductionHandler.collapse_path(cycle_graph(m), path, (m - 3) // 2)
        assert step.after == cycle_graph(m - length + 1)
        assert step.audit.claim_violated == (length % 2 == 1)


@pytest.mark.parametrize("path", [(0, 1), (0, 1, 2, 3, 4), (0, 2, 3), (0, 1, 1)])
def test_collapse_rejects_non_paths(path):
    with pytest.raises(NotInducedPath):
        ReductionHandler.collapse_path(cycle_graph(5), path, 2)


def test_delete_vertex_checks_range():
    with pytest.raises(ValueError):
        ReductionHandler.delete_vertex_step(path_graph(3), 3, 2)


def test_lift_leaf_takes_first_free_color():
    g = path_graph(3)
    step = ReductionHandler.apply_reduction(g, ReductionHandler.detect_forbidden(g, 3, 2)[1], 3)
    h_after = Homomorphism((color(K73, "{4,5,6}"), color(K73, "{1,2,3}")))
    outcome = ReductionHandler.lift_coloring(step, h_after, K73)
    assert outcome.lifted
    assert outcome.homomorphism.mapping[2] == color(K73, "{4,5,6}")
    assert outcome.homomorphism.target == "kneser:7,3"


def test_lift_collapsed_path_ignores_added_edge():
    step = ReductionHandler.collapse_path(path_graph(3), (0, 1, 2), 2)
    outcome = ReductionHandler.lift_coloring(step, Homomorphism((0, 0)), K52)
    assert outcome.lifted
    assert outcome.homomorphism.mapping == (0, color(K52, "{3,4}"), 0)


def test_lift_long_path_through_kneser_walk():
    # C9 colored around the 7-cycle {1,2,3} {4,5,6} {1,2,7} {3,4,5} {1,6,7} {2,3,4} {5,6,7}
    step = ReductionHandler.collapse_path(cycle_graph(9), (0, 1, 2, 3, 4), 3)
    colors = ["{1,2,3}", "{1,6,7}", "{2,3,4}", "{5,6,7}", "{1,2,3}", "{5,6,7}"]
    outcome = ReductionHandler.lift_coloring(step, Homomorphism(tuple(color(K73, s) for s in colors)), K73)
    assert outcome.lifted
    assert len(outcome.homomorphism.mapping) == 9


def test_lift_needs_a_walk_of_the_right_parity():
    # adjacent endpoint colors admit no walk of length 4 in K(7,3)
    step = ReductionHandler.collapse_path(cycle_graph(9), (0, 1, 2, 3, 4), 3)
    colors = ["{1,2,3}", "{4,5,6}", "{1,2,7}", "{3,4,5}", "{1,2,6}", "{4,5,7}"]
    outcome = ReductionHandler.lift_coloring(step, Homomorphism(tuple(color(K73, s) for s in colors)), K73)
    assert not outcome.lifted
    assert outcome.reason == LiftFailure.NO_WALK


def test_lift_fails_without_common_neighbor():
    step = ReductionHandler.delete_vertex_step(path_graph(3), 1, 2)
    outcome = ReductionHandler.lift_coloring(step, Homomorphism((0, 7)), K52)
    assert not outcome.lifted
    assert outcome.reason == LiftFailure.NO_COMMON_NEIGHBOR
    assert outcome.to_dict()["reason"] == "NoCommonNeighbor"


def test_lift_of_chord_deletion_meets_the_triangle():
    g = chorded_c5()
    step = ReductionHandler.apply_reduction(g, ReductionHandler.detect_forbidden(g, 2, 2)[0], 2)
    h_after = Homomorphism(tuple(color(K52, s) for s in ["{1,2}", "{3,4}", "{1,5}", "{2,3}", "{4,5}"]))
    # with the chord back, vertex 2 sees {1,2}, {3,4} and {2,3}
    outcome = ReductionHandler.lift_coloring(step, h_after, K52)
    assert not outcome.lifted
    assert outcome.reason == LiftFailure.NO_COMMON_NEIGHBOR


def test_lift_rejects_invalid_coloring():
    g = path_graph(3)
    step = ReductionHandler.apply_reduction(g, ReductionHandler.detect_forbidden(g, 2, 2)[0], 2)
    with pytest.raises(TargetMismatch):
        ReductionHandler.lift_coloring(step, Homomorphism((0, 0)), K52)
    with pytest.raises(TargetMismatch):
        ReductionHandler.lift_coloring(step, Homomorphism((0,)), K52)


def test_every_match_revalidates(corpus_upto_5):
    for g in corpus_upto_5:
        for k in (1, 2):
            for m in ReductionHandler.detect_forbidden(g, k, 2):
                assert ReductionHandler.revalidate(g, m)


def _check_detector_completeness(g, L):
    degrees = g.degrees()
    matches = ReductionHandler.detect_forbidden(
        g, 1, L, kinds={ForbiddenKind.F1, ForbiddenKind.F3, ForbiddenKind.F4}
    )
    found = {kind: {m.vertices for m in matches if m.kind == kind} for kind in ForbiddenKind}

    leaves = {
        (v, g.neighbors(v)[0]) for v in range(g.n)
        if degrees[v] == 1 and degrees[g.neighbors(v)[0]] <= 3
    }
    centers = {
        v for v in range(g.n)
        if degrees[v] >= 4 and all(degrees[w] in (2, 3) for w in g.neighbors(v))
    }
    assert found[ForbiddenKind.F1] == leaves
    assert {vertices[0] for vertices in found[ForbiddenKind.F3]} == centers
    assert found[ForbiddenKind.F4] == brute_threads(g, L + 1)


def test_detector_finds_every_f1_f3_f4(corpus_upto_5):
    for g in corpus_upto_5:
        _check_detector_completeness(g, 2)


@pytest.mark.slow
def test_detector_finds_every_f1_f3_f4_at_acceptance_scale():
    for g in random_graphs(300, [6, 7, 8], seed=17):
        for L in (2, 3):
            _check_detector_completeness(g, L)


def test_every_step_shrinks_the_graph():
    graphs = constrained_graphs(20, 2, [8, 10, 12], seed=18) + random_graphs(25, [5, 6], seed=18)
    for g in graphs:
        kinds = {ForbiddenKind.F1, ForbiddenKind.F2, ForbiddenKind.F3, ForbiddenKind.F4}
        for m in ReductionHandler.detect_forbidden(g, 1, 2, kinds=kinds):
            step = ReductionHandler.apply_reduction(g, m, 1)
            assert step.after.size_key() < step.before.size_key()
            if step.kind != ReductionKind.F2:
                assert step.after.n < step.before.n


def test_lifted_colorings_verify():
    target, _ = KneserHandler.kneser_graph(K52)
    lifted = 0
    for g in constrained_graphs(20, 2, [8, 10, 12], seed=19):
        kinds = {ForbiddenKind.F1, ForbiddenKind.F3, ForbiddenKind.F4}
        steps = [ReductionHandler.apply_reduction(g, m, 1) for m in ReductionHandler.detect_forbidden(g, 1, 2, kinds)]
        steps += [ReductionHandler.delete_vertex_step(g, v, 1) for v in range(0, g.n, 3)]
        for step in steps:
            base = HomSearchHandler.find_hom(step.after, target)
            if not base.found:
                continue
            outcome = ReductionHandler.lift_coloring(step, base.homomorphism, K52)
            if outcome.status == LiftStatus.LIFTED:
                lifted += 1
                assert HomSearchHandler.verify_hom(step.before, target, outcome.homomorphism) == []
            else:
                assert outcome.reason in (LiftFailure.NO_WALK, LiftFailure.NO_COMMON_NEIGHBOR)
    assert lifted > 0
