import logging
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Set, Tuple

from internal.custom_types.errors import NotInducedPath, ShapeMismatch, StaleMatch, TargetMismatch
from internal.custom_types.graph import Graph
from internal.custom_types.kneser import KneserParams
from internal.custom_types.reduction import (
    ConfigMatch,
    ForbiddenKind,
    LiftFailure,
    LiftOutcome,
    LiftStatus,
    ReductionKind,
    ReductionStep,
    StepAudit,
)
from internal.custom_types.search import Homomorphism
from internal.handlers.hom_search import HomSearchHandler
from internal.handlers.kneser import KneserHandler
from internal.handlers.parameters import ParameterHandler

logger = logging.getLogger(__name__)


def _mad_or_zero(g: Graph) -> Fraction:
    return ParameterHandler.mad(g) if g.n else Fraction(0)


def _audit(before: Graph, after: Graph, k: int) -> StepAudit:
    return StepAudit(
        k=k,
        mad_before=_mad_or_zero(before),
        mad_after=_mad_or_zero(after),
        odd_girth_before=ParameterHandler.odd_girth(before),
        odd_girth_after=ParameterHandler.odd_girth(after),
    )


def _iter_cycles(g: Graph, max_length: int) -> Iterator[Tuple[int, ...]]:
    """Simple cycles with at most max_length vertices, each once.

    A cycle is listed from its smallest vertex, in the direction where the
    second vertex is smaller than the last.
    """
    def extend(path: List[int], used: int) -> Iterator[Tuple[int, ...]]:
        start, last = path[0], path[-1]
        if len(path) >= 3 and g.has_edge(last, start) and path[1] < last:
            yield tuple(path)
        if len(path) == max_length:
            return
        for w in g.neighbors(last):
            if w > start and not (used >> w) & 1:
                path.append(w)
                yield from extend(path, used | (1 << w))
                path.pop()

    for s in range(g.n):
        yield from extend([s], 1 << s)


def _chords(g: Graph, cycle: Sequence[int]) -> List[Tuple[int, int]]:
    m = len(cycle)
    found = []
    for i in range(m):
        for j in range(i + 2, m):
            if i == 0 and j == m - 1:
                continue
            if g.has_edge(cycle[i], cycle[j]):
                found.append(tuple(sorted((cycle[i], cycle[j]))))
    return sorted(found)


def _iter_threads(g: Graph, length: int) -> Iterator[Tuple[int, ...]]:
    """Induced paths with `length` edges whose inner vertices all have degree 2."""
    degrees = g.degrees()
    for v0 in range(g.n):
        for v1 in g.neighbors(v0):
            path = [v0, v1]
            seen = {v0, v1}
            while len(path) - 1 < length and degrees[path[-1]] == 2:
                nxt = next(w for w in g.neighbors(path[-1]) if w != path[-2])
                if nxt in seen:
                    break
                path.append(nxt)
                seen.add(nxt)
            if len(path) - 1 == length and path[0] < path[-1] and not g.has_edge(path[0], path[-1]):
                yield tuple(path)


def _is_induced_path(g: Graph, path: Sequence[int]) -> bool:
    if len(set(path)) != len(path) or any(not 0 <= v < g.n for v in path):
        return False
    position = {v: i for i, v in enumerate(path)}
    for i, v in enumerate(path):
        for w in g.neighbors(v):
            if w in position and abs(position[w] - i) != 1:
                return False
        if i + 1 < len(path) and not g.has_edge(v, path[i + 1]):
            return False
    return True


def _check_step(step: ReductionStep) -> ReductionStep:
    if not step.after.size_key() < step.before.size_key():
        raise RuntimeError(f"Internal error: {step.kind.value} step did not shrink the graph")
    if step.audit.claim_violated:
        logger.warning(f"{step.kind.value} step violates an audited claim: {step.audit.to_dict()['claims']}")
    return step


class ReductionHandler:
    @staticmethod
    def detect_forbidden(
        g: Graph,
        k: int,
        L: int,
        kinds: Optional[Set[ForbiddenKind]] = None
    ) -> List[ConfigMatch]:
        """All matches of the forbidden configurations F1-F5.

        F1: a degree-1 vertex whose neighbor has degree <= 3.
        F2: an odd cycle of length <= 2k+3 with a chord (one match per chord).
        F3: a vertex of degree >= 4 whose neighbors all have degree 2 or 3.
        F4: an induced path with exactly L+1 edges and degree-2 inner vertices.
        F5: two matches of kinds F1-F4 sharing a vertex.

        Args:
            g: The host graph
            k: Level of the odd-cycle bound (k >= 1)
            L: Thread threshold (L >= 2)
            kinds: Restrict detection to these kinds (default: all)

        Returns:
            List[ConfigMatch]: Matches grouped by kind, in label order within a kind
        """
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if L < 2:
            raise ValueError(f"L must be >= 2, got {L}")
        wanted = set(ForbiddenKind) if kinds is None else set(kinds)
        degrees = g.degrees()
        base: List[ConfigMatch] = []

        if wanted & {ForbiddenKind.F1, ForbiddenKind.F5}:
            for v in range(g.n):
                if degrees[v] == 1:
                    u = g.neighbors(v)[0]
                    if degrees[u] <= 3:
                        base.append(ConfigMatch(kind=ForbiddenKind.F1, vertices=(v, u)))

        if wanted & {ForbiddenKind.F2, ForbiddenKind.F5}:
            for cycle in _iter_cycles(g, 2 * k + 3):
                if len(cycle) % 2 == 0:
                    continue
                for chord in _chords(g, cycle):
                    base.append(ConfigMatch(kind=ForbiddenKind.F2, vertices=cycle, cycle=cycle, chord=chord))

        if wanted & {ForbiddenKind.F3, ForbiddenKind.F5}:
            for v in range(g.n):
                neighbors = g.neighbors(v)
                if degrees[v] >= 4 and all(degrees[w] in (2, 3) for w in neighbors):
                    base.append(ConfigMatch(kind=ForbiddenKind.F3, vertices=(v, *neighbors)))

        if wanted & {ForbiddenKind.F4, ForbiddenKind.F5}:
            for path in _iter_threads(g, L + 1):
                base.append(ConfigMatch(kind=ForbiddenKind.F4, vertices=path, path=path))

        matches = [m for m in base if m.kind in wanted]
        if ForbiddenKind.F5 in wanted:
            for i, first in enumerate(base):
                for second in base[i + 1:]:
                    shared = set(first.vertices) & set(second.vertices)
                    if shared:
                        matches.append(ConfigMatch(
                            kind=ForbiddenKind.F5,
                            vertices=tuple(sorted(set(first.vertices) | set(second.vertices))),
                            parts=(first, second),
                        ))
        logger.info(f"Detected {len(matches)} forbidden configurations on {g.n} vertices")
        return matches

    @staticmethod
    def revalidate(g: Graph, m: ConfigMatch) -> bool:
        """Re-check a match against its kind's definition on g.

        The F2 length bound and the F4 length both depend on parameters the
        match does not carry; F2 is checked for being a chorded odd cycle and
        F4 for being a thread of its recorded length.
        """
        if any(not 0 <= v < g.n for v in m.vertices):
            return False
        degrees = g.degrees()
        if m.kind == ForbiddenKind.F1:
            leaf, neighbor = m.vertices
            return degrees[leaf] == 1 and g.has_edge(leaf, neighbor) and degrees[neighbor] <= 3
        if m.kind == ForbiddenKind.F2:
            cycle = m.cycle
            if cycle is None or m.chord is None or len(cycle) % 2 == 0 or len(set(cycle)) != len(cycle):
                return False
            closed = all(g.has_edge(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
            return closed and m.chord in _chords(g, cycle)
        if m.kind == ForbiddenKind.F3:
            center, *neighbors = m.vertices
            return (
                degrees[center] >= 4
                and sorted(neighbors) == g.neighbors(center)
                and all(degrees[w] in (2, 3) for w in neighbors)
            )
        if m.kind == ForbiddenKind.F4:
            path = m.path
            if path is None or len(path) < 3:
                return False
            return _is_induced_path(g, path) and all(degrees[v] == 2 for v in path[1:-1])
        first, second = m.parts
        return (
            ReductionHandler.revalidate(g, first)
            and ReductionHandler.revalidate(g, second)
            and bool(set(first.vertices) & set(second.vertices))
        )

    @staticmethod
    def apply_reduction(g: Graph, m: ConfigMatch, k: int) -> ReductionStep:
        """Perform the reduction attached to a match and audit it.

        F1 deletes the leaf, F2 deletes the chord, F3 deletes the smallest
        degree-2 neighbor (else the smallest degree-3 one), F4 collapses the
        thread and F5 applies its smallest-kind constituent.

        Raises:
            StaleMatch: If the match no longer holds on g
        """
        if not ReductionHandler.revalidate(g, m):
            logger.error(f"{m.kind.value} match {m.vertices} is stale")
            raise StaleMatch(f"{m.kind.value} match on {list(m.vertices)} no longer holds; re-detect")

        if m.kind == ForbiddenKind.F5:
            inner = min(m.parts, key=lambda part: part.kind.index)
            step = ReductionHandler.apply_reduction(g, inner, k)
            return ReductionStep(
                kind=ReductionKind.F5,
                before=step.before,
                after=step.after,
                kept=step.kept,
                audit=step.audit,
                removed=step.removed,
                path=step.path,
                added_edge=step.added_edge,
                deleted_edge=step.deleted_edge,
                match=m,
            )

        if m.kind == ForbiddenKind.F1:
            return ReductionHandler._delete_vertex(g, m.vertices[0], k, ReductionKind.F1, m)

        if m.kind == ForbiddenKind.F2:
            a, b = m.chord
            after = g.without_edge(a, b)
            return _check_step(ReductionStep(
                kind=ReductionKind.F2,
                before=g,
                after=after,
                kept=tuple(range(g.n)),
                audit=_audit(g, after, k),
                deleted_edge=(a, b),
                match=m,
            ))

        if m.kind == ForbiddenKind.F3:
            neighbors = m.vertices[1:]
            degree_two = [w for w in neighbors if g.degree(w) == 2]
            victim = min(degree_two) if degree_two else min(neighbors)
            return ReductionHandler._delete_vertex(g, victim, k, ReductionKind.F3, m)

        step = ReductionHandler.collapse_path(g, m.path, k)
        return ReductionStep(
            kind=ReductionKind.F4,
            before=step.before,
            after=step.after,
            kept=step.kept,
            audit=step.audit,
            removed=step.removed,
            path=step.path,
            added_edge=step.added_edge,
            match=m,
        )

    @staticmethod
    def collapse_path(g: Graph, path: Sequence[int], k: int) -> ReductionStep:
        """Replace an induced path by an edge between its endpoints.

        Inner vertices are removed and (v0, vl) is added unless present. The
        audit flags a claim violation when mad grows, when the odd girth drops
        or when a graph meeting the 2k+3 odd-girth bound stops meeting it.

        Raises:
            NotInducedPath: If path is not an induced path of length >= 2 in g
        """
        path = tuple(path)
        if len(path) < 3:
            raise NotInducedPath(f"Collapsing needs a path of length >= 2, got {list(path)}")
        if not _is_induced_path(g, path):
            raise NotInducedPath(f"{list(path)} is not an induced path")

        inner = path[1:-1]
        shrunk, kept = g.without_vertices(inner)
        first, last = kept.index(path[0]), kept.index(path[-1])
        added = not shrunk.has_edge(first, last)
        after = shrunk.with_edge(first, last) if added else shrunk
        step = ReductionStep(
            kind=ReductionKind.PATH_COLLAPSE,
            before=g,
            after=after,
            kept=kept,
            audit=_audit(g, after, k),
            removed=tuple(sorted(inner)),
            path=path,
            added_edge=added,
        )
        logger.info(f"Collapsed path of length {len(path) - 1}; odd girth "
                    f"{step.audit.odd_girth_before} -> {step.audit.odd_girth_after}")
        return _check_step(step)

    @staticmethod
    def delete_vertex_step(g: Graph, v: int, k: int) -> ReductionStep:
        """Remove one vertex; the pipeline uses this on high-degree vertices of classes B and D."""
        if not 0 <= v < g.n:
            raise ValueError(f"Vertex {v} is not in a graph on {g.n} vertices")
        return ReductionHandler._delete_vertex(g, v, k, ReductionKind.VERTEX_DELETION, None)

    @staticmethod
    def _delete_vertex(g: Graph, v: int, k: int, kind: ReductionKind, m: Optional[ConfigMatch]) -> ReductionStep:
        after, kept = g.without_vertices([v])
        return _check_step(ReductionStep(
            kind=kind,
            before=g,
            after=after,
            kept=kept,
            audit=_audit(g, after, k),
            removed=(v,),
            match=m,
        ))

    @staticmethod
    def lift_coloring(step: ReductionStep, h_after: Homomorphism, p: KneserParams) -> LiftOutcome:
        """Extend a Kneser coloring of step.after to step.before.

        Removed vertices take the first color disjoint from their neighbors'
        colors; a collapsed path is re-expanded along a walk of its original
        length between the endpoint colors (the added edge imposes nothing);
        a deleted chord is restored by recoloring its larger endpoint.

        Raises:
            TargetMismatch: If h_after is not a coloring of step.after into K(n,k)
        """
        target, _ = KneserHandler.kneser_graph(p)
        relaxed_after = step.after
        if step.added_edge and step.path is not None:
            relaxed_after = step.after.without_edge(step.kept.index(step.path[0]), step.kept.index(step.path[-1]))
        try:
            violations = HomSearchHandler.verify_hom(relaxed_after, target, h_after)
        except ShapeMismatch as e:
            raise TargetMismatch(f"Coloring does not fit K({p.n},{p.k}): {str(e)}") from e
        if violations:
            raise TargetMismatch(f"Coloring is not a homomorphism into K({p.n},{p.k}); violated edges {violations}")

        before = step.before
        colors: List[Optional[int]] = [None] * before.n
        for i, label in enumerate(h_after.mapping):
            colors[step.kept[i]] = label

        if step.path is not None:
            path = step.path
            length = len(path) - 1
            start = KneserHandler.subset_of(p, colors[path[0]])
            end = KneserHandler.subset_of(p, colors[path[-1]])
            on_path = set(path)
            avoid = [0] * (length + 1)
            for i, v in enumerate(path[1:-1], start=1):
                for w in before.neighbors(v):
                    if w not in on_path:
                        avoid[i] |= KneserHandler.subset_of(p, colors[w]).bits
            if any(avoid):
                walk = KneserHandler.find_constrained_walk(p, start, end, length, avoid)
            else:
                walk = KneserHandler.find_walk(p, start, end, length)
            if walk is None:
                detail = f"no walk of length {length} from {start} to {end} in K({p.n},{p.k})"
                logger.warning(f"Lift failed: {detail}")
                return LiftOutcome(status=LiftStatus.LIFT_FAILED, reason=LiftFailure.NO_WALK, detail=detail)
            for v, color in zip(path[1:-1], walk[1:-1]):
                colors[v] = KneserHandler.label_of(p, color)

        elif step.deleted_edge is not None:
            a, b = step.deleted_edge
            recolor = max(a, b)
            if not KneserHandler.subset_of(p, colors[a]).disjoint(KneserHandler.subset_of(p, colors[b])):
                around = [KneserHandler.subset_of(p, colors[w]) for w in before.neighbors(recolor)]
                choice = KneserHandler.find_common_neighbor(p, around)
                if choice is None:
                    detail = f"vertex {recolor} sees colors {[str(c) for c in around]}"
                    logger.warning(f"Lift failed: {detail}")
                    return LiftOutcome(
                        status=LiftStatus.LIFT_FAILED, reason=LiftFailure.NO_COMMON_NEIGHBOR, detail=detail
                    )
                colors[recolor] = KneserHandler.label_of(p, choice)

        else:
            for v in sorted(step.removed):
                around = [KneserHandler.subset_of(p, colors[w]) for w in before.neighbors(v) if colors[w] is not None]
                choice = KneserHandler.find_common_neighbor(p, around)
                if choice is None:
                    detail = f"vertex {v} sees colors {[str(c) for c in around]}"
                    logger.warning(f"Lift failed: {detail}")
                    return LiftOutcome(
                        status=LiftStatus.LIFT_FAILED, reason=LiftFailure.NO_COMMON_NEIGHBOR, detail=detail
                    )
                colors[v] = KneserHandler.label_of(p, choice)

        lifted = Homomorphism(mapping=tuple(colors), target=str(p))
        violations = HomSearchHandler.verify_hom(before, target, lifted)
        if violations:
            logger.error(f"Lifted coloring violates edges {violations}")
            raise RuntimeError(f"Internal error: lifted coloring violates edges {violations}")
        return LiftOutcome(status=LiftStatus.LIFTED, homomorphism=lifted)
