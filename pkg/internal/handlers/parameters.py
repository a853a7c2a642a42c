import logging
import math
from collections import deque
from fractions import Fraction
from typing import FrozenSet, Iterator, List, Optional, Tuple

import networkx as nx

from internal.custom_types.errors import EmptyGraph
from internal.custom_types.graph import ClassLabel, Graph, GraphClass, OddGirth, iter_bits

logger = logging.getLogger(__name__)


def _density_candidates(n: int, m: int) -> List[Fraction]:
    """Every value 2e/v a subgraph on v <= n vertices with e <= m edges can take."""
    return sorted({Fraction(2 * e, v) for v in range(1, n + 1) for e in range(min(m, v * (v - 1) // 2) + 1)})


def _denser_than(g: Graph, threshold: Fraction) -> Optional[FrozenSet[int]]:
    """Goldberg's min-cut test for a subgraph of average degree > threshold.

    With threshold p/q every capacity is scaled by q so the flow stays integral:
    source->v gets m*q, v->sink gets m*q + p - deg(v)*q and each edge gets q in
    both directions. The cut around {source} + S costs m*n*q + |S|*p - 2*q*e(S),
    so a cut below m*n*q exists exactly when some S has 2e(S)/|S| > p/q.

    Returns:
        The source side of a minimum cut (a vertex set denser than threshold), or None
    """
    m = g.edge_count()
    if threshold < 0:
        return frozenset({0}) if g.n else None
    if m == 0:
        return None
    p, q = threshold.numerator, threshold.denominator
    source, sink = g.n, g.n + 1
    network = nx.DiGraph()
    for v in range(g.n):
        network.add_edge(source, v, capacity=m * q)
        network.add_edge(v, sink, capacity=m * q + p - g.degree(v) * q)
    for u, v in g.edges():
        network.add_edge(u, v, capacity=q)
        network.add_edge(v, u, capacity=q)
    cut_value, (reachable, _) = nx.minimum_cut(network, source, sink, capacity="capacity")
    if cut_value < m * g.n * q:
        return frozenset(reachable - {source})
    return None


def _shortest_odd_closed_walk(g: Graph, start: int, limit: Optional[int]) -> Optional[List[int]]:
    """BFS in the bipartite double cover from (start, 0) to (start, 1).

    Only walks strictly shorter than limit are reported. The walk is returned
    as its vertex sequence without the repeated final vertex.
    """
    parent = [-1] * (2 * g.n)
    seen = [False] * (2 * g.n)
    depth = [0] * (2 * g.n)
    origin = 2 * start
    goal = 2 * start + 1
    seen[origin] = True
    queue = deque([origin])
    while queue:
        state = queue.popleft()
        if limit is not None and depth[state] + 1 >= limit:
            continue
        vertex, parity = divmod(state, 2)
        for w in iter_bits(g.adj[vertex]):
            nxt = 2 * w + (1 - parity)
            if seen[nxt]:
                continue
            seen[nxt] = True
            parent[nxt] = state
            depth[nxt] = depth[state] + 1
            if nxt == goal:
                walk = []
                cursor = goal
                while cursor != origin:
                    walk.append(cursor // 2)
                    cursor = parent[cursor]
                walk.reverse()
                return [start] + walk[:-1]
            queue.append(nxt)
    return None


class ParameterHandler:
    @staticmethod
    def mad(g: Graph) -> Fraction:
        """Maximum average degree as an exact reduced rational.

        Binary search over the finite set of achievable densities 2e/v, each
        check being one min-cut test.

        Raises:
            EmptyGraph: If g has no vertices
        """
        return ParameterHandler.densest_subgraph(g)[0]

    @staticmethod
    def densest_subgraph(g: Graph) -> Tuple[Fraction, FrozenSet[int]]:
        """mad(g) together with a vertex set attaining it.

        Raises:
            EmptyGraph: If g has no vertices
        """
        if g.n == 0:
            raise EmptyGraph("mad is undefined for the graph on zero vertices")
        m = g.edge_count()
        if m == 0:
            return Fraction(0), frozenset({0})

        candidates = _density_candidates(g.n, m)
        witnesses = {}
        lo, hi = 0, len(candidates) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            denser = _denser_than(g, candidates[mid])
            if denser is None:
                hi = mid
            else:
                witnesses[mid] = denser
                lo = mid + 1

        value = candidates[lo]
        if lo == 0:
            return value, frozenset({0})
        witness = witnesses.get(lo - 1)
        if witness is None:
            witness = _denser_than(g, candidates[lo - 1])
        return value, witness

    @staticmethod
    def mad_below(g: Graph, bound: Fraction) -> bool:
        """Decide mad(g) < bound with a single flow test.

        mad(g) is itself one of the densities 2e/v, so it is below bound exactly
        when no subgraph beats the largest such density under bound.

        Raises:
            EmptyGraph: If g has no vertices
        """
        if g.n == 0:
            raise EmptyGraph("mad is undefined for the graph on zero vertices")
        bound = Fraction(bound)
        if bound <= 0:
            return False
        m = g.edge_count()
        best = None
        for v in range(1, g.n + 1):
            e = min(math.ceil(bound * v / 2) - 1, m, v * (v - 1) // 2)
            if e >= 0:
                candidate = Fraction(2 * e, v)
                if best is None or candidate > best:
                    best = candidate
        return _denser_than(g, best) is None

    @staticmethod
    def shortest_odd_cycle(g: Graph) -> Optional[List[int]]:
        """A shortest odd cycle as a vertex sequence, or None if g is bipartite."""
        best = None
        for v in range(g.n):
            walk = _shortest_odd_closed_walk(g, v, len(best) if best else None)
            if walk is not None:
                best = walk
        return best

    @staticmethod
    def odd_girth(g: Graph) -> OddGirth:
        """Length of a shortest odd cycle via the bipartite double cover.

        A shortest closed odd walk through any vertex is a cycle, so the
        minimum over all start vertices of dist((v,0),(v,1)) is the odd girth.
        """
        cycle = ParameterHandler.shortest_odd_cycle(g)
        return OddGirth(len(cycle) if cycle else None)

    @staticmethod
    def longest_induced_path(g: Graph, bound: int) -> List[int]:
        """Branch-and-bound search for a long induced path.

        Args:
            g: The host graph
            bound: Search stops as soon as a path with bound+1 edges is found

        Returns:
            List[int]: An induced path with min(bound+1, longest) edges, as a
            vertex sequence (empty for the empty graph)
        """
        if bound < 0:
            raise ValueError(f"bound must be >= 0, got {bound}")
        if g.n == 0:
            return []
        target = bound + 1
        best: List[int] = [0]
        everything = g.vertex_mask

        def extend(path: List[int], path_mask: int, forbidden: int) -> bool:
            nonlocal best
            if len(path) - 1 > len(best) - 1:
                best = list(path)
                if len(best) - 1 >= target:
                    return True
            room = (everything & ~forbidden & ~path_mask).bit_count()
            if len(path) - 1 + room <= len(best) - 1:
                return False
            last = path[-1]
            for w in iter_bits(g.adj[last] & ~forbidden & ~path_mask):
                path.append(w)
                done = extend(path, path_mask | (1 << w), forbidden | g.adj[last] | (1 << last))
                path.pop()
                if done:
                    return True
            return False

        for start in range(g.n):
            if extend([start], 1 << start, 0):
                break
        return best[: target + 1]

    @staticmethod
    def longest_induced_path_upto(g: Graph, bound: int) -> int:
        """min(bound+1, length in edges of the longest induced path)."""
        path = ParameterHandler.longest_induced_path(g, bound)
        return max(len(path) - 1, 0)

    @staticmethod
    def iter_maximal_induced_paths(g: Graph, min_length: int) -> Iterator[Tuple[int, ...]]:
        """Induced paths with at least min_length edges that extend at neither end.

        Each path is yielded once, oriented so that its first vertex is smaller
        than its last.
        """
        everything = g.vertex_mask

        def head_extendable(path: List[int], path_mask: int) -> bool:
            head = path[0]
            for w in iter_bits(g.adj[head] & ~path_mask):
                if g.adj[w] & path_mask == 1 << head:
                    return True
            return False

        def walk(path: List[int], path_mask: int, forbidden: int) -> Iterator[Tuple[int, ...]]:
            last = path[-1]
            room = (everything & ~forbidden & ~path_mask).bit_count()
            if len(path) - 1 + room < min_length:
                return
            options = g.adj[last] & ~forbidden & ~path_mask
            if not options:
                if len(path) - 1 >= min_length and path[0] < path[-1] and not head_extendable(path, path_mask):
                    yield tuple(path)
                return
            for w in iter_bits(options):
                path.append(w)
                yield from walk(path, path_mask | (1 << w), forbidden | g.adj[last] | (1 << last))
                path.pop()

        for start in range(g.n):
            yield from walk([start], 1 << start, 0)

    @staticmethod
    def classify(g: Graph, L: int) -> GraphClass:
        """Place g in exactly one of the four degree/thread classes.

        Args:
            g: The graph
            L: Thread threshold; a witness is an induced path with more than L edges
        """
        if L < 1:
            raise ValueError(f"L must be >= 1, got {L}")
        max_degree = g.max_degree()
        path = ParameterHandler.longest_induced_path(g, L)
        witness = tuple(path) if len(path) - 1 > L else None
        high = max_degree >= 4
        if witness is None:
            label = ClassLabel.B if high else ClassLabel.A
        else:
            label = ClassLabel.D if high else ClassLabel.C
        return GraphClass(label=label, max_degree=max_degree, long_thread_witness=witness)
