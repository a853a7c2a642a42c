import logging
from collections import deque
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from internal.custom_types.errors import TooLarge
from internal.custom_types.graph import Graph
from internal.custom_types.kneser import KneserParams, KSubset, ObstructionCertificate
from internal.handlers.parameters import ParameterHandler
from internal.utils.config import get_settings

logger = logging.getLogger(__name__)


def _bits(elements: Sequence[int]) -> int:
    mask = 0
    for x in elements:
        mask |= 1 << x
    return mask


def lex_key(bits: int) -> Tuple[int, ...]:
    """Sort key reproducing the lexicographic order of itertools.combinations."""
    return tuple(x for x in range(bits.bit_length()) if (bits >> x) & 1)


def neighbor_bits(p: KneserParams, bits: int) -> Iterator[int]:
    """Kneser neighbors of a subset (the k-subsets of its complement), in lexicographic order."""
    free = [x for x in range(p.n) if not (bits >> x) & 1]
    for chosen in combinations(free, p.k):
        yield _bits(chosen)


@lru_cache(maxsize=32)
def vertex_table(n: int, k: int) -> Tuple[Tuple[int, ...], Dict[int, int]]:
    """All k-subsets of an n-set in lexicographic order and the inverse label index."""
    order = tuple(_bits(c) for c in combinations(range(n), k))
    return order, {bits: label for label, bits in enumerate(order)}


def _check_vertex(p: KneserParams, s: KSubset) -> None:
    if s.ground_size != p.n or s.size != p.k:
        raise ValueError(f"{s} is not a vertex of K({p.n},{p.k})")


class KneserHandler:
    @staticmethod
    def kneser_graph(p: KneserParams, vertex_cap: Optional[int] = None) -> Tuple[Graph, List[KSubset]]:
        """Build K(n,k) with vertices labeled in lexicographic subset order.

        Args:
            p: Kneser parameters
            vertex_cap: Largest allowed C(n,k) (default: CRLAB_VERTEX_CAP)

        Returns:
            Tuple[Graph, List[KSubset]]: The graph and the label -> subset table

        Raises:
            TooLarge: If C(n,k) exceeds the cap
        """
        cap = get_settings().vertex_cap if vertex_cap is None else vertex_cap
        size = comb(p.n, p.k)
        if size > cap:
            raise TooLarge(f"K({p.n},{p.k}) has {size} vertices, above the cap of {cap}")
        order, index = vertex_table(p.n, p.k)
        adj = []
        for bits in order:
            adj.append(sum(1 << index[nb] for nb in neighbor_bits(p, bits)))
        subsets = [KSubset(ground_size=p.n, bits=bits) for bits in order]
        logger.info(f"Built K({p.n},{p.k}) with {size} vertices")
        return Graph(n=size, adj=tuple(adj)), subsets

    @staticmethod
    def label_of(p: KneserParams, s: KSubset) -> int:
        _check_vertex(p, s)
        return vertex_table(p.n, p.k)[1][s.bits]

    @staticmethod
    def subset_of(p: KneserParams, label: int) -> KSubset:
        order = vertex_table(p.n, p.k)[0]
        if not 0 <= label < len(order):
            raise ValueError(f"Label {label} is not a vertex of K({p.n},{p.k})")
        return KSubset(ground_size=p.n, bits=order[label])

    @staticmethod
    def find_walk(p: KneserParams, a: KSubset, b: KSubset, length: int) -> Optional[List[KSubset]]:
        """A walk of exactly `length` steps from a to b, or None if none exists.

        BFS over (vertex, parity) gives the shortest walk of each parity; a
        walk of that parity exists for every longer length of the same
        parity, obtained by bouncing along an edge at b.
        """
        _check_vertex(p, a)
        _check_vertex(p, b)
        if length < 1:
            raise ValueError(f"Walk length must be >= 1, got {length}")

        start = (a.bits, 0)
        goal = (b.bits, length % 2)
        parent: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {start: None}
        queue = deque([start])
        while queue and goal not in parent:
            bits, parity = queue.popleft()
            for nb in neighbor_bits(p, bits):
                state = (nb, 1 - parity)
                if state not in parent:
                    parent[state] = (bits, parity)
                    queue.append(state)
        if goal not in parent:
            return None

        walk = []
        cursor: Optional[Tuple[int, int]] = goal
        while cursor is not None:
            walk.append(cursor[0])
            cursor = parent[cursor]
        walk.reverse()
        if len(walk) - 1 > length:
            return None

        bounce = next(neighbor_bits(p, b.bits))
        while len(walk) - 1 < length:
            walk.extend([bounce, b.bits])
        return [KSubset(ground_size=p.n, bits=bits) for bits in walk]

    @staticmethod
    def find_constrained_walk(
        p: KneserParams,
        a: KSubset,
        b: KSubset,
        length: int,
        avoid: Sequence[int]
    ) -> Optional[List[KSubset]]:
        """A walk a = c0, ..., c_length = b where each inner c_i misses avoid[i].

        Used when re-expanding a path whose inner vertices also had neighbors
        outside the path: avoid[i] is the union of those neighbors' colors.
        Exact: reachable sets are built layer by layer, then the walk is read
        backwards choosing the lexicographically first admissible color.
        """
        _check_vertex(p, a)
        _check_vertex(p, b)
        if len(avoid) != length + 1:
            raise ValueError(f"avoid must have {length + 1} entries, got {len(avoid)}")

        layers = [{a.bits}]
        for i in range(1, length):
            layer = set()
            for bits in layers[-1]:
                for nb in neighbor_bits(p, bits):
                    if nb & avoid[i] == 0:
                        layer.add(nb)
            if not layer:
                return None
            layers.append(layer)

        walk = [b.bits]
        for i in range(length - 1, -1, -1):
            after = walk[-1]
            options = sorted((bits for bits in layers[i] if bits & after == 0), key=lex_key)
            if not options:
                return None
            walk.append(options[0])
        walk.reverse()
        return [KSubset(ground_size=p.n, bits=bits) for bits in walk]

    @staticmethod
    def find_common_neighbor(p: KneserParams, colors: Sequence[KSubset]) -> Optional[KSubset]:
        """The lexicographically first k-subset disjoint from every listed color.

        The first disjoint candidate in lexicographic order is exactly the k
        smallest elements outside the union of the colors.
        """
        used = 0
        for color in colors:
            _check_vertex(p, color)
            used |= color.bits
        free = [x for x in range(p.n) if not (used >> x) & 1]
        if len(free) < p.k:
            return None
        return KSubset.from_elements(p.n, free[: p.k])

    @staticmethod
    def refute_hom_by_odd_girth(g_source: Graph, g_target: Graph) -> Optional[ObstructionCertificate]:
        """Certificate that no homomorphism exists because the source has a shorter odd cycle.

        The image of an odd cycle is a closed odd walk of the same length,
        which contains an odd cycle no longer than it.
        """
        cycle = ParameterHandler.shortest_odd_cycle(g_source)
        if cycle is None:
            return None
        target_girth = ParameterHandler.odd_girth(g_target)
        if target_girth.value is not None and len(cycle) >= target_girth.value:
            return None
        return ObstructionCertificate(
            source_odd_girth=len(cycle),
            target_odd_girth=target_girth.value,
            witness_cycle=tuple(cycle),
        )
