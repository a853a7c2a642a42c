from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    Adjacency is stored as one bitmask per vertex; Python integers make this
    the fast path for small n and keep working unchanged for larger graphs.
    Equality is labeled equality.
    """
    n: int
    adj: Tuple[int, ...]

    def __post_init__(self):
        if self.n < 0 or len(self.adj) != self.n:
            raise ValueError(f"Adjacency table of length {len(self.adj)} does not match n={self.n}")
        full = (1 << self.n) - 1
        for v, mask in enumerate(self.adj):
            if mask & ~full:
                raise ValueError(f"Vertex {v} has a neighbor outside 0..{self.n - 1}")
            if (mask >> v) & 1:
                raise ValueError(f"Self-loop at vertex {v}")
            for u in iter_bits(mask):
                if not (self.adj[u] >> v) & 1:
                    raise ValueError(f"Asymmetric adjacency between {v} and {u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'Graph':
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"Self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge ({u}, {v}) leaves the vertex range 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n=n, adj=tuple(adj))

    @classmethod
    def empty(cls, n: int) -> 'Graph':
        return cls(n=n, adj=(0,) * n)

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> 'Graph':
        nodes = sorted(g.nodes())
        if nodes != list(range(len(nodes))):
            raise ValueError("networkx graph must be labeled 0..n-1")
        return cls.from_edges(len(nodes), g.edges())

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges())
        return g

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as (u, v) pairs with u < v, sorted."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def edge_count(self) -> int:
        return sum(mask.bit_count() for mask in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> List[int]:
        return [mask.bit_count() for mask in self.adj]

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def neighbors(self, v: int) -> List[int]:
        return list(iter_bits(self.adj[v]))

    def with_edge(self, u: int, v: int) -> 'Graph':
        if u == v:
            raise ValueError(f"Self-loop at vertex {u}")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(n=self.n, adj=tuple(adj))

    def without_edge(self, u: int, v: int) -> 'Graph':
        adj = list(self.adj)
        adj[u] &= ~(1 << v)
        adj[v] &= ~(1 << u)
        return Graph(n=self.n, adj=tuple(adj))

    def induced(self, vertices: Sequence[int]) -> 'Graph':
        """Induced subgraph, relabeled so that vertices[i] becomes i."""
        index = {v: i for i, v in enumerate(vertices)}
        adj = []
        for v in vertices:
            adj.append(sum(1 << index[u] for u in iter_bits(self.adj[v]) if u in index))
        return Graph(n=len(vertices), adj=tuple(adj))

    def without_vertices(self, removed: Iterable[int]) -> Tuple['Graph', Tuple[int, ...]]:
        """Delete vertices and relabel the rest in order.

        Returns:
            The smaller graph and the tuple `kept`, where kept[i] is the old
            label of new vertex i.
        """
        gone = set(removed)
        kept = tuple(v for v in range(self.n) if v not in gone)
        return self.induced(kept), kept

    def size_key(self) -> Tuple[int, int]:
        """The (|V|, |E|) order used to compare graph sizes."""
        return (self.n, self.edge_count())

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Graph':
        return cls.from_edges(data["n"], [tuple(e) for e in data["edges"]])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError(f"A cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves: int) -> Graph:
    """K1,leaves with the center at label 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def iter_labeled_graphs(n: int) -> Iterator[Graph]:
    """Every labeled graph on n vertices, one per subset of the C(n,2) pairs."""
    pairs = [(u, v) for v in range(1, n) for u in range(v)]
    for code in range(1 << len(pairs)):
        yield Graph.from_edges(n, [pairs[i] for i in iter_bits(code)])


@dataclass(frozen=True)
class OddGirth:
    """Length of a shortest odd cycle; value None means infinite (bipartite)."""
    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None and (self.value < 3 or self.value % 2 == 0):
            raise ValueError(f"Odd girth must be an odd integer >= 3, got {self.value}")

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def at_least(self, bound: int) -> bool:
        return self.value is None or self.value >= bound

    def less_than(self, other: 'OddGirth') -> bool:
        if self.value is None:
            return False
        return other.value is None or self.value < other.value

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)

    def to_dict(self) -> Any:
        return "inf" if self.value is None else self.value


class ClassLabel(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


@dataclass(frozen=True)
class GraphClass:
    label: ClassLabel
    max_degree: int
    long_thread_witness: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label.value,
            "maxDegree": self.max_degree,
            "longThreadWitness": list(self.long_thread_witness) if self.long_thread_witness else None,
        }
