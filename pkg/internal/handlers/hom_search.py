import logging
from collections import deque
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from internal.custom_types.errors import ShapeMismatch
from internal.custom_types.graph import Graph, iter_bits
from internal.custom_types.kneser import KneserParams
from internal.custom_types.search import (
    ConjectureReport,
    Homomorphism,
    PremiseCheck,
    SearchOutcome,
    SearchStatus,
)
from internal.handlers.kneser import KneserHandler
from internal.handlers.parameters import ParameterHandler
from internal.utils.config import get_settings

logger = logging.getLogger(__name__)


class _BudgetSpent(Exception):
    pass


class _Search:
    """Backtracking over source vertices with maintained arc consistency.

    Domains are bitmasks over target labels. Variable order is smallest
    domain first (ties by label), values are tried in increasing label order.
    """

    def __init__(self, source: Graph, target: Graph, budget: int, progress_every: int):
        self.source = source
        self.target = target
        self.budget = budget
        self.progress_every = progress_every
        self.nodes = 0

    def _revise(self, domains: List[int], u: int, v: int) -> bool:
        """Drop values of u with no target neighbor left in v's domain; True if u shrank."""
        support = domains[v]
        kept = 0
        for a in iter_bits(domains[u]):
            if self.target.adj[a] & support:
                kept |= 1 << a
        if kept != domains[u]:
            domains[u] = kept
            return True
        return False

    def propagate(self, domains: List[int], changed: Sequence[int]) -> bool:
        queue = deque((w, x) for x in changed for w in iter_bits(self.source.adj[x]))
        while queue:
            u, v = queue.popleft()
            if self._revise(domains, u, v):
                if not domains[u]:
                    return False
                queue.extend((w, u) for w in iter_bits(self.source.adj[u]) if w != v)
        return True

    def solve(self, domains: List[int], assigned: List[bool]) -> Optional[List[int]]:
        best = None
        for v in range(self.source.n):
            if not assigned[v]:
                size = domains[v].bit_count()
                if best is None or size < best[0]:
                    best = (size, v)
        if best is None:
            return [d.bit_length() - 1 for d in domains]

        u = best[1]
        assigned[u] = True
        for a in iter_bits(domains[u]):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetSpent()
            if self.nodes % self.progress_every == 0:
                logger.info(f"Homomorphism search: {self.nodes} nodes explored")
            trial = list(domains)
            trial[u] = 1 << a
            if self.propagate(trial, [u]):
                found = self.solve(trial, assigned)
                if found is not None:
                    return found
        assigned[u] = False
        return None


class HomSearchHandler:
    @staticmethod
    def verify_hom(g_source: Graph, g_target: Graph, h: Homomorphism) -> List[Tuple[int, int]]:
        """List every source edge whose image is not a target edge.

        Raises:
            ShapeMismatch: If the map has the wrong length or an out-of-range value
        """
        if len(h.mapping) != g_source.n:
            raise ShapeMismatch(f"Map has {len(h.mapping)} entries for {g_source.n} source vertices")
        for v, image in enumerate(h.mapping):
            if not 0 <= image < g_target.n:
                raise ShapeMismatch(f"Vertex {v} maps to {image}, outside 0..{g_target.n - 1}")
        return [(u, v) for u, v in g_source.edges() if not g_target.has_edge(h.mapping[u], h.mapping[v])]

    @staticmethod
    def find_hom(
        g_source: Graph,
        g_target: Graph,
        budget: Optional[int] = None,
        target_name: str = ""
    ) -> SearchOutcome:
        """Decide whether g_source maps homomorphically into g_target.

        The odd-girth obstruction is tried first. Otherwise the search is
        exhaustive within `budget` assignment nodes.

        Args:
            g_source: Graph to color
            g_target: Target graph (must have at least one vertex)
            budget: Node budget (default: CRLAB_NODE_BUDGET)
            target_name: Label recorded in the certificate, e.g. "kneser:5,2"

        Returns:
            SearchOutcome: Found / Refuted / NoneExhaustive / BudgetExceeded
        """
        if g_target.n == 0:
            raise ValueError("Target graph must have at least one vertex")
        settings = get_settings()
        budget = settings.node_budget if budget is None else budget

        obstruction = KneserHandler.refute_hom_by_odd_girth(g_source, g_target)
        if obstruction is not None:
            logger.info(f"Refuted by odd girth: {obstruction.source_odd_girth} < {obstruction.target_odd_girth}")
            return SearchOutcome(status=SearchStatus.REFUTED, obstruction=obstruction)

        search = _Search(g_source, g_target, budget, settings.progress_every)
        domains = [g_target.vertex_mask] * g_source.n
        try:
            if not search.propagate(domains, range(g_source.n)):
                return SearchOutcome(status=SearchStatus.NONE_EXHAUSTIVE, nodes=0)
            mapping = search.solve(domains, [False] * g_source.n)
        except _BudgetSpent:
            logger.warning(f"Homomorphism search stopped after {search.nodes} nodes")
            return SearchOutcome(status=SearchStatus.BUDGET_EXCEEDED, nodes=search.nodes)

        if mapping is None:
            logger.info(f"No homomorphism exists ({search.nodes} nodes)")
            return SearchOutcome(status=SearchStatus.NONE_EXHAUSTIVE, nodes=search.nodes)

        h = Homomorphism(mapping=tuple(mapping), target=target_name)
        violations = HomSearchHandler.verify_hom(g_source, g_target, h)
        if violations:
            logger.error(f"Search produced an invalid map; violated edges: {violations}")
            raise RuntimeError(f"Internal error: search result violates edges {violations}")
        logger.info(f"Homomorphism found after {search.nodes} nodes")
        return SearchOutcome(status=SearchStatus.FOUND, nodes=search.nodes, homomorphism=h)

    @staticmethod
    def check_premises(g: Graph, k: int) -> PremiseCheck:
        """mad(g) < (2k+1)/k and odd-girth(g) >= 2k+1, with the exact values."""
        mad = ParameterHandler.mad(g) if g.n else Fraction(0)
        odd_girth = ParameterHandler.odd_girth(g)
        return PremiseCheck(
            k=k,
            mad=mad,
            odd_girth=odd_girth,
            mad_ok=mad < Fraction(2 * k + 1, k),
            odd_girth_ok=odd_girth.at_least(2 * k + 1),
        )

    @staticmethod
    def conjecture_instance(g: Graph, k: int, budget: Optional[int] = None) -> ConjectureReport:
        """Check both premises at level k and, if they hold, search for G -> K(2k+1,k)."""
        if k < 2:
            raise ValueError(f"k must be >= 2, got {k}")
        premises = HomSearchHandler.check_premises(g, k)
        if not premises.passed:
            logger.info(f"Premises fail at k={k}: mad={premises.mad}, odd girth={premises.odd_girth}")
            return ConjectureReport(premises=premises, outcome=None)
        params = KneserParams.odd(k)
        target, _ = KneserHandler.kneser_graph(params)
        outcome = HomSearchHandler.find_hom(g, target, budget, target_name=str(params))
        return ConjectureReport(premises=premises, outcome=outcome)
