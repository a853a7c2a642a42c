import logging
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from internal.custom_types.errors import ShapeMismatch, TargetMismatch
from internal.custom_types.graph import Graph
from internal.custom_types.kneser import EmbeddingAttempt, EmbeddingStatus, KneserParams
from internal.custom_types.search import Homomorphism
from internal.handlers.hom_search import HomSearchHandler
from internal.handlers.kneser import KneserHandler, vertex_table
from internal.utils.config import get_settings

logger = logging.getLogger(__name__)


class _BudgetSpent(Exception):
    pass


def _subsets_of(mask: int, size: int) -> List[int]:
    """All size-subsets of the set bits of mask, lexicographically."""
    elements = [x for x in range(mask.bit_length()) if (mask >> x) & 1]
    result = []
    for chosen in combinations(elements, size):
        bits = 0
        for x in chosen:
            bits |= 1 << x
        result.append(bits)
    return result


def _check_levels(j: int, k: int) -> None:
    if not 2 <= j <= k:
        raise ValueError(f"Embedding parameters need 2 <= j <= k, got j={j}, k={k}")


class _PatternSearch:
    """Backtracking over pattern assignments with forward checking.

    Each j-subset X of T gets a pattern P_X. Two images X u P_X and Y u P_Y
    must be disjoint whenever X and Y are, and distinct whenever X != Y.
    """

    def __init__(self, xs: Tuple[int, ...], domains: List[List[int]], budget: int, progress_every: int):
        self.xs = xs
        self.initial = domains
        self.budget = budget
        self.progress_every = progress_every
        self.nodes = 0

    def _compatible(self, a: int, pa: int, b: int, pb: int) -> bool:
        image_a, image_b = self.xs[a] | pa, self.xs[b] | pb
        if image_a == image_b:
            return False
        if self.xs[a] & self.xs[b] == 0 and image_a & image_b:
            return False
        return True

    def solve(self) -> Optional[List[int]]:
        assignment: List[Optional[int]] = [None] * len(self.xs)
        return self._solve(self.initial, assignment)

    def _solve(self, domains: List[List[int]], assignment: List[Optional[int]]) -> Optional[List[int]]:
        open_vars = [i for i, value in enumerate(assignment) if value is None]
        if not open_vars:
            return list(assignment)
        var = min(open_vars, key=lambda i: (len(domains[i]), i))
        for pattern in domains[var]:
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetSpent()
            if self.nodes % self.progress_every == 0:
                logger.info(f"Embedding search: {self.nodes} nodes explored")
            pruned = list(domains)
            wiped = False
            for other in open_vars:
                if other == var:
                    continue
                kept = [q for q in domains[other] if self._compatible(var, pattern, other, q)]
                if not kept:
                    wiped = True
                    break
                pruned[other] = kept
            if wiped:
                continue
            assignment[var] = pattern
            found = self._solve(pruned, assignment)
            if found is not None:
                return found
            assignment[var] = None
        return None


class EmbeddingHandler:
    @staticmethod
    def attempt_embedding(
        j: int,
        k: int,
        budget: Optional[int] = None,
        relaxed: bool = False
    ) -> EmbeddingAttempt:
        """Search exhaustively for patterns making X -> X u P_X a Kneser embedding.

        The source is K(2j+1, j) on T = {0..2j}, the target K(2k+3, k+1) on
        S = {0..2k+2}. Patterns are (k+1-j)-subsets of U = S \\ T, or of S \\ X
        when relaxed.

        Args:
            j: Source level
            k: Target level (2 <= j <= k)
            budget: Node budget (default: CRLAB_NODE_BUDGET)
            relaxed: Allow patterns anywhere outside X

        Returns:
            EmbeddingAttempt: Verified, FailedExhaustive or BudgetExceeded
        """
        _check_levels(j, k)
        settings = get_settings()
        budget = settings.node_budget if budget is None else budget
        t, s, r = 2 * j + 1, 2 * k + 3, k + 1 - j
        ground_s = (1 << s) - 1
        u_mask = ground_s & ~((1 << t) - 1)
        xs = vertex_table(t, j)[0]

        domains = [_subsets_of(ground_s & ~x if relaxed else u_mask, r) for x in xs]
        search = _PatternSearch(xs, domains, budget, settings.progress_every)
        try:
            found = search.solve()
        except _BudgetSpent:
            logger.warning(f"Embedding search ({j},{k}) stopped after {search.nodes} nodes")
            return EmbeddingAttempt(
                j=j, k=k, status=EmbeddingStatus.BUDGET_EXCEEDED, search_nodes=search.nodes, relaxed=relaxed
            )

        if found is None:
            logger.info(f"No pattern assignment exists for ({j},{k}); {search.nodes} nodes")
            return EmbeddingAttempt(
                j=j, k=k, status=EmbeddingStatus.FAILED_EXHAUSTIVE, search_nodes=search.nodes, relaxed=relaxed
            )

        attempt = EmbeddingAttempt(
            j=j,
            k=k,
            status=EmbeddingStatus.VERIFIED,
            patterns=dict(zip(xs, found)),
            search_nodes=search.nodes,
            relaxed=relaxed,
        )
        violation = EmbeddingHandler.audit_embedding(attempt)
        if violation is not None:
            logger.error(f"Pattern search returned an assignment failing its audit at {violation}")
            raise RuntimeError(f"Internal error: embedding ({j},{k}) fails its audit at {violation}")
        return attempt

    @staticmethod
    def pairing_scheme_embedding(j: int, k: int) -> EmbeddingAttempt:
        """Audit the literal pair-allocation scheme.

        U is split into consecutive pairs; the i-th j-subset of T (in
        lexicographic order) takes from pair m the element selected by bit m
        of i. The first violating pair is reported.
        """
        _check_levels(j, k)
        t, r = 2 * j + 1, k + 1 - j
        xs = vertex_table(t, j)[0]
        patterns = {}
        for i, x in enumerate(xs):
            pattern = 0
            for m in range(r):
                pattern |= 1 << (t + 2 * m + ((i >> m) & 1))
            patterns[x] = pattern

        attempt = EmbeddingAttempt(
            j=j, k=k, status=EmbeddingStatus.VERIFIED, patterns=patterns, scheme="pairing"
        )
        violation = EmbeddingHandler.audit_embedding(attempt)
        if violation is not None:
            attempt.status = EmbeddingStatus.FAILED_WITNESS
            attempt.witness_pair = violation
            logger.info(f"Pairing scheme ({j},{k}) fails at {violation}")
        return attempt

    @staticmethod
    def embedding_map(attempt: EmbeddingAttempt) -> Homomorphism:
        """Label map K(2j+1, j) -> K(2k+3, k+1) induced by the attempt's patterns.

        Raises:
            ValueError: If some j-subset of T has no pattern
        """
        xs = vertex_table(attempt.ground_t, attempt.j)[0]
        missing = [x for x in xs if x not in attempt.patterns]
        if missing:
            raise ValueError(f"Embedding ({attempt.j},{attempt.k}) has no pattern for {len(missing)} subsets")
        target = KneserParams(n=attempt.ground_s, k=attempt.k + 1)
        index = vertex_table(target.n, target.k)[1]
        mapping = []
        for x in xs:
            image = attempt.image(x)
            if image.size != target.k:
                raise ShapeMismatch(f"Image {image} of a {attempt.j}-subset is not a {target.k}-subset")
            mapping.append(index[image.bits])
        return Homomorphism(mapping=tuple(mapping), target=str(target))

    @staticmethod
    def audit_embedding(attempt: EmbeddingAttempt) -> Optional[Tuple[int, int]]:
        """Independent check of an assignment: adjacency preserved and map injective.

        Returns:
            The first offending pair of j-subsets (as bits), or None if the map embeds
        """
        source_params = KneserParams.odd(attempt.j)
        target_params = KneserParams(n=attempt.ground_s, k=attempt.k + 1)
        source, _ = KneserHandler.kneser_graph(source_params)
        target, _ = KneserHandler.kneser_graph(target_params)
        phi = EmbeddingHandler.embedding_map(attempt)
        xs = vertex_table(attempt.ground_t, attempt.j)[0]

        violations = HomSearchHandler.verify_hom(source, target, phi)
        if violations:
            u, v = violations[0]
            return xs[u], xs[v]

        first_seen: Dict[int, int] = {}
        for label, image in enumerate(phi.mapping):
            if image in first_seen:
                return xs[first_seen[image]], xs[label]
            first_seen[image] = label
        return None

    @staticmethod
    def compose(
        h: Homomorphism,
        phi: Homomorphism,
        g_source: Optional[Graph] = None,
        g_target: Optional[Graph] = None
    ) -> Homomorphism:
        """phi after h: carry a lower-level coloring into the higher-level target.

        When both graphs are given the composite is verified against them.

        Raises:
            ShapeMismatch: If h uses a label phi does not map
            TargetMismatch: If the composite is not a homomorphism g_source -> g_target
        """
        for v, label in enumerate(h.mapping):
            if not 0 <= label < len(phi.mapping):
                raise ShapeMismatch(f"Vertex {v} has color {label}, outside the embedding's domain")
        composite = Homomorphism(mapping=tuple(phi.mapping[label] for label in h.mapping), target=phi.target)
        if g_source is not None and g_target is not None:
            violations = HomSearchHandler.verify_hom(g_source, g_target, composite)
            if violations:
                raise TargetMismatch(f"Composite map violates edges {violations}")
        return composite
