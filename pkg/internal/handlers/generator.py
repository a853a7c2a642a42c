import logging
import math
import random
from collections import deque
from fractions import Fraction
from typing import Optional

from internal.custom_types.errors import GenerationExhausted
from internal.custom_types.graph import Graph, iter_bits
from internal.handlers.parameters import ParameterHandler

logger = logging.getLogger(__name__)


def _even_distance(g: Graph, u: int, v: int) -> Optional[int]:
    """Length of a shortest even-length walk from u to v, or None."""
    seen = {(u, 0): 0}
    queue = deque([(u, 0)])
    while queue:
        vertex, parity = queue.popleft()
        d = seen[(vertex, parity)]
        for w in iter_bits(g.adj[vertex]):
            state = (w, 1 - parity)
            if state in seen:
                continue
            seen[state] = d + 1
            if state == (v, 0):
                return d + 1
            queue.append(state)
    return None


class GeneratorHandler:
    @staticmethod
    def gen_constrained(
        n: int,
        mad_bound: Fraction,
        odd_girth_min: int,
        seed: int,
        max_attempts: Optional[int] = None
    ) -> Graph:
        """Random graph with mad < mad_bound and odd girth >= odd_girth_min.

        Candidate edges are tried in a seeded random order and rejected when
        they would break either bound. Both properties are monotone under edge
        insertion, so a rejected pair never becomes acceptable later and one
        pass over the pairs suffices. The edge target is drawn between n-1 and
        the most edges the mad bound allows.

        Args:
            n: Vertex count
            mad_bound: Strict upper bound on mad
            odd_girth_min: Odd lower bound on the odd girth
            seed: Random seed; equal seeds give equal graphs
            max_attempts: Cap on candidate pairs examined (default: all pairs)

        Raises:
            ValueError: On n < 1 or an even/too small odd_girth_min
            GenerationExhausted: If the bounds cannot be met
        """
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if odd_girth_min < 3 or odd_girth_min % 2 == 0:
            raise ValueError(f"odd_girth_min must be odd and >= 3, got {odd_girth_min}")
        mad_bound = Fraction(mad_bound)
        if mad_bound <= 0:
            raise GenerationExhausted(f"No graph has mad < {mad_bound}")

        rng = random.Random(seed)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        rng.shuffle(pairs)
        cap = min(len(pairs), math.ceil(mad_bound * n / 2) - 1)
        target = rng.randint(min(n - 1, cap), cap) if cap > 0 else 0

        g = Graph.empty(n)
        edges = 0
        budget = len(pairs) if max_attempts is None else max_attempts
        for attempt, (u, v) in enumerate(pairs):
            if edges >= target or attempt >= budget:
                break
            d = _even_distance(g, u, v)
            if d is not None and d + 1 < odd_girth_min:
                continue
            candidate = g.with_edge(u, v)
            if not ParameterHandler.mad_below(candidate, mad_bound):
                continue
            g = candidate
            edges += 1

        if ParameterHandler.mad(g) >= mad_bound or not ParameterHandler.odd_girth(g).at_least(odd_girth_min):
            logger.error(f"Generated graph failed verification (n={n}, seed={seed})")
            raise GenerationExhausted(f"Could not satisfy mad < {mad_bound}, odd girth >= {odd_girth_min}")
        logger.info(f"Generated constrained graph n={n} m={edges} seed={seed}")
        return g
