import logging
from fractions import Fraction
from typing import List, Optional, Tuple

import pandas as pd

from internal.custom_types.charge import ChargeAudit, ChargeState, Rule, RuleVariant, Transfer
from internal.custom_types.errors import NonTermination, ShapeMismatch
from internal.custom_types.graph import Graph
from internal.custom_types.reduction import ForbiddenKind
from internal.handlers.parameters import ParameterHandler
from internal.handlers.reductions import ReductionHandler

logger = logging.getLogger(__name__)

TRANSFER_COLUMNS = ["round", "rule", "from", "to", "amount"]


def _candidate_transfers(g: Graph, k: int, L: int, variant: RuleVariant) -> List[Tuple[Rule, int, int]]:
    """Every (rule, sender, receiver) whose structural condition holds on g.

    Sorted by sender, then rule, then receiver; duplicates collapse.
    """
    degrees = g.degrees()
    keys = set()
    for v in range(g.n):
        if degrees[v] >= 4:
            for w in g.neighbors(v):
                if degrees[w] in variant.r1_degrees:
                    keys.add((Rule.R1, v, w))

    for match in ReductionHandler.detect_forbidden(g, k, L, kinds={ForbiddenKind.F2}):
        cycle = match.cycle
        for i, v in enumerate(cycle):
            keys.add((Rule.R2, v, cycle[(i + 1) % len(cycle)]))

    for path in ParameterHandler.iter_maximal_induced_paths(g, L + 1):
        keys.add((Rule.R3, path[0], path[1]))
        keys.add((Rule.R3, path[-1], path[-2]))

    rule_order = {Rule.R1: 0, Rule.R2: 1, Rule.R3: 2}
    return sorted(keys, key=lambda key: (key[1], rule_order[key[0]], key[2]))


class DischargingHandler:
    @staticmethod
    def init_charges(g: Graph) -> ChargeState:
        """Charge every vertex with its degree."""
        return ChargeState(charges=tuple(Fraction(d) for d in g.degrees()))

    @staticmethod
    def run_discharging(
        g: Graph,
        k: int,
        L: int,
        s: ChargeState,
        variant: Optional[RuleVariant] = None,
        max_rounds: Optional[int] = None
    ) -> ChargeState:
        """Apply R1-R3 in synchronous rounds until a round moves nothing.

        R1: a vertex of degree >= 4 sends to each neighbor whose degree the
        variant lists. R2: each vertex of a chorded odd cycle of length <= 2k+3
        sends to its successor on that cycle. R3: each endpoint of a maximal
        induced path with more than L edges sends to its path neighbor.

        A (rule, sender, receiver) transfer fires at most once. It is eligible
        in a round when the sender's charge at the start of the round is
        positive; every eligible transfer of a round is applied together.

        Args:
            g: The graph
            k: Level of the odd-cycle bound used by R2
            L: Thread threshold used by R3
            s: Starting state, normally init_charges(g)
            variant: Rule variant (default: standard)
            max_rounds: Round cap (default: max(1, |V|*|E|))

        Raises:
            ShapeMismatch: If s does not have one charge per vertex
            NonTermination: If the round cap is exceeded
        """
        if len(s.charges) != g.n:
            raise ShapeMismatch(f"Charge state has {len(s.charges)} entries for {g.n} vertices")
        variant = variant or RuleVariant()
        cap = max(1, g.n * g.edge_count()) if max_rounds is None else max_rounds

        pending = _candidate_transfers(g, k, L, variant)
        charges = list(s.charges)
        log = list(s.log)
        rounds = s.rounds
        while True:
            start = list(charges)
            firing = [key for key in pending if start[key[1]] > 0]
            if not firing:
                break
            rounds += 1
            if rounds - s.rounds > cap:
                logger.error(f"Discharging did not settle within {cap} rounds")
                raise NonTermination(f"Discharging exceeded the cap of {cap} rounds")
            for rule, sender, receiver in firing:
                amount = variant.amount(rule)
                charges[sender] -= amount
                charges[receiver] += amount
                log.append(Transfer(round=rounds, rule=rule, sender=sender, receiver=receiver, amount=amount))
            fired = set(firing)
            pending = [key for key in pending if key not in fired]

        logger.info(f"Discharging settled after {rounds - s.rounds} rounds and {len(log) - len(s.log)} transfers")
        return ChargeState(charges=tuple(charges), log=tuple(log), rounds=rounds)

    @staticmethod
    def audit_charges(g: Graph, s: ChargeState) -> ChargeAudit:
        """Compare the total with 2|E| and list vertices left with negative charge."""
        audit = ChargeAudit(
            total=s.total,
            expected=Fraction(2 * g.edge_count()),
            charges=s.charges,
            deficits=tuple(v for v, charge in enumerate(s.charges) if charge < 0),
        )
        if not audit.balanced:
            logger.warning(f"Charge total {audit.total} differs from 2|E| = {audit.expected}")
        return audit

    @staticmethod
    def export_transfer_log(s: ChargeState) -> pd.DataFrame:
        """The transfer log as a table with columns round, rule, from, to, amount."""
        return pd.DataFrame([t.to_dict() for t in s.log], columns=TRANSFER_COLUMNS)
