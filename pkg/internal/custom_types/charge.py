from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Tuple

from internal.utils.rational import fraction_str


class Rule(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"


@dataclass(frozen=True)
class RuleVariant:
    """Which neighbors R1 feeds and how much each rule moves.

    "standard" feeds neighbors of degree 1 or 2; "degree2" feeds degree-2
    neighbors only.
    """
    name: str = "standard"
    r1_degrees: FrozenSet[int] = frozenset({1, 2})
    r1_amount: Fraction = Fraction(1, 2)
    r2_amount: Fraction = Fraction(1, 4)
    r3_amount: Fraction = Fraction(1, 2)

    @classmethod
    def named(cls, name: str, **amounts: Fraction) -> 'RuleVariant':
        if name == "standard":
            return cls(name=name, **amounts)
        if name == "degree2":
            return cls(name=name, r1_degrees=frozenset({2}), **amounts)
        raise ValueError(f"Unknown rule variant {name!r}; expected 'standard' or 'degree2'")

    def amount(self, rule: Rule) -> Fraction:
        return {Rule.R1: self.r1_amount, Rule.R2: self.r2_amount, Rule.R3: self.r3_amount}[rule]


@dataclass(frozen=True)
class Transfer:
    round: int
    rule: Rule
    sender: int
    receiver: int
    amount: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round": self.round,
            "rule": self.rule.value,
            "from": self.sender,
            "to": self.receiver,
            "amount": fraction_str(self.amount),
        }


@dataclass(frozen=True)
class ChargeState:
    charges: Tuple[Fraction, ...]
    log: Tuple[Transfer, ...] = ()
    rounds: int = 0

    @property
    def total(self) -> Fraction:
        return sum(self.charges, Fraction(0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "charges": [fraction_str(c) for c in self.charges],
            "total": fraction_str(self.total),
            "rounds": self.rounds,
            "transfers": len(self.log),
        }


@dataclass(frozen=True)
class ChargeAudit:
    total: Fraction
    expected: Fraction
    charges: Tuple[Fraction, ...]
    deficits: Tuple[int, ...]

    @property
    def balanced(self) -> bool:
        return self.total == self.expected

    def to_dict(self) -> Dict[str, Any]:
        deficits: List[Dict[str, Any]] = [
            {"vertex": v, "charge": fraction_str(self.charges[v])} for v in self.deficits
        ]
        return {
            "total": fraction_str(self.total),
            "expected": fraction_str(self.expected),
            "balanced": self.balanced,
            "charges": [fraction_str(c) for c in self.charges],
            "deficits": deficits,
        }
