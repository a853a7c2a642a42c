from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from internal.custom_types.graph import OddGirth
from internal.custom_types.kneser import ObstructionCertificate
from internal.utils.rational import fraction_str


@dataclass(frozen=True)
class Homomorphism:
    """Vertex map from a source graph to a target graph: mapping[v] is the image of v."""
    mapping: Tuple[int, ...]
    target: str = ""

    def __len__(self) -> int:
        return len(self.mapping)

    def to_dict(self) -> Dict[str, Any]:
        return {"map": list(self.mapping), "target": self.target}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Homomorphism':
        return cls(mapping=tuple(int(x) for x in data["map"]), target=data.get("target", ""))


class SearchStatus(str, Enum):
    FOUND = "Found"
    NONE_EXHAUSTIVE = "NoneExhaustive"
    REFUTED = "Refuted"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    nodes: int = 0
    homomorphism: Optional[Homomorphism] = None
    obstruction: Optional[ObstructionCertificate] = None

    @property
    def found(self) -> bool:
        return self.status == SearchStatus.FOUND

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "nodes": self.nodes,
            "homomorphism": self.homomorphism.to_dict() if self.homomorphism else None,
            "obstruction": self.obstruction.to_dict() if self.obstruction else None,
        }


@dataclass(frozen=True)
class PremiseCheck:
    k: int
    mad: Fraction
    odd_girth: OddGirth
    mad_ok: bool
    odd_girth_ok: bool

    @property
    def passed(self) -> bool:
        return self.mad_ok and self.odd_girth_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "mad": fraction_str(self.mad),
            "madBound": f"{2 * self.k + 1}/{self.k}",
            "oddGirth": self.odd_girth.to_dict(),
            "oddGirthBound": 2 * self.k + 1,
            "madOk": self.mad_ok,
            "oddGirthOk": self.odd_girth_ok,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ConjectureReport:
    premises: PremiseCheck
    outcome: Optional[SearchOutcome]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "premises": self.premises.to_dict(),
            "outcome": self.outcome.to_dict() if self.outcome else None,
            "searchSkipped": self.outcome is None,
        }
