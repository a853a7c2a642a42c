from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from internal.custom_types.charge import ChargeAudit
from internal.custom_types.graph import GraphClass
from internal.custom_types.kneser import EmbeddingAttempt
from internal.custom_types.reduction import LiftOutcome, ReductionStep
from internal.custom_types.search import Homomorphism, PremiseCheck, SearchOutcome


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs of one pipeline run.

    k is the target level: the pipeline colors into K(2k+1, k). The
    reduction steps are audited at level k-1, whose thresholds 2(k-1)+3 and
    2(k-1)+1 are 2k+1 and 2k-1.
    """
    k: int
    L: Optional[int] = None
    node_budget: Optional[int] = None
    rule_variant: str = "standard"
    max_reduction_steps: Optional[int] = None
    base_size: int = 8
    timing: bool = True

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"k must be >= 2, got {self.k}")
        if self.L is not None and self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if self.base_size < 0:
            raise ValueError(f"base_size must be >= 0, got {self.base_size}")

    @property
    def thread_threshold(self) -> int:
        return self.L if self.L is not None else 3 * (2 * self.k + 1)

    @property
    def reduction_level(self) -> int:
        return self.k - 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "L": self.thread_threshold,
            "nodeBudget": self.node_budget,
            "ruleVariant": self.rule_variant,
            "maxReductionSteps": self.max_reduction_steps,
            "baseSize": self.base_size,
        }


@dataclass(frozen=True)
class ClaimViolation:
    """An audited claim that failed on a concrete step.

    step is the index of the offending reduction step; failures while
    coloring the fully reduced graph use the number of steps.
    """
    step: int
    claims: Tuple[str, ...]
    detail: str
    certificate: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "step": self.step,
            "claims": list(self.claims),
            "detail": self.detail,
            "certificate": self.certificate,
        }


@dataclass
class BaseColoring:
    """How the fully reduced graph was colored into K(2k+1, k).

    level is the lower level j the graph fell to (None when it still meets
    the premises at k, or meets them at no level), embedding the attempt at
    K(2j+1, j) -> K(2k+1, k) made for it.
    """
    outcome: SearchOutcome
    level: Optional[int] = None
    embedding: Optional[EmbeddingAttempt] = None
    violation: Optional[ClaimViolation] = None


@dataclass
class PipelineReport:
    premises: PremiseCheck
    classification: GraphClass
    steps: List[ReductionStep] = field(default_factory=list)
    base_outcome: Optional[SearchOutcome] = None
    level_drop: Optional[int] = None
    embedding: Optional[EmbeddingAttempt] = None
    lifts: List[LiftOutcome] = field(default_factory=list)
    fallback_outcome: Optional[SearchOutcome] = None
    final_hom: Optional[Homomorphism] = None
    claim_violations: List[ClaimViolation] = field(default_factory=list)
    discharging: Optional[ChargeAudit] = None

    @property
    def skipped(self) -> bool:
        return not self.premises.passed

    @property
    def hom_found(self) -> bool:
        return self.final_hom is not None

    @property
    def nodes(self) -> int:
        return sum(outcome.nodes for outcome in (self.base_outcome, self.fallback_outcome) if outcome)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "premises": self.premises.to_dict(),
            "skipped": self.skipped,
            "classification": self.classification.to_dict(),
            "steps": [step.to_dict() for step in self.steps],
            "baseOutcome": self.base_outcome.to_dict() if self.base_outcome else None,
            "levelDrop": self.level_drop,
            "embedding": self.embedding.to_dict() if self.embedding else None,
            "lifts": [lift.to_dict() for lift in self.lifts],
            "fallbackOutcome": self.fallback_outcome.to_dict() if self.fallback_outcome else None,
            "finalHom": self.final_hom.to_dict() if self.final_hom else None,
            "claimViolations": [violation.to_dict() for violation in self.claim_violations],
            "discharging": self.discharging.to_dict() if self.discharging else None,
        }
