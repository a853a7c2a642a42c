from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from internal.custom_types.graph import Graph, OddGirth
from internal.custom_types.search import Homomorphism
from internal.utils.rational import fraction_str


class ForbiddenKind(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"

    @property
    def index(self) -> int:
        return int(self.value[1:])


class ReductionKind(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    PATH_COLLAPSE = "PathCollapse"
    VERTEX_DELETION = "VertexDeletion"


@dataclass(frozen=True)
class ConfigMatch:
    """One occurrence of a forbidden configuration in a host graph.

    Only the fields of the match's kind are set:
      F1: vertices = (leaf, neighbor)
      F2: cycle (canonical orientation) and chord
      F3: vertices = (center, *neighbors)
      F4: path, oriented so that path[0] < path[-1]
      F5: parts, the two overlapping matches
    """
    kind: ForbiddenKind
    vertices: Tuple[int, ...]
    cycle: Optional[Tuple[int, ...]] = None
    chord: Optional[Tuple[int, int]] = None
    path: Optional[Tuple[int, ...]] = None
    parts: Tuple['ConfigMatch', ...] = ()

    def split_lengths(self) -> Optional[Tuple[int, int]]:
        """Lengths (odd, even) of the two cycles the chord cuts the odd cycle into."""
        if self.cycle is None or self.chord is None:
            return None
        i, j = sorted(self.cycle.index(x) for x in self.chord)
        first = j - i + 1
        second = len(self.cycle) - (j - i) + 1
        return (first, second) if first % 2 else (second, first)

    def witness(self) -> Dict[str, Any]:
        if self.kind == ForbiddenKind.F1:
            return {"leaf": self.vertices[0], "neighbor": self.vertices[1]}
        if self.kind == ForbiddenKind.F2:
            return {"cycle": list(self.cycle), "chord": list(self.chord), "splitLengths": list(self.split_lengths())}
        if self.kind == ForbiddenKind.F3:
            return {"center": self.vertices[0], "neighbors": list(self.vertices[1:])}
        if self.kind == ForbiddenKind.F4:
            return {"path": list(self.path), "length": len(self.path) - 1}
        return {"parts": [part.to_dict() for part in self.parts]}

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "vertices": list(self.vertices), "witness": self.witness()}


@dataclass(frozen=True)
class StepAudit:
    """Parameters recomputed on both sides of a reduction step.

    k is the level of the odd-girth thresholds: 2k+3 for the level being colored
    and 2k+1 for the level below.
    """
    k: int
    mad_before: Fraction
    mad_after: Fraction
    odd_girth_before: OddGirth
    odd_girth_after: OddGirth

    @property
    def level_threshold(self) -> int:
        return 2 * self.k + 3

    @property
    def base_threshold(self) -> int:
        return 2 * self.k + 1

    @property
    def mad_not_increased(self) -> bool:
        return self.mad_after <= self.mad_before

    @property
    def odd_girth_not_decreased(self) -> bool:
        return not self.odd_girth_after.less_than(self.odd_girth_before)

    @property
    def level_threshold_kept(self) -> bool:
        """False when a graph that met the 2k+3 odd-girth premise no longer does."""
        return self.odd_girth_after.at_least(self.level_threshold) or not self.odd_girth_before.at_least(
            self.level_threshold
        )

    @property
    def claim_violated(self) -> bool:
        return not (self.mad_not_increased and self.odd_girth_not_decreased and self.level_threshold_kept)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "madBefore": fraction_str(self.mad_before),
            "madAfter": fraction_str(self.mad_after),
            "oddGirthBefore": self.odd_girth_before.to_dict(),
            "oddGirthAfter": self.odd_girth_after.to_dict(),
            "levelThreshold": self.level_threshold,
            "baseThreshold": self.base_threshold,
            "meetsLevelThreshold": self.odd_girth_after.at_least(self.level_threshold),
            "meetsBaseThreshold": self.odd_girth_after.at_least(self.base_threshold),
            "claims": {
                "madNotIncreased": self.mad_not_increased,
                "oddGirthNotDecreased": self.odd_girth_not_decreased,
                "levelThresholdKept": self.level_threshold_kept,
            },
            "claimViolated": self.claim_violated,
        }


@dataclass(frozen=True)
class ReductionStep:
    """A size-decreasing edit together with what is needed to undo it on a coloring.

    Vertex i of `after` is vertex kept[i] of `before`. path, added_edge and
    deleted_edge use `before` labels.
    """
    kind: ReductionKind
    before: Graph
    after: Graph
    kept: Tuple[int, ...]
    audit: StepAudit
    removed: Tuple[int, ...] = ()
    path: Optional[Tuple[int, ...]] = None
    added_edge: bool = False
    deleted_edge: Optional[Tuple[int, int]] = None
    match: Optional[ConfigMatch] = None

    def to_dict(self) -> Dict[str, Any]:
        added = []
        if self.added_edge and self.path is not None:
            added.append([self.path[0], self.path[-1]])
        return {
            "kind": self.kind.value,
            "sizeBefore": list(self.before.size_key()),
            "sizeAfter": list(self.after.size_key()),
            "removedVertices": list(self.removed),
            "addedEdges": added,
            "deletedEdges": [list(self.deleted_edge)] if self.deleted_edge else [],
            "collapsedPath": list(self.path) if self.path else None,
            "match": self.match.to_dict() if self.match else None,
            "audit": self.audit.to_dict(),
        }


class LiftStatus(str, Enum):
    LIFTED = "Lifted"
    LIFT_FAILED = "LiftFailed"


class LiftFailure(str, Enum):
    NO_WALK = "NoWalk"
    NO_COMMON_NEIGHBOR = "NoCommonNeighbor"


@dataclass(frozen=True)
class LiftOutcome:
    status: LiftStatus
    homomorphism: Optional[Homomorphism] = None
    reason: Optional[LiftFailure] = None
    detail: str = ""

    @property
    def lifted(self) -> bool:
        return self.status == LiftStatus.LIFTED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "reason": self.reason.value if self.reason else None,
            "detail": self.detail,
            "homomorphism": self.homomorphism.to_dict() if self.homomorphism else None,
        }
