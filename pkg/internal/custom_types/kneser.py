from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Tuple

from internal.custom_types.graph import iter_bits


@dataclass(frozen=True)
class KSubset:
    """A subset of {0..ground_size-1} stored as a bit vector.

    Ground elements are 0-indexed; the text form shows them 1-indexed, e.g. "{1,2,4}".
    """
    ground_size: int
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.ground_size:
            raise ValueError(f"Subset bits {self.bits:b} exceed ground size {self.ground_size}")

    @classmethod
    def from_elements(cls, ground_size: int, elements: Iterable[int]) -> 'KSubset':
        bits = 0
        for x in elements:
            if not 0 <= x < ground_size:
                raise ValueError(f"Element {x} outside ground set of size {ground_size}")
            bits |= 1 << x
        return cls(ground_size=ground_size, bits=bits)

    @classmethod
    def parse(cls, ground_size: int, text: str) -> 'KSubset':
        """Parse the 1-indexed display form "{1,2,4}"."""
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"Subset must be written in braces, got {text!r}")
        inner = body[1:-1].strip()
        elements = [int(tok) - 1 for tok in inner.split(",")] if inner else []
        return cls.from_elements(ground_size, elements)

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def elements(self) -> List[int]:
        return list(iter_bits(self.bits))

    def disjoint(self, other: 'KSubset') -> bool:
        return self.bits & other.bits == 0

    def __str__(self) -> str:
        return "{" + ",".join(str(x + 1) for x in self.elements()) + "}"


@dataclass(frozen=True)
class KneserParams:
    n: int
    k: int

    def __post_init__(self):
        if self.k < 1 or 2 * self.k + 1 > self.n:
            raise ValueError(f"Kneser parameters need 1 <= k and 2k+1 <= n, got n={self.n}, k={self.k}")

    @classmethod
    def odd(cls, k: int) -> 'KneserParams':
        """The conjecture target K(2k+1, k)."""
        return cls(n=2 * k + 1, k=k)

    @classmethod
    def parse(cls, text: str) -> 'KneserParams':
        """Parse "n,k"."""
        try:
            n, k = (int(tok) for tok in text.split(","))
        except ValueError as e:
            raise ValueError(f"Kneser parameters must look like 'n,k', got {text!r}") from e
        return cls(n=n, k=k)

    def __str__(self) -> str:
        return f"kneser:{self.n},{self.k}"


@dataclass(frozen=True)
class ObstructionCertificate:
    """Odd-girth obstruction: a homomorphism cannot shorten the shortest odd cycle."""
    source_odd_girth: int
    target_odd_girth: Optional[int]
    witness_cycle: Tuple[int, ...]
    search_nodes: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "odd-girth-obstruction",
            "parameters": {
                "sourceOddGirth": self.source_odd_girth,
                "targetOddGirth": "inf" if self.target_odd_girth is None else self.target_odd_girth,
            },
            "witness": list(self.witness_cycle),
            "searchNodes": self.search_nodes,
        }


class EmbeddingStatus(str, Enum):
    VERIFIED = "Verified"
    FAILED_EXHAUSTIVE = "FailedExhaustive"
    FAILED_WITNESS = "FailedWitness"
    BUDGET_EXCEEDED = "BudgetExceeded"


@dataclass
class EmbeddingAttempt:
    """Result of looking for patterns P_X making X -> X u P_X an embedding.

    T = {0..2j} is the small ground set and U = {2j+1..2k+2} its complement in
    S = {0..2k+2}. patterns maps the bits of each j-subset X of T to the bits
    of its pattern.
    """
    j: int
    k: int
    status: EmbeddingStatus
    patterns: Dict[int, int] = field(default_factory=dict)
    witness_pair: Optional[Tuple[int, int]] = None
    search_nodes: int = 0
    relaxed: bool = False
    scheme: str = "exhaustive"

    @property
    def ground_t(self) -> int:
        return 2 * self.j + 1

    @property
    def ground_s(self) -> int:
        return 2 * self.k + 3

    def image(self, x_bits: int) -> KSubset:
        return KSubset(ground_size=self.ground_s, bits=x_bits | self.patterns[x_bits])

    def to_dict(self) -> Dict[str, Any]:
        t = self.ground_t
        witness = None
        if self.witness_pair is not None:
            witness = [str(KSubset(t, b)) for b in self.witness_pair]
        return {
            "kind": "kneser-embedding",
            "parameters": {"j": self.j, "k": self.k, "relaxed": self.relaxed, "scheme": self.scheme},
            "status": self.status.value,
            "patterns": {
                str(KSubset(t, x)): str(KSubset(self.ground_s, p)) for x, p in sorted(self.patterns.items())
            } if self.status == EmbeddingStatus.VERIFIED else None,
            "witness": witness,
            "searchNodes": self.search_nodes,
        }
