"""Shared value types: indices, certificates and the report records."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

__all__ = [
    "Index",
    "INFINITE",
    "Certificate",
    "InconclusiveError",
    "CapabilityError",
    "ChainRecord",
    "TidinessReport",
    "ScaleResult",
    "TidyTrace",
    "weakest",
]


@dataclass(frozen=True)
class Index:
    """A finite subgroup index; ``exponent`` is set when the value is a power of ``p``."""

    value: int
    p: int | None = None
    exponent: int | None = None

    def __post_init__(self):
        if self.value < 1:
            raise ValueError(f"index must be positive, got {self.value}")

    @classmethod
    def power(cls, p: int, exponent: int) -> "Index":
        return cls(p**exponent, p, exponent)

    def __int__(self) -> int:
        return self.value

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Index):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other) -> bool:
        return self.value < int(other)

    def __le__(self, other) -> bool:
        return self.value <= int(other)

    def __mul__(self, other: "Index") -> "Index":
        if self.p is not None and self.p == other.p:
            return Index.power(self.p, self.exponent + other.exponent)
        return Index(self.value * other.value)

    def __repr__(self) -> str:
        if self.exponent is not None:
            return f"Index({self.p}^{self.exponent})"
        return f"Index({self.value})"


class _Infinite:
    """Marker returned when a subgroup has infinite index in another."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITE"


INFINITE = _Infinite()

_RANK = {"exact": 2, "horizon": 1, "inconclusive": 0}


@dataclass(frozen=True)
class Certificate:
    kind: str
    horizon: int | None = None
    evidence: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in _RANK:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @classmethod
    def exact(cls, **evidence) -> "Certificate":
        return cls("exact", None, evidence)

    @classmethod
    def certified(cls, horizon: int, **evidence) -> "Certificate":
        return cls("horizon", horizon, evidence)

    @classmethod
    def inconclusive(cls, horizon: int | None = None, **evidence) -> "Certificate":
        return cls("inconclusive", horizon, evidence)

    @property
    def ok(self) -> bool:
        return self.kind != "inconclusive"

    def to_json(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        if self.horizon is not None:
            out["horizon"] = self.horizon
        if self.evidence:
            out["evidence"] = _jsonable(self.evidence)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return repr(obj)


def weakest(*certs: Certificate) -> Certificate:
    """The least trustworthy of several certificates (exact > horizon > inconclusive)."""
    certs = [c for c in certs if c is not None]
    if not certs:
        return Certificate.exact()
    return min(certs, key=lambda c: _RANK[c.kind])


class InconclusiveError(RuntimeError):
    """A limit object could not be certified within the configured horizon."""

    def __init__(self, message: str, certificate: Certificate | None = None):
        super().__init__(message)
        self.certificate = certificate or Certificate.inconclusive(reason=message)


class CapabilityError(RuntimeError):
    """The universe lacks a capability the operation needs."""


@dataclass
class ChainRecord:
    direction: str
    terms: list
    step_indices: list
    certificate: Certificate = field(default_factory=Certificate.exact)


@dataclass
class TidinessReport:
    ta: bool
    tb1: bool
    tb1_certificate: Certificate
    tb2: bool
    tb2_certificate: Certificate
    displacement: Index
    tb2_sequence: list
    witnesses: dict = field(default_factory=dict)

    @property
    def tidy(self) -> bool:
        return self.ta and self.tb1 and self.tb2


@dataclass
class ScaleResult:
    scale: Index
    certificate: Certificate
    index_log: list
    witness: Any = None


@dataclass
class TidyTrace:
    n: int
    v: Any
    l_group: Any
    l_certificate: Certificate
    v_tilde: Any
    w: Any
    displacements: list
    final_report: TidinessReport | None = None
