"""Window evidence types: search windows, plateau tests, certificates, verdicts.

A window verdict is finite-data evidence for an asymptotic claim, never a
proof.  The trichotomy is: Holds (a certificate whose inequality was checked
over the whole window, with a stabilized constant), FailsOnWindow (a witness
index range where the required sup kept growing for every admissible search
index), and Inconclusive (neither pattern).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Any, Mapping

from .errors import ConfigurationError
from .logdomain import LogValue, linear_or_none


class Outcome(str, enum.Enum):
    HOLDS = "holds"
    FAILS_ON_WINDOW = "fails_on_window"
    INCONCLUSIVE = "inconclusive"


#: conjunction order: a combined verdict is the worst of its parts
_SEVERITY = {Outcome.FAILS_ON_WINDOW: 0, Outcome.INCONCLUSIVE: 1, Outcome.HOLDS: 2}


def conjoin(*outcomes: Outcome) -> Outcome:
    return min(outcomes, key=_SEVERITY.__getitem__)


class PlateauStatus(str, enum.Enum):
    PLATEAU = "plateau"
    GROWTH = "growth"
    DRIFT = "drift"


def _default_checkpoints(n_max: int) -> tuple[int, ...]:
    pts = [n_max]
    while pts[-1] // 2 >= max(2, n_max // 16):
        pts.append(pts[-1] // 2)
    return tuple(reversed(pts))


@dataclass(frozen=True)
class Window:
    """Search bounds and evidence thresholds for one certification run.

    ``n_max`` is the truncation; ``k_max``/``m_max`` bound the grading and
    witness searches; ``l_slack`` extends the nuclearity probe range past
    ``k_max``; ``subadd_m_max`` bounds the subadditivity constant search.
    Threshold fields pin the trichotomy: a sup is a plateau when it moved at
    most ``plateau_tol`` log-units between the half and full window, and
    growth when it moved at least ``growth_tol``.
    """

    k_max: int = 12
    m_max: int = 48
    n_max: int = 4096
    l_slack: int = 4
    subadd_m_max: int = 64
    checkpoints: tuple[int, ...] = ()
    plateau_tol: float = 1e-6
    growth_tol: float = math.log(2.0)
    series_tail_rel: float = 1e-12
    series_growth_tol: float = 0.02
    dense_cap: int = 4096

    def __post_init__(self):
        if self.checkpoints == ():
            object.__setattr__(self, "checkpoints", _default_checkpoints(self.n_max))
        if self.k_max < 1 or self.m_max < 1:
            raise ConfigurationError("k_max and m_max must be >= 1")
        if self.n_max < 4:
            raise ConfigurationError("n_max must be >= 4")
        cps = self.checkpoints
        if len(cps) < 2 or list(cps) != sorted(set(cps)) or cps[-1] != self.n_max:
            raise ConfigurationError(
                "checkpoints must be strictly ascending and end at n_max"
            )
        if self.plateau_tol <= 0 or self.growth_tol <= self.plateau_tol:
            raise ConfigurationError("need 0 < plateau_tol < growth_tol")

    def with_n_max(self, n_max: int) -> "Window":
        return replace(self, n_max=n_max, checkpoints=_default_checkpoints(n_max))

    def classify_sup(self, sup_half: LogValue, sup_full: LogValue) -> PlateauStatus:
        """Trichotomy for a running sup observed on the half and full window."""
        if sup_full == float("-inf"):
            return PlateauStatus.PLATEAU
        move = sup_full - sup_half
        if move <= self.plateau_tol:
            return PlateauStatus.PLATEAU
        if move >= self.growth_tol:
            return PlateauStatus.GROWTH
        return PlateauStatus.DRIFT

    def to_json(self) -> dict[str, Any]:
        return {
            "k_max": self.k_max,
            "m_max": self.m_max,
            "n_max": self.n_max,
            "l_slack": self.l_slack,
            "subadd_m_max": self.subadd_m_max,
            "checkpoints": list(self.checkpoints),
            "plateau_tol": self.plateau_tol,
            "growth_tol": self.growth_tol,
            "series_tail_rel": self.series_tail_rel,
            "series_growth_tol": self.series_growth_tol,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Window":
        known = {
            "k_max", "m_max", "n_max", "l_slack", "subadd_m_max", "checkpoints",
            "plateau_tol", "growth_tol", "series_tail_rel", "series_growth_tol",
            "dense_cap",
        }
        bad = set(data) - known
        if bad:
            raise ConfigurationError(f"unknown window fields: {sorted(bad)}")
        kwargs = dict(data)
        if "checkpoints" in kwargs:
            kwargs["checkpoints"] = tuple(kwargs["checkpoints"])
        return cls(**kwargs)


@dataclass(frozen=True)
class PointwiseCertificate:
    """For each grading k, a witness index and stabilized log-constant."""

    entries: Mapping[int, tuple[int, LogValue]]

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": "pointwise",
            "entries": {
                str(k): {"m": m, "log_c": c, "c": linear_or_none(c)}
                for k, (m, c) in sorted(self.entries.items())
            },
        }


@dataclass(frozen=True)
class UniformCertificate:
    """A single witness index m serving every grading k, with per-k constants."""

    m: int
    log_c: Mapping[int, LogValue]

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": "uniform",
            "m": self.m,
            "log_c": {
                str(k): {"log_c": c, "c": linear_or_none(c)}
                for k, c in sorted(self.log_c.items())
            },
        }


@dataclass(frozen=True)
class TameCertificate:
    """A threshold grading k0 and per-k constants for a fixed index map."""

    k0: int
    log_c: Mapping[int, LogValue]

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": "fixed_map",
            "k0": self.k0,
            "log_c": {
                str(k): {"log_c": c, "c": linear_or_none(c)}
                for k, c in sorted(self.log_c.items())
            },
        }


@dataclass(frozen=True)
class BoundCertificate:
    """A single (index, log-constant) pair, e.g. a dual coefficient bound."""

    m: int
    log_c: LogValue

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": "bound",
            "m": self.m,
            "log_c": self.log_c,
            "c": linear_or_none(self.log_c),
        }


@dataclass(frozen=True)
class CompositeCertificate:
    """Certificates of the triangular parts of a full operator."""

    lower: Any
    upper: Any

    @property
    def m(self) -> int | None:
        parts = [getattr(self.lower, "m", None), getattr(self.upper, "m", None)]
        if any(p is None for p in parts):
            return None
        return max(parts)

    def to_json(self) -> dict[str, Any]:
        return {
            "shape": "composite",
            "m": self.m,
            "lower": self.lower.to_json() if self.lower is not None else None,
            "upper": self.upper.to_json() if self.upper is not None else None,
        }


Certificate = (
    PointwiseCertificate
    | UniformCertificate
    | TameCertificate
    | BoundCertificate
    | CompositeCertificate
)


@dataclass(frozen=True)
class FailureWitness:
    """Where the required sup kept growing for every admissible index."""

    k: int | None
    best_m: int | None
    n_range: tuple[int, int]
    growth_log: float

    def to_json(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "best_m": self.best_m,
            "n_range": list(self.n_range),
            "growth_log": self.growth_log,
        }


@dataclass(frozen=True)
class Verdict:
    """Trichotomous outcome of a certificate search over a window."""

    outcome: Outcome
    certificate: Certificate | None = None
    witness: FailureWitness | None = None
    reason: str | None = None
    window: Window | None = None
    tags: tuple[str, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    def to_json(self) -> dict[str, Any]:
        return {
            "outcome": self.outcome.value,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "witness": self.witness.to_json() if self.witness else None,
            "reason": self.reason,
            "tags": list(self.tags),
            "window": self.window.to_json() if self.window else None,
        }


def holds(certificate: Certificate | None, window: Window, **kw) -> Verdict:
    return Verdict(Outcome.HOLDS, certificate=certificate, window=window, **kw)


def fails(witness: FailureWitness, window: Window, **kw) -> Verdict:
    return Verdict(Outcome.FAILS_ON_WINDOW, witness=witness, window=window, **kw)


def inconclusive(reason: str, window: Window, **kw) -> Verdict:
    return Verdict(Outcome.INCONCLUSIVE, reason=reason, window=window, **kw)
