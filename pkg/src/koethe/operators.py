"""Toeplitz symbols and operators between graded sequence spaces.

A symbol is a two-sided sequence theta stored as two one-sided parts: the
lower part (theta'_0, theta_1, theta_2, ...) feeds the subdiagonals, the
upper part (theta''_0, theta_{-1}, theta_{-2}, ...) the superdiagonals, with
the matrix diagonal carrying theta'_0 + theta''_0.  Basis vectors e_n are
indexed from n = 1; symbol entries from j = 0.

Column norms, memberships, and dual bounds work purely in log domain so that
entries on the scale of e^{k*alpha_n} never overflow.  Operator application
(`apply_dense`, `apply_fast`) is linear-domain and meant for well-scaled
inputs; non-finite output entries are flagged with a RuntimeWarning.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    InvariantError,
    UnsupportedCombinationError,
    WindowError,
)
from .logdomain import LOG_ZERO, LogValue, log_from_linear, log_max, log_sum
from .spaces import (
    POWER_SERIES_FINITE,
    POWER_SERIES_INFINITE,
    ExponentSequence,
    SeriesClass,
    SpaceDescriptor,
    classify_series,
    weight_array,
)
from .verdicts import (
    BoundCertificate,
    FailureWitness,
    Outcome,
    Verdict,
    Window,
    PlateauStatus,
    fails,
    holds,
    inconclusive,
)

#: relative log-mass below which a column tail cannot move any report
NEGLIGIBLE_LOG = 60.0

_BLOCK = 256


class NormKind(str, enum.Enum):
    SUM = "sum"
    SUP = "sup"


# ---------------------------------------------------------------------------
# symbol specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolSpec:
    """One-sided symbol sequence, evaluable at every j >= 0.

    Forms: ``explicit`` (a finite list, extended by zeros), ``geometric``
    (theta_j = r**j), ``exp_of_exponent`` (theta_j = e^{c * alpha_{j+1}}),
    and ``polynomial`` (theta_j = (j+1)**d).  ``head`` overrides the j = 0
    entry; it is how a two-sided symbol's diagonal gets split.
    """

    form: str
    values: tuple[float, ...] | None = None
    r: float | None = None
    c: float | None = None
    alpha: ExponentSequence | None = None
    d: int | None = None
    head: float | None = None

    def __post_init__(self):
        if self.form == "explicit":
            if self.values is None:
                raise InvariantError("explicit form needs a value list")
        elif self.form == "geometric":
            if self.r is None:
                raise InvariantError("geometric form needs a ratio r")
        elif self.form == "exp_of_exponent":
            if self.c is None or self.alpha is None:
                raise InvariantError("exp_of_exponent form needs c and alpha")
        elif self.form == "polynomial":
            if self.d is None:
                raise InvariantError("polynomial form needs a degree d")
        else:
            raise InvariantError(f"unknown symbol form {self.form!r}")

    @classmethod
    def explicit(cls, values: Sequence[float]) -> "SymbolSpec":
        return cls(form="explicit", values=tuple(float(v) for v in values))

    @classmethod
    def geometric(cls, r: float) -> "SymbolSpec":
        return cls(form="geometric", r=float(r))

    @classmethod
    def exp_of_exponent(cls, c: float, alpha: ExponentSequence) -> "SymbolSpec":
        return cls(form="exp_of_exponent", c=float(c), alpha=alpha)

    @classmethod
    def polynomial(cls, d: int) -> "SymbolSpec":
        return cls(form="polynomial", d=int(d))

    @classmethod
    def delta(cls) -> "SymbolSpec":
        """theta_0 = 1, all other entries 0."""
        return cls.explicit([1.0])

    def with_head(self, head: float) -> "SymbolSpec":
        return dataclasses.replace(self, head=float(head))

    # -- evaluation --------------------------------------------------------

    def value(self, j: int) -> float:
        """Linear-domain entry theta_j."""
        if j < 0:
            raise WindowError(f"symbol index must be >= 0, got {j}")
        if j == 0 and self.head is not None:
            return self.head
        if self.form == "explicit":
            return self.values[j] if j < len(self.values) else 0.0
        if self.form == "geometric":
            return self.r**j
        if self.form == "exp_of_exponent":
            return math.exp(self.c * self.alpha.value(j + 1))
        return float(j + 1) ** self.d

    def log_abs(self, j: int) -> LogValue:
        """log|theta_j|, computed without a linear round trip where the
        closed form allows (geometric and exponential forms stay finite far
        beyond float range)."""
        if j < 0:
            raise WindowError(f"symbol index must be >= 0, got {j}")
        if j == 0 and self.head is not None:
            return log_from_linear(self.head)
        if self.form == "explicit":
            if j >= len(self.values):
                return LOG_ZERO
            return log_from_linear(self.values[j])
        if self.form == "geometric":
            if self.r == 0.0:
                return 0.0 if j == 0 else LOG_ZERO
            return j * math.log(abs(self.r))
        if self.form == "exp_of_exponent":
            return self.c * self.alpha.value(j + 1)
        return self.d * math.log(j + 1)

    def sign(self, j: int) -> int:
        v = 1.0
        if j == 0 and self.head is not None:
            v = self.head
        elif self.form == "explicit":
            v = self.values[j] if j < len(self.values) else 0.0
        elif self.form == "geometric":
            v = -1.0 if (self.r < 0 and j % 2) else (0.0 if self.r == 0 and j else 1.0)
        if v > 0:
            return 1
        return -1 if v < 0 else 0

    def values_array(self, count: int) -> np.ndarray:
        """theta_0..theta_{count-1} in linear domain (may overflow to inf)."""
        j = np.arange(count, dtype=np.float64)
        with np.errstate(over="ignore"):
            if self.form == "explicit":
                out = np.zeros(count)
                take = min(count, len(self.values))
                out[:take] = self.values[:take]
            elif self.form == "geometric":
                out = self.r**j
            elif self.form == "exp_of_exponent":
                out = np.exp(self.c * self.alpha.values_array(count))
            else:
                out = (j + 1.0) ** self.d
        if self.head is not None and count:
            out[0] = self.head
        return out

    def log_abs_array(self, count: int) -> np.ndarray:
        """log|theta_j| for j = 0..count-1."""
        j = np.arange(count, dtype=np.float64)
        if self.form == "explicit":
            out = np.full(count, LOG_ZERO)
            take = min(count, len(self.values))
            with np.errstate(divide="ignore"):
                out[:take] = np.log(np.abs(np.asarray(self.values[:take])))
        elif self.form == "geometric":
            if self.r == 0.0:
                out = np.full(count, LOG_ZERO)
                if count:
                    out[0] = 0.0
            else:
                out = j * math.log(abs(self.r))
        elif self.form == "exp_of_exponent":
            out = self.c * self.alpha.values_array(count)
        else:
            out = self.d * np.log(j + 1.0)
        if self.head is not None and count:
            out[0] = log_from_linear(self.head)
        return out

    # -- codec ---------------------------------------------------------------

    def to_json(self) -> dict[str, Any]:
        if self.form == "explicit":
            data: dict[str, Any] = {"form": "explicit", "values": list(self.values)}
        elif self.form == "geometric":
            data = {"form": "geometric", "r": self.r}
        elif self.form == "exp_of_exponent":
            data = {"form": "exp_of_exponent", "c": self.c,
                    "alpha": self.alpha.to_json()}
        else:
            data = {"form": "polynomial", "d": self.d}
        if self.head is not None:
            data["head"] = self.head
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "SymbolSpec":
        form = data.get("form")
        if form == "explicit":
            spec = cls.explicit(data["values"])
        elif form == "geometric":
            spec = cls.geometric(data["r"])
        elif form == "exp_of_exponent":
            spec = cls.exp_of_exponent(
                data["c"], ExponentSequence.from_json(data["alpha"])
            )
        elif form == "polynomial":
            spec = cls.polynomial(data["d"])
        else:
            raise ConfigurationError(f"unknown symbol form {form!r}")
        if "head" in data:
            spec = spec.with_head(data["head"])
        return spec


@dataclass(frozen=True)
class Symbol:
    """Two-sided symbol as its triangular parts.

    When both parts are present their 0-entries are the two halves of the
    diagonal value and must both be nonzero.
    """

    lower: SymbolSpec | None = None
    upper: SymbolSpec | None = None

    def __post_init__(self):
        if self.lower is None and self.upper is None:
            raise InvariantError("symbol needs at least one triangular part")
        if self.lower is not None and self.upper is not None:
            if self.lower.value(0) == 0.0 or self.upper.value(0) == 0.0:
                raise InvariantError(
                    "diagonal split components must both be nonzero"
                )

    @property
    def diagonal(self) -> float:
        total = 0.0
        if self.lower is not None:
            total += self.lower.value(0)
        if self.upper is not None:
            total += self.upper.value(0)
        return total

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {}
        if self.lower is not None:
            data["lower"] = self.lower.to_json()
        if self.upper is not None:
            data["upper"] = self.upper.to_json()
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "Symbol":
        lower = SymbolSpec.from_json(data["lower"]) if "lower" in data else None
        upper = SymbolSpec.from_json(data["upper"]) if "upper" in data else None
        return cls(lower=lower, upper=upper)


def decompose(
    sub: SymbolSpec, sup: SymbolSpec, split: tuple[float, float]
) -> Symbol:
    """Split two-sided symbol data into triangular parts.

    ``sub`` holds (theta_0, theta_1, theta_2, ...) and ``sup`` holds
    (theta_0, theta_{-1}, theta_{-2}, ...); their shared 0-entry is the
    diagonal value, which ``split`` redistributes as the parts' new heads.
    Both split components must be nonzero and sum to the diagonal value.
    """
    theta0 = sub.value(0)
    if not math.isclose(theta0, sup.value(0), rel_tol=1e-12, abs_tol=1e-300):
        raise InvariantError(
            f"sides disagree on the diagonal value: {theta0!r} vs {sup.value(0)!r}"
        )
    lo, hi = float(split[0]), float(split[1])
    if lo == 0.0 or hi == 0.0:
        raise InvariantError("split components must both be nonzero")
    if not math.isclose(lo + hi, theta0, rel_tol=1e-12, abs_tol=1e-12):
        raise InvariantError(
            f"split {lo!r} + {hi!r} does not reproduce the diagonal {theta0!r}"
        )
    return Symbol(lower=sub.with_head(lo), upper=sup.with_head(hi))


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


class Variant(str, enum.Enum):
    LOWER = "lower"
    UPPER = "upper"
    FULL = "full"


@dataclass(frozen=True)
class ToeplitzOperator:
    """A Toeplitz matrix acting between two graded spaces.

    The lower variant reads only the symbol's lower part, the upper variant
    only the upper part, the full variant both.
    """

    symbol: Symbol
    variant: Variant
    domain: SpaceDescriptor
    codomain: SpaceDescriptor

    def __post_init__(self):
        if self.variant in (Variant.LOWER, Variant.FULL) and self.symbol.lower is None:
            raise InvariantError(f"{self.variant.value} variant needs a lower part")
        if self.variant in (Variant.UPPER, Variant.FULL) and self.symbol.upper is None:
            raise InvariantError(f"{self.variant.value} variant needs an upper part")

    def to_json(self) -> dict[str, Any]:
        return {
            "variant": self.variant.value,
            "symbol": self.symbol.to_json(),
            "domain": self.domain.to_json(),
            "codomain": self.codomain.to_json(),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ToeplitzOperator":
        return cls(
            symbol=Symbol.from_json(data["symbol"]),
            variant=Variant(data["variant"]),
            domain=SpaceDescriptor.from_json(data["domain"]),
            codomain=SpaceDescriptor.from_json(data["codomain"]),
        )


def lower_part(op: ToeplitzOperator) -> ToeplitzOperator:
    return ToeplitzOperator(Symbol(lower=op.symbol.lower), Variant.LOWER,
                            op.domain, op.codomain)


def upper_part(op: ToeplitzOperator) -> ToeplitzOperator:
    return ToeplitzOperator(Symbol(upper=op.symbol.upper), Variant.UPPER,
                            op.domain, op.codomain)


# ---------------------------------------------------------------------------
# columns
# ---------------------------------------------------------------------------


def column(op: ToeplitzOperator, n: int, n_max: int) -> list[tuple[int, float]]:
    """Sparse image of the basis vector e_n, truncated to rows 1..n_max.

    Lower variant: entries (j, theta_{j-n}) for j >= n.  Upper variant:
    (j, theta_{n-j}) for j <= n.  Full: entrywise sum, i.e. the diagonal
    carries the recombined split.
    """
    if not 1 <= n <= n_max:
        raise WindowError(f"need 1 <= n <= n_max, got n={n} n_max={n_max}")
    out: list[tuple[int, float]] = []
    for j in range(1, n_max + 1):
        v = _entry(op, n, j)
        if v != 0.0:
            out.append((j, v))
    return out


def _entry(op: ToeplitzOperator, n: int, j: int) -> float:
    if op.variant is Variant.LOWER:
        return op.symbol.lower.value(j - n) if j >= n else 0.0
    if op.variant is Variant.UPPER:
        return op.symbol.upper.value(n - j) if j <= n else 0.0
    if j > n:
        return op.symbol.lower.value(j - n)
    if j < n:
        return op.symbol.upper.value(n - j)
    return op.symbol.diagonal


def _entry_log_abs(op: ToeplitzOperator, n: int, j: int) -> LogValue:
    if op.variant is Variant.LOWER:
        return op.symbol.lower.log_abs(j - n) if j >= n else LOG_ZERO
    if op.variant is Variant.UPPER:
        return op.symbol.upper.log_abs(n - j) if j <= n else LOG_ZERO
    if j > n:
        return op.symbol.lower.log_abs(j - n)
    if j < n:
        return op.symbol.upper.log_abs(n - j)
    return log_from_linear(op.symbol.diagonal)


def column_norm(
    op: ToeplitzOperator,
    n: int,
    k: int,
    n_max: int,
    norm_kind: NormKind = NormKind.SUM,
) -> LogValue:
    """log of the codomain seminorm of the truncated column of e_n.

    Terms are laid out over the full row range 1..n_max (absent entries as
    log-zero) and reduced in the same fixed pairwise order as the space
    seminorms, so this agrees exactly with the seminorm of the scattered
    column.
    """
    if not 1 <= n <= n_max:
        raise WindowError(f"need 1 <= n <= n_max, got n={n} n_max={n_max}")
    w = weight_array(op.codomain, k, n_max)
    terms = []
    for j in range(1, n_max + 1):
        la = _entry_log_abs(op, n, j)
        terms.append(la + w[j - 1] if la != LOG_ZERO else LOG_ZERO)
    if norm_kind is NormKind.SUP:
        return log_max(terms)
    return log_sum(terms)


# ---------------------------------------------------------------------------
# batched column norms (the oracle's workhorse)
# ---------------------------------------------------------------------------


def _part_offset_logs(op: ToeplitzOperator, count: int) -> list[tuple[np.ndarray, int]]:
    """(log|entries| per offset, direction) for each triangular part in play.

    Direction +1 walks down from the diagonal (rows n+i), -1 walks up
    (rows n-i).  For the full variant the diagonal lives in the lower run
    and is masked out of the upper run.
    """
    parts: list[tuple[np.ndarray, int]] = []
    if op.variant in (Variant.LOWER, Variant.FULL):
        u = op.symbol.lower.log_abs_array(count)
        if op.variant is Variant.FULL:
            u = u.copy()
            u[0] = log_from_linear(op.symbol.diagonal)
        parts.append((u, +1))
    if op.variant in (Variant.UPPER, Variant.FULL):
        u = op.symbol.upper.log_abs_array(count)
        if op.variant is Variant.FULL:
            u = u.copy()
            u[0] = LOG_ZERO
        parts.append((u, -1))
    return parts


def _suffix_max(arr: np.ndarray) -> np.ndarray:
    return np.maximum.accumulate(arr[::-1])[::-1]


def _merge_scaled(m1, s1, m2, s2):
    m = np.maximum(m1, m2)
    safe = np.where(np.isneginf(m), 0.0, m)
    with np.errstate(invalid="ignore"):
        out = s1 * np.exp(np.where(np.isneginf(m1), -np.inf, m1) - safe)
        out += s2 * np.exp(np.where(np.isneginf(m2), -np.inf, m2) - safe)
    return m, out


def _run_profile(
    u: np.ndarray,
    v: np.ndarray,
    direction: int,
    n_trunc: int,
    norm_kind: NormKind,
) -> tuple[np.ndarray, np.ndarray]:
    """Stream one triangular part's terms u_i + v_{n +/- i} over offset
    blocks, returning per-column (scale, scaled sum); for the sup kind the
    scale is the norm and the sum stays zero.

    A block is skipped for columns whose best possible remaining term sits
    NEGLIGIBLE_LOG below their running scale (with a log(n) allowance for
    the sum kind), so rapidly decaying symbols cost a short band.
    """
    pad = np.full(n_trunc + 2, -np.inf)
    pad[1 : n_trunc + 1] = v[:n_trunc]
    u_sufmax = _suffix_max(u)
    v_reach = _suffix_max(pad) if direction > 0 else np.maximum.accumulate(pad)
    allowance = math.log(n_trunc) if norm_kind is NormKind.SUM else 0.0

    cols = np.arange(1, n_trunc + 1)
    m_run = np.full(n_trunc, -np.inf)
    s_run = np.zeros(n_trunc)
    # offsets past the symbol's support contribute nothing
    support = int(np.argmax(np.isneginf(u_sufmax))) if np.isneginf(u_sufmax).any() \
        else len(u)
    i_top = min(support, n_trunc)
    for i0 in range(0, i_top, _BLOCK):
        reach_idx = np.clip(cols + direction * i0, 0, n_trunc + 1)
        peak = u_sufmax[i0] + v_reach[reach_idx]
        active = peak + allowance > m_run - NEGLIGIBLE_LOG
        if not active.any():
            break
        lo, hi = np.flatnonzero(active)[[0, -1]]
        n_idx = cols[lo : hi + 1]
        i_idx = np.arange(i0, min(i0 + _BLOCK, i_top))
        j = np.clip(n_idx[None, :] + direction * i_idx[:, None], 0, n_trunc + 1)
        terms = u[i_idx][:, None] + pad[j]
        bm = terms.max(axis=0)
        if norm_kind is NormKind.SUP:
            m_run[lo : hi + 1] = np.maximum(m_run[lo : hi + 1], bm)
            continue
        safe = np.where(np.isneginf(bm), 0.0, bm)
        with np.errstate(invalid="ignore"):
            bs = np.where(np.isneginf(terms), 0.0, np.exp(terms - safe)).sum(axis=0)
        m_new, s_new = _merge_scaled(m_run[lo : hi + 1], s_run[lo : hi + 1], bm, bs)
        m_run[lo : hi + 1] = m_new
        s_run[lo : hi + 1] = s_new
    return m_run, s_run


@lru_cache(maxsize=1024)
def column_norm_profile(
    op: ToeplitzOperator,
    k: int,
    n_trunc: int,
    norm_kind: NormKind = NormKind.SUM,
) -> np.ndarray:
    """log column norms for n = 1..n_trunc, columns truncated at row n_trunc.

    Agrees with :func:`column_norm` up to reduction-order rounding; reports
    that need bit-stable numbers use a fixed block schedule, which this is.
    Results are memoized, so certificate scans over many witness indices
    share one profile per grading.
    """
    v = weight_array(op.codomain, k, n_trunc)
    runs = [
        _run_profile(u, v, direction, n_trunc, norm_kind)
        for u, direction in _part_offset_logs(op, n_trunc)
    ]
    if norm_kind is NormKind.SUP:
        out = runs[0][0]
        for m, _ in runs[1:]:
            out = np.maximum(out, m)
        out.flags.writeable = False
        return out
    m, s = runs[0]
    for m2, s2 in runs[1:]:
        m, s = _merge_scaled(m, s, m2, s2)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s > 0.0, m + np.log(np.where(s > 0.0, s, 1.0)), -np.inf)
    out.flags.writeable = False
    return out


# ---------------------------------------------------------------------------
# application
# ---------------------------------------------------------------------------


def _dense_matrix(op: ToeplitzOperator, n: int) -> np.ndarray:
    if op.variant is Variant.FULL:
        return _dense_matrix(lower_part(op), n) + _dense_matrix(upper_part(op), n)
    idx = np.arange(n, dtype=np.int32)
    offs = idx[:, None] - idx[None, :]
    if op.variant is Variant.LOWER:
        vals = op.symbol.lower.values_array(n)
        return np.where(offs >= 0, vals[np.clip(offs, 0, n - 1)], 0.0)
    vals = op.symbol.upper.values_array(n)
    return np.where(offs <= 0, vals[np.clip(-offs, 0, n - 1)], 0.0)


def _prepare_input(x: Sequence[float], n_max: int | None) -> tuple[np.ndarray, int]:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise InvariantError("input vector must be one-dimensional")
    n = n_max if n_max is not None else len(arr)
    if len(arr) > n:
        if np.any(arr[n:] != 0.0):
            raise InvariantError(f"input has support beyond truncation {n}")
        arr = arr[:n]
    elif len(arr) < n:
        arr = np.concatenate([arr, np.zeros(n - len(arr))])
    return arr, n


def _flag_overflow(y: np.ndarray) -> np.ndarray:
    if not np.isfinite(y).all():
        warnings.warn(
            "operator application overflowed; non-finite entries returned",
            RuntimeWarning,
            stacklevel=3,
        )
    return y


def apply_dense(
    op: ToeplitzOperator, x: Sequence[float], n_max: int | None = None
) -> np.ndarray:
    """Apply the truncated operator by materializing the dense matrix."""
    arr, n = _prepare_input(x, n_max)
    with np.errstate(over="ignore", invalid="ignore"):
        y = _dense_matrix(op, n) @ arr
    return _flag_overflow(y)


def apply_fast(
    op: ToeplitzOperator, x: Sequence[float], n_max: int | None = None
) -> np.ndarray:
    """Apply the truncated operator in O(n log n) by circulant embedding.

    The lower part is an ordinary convolution with (theta_0, theta_1, ...),
    the upper part a correlation with (theta_0, theta_{-1}, ...); both ride
    one zero-padded FFT of length >= 2n.
    """
    arr, n = _prepare_input(x, n_max)
    size = 1 << (2 * n - 1).bit_length()
    fx = np.fft.rfft(arr, size)
    y = np.zeros(n)
    with np.errstate(over="ignore", invalid="ignore"):
        if op.variant in (Variant.LOWER, Variant.FULL):
            lv = op.symbol.lower.values_array(n)
            if op.variant is Variant.FULL:
                lv = lv.copy()
                lv[0] = op.symbol.diagonal
            y = y + np.fft.irfft(np.fft.rfft(lv, size) * fx, size)[:n]
        if op.variant in (Variant.UPPER, Variant.FULL):
            uv = op.symbol.upper.values_array(n)
            if op.variant is Variant.FULL:
                uv = uv.copy()
                uv[0] = 0.0
            corr = np.fft.irfft(np.fft.rfft(uv[::-1], size) * fx, size)
            y = y + corr[n - 1 : 2 * n - 1]
    return _flag_overflow(y)


# ---------------------------------------------------------------------------
# memberships
# ---------------------------------------------------------------------------


def membership_in_space(
    spec: SymbolSpec, space: SpaceDescriptor, window: Window | None = None
) -> Verdict:
    """Does the one-sided sequence lie in the space?  Evidence per grading k:
    the series sum_j |theta_j| a(j+1, k) is classified on the window."""
    win = window or Window()
    n_max = win.n_max
    if space.n_limit is not None:
        n_max = min(n_max, space.n_limit)
    if n_max < 2:
        return inconclusive("window too short for series evidence", win)
    k_top = win.k_max
    if space.k_limit is not None:
        k_top = min(k_top, space.k_limit)
    logs = spec.log_abs_array(n_max)
    limits: dict[int, tuple[int, LogValue]] = {}
    saw_inconclusive = None
    for k in range(1, k_top + 1):
        w = weight_array(space, k, n_max)
        terms = np.where(np.isneginf(logs), -np.inf, logs + w)
        verdict = classify_series(terms, win)
        if verdict.classification is SeriesClass.DIVERGENT:
            witness = FailureWitness(
                k=k, best_m=None, n_range=(n_max // 2, n_max),
                growth_log=verdict.growth_log,
            )
            return fails(witness, win, reason=f"membership series diverges at k={k}")
        if verdict.classification is SeriesClass.INCONCLUSIVE:
            saw_inconclusive = k
        else:
            limits[k] = (k, verdict.limit_log)
    if saw_inconclusive is not None:
        return inconclusive(
            f"membership series undecided at k={saw_inconclusive}", win
        )
    tags = ("finite-window",) if space.finite_window else ()
    return holds(None, win, reason="membership series convergent for every k",
                 tags=tags)


def dual_log_bound(space: SpaceDescriptor, m: int, n_max: int) -> np.ndarray:
    """log of the dual coefficient growth/decay envelope at index m.

    Infinite type admits coefficients up to e^{m * alpha_n}; finite type
    demands decay e^{-alpha_n / m}.  Only power series spaces carry this
    description."""
    if space.kind == POWER_SERIES_INFINITE:
        return m * space.alpha.values_array(n_max)
    if space.kind == POWER_SERIES_FINITE:
        return -space.alpha.values_array(n_max) / m
    raise UnsupportedCombinationError(
        "dual coefficient bounds are only described for power series spaces"
    )


def membership_in_dual(
    spec: SymbolSpec, space: SpaceDescriptor, window: Window | None = None
) -> Verdict:
    """Does the sequence obey the dual coefficient bound of the space?

    Searches m <= m_max for which sup_n (log|theta_{n-1}| - bound_m(n))
    stabilizes between the half and full window; the stabilized sup is the
    certificate constant."""
    win = window or Window()
    if not space.is_power_series:
        raise UnsupportedCombinationError(
            "dual membership is only decided against power series spaces"
        )
    n_max = win.n_max
    if space.n_limit is not None:
        n_max = min(n_max, space.n_limit)
    half = n_max // 2
    if half < 1:
        return inconclusive("window too short for a plateau test", win)
    logs = spec.log_abs_array(n_max)
    best_growth = math.inf
    saw_drift = False
    for m in range(1, win.m_max + 1):
        gap = logs - dual_log_bound(space, m, n_max)
        sup_half = float(np.max(gap[:half]))
        sup_full = float(np.max(gap))
        status = win.classify_sup(sup_half, sup_full)
        if status is PlateauStatus.PLATEAU:
            cert = BoundCertificate(m=m, log_c=sup_full)
            return holds(cert, win)
        if status is PlateauStatus.GROWTH:
            best_growth = min(best_growth, sup_full - sup_half)
        else:
            saw_drift = True
    if saw_drift:
        return inconclusive("coefficient gap drifts for some m", win)
    witness = FailureWitness(k=None, best_m=win.m_max, n_range=(half, n_max),
                             growth_log=best_growth)
    return fails(witness, win, reason="coefficient bound violated for every m")
