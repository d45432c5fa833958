"""The tail-sum warp homeomorphism of l^p and its exact inverse.

For an exponent sequence s_n >= 1 the warp sends x to y with

    |y_n|^p = T_n^{s_n} - T_{n+1}^{s_n},    arg y_n = arg x_n,

where T_n = sum_{k>=n} |x_k|^p. It maps finitely supported vectors onto
finitely supported vectors with the same support, and satisfies
warp(t x)_n = t^{s_n} warp(x)_n for t > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DescriptorError, ExponentMismatch, HypothesisViolation
from .lp_core import (
    ConstantWeights,
    FinSeq,
    HarmonicWeights,
    ListWeights,
    WeightSeq,
    check_exponent,
    tail_sums,
    weights_from_json,
)

__all__ = [
    "ExponentSeq",
    "WarpMap",
    "stable_power_diff",
    "power_increment",
    "warp_forward",
    "warp_inverse",
    "exponents_from_weights",
    "naive_power_map",
    "radicand_condition",
]


def _real_extrema(source: WeightSeq) -> tuple[float, float]:
    if isinstance(source, ConstantWeights):
        vals = [source.value]
    elif isinstance(source, ListWeights):
        t = source.table
        if np.any(t.imag != 0):
            raise DescriptorError("exponents must be real")
        return float(t.real.min()), float(t.real.max())
    elif isinstance(source, HarmonicWeights):
        # c + a/n is monotone in n; the extreme values are n = 1 and the limit
        vals = [source.c + source.a, source.c]
    else:
        raise DescriptorError(f"exponent descriptor kind {source.kind!r} is not real-valued")
    if any(v.imag != 0 for v in vals):
        raise DescriptorError("exponents must be real")
    re = [v.real for v in vals]
    return min(re), max(re)


@dataclass(frozen=True)
class ExponentSeq:
    """A bounded real sequence s_n >= 1 with a recorded upper bound ``r``.

    With ``base`` unset, ``source`` holds the values directly (constant,
    list or harmonic descriptor with real scalars). With ``base`` set,
    s_n = log_base |source_n|.
    """

    source: WeightSeq
    base: float | None = None
    r: float | None = None

    def __post_init__(self) -> None:
        lo, hi = self._extrema()
        if not lo >= 1.0:
            raise DescriptorError(f"exponents must satisfy s_n >= 1, infimum is {lo}")
        if not math.isfinite(hi):
            raise DescriptorError("exponent sequence must be bounded")
        r = hi if self.r is None else float(self.r)
        if r < hi:
            raise DescriptorError(f"recorded bound r={r} is below sup s_n={hi}")
        object.__setattr__(self, "r", r)

    def _extrema(self) -> tuple[float, float]:
        if self.base is None:
            return _real_extrema(self.source)
        if not self.base > 1:
            raise DescriptorError(f"logarithm base must exceed 1, got {self.base}")
        lb = math.log(self.base)
        lo = self.source.inf_modulus
        if lo == 0:
            return -math.inf, math.inf
        lo_s = math.log(lo) / lb
        if lo >= self.base:
            lo_s = max(1.0, lo_s)
        return lo_s, math.log(self.source.sup_modulus) / lb

    @classmethod
    def constant(cls, s: float) -> "ExponentSeq":
        return cls(ConstantWeights(float(s)))

    @classmethod
    def from_list(cls, values: list[float], tail: float) -> "ExponentSeq":
        return cls(ListWeights(tuple(values), float(tail)))

    @property
    def inf(self) -> float:
        return self._extrema()[0]

    @property
    def sup(self) -> float:
        return self._extrema()[1]

    @property
    def is_identity(self) -> bool:
        return self.sup == 1.0

    def at(self, indices: np.ndarray) -> np.ndarray:
        w = self.source.at(np.asarray(indices, dtype=np.int64))
        if self.base is None:
            return w.real.astype(np.float64)
        # s_n >= 1 holds exactly by construction; clamp away rounding below 1
        return np.maximum(1.0, np.log(np.abs(w)) / math.log(self.base))

    def __call__(self, n: int) -> float:
        return float(self.at(np.array([n]))[0])

    def to_json(self) -> dict[str, Any]:
        if self.base is not None:
            out: dict[str, Any] = {"kind": "log_modulus", "weights": self.source.to_json(), "base": self.base}
        else:
            src = self.source
            if isinstance(src, ConstantWeights):
                out = {"kind": "constant", "value": src.value.real}
            elif isinstance(src, ListWeights):
                out = {"kind": "list", "values": [v.real for v in src.values], "tail": src.tail.real}
            else:
                assert isinstance(src, HarmonicWeights)
                out = {"kind": "harmonic", "c": src.c.real, "a": src.a.real}
        out["r"] = self.r
        return out

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "ExponentSeq":
        try:
            r = obj.get("r")
            if obj["kind"] == "log_modulus":
                return cls(weights_from_json(obj["weights"]), base=float(obj["base"]), r=r)
            return cls(weights_from_json(obj), r=r)
        except (KeyError, TypeError, AttributeError) as exc:
            raise DescriptorError(f"malformed exponent descriptor: {exc}") from exc


@dataclass(frozen=True)
class WarpMap:
    exponents: ExponentSeq
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", check_exponent(self.p))

    def __call__(self, x: FinSeq) -> FinSeq:
        return warp_forward(self, x)

    def inverse(self, y: FinSeq) -> FinSeq:
        return warp_inverse(self, y)


def power_increment(base, delta, s):
    """(base + delta)^s - base^s for base, delta >= 0 without cancellation.

    Vectorised over numpy arrays. Exact pass-through when s == 1.
    """
    base, delta, s = np.broadcast_arrays(
        np.asarray(base, dtype=np.float64), np.asarray(delta, dtype=np.float64), np.asarray(s, dtype=np.float64)
    )
    out = np.empty(base.shape, dtype=np.float64)
    one = s == 1.0
    out[one] = delta[one]
    # base small against delta: no cancellation, factor out the larger power
    far = ~one & (base <= delta)
    hi = base[far] + delta[far]
    with np.errstate(divide="ignore"):
        out[far] = hi ** s[far] * -np.expm1(s[far] * np.log(base[far] / hi))
    near = ~one & ~far
    out[near] = base[near] ** s[near] * np.expm1(s[near] * np.log1p(delta[near] / base[near]))
    return np.maximum(out, 0.0)


def stable_power_diff(t_hi: float, t_lo: float, s: float) -> float:
    """t_hi^s - t_lo^s for t_hi >= t_lo >= 0 and s >= 1."""
    if s < 1:
        raise DescriptorError(f"power must be >= 1, got {s}")
    if t_lo < 0 or t_lo > t_hi:
        raise DescriptorError(f"need t_hi >= t_lo >= 0, got t_hi={t_hi}, t_lo={t_lo}")
    if t_hi == 0 or t_hi == t_lo:
        return 0.0
    # t_hi - t_lo is exact when the two are within a factor of two (Sterbenz)
    return float(power_increment(t_lo, t_hi - t_lo, s))


def _check(h: WarpMap, x: FinSeq) -> None:
    if h.p != x.p:
        raise ExponentMismatch(f"warp acts on l^{h.p}, vector is in l^{x.p}")


def warp_forward(h: WarpMap, x: FinSeq) -> FinSeq:
    _check(h, x)
    if x.support_size == 0:
        return x
    ts = tail_sums(x)
    s = h.exponents.at(x.indices)
    # T_n = T_{n+1} + |x_n|^p, so pass the increment rather than T_n itself
    radicand = power_increment(ts.below, ts.increments, s)
    mod = np.abs(x.values)
    y = x.values / mod * radicand ** (1.0 / x.p)
    return x.with_values(np.where(s == 1.0, x.values, y))


def warp_inverse(h: WarpMap, y: FinSeq) -> FinSeq:
    """Recover x with warp_forward(h, x) == y.

    Walks the support from the top index down using
    T_n = (|y_n|^p + T_{n+1}^{s_n})^{1/s_n}; the step T_n - T_{n+1} is
    formed as T_{n+1} * expm1(log(1 + |y_n|^p / T_{n+1}^{s_n}) / s_n).
    """
    _check(h, y)
    if y.support_size == 0:
        return y
    p = y.p
    s_all = h.exponents.at(y.indices)
    mod_y = np.abs(y.values)
    a_all = mod_y**p
    out = np.empty_like(y.values)
    tail = 0.0
    for i in range(y.support_size - 1, -1, -1):
        a, s = float(a_all[i]), float(s_all[i])
        if s == 1.0:
            out[i] = y.values[i]
            tail += a
            continue
        if a == 0.0:
            step = 0.0
        elif tail == 0.0:
            step = a ** (1.0 / s)
        else:
            log_ratio = math.log(a) - s * math.log(tail)
            step = tail * math.expm1(float(np.logaddexp(0.0, log_ratio)) / s)
        out[i] = y.values[i] / mod_y[i] * step ** (1.0 / p)
        tail += step
    return y.with_values(out)


def exponents_from_weights(W: WeightSeq, rho: float) -> ExponentSeq:
    """s_n = log_rho |w_n|, valid when |w_n| >= rho > 1 for every n."""
    if not rho > 1:
        raise HypothesisViolation(f"base rho must exceed 1, got {rho}")
    inf = W.inf_modulus
    if inf == 0:
        raise HypothesisViolation("weight sequence has a zero entry")
    if inf < rho:
        raise HypothesisViolation(f"inf |w_n| = {inf} is below rho = {rho}")
    return ExponentSeq(W, base=float(rho))


def naive_power_map(exponents: ExponentSeq, x: FinSeq) -> FinSeq:
    """Coordinatewise x_n -> (x_n/|x_n|) |x_n|^{s_n}, ignoring the tails.

    Kept as a counterexample: on l^p it does not respect the two-sided norm
    bounds the tail-sum warp satisfies.
    """
    if x.support_size == 0:
        return x
    s = exponents.at(x.indices)
    mod = np.abs(x.values)
    return x.with_values(x.values / mod * mod**s)


def radicand_condition(h: WarpMap, x: FinSeq) -> np.ndarray:
    """Condition number (T_n^s + T_{n+1}^s) / (T_n^s - T_{n+1}^s) per support index.

    Large values flag coordinates where naively subtracting the two powers
    would lose digits.
    """
    _check(h, x)
    ts = tail_sums(x)
    s = h.exponents.at(x.indices)
    diff = power_increment(ts.below, ts.increments, s)
    total = ts.values**s + ts.below**s
    with np.errstate(divide="ignore"):
        return np.where(diff > 0, total / diff, np.inf)
