"""Finitely supported vectors in l^p, tail sums, weight sequences and
diagonal operators.

Every value here is immutable. Arrays held by a :class:`FinSeq` are marked
read-only, so instances can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping

import numpy as np

from .errors import DescriptorError, ExponentMismatch

__all__ = [
    "FinSeq",
    "TailSums",
    "WeightSeq",
    "ConstantWeights",
    "ListWeights",
    "HarmonicWeights",
    "ReciprocalWeights",
    "ModulusWeights",
    "DiagonalOperator",
    "norm_p",
    "tail_sums",
    "apply_diagonal",
    "coordinate",
    "truncate",
    "check_exponent",
    "weights_from_json",
]


def check_exponent(p: float) -> float:
    p = float(p)
    if not (1.0 <= p < math.inf):
        raise DescriptorError(f"exponent p must satisfy 1 <= p < inf, got {p}")
    return p


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class FinSeq:
    """A finitely supported complex sequence x = (x_1, x_2, ...) in l^p.

    Only nonzero coordinates are stored; ``indices`` is strictly increasing
    and 1-based.
    """

    indices: np.ndarray
    values: np.ndarray
    p: float

    def __post_init__(self) -> None:
        idx = np.asarray(self.indices, dtype=np.int64).reshape(-1)
        val = np.asarray(self.values, dtype=np.complex128).reshape(-1)
        if idx.shape != val.shape:
            raise DescriptorError("indices and values must have equal length")
        if idx.size and idx.min() < 1:
            raise DescriptorError("indices must be positive integers")
        if not np.all(np.isfinite(val)):
            raise DescriptorError("coordinates must be finite")
        if idx.size > 1 and not (idx[1:] > idx[:-1]).all():
            order = np.argsort(idx, kind="stable")
            idx, val = idx[order], val[order]
            if (idx[1:] == idx[:-1]).any():
                raise DescriptorError("duplicate index in FinSeq")
        keep = val != 0
        object.__setattr__(self, "indices", _frozen(idx[keep]))
        object.__setattr__(self, "values", _frozen(val[keep]))
        object.__setattr__(self, "p", check_exponent(self.p))

    @classmethod
    def from_dict(cls, entries: Mapping[int, complex], p: float) -> "FinSeq":
        keys = list(entries)
        return cls(np.array(keys, dtype=np.int64), np.array([entries[k] for k in keys], dtype=np.complex128), p)

    @classmethod
    def zero(cls, p: float) -> "FinSeq":
        return cls(np.empty(0, np.int64), np.empty(0, np.complex128), p)

    @classmethod
    def basis(cls, n: int, t: complex, p: float) -> "FinSeq":
        """``t * e_n``."""
        return cls(np.array([n]), np.array([t]), p)

    @property
    def entries(self) -> dict[int, complex]:
        return {int(n): complex(v) for n, v in zip(self.indices, self.values)}

    @property
    def support_size(self) -> int:
        return int(self.indices.size)

    @property
    def max_index(self) -> int:
        return int(self.indices[-1]) if self.indices.size else 0

    def with_values(self, values: np.ndarray) -> "FinSeq":
        """Same support, new coordinates (zeros are dropped)."""
        return FinSeq(self.indices, values, self.p)

    def scale(self, t: complex) -> "FinSeq":
        return FinSeq(self.indices, self.values * t, self.p)

    def __sub__(self, other: "FinSeq") -> "FinSeq":
        if other.p != self.p:
            raise ExponentMismatch(f"p={self.p} vs p={other.p}")
        acc = self.entries
        for n, v in other.entries.items():
            acc[n] = acc.get(n, 0j) - v
        return FinSeq.from_dict(acc, self.p)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinSeq):
            return NotImplemented
        return (
            self.p == other.p
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FinSeq(p={self.p}, entries={self.entries})"

    def to_json(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "entries": {str(int(n)): [float(v.real), float(v.imag)] for n, v in zip(self.indices, self.values)},
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "FinSeq":
        try:
            p = float(obj["p"])
            raw = obj["entries"]
            entries = {int(k): _complex_from_json(v) for k, v in raw.items()}
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise DescriptorError(f"malformed FinSeq JSON: {exc}") from exc
        return cls.from_dict(entries, p)


@dataclass(frozen=True, eq=False)
class TailSums:
    """Suffix sums T_n = sum_{k>=n} |x_k|^p evaluated on the support.

    ``values[i]`` is T at ``indices[i]``; ``increments[i]`` is |x_n|^p at the
    same index. Between support points T is constant, beyond ``max_index``
    it is zero.
    """

    indices: np.ndarray
    values: np.ndarray
    increments: np.ndarray
    max_index: int

    def at(self, n: int) -> float:
        i = int(np.searchsorted(self.indices, n, side="left"))
        return float(self.values[i]) if i < self.values.size else 0.0

    @property
    def below(self) -> np.ndarray:
        """T_{n+1} at each support index n."""
        out = np.zeros_like(self.values)
        out[:-1] = self.values[1:]
        return out


def norm_p(x: FinSeq) -> float:
    if x.values.size == 0:
        return 0.0
    mod = np.abs(x.values)
    # scale by the largest modulus so |x_n|^p cannot underflow or overflow
    top = mod.max()
    return float(top * np.sum((mod / top) ** x.p) ** (1.0 / x.p))


def tail_sums(x: FinSeq) -> TailSums:
    inc = np.abs(x.values) ** x.p
    # cumsum on the reversed array adds from the highest index downward
    tails = np.cumsum(inc[::-1])[::-1]
    return TailSums(_frozen(x.indices), _frozen(np.ascontiguousarray(tails)), _frozen(inc), x.max_index)


def coordinate(x: FinSeq, n: int) -> complex:
    if n < 1:
        raise DescriptorError(f"index must be >= 1, got {n}")
    i = int(np.searchsorted(x.indices, n))
    if i < x.indices.size and x.indices[i] == n:
        return complex(x.values[i])
    return 0j


def truncate(x: FinSeq, n_max: int) -> tuple[FinSeq, float]:
    """Keep coordinates with index <= n_max; also return the norm of what was cut."""
    keep = x.indices <= n_max
    head = FinSeq(x.indices[keep], x.values[keep], x.p)
    rest = FinSeq(x.indices[~keep], x.values[~keep], x.p)
    return head, norm_p(rest)


# --- weight sequences -------------------------------------------------------


def _complex_from_json(v: Any) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise DescriptorError(f"expected [re, im], got {v!r}")


def _complex_to_json(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


class WeightSeq:
    """A bounded complex sequence w_1, w_2, ... given by a closed-form descriptor.

    Subclasses provide vectorised evaluation and the exact infimum and
    supremum of |w_n| over n >= 1.
    """

    kind: str = ""

    def at(self, indices: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, n: int) -> complex:
        return complex(self.at(np.array([n], dtype=np.int64))[0])

    @property
    def inf_modulus(self) -> float:
        raise NotImplementedError

    @property
    def sup_modulus(self) -> float:
        raise NotImplementedError

    def to_json(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantWeights(WeightSeq):
    value: complex
    kind = "constant"

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", complex(self.value))
        if not np.isfinite(self.value):
            raise DescriptorError("constant weight must be finite")

    def at(self, indices: np.ndarray) -> np.ndarray:
        return np.full(np.shape(indices), self.value, dtype=np.complex128)

    @property
    def inf_modulus(self) -> float:
        return abs(self.value)

    @property
    def sup_modulus(self) -> float:
        return abs(self.value)

    def to_json(self) -> dict[str, Any]:
        return {"kind": "constant", "value": _complex_to_json(self.value)}


@dataclass(frozen=True)
class ListWeights(WeightSeq):
    """w_1..w_m given explicitly, then w_n = tail for n > m."""

    values: tuple[complex, ...]
    tail: complex
    kind = "list"

    def __post_init__(self) -> None:
        table = np.append(np.asarray(self.values, dtype=np.complex128), complex(self.tail))
        if not np.all(np.isfinite(table)):
            raise DescriptorError("list weights must be finite")
        object.__setattr__(self, "values", tuple(table[:-1].tolist()))
        object.__setattr__(self, "tail", complex(table[-1]))

    @cached_property
    def table(self) -> np.ndarray:
        """w_1..w_m followed by the tail value."""
        return _frozen(np.append(np.asarray(self.values, dtype=np.complex128), self.tail))

    def at(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        return self.table[np.minimum(idx, len(self.values) + 1) - 1]

    @property
    def inf_modulus(self) -> float:
        return float(np.abs(self.table).min())

    @property
    def sup_modulus(self) -> float:
        return float(np.abs(self.table).max())

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": "list",
            "values": [_complex_to_json(v) for v in self.values],
            "tail": _complex_to_json(self.tail),
        }


@dataclass(frozen=True)
class HarmonicWeights(WeightSeq):
    """w_n = c + a/n."""

    c: complex
    a: complex
    kind = "harmonic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", complex(self.c))
        object.__setattr__(self, "a", complex(self.a))
        if not (np.isfinite(self.c) and np.isfinite(self.a)):
            raise DescriptorError("harmonic weights must be finite")

    def at(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.float64)
        return self.c + self.a / idx

    def _candidates(self) -> list[float]:
        # |c + a t|^2 is a convex quadratic in t = 1/n on (0, 1], so the
        # extrema over {1/n} lie at t = 1, at the limit t -> 0, or at the two
        # grid points bracketing the vertex.
        c, a = self.c, self.a
        out = [abs(c + a), abs(c)]
        if a != 0:
            t_star = -(c * a.conjugate()).real / abs(a) ** 2
            if 0 < t_star < 1:
                n1 = min(math.floor(1.0 / t_star), 10**15)
                for n in (n1, n1 + 1):
                    out.append(abs(c + a / n))
        return out

    @cached_property
    def inf_modulus(self) -> float:  # type: ignore[override]
        return min(self._candidates())

    @cached_property
    def sup_modulus(self) -> float:  # type: ignore[override]
        return max(abs(self.c + self.a), abs(self.c))

    def to_json(self) -> dict[str, Any]:
        return {"kind": "harmonic", "c": _complex_to_json(self.c), "a": _complex_to_json(self.a)}


@dataclass(frozen=True)
class ReciprocalWeights(WeightSeq):
    """w_n = 1 / base_n; requires inf |base_n| > 0."""

    base: WeightSeq
    kind = "reciprocal"

    def __post_init__(self) -> None:
        if not self.base.inf_modulus > 0:
            raise DescriptorError("reciprocal of a sequence with inf modulus 0")

    def at(self, indices: np.ndarray) -> np.ndarray:
        return 1.0 / self.base.at(indices)

    @property
    def inf_modulus(self) -> float:
        return 1.0 / self.base.sup_modulus

    @property
    def sup_modulus(self) -> float:
        return 1.0 / self.base.inf_modulus

    def to_json(self) -> dict[str, Any]:
        return {"kind": "reciprocal", "of": self.base.to_json()}


@dataclass(frozen=True)
class ModulusWeights(WeightSeq):
    """w_n = |base_n|."""

    base: WeightSeq
    kind = "modulus"

    def at(self, indices: np.ndarray) -> np.ndarray:
        return np.abs(self.base.at(indices)).astype(np.complex128)

    @property
    def inf_modulus(self) -> float:
        return self.base.inf_modulus

    @property
    def sup_modulus(self) -> float:
        return self.base.sup_modulus

    def to_json(self) -> dict[str, Any]:
        return {"kind": "modulus", "of": self.base.to_json()}


def weights_from_json(obj: Mapping[str, Any]) -> WeightSeq:
    try:
        kind = obj["kind"]
        if kind == "constant":
            return ConstantWeights(_complex_from_json(obj["value"]))
        if kind == "list":
            return ListWeights(tuple(_complex_from_json(v) for v in obj["values"]), _complex_from_json(obj["tail"]))
        if kind == "harmonic":
            return HarmonicWeights(_complex_from_json(obj["c"]), _complex_from_json(obj["a"]))
        if kind == "reciprocal":
            return ReciprocalWeights(weights_from_json(obj["of"]))
        if kind == "modulus":
            return ModulusWeights(weights_from_json(obj["of"]))
    except (KeyError, TypeError, AttributeError) as exc:
        raise DescriptorError(f"malformed weight descriptor: {exc}") from exc
    raise DescriptorError(f"unknown weight descriptor kind {obj.get('kind')!r}")


@dataclass(frozen=True)
class DiagonalOperator:
    """D_W acting on l^p by (D_W x)_n = w_n x_n."""

    weights: WeightSeq
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", check_exponent(self.p))

    @classmethod
    def scalar(cls, c: complex, p: float) -> "DiagonalOperator":
        return cls(ConstantWeights(c), p)

    @property
    def norm(self) -> float:
        return self.weights.sup_modulus

    def __call__(self, x: FinSeq) -> FinSeq:
        return apply_diagonal(self, x)

    def to_json(self) -> dict[str, Any]:
        return {"weights": self.weights.to_json(), "p": self.p}


def apply_diagonal(D: DiagonalOperator, x: FinSeq) -> FinSeq:
    if D.p != x.p:
        raise ExponentMismatch(f"operator acts on l^{D.p}, vector is in l^{x.p}")
    return FinSeq(x.indices, x.values * D.weights.at(x.indices), x.p)
