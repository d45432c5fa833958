"""Escape-time measurements for diagonal operators near the unit circle.

If inf |w_n| > 1, every basis direction leaves the ball of radius R*eps
within a bounded number of steps. When inf |w_n| = 1 the escape times
along basis vectors grow without bound, which no conjugacy to 2I can
reproduce. The profile built here measures that growth on a finite index
sample; the divergence flag is a heuristic, never a proof.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Any, Sequence

from .errors import DescriptorError, HypothesisViolation
from .lp_core import DiagonalOperator, FinSeq, WeightSeq, norm_p

__all__ = ["EscapeProfile", "escape_time", "escape_profile", "DEFAULT_CAP"]

DEFAULT_CAP = 100_000


def escape_time(D: DiagonalOperator, x: FinSeq, radius: float, cap: int = DEFAULT_CAP) -> int | None:
    """Smallest k >= 1 with ||D^k x||_p > radius, or None if not reached by ``cap``."""
    if not radius > norm_p(x):
        raise DescriptorError(f"radius {radius} must exceed ||x||_p = {norm_p(x)}")
    for k in range(1, cap + 1):
        x = D(x)
        if norm_p(x) > radius:
            return k
    return None


@dataclass(frozen=True)
class EscapeProfile:
    weights: WeightSeq
    p: float
    epsilon: float
    radius: float
    rows: tuple[tuple[int, int | None], ...]
    divergence_flag: bool

    @property
    def escape_times(self) -> list[int | None]:
        return [k for _, k in self.rows]

    def to_json(self) -> dict[str, Any]:
        return {
            "weights": self.weights.to_json(),
            "p": self.p,
            "epsilon": self.epsilon,
            "radius": self.radius,
            "rows": [{"index": n, "escape_time": k, "sentinel": k is None} for n, k in self.rows],
            "divergence_flag": self.divergence_flag,
            "divergence_flag_kind": "heuristic: last quarter of escape times above first quarter maximum",
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "escape_time", "sentinel_flag"])
        for n, k in self.rows:
            w.writerow([n, "" if k is None else k, int(k is None)])
        return buf.getvalue()


def _diverges(times: Sequence[int | None]) -> bool:
    vals = [math.inf if k is None else k for k in times]
    if not vals:
        return False
    if all(v == math.inf for v in vals):
        return True
    q = max(1, len(vals) // 4)
    return min(vals[-q:]) > max(vals[:q])


def escape_profile(
    W: WeightSeq,
    p: float,
    epsilon: float,
    indices: Sequence[int],
    radius_factor: float = 2.0,
    cap: int = DEFAULT_CAP,
) -> EscapeProfile:
    """Escape times of eps*e_n from the ball of radius radius_factor*eps."""
    if not W.inf_modulus >= 1:
        raise HypothesisViolation(f"inf modulus {W.inf_modulus} < 1: escape profile needs inf |w_n| >= 1")
    if not epsilon > 0:
        raise DescriptorError(f"epsilon must be positive, got {epsilon}")
    if not radius_factor > 1:
        raise DescriptorError(f"radius factor must exceed 1, got {radius_factor}")
    D = DiagonalOperator(W, p)
    radius = radius_factor * epsilon
    rows = tuple(
        (int(n), escape_time(D, FinSeq.basis(int(n), epsilon, p), radius, cap)) for n in sorted(set(indices))
    )
    return EscapeProfile(W, D.p, float(epsilon), radius, rows, _diverges([k for _, k in rows]))
