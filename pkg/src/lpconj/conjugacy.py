"""Constructive conjugacies between diagonal operators on l^p.

A :class:`ConjugacyMap` Phi carries a certificate (source, target) meaning
Phi(source x) = target(Phi x). Maps are stored as stage lists so they can be
inverted and composed without re-deriving anything.

For inf |w_n| = rho > 1 the map to the doubling normal form is

    Phi = F_W o h^S o (h^{S'})^{-1},   s_n = log_rho |w_n|,  s' = log_rho 2,

so that 2I -> rho I -> D_|W| -> D_W along the way. When rho >= 2 the
exponent s' drops below 1; since a constant-exponent warp satisfies
(h^c)^{-1} = h^{1/c}, the first stage is then the forward warp with the
constant log_2 rho instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

import numpy as np

from .errors import CertificateMismatch, ExponentMismatch, HypothesisViolation
from .lp_core import (
    DiagonalOperator,
    FinSeq,
    ReciprocalWeights,
    WeightSeq,
    check_exponent,
    norm_p,
)
from .rotation import check_no_unimodular, rotation_forward, rotation_inverse
from .sampling import random_finseq, sample_rng
from .warp_map import ExponentSeq, WarpMap, exponents_from_weights, warp_forward, warp_inverse

__all__ = [
    "Stage",
    "ConjugacyMap",
    "DefectReport",
    "identity_map",
    "build_conjugacy_to_doubling",
    "build_conjugacy_to_halving",
    "evaluate",
    "inverse",
    "compose",
    "conjugacy_defect",
]

StageKind = Literal["warp", "unwarp", "rotate", "unrotate"]
_INVERSE_KIND = {"warp": "unwarp", "unwarp": "warp", "rotate": "unrotate", "unrotate": "rotate"}


@dataclass(frozen=True)
class Stage:
    kind: StageKind
    warp: WarpMap | None = None
    weights: WeightSeq | None = None

    def __call__(self, x: FinSeq) -> FinSeq:
        if self.kind == "warp":
            return warp_forward(self.warp, x)
        if self.kind == "unwarp":
            return warp_inverse(self.warp, x)
        if self.kind == "rotate":
            return rotation_forward(self.weights, x)
        return rotation_inverse(self.weights, x)

    def inverted(self) -> "Stage":
        return Stage(_INVERSE_KIND[self.kind], self.warp, self.weights)

    def to_json(self) -> dict[str, Any]:
        if self.warp is not None:
            return {"kind": self.kind, "exponents": self.warp.exponents.to_json()}
        return {"kind": self.kind, "weights": self.weights.to_json()}


@dataclass(frozen=True)
class ConjugacyMap:
    """Invertible map of l^p with Phi(source x) == target(Phi x)."""

    stages: tuple[Stage, ...]
    source: DiagonalOperator
    target: DiagonalOperator
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", check_exponent(self.p))
        if self.source.p != self.p or self.target.p != self.p:
            raise ExponentMismatch("certificate operators must act on the map's l^p")

    def __call__(self, x: FinSeq) -> FinSeq:
        return evaluate(self, x, "forward")

    def to_json(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "stages": [s.to_json() for s in self.stages],
        }


@dataclass(frozen=True)
class DefectReport:
    """Sampled conjugacy defect.

    Per sample the defect is ||Phi(source x) - target(Phi x)||_p divided by
    ||target(Phi x)||_p (absolute when that norm is zero); ``max_abs_defect``
    keeps the unnormalised maximum.
    """

    samples: int
    max_defect: float
    mean_defect: float
    worst_witness: FinSeq | None
    max_abs_defect: float = 0.0
    defects: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False, compare=False)

    def to_json(self) -> dict[str, Any]:
        return {
            "samples": self.samples,
            "max_defect": self.max_defect,
            "mean_defect": self.mean_defect,
            "max_abs_defect": self.max_abs_defect,
            "worst_witness": None if self.worst_witness is None else self.worst_witness.to_json(),
        }


def identity_map(op: DiagonalOperator) -> ConjugacyMap:
    return ConjugacyMap((), op, op, op.p)


def _doubling_stages(W: WeightSeq, p: float) -> tuple[Stage, ...]:
    rho = W.inf_modulus
    if not rho > 1:
        raise HypothesisViolation(f"inf modulus {rho} <= 1: doubling conjugacy needs inf |w_n| > 1")
    check_no_unimodular(W)
    if rho >= 2:
        first = Stage("warp", WarpMap(ExponentSeq.constant(math.log(rho) / math.log(2.0)), p))
    else:
        first = Stage("unwarp", WarpMap(ExponentSeq.constant(math.log(2.0) / math.log(rho)), p))
    return (
        first,
        Stage("warp", WarpMap(exponents_from_weights(W, rho), p)),
        Stage("rotate", weights=W),
    )


def build_conjugacy_to_doubling(W: WeightSeq, p: float) -> ConjugacyMap:
    """Phi with Phi(2x) = D_W(Phi x); requires inf |w_n| > 1."""
    p = check_exponent(p)
    return ConjugacyMap(_doubling_stages(W, p), DiagonalOperator.scalar(2.0, p), DiagonalOperator(W, p), p)


def build_conjugacy_to_halving(W: WeightSeq, p: float) -> ConjugacyMap:
    """Phi with Phi(x/2) = D_W(Phi x); requires 0 < inf |w_n| and sup |w_n| < 1.

    Built as the doubling map of 1/W: Phi(2u) = D_{1/W} Phi(u) with u = x/2
    rearranges to Phi(x/2) = D_W Phi(x).
    """
    p = check_exponent(p)
    if not W.inf_modulus > 0:
        raise HypothesisViolation("inf modulus = 0: halving conjugacy needs inf |w_n| > 0")
    if not W.sup_modulus < 1:
        raise HypothesisViolation(f"sup modulus {W.sup_modulus} >= 1: halving conjugacy needs sup |w_n| < 1")
    stages = _doubling_stages(ReciprocalWeights(W), p)
    return ConjugacyMap(stages, DiagonalOperator.scalar(0.5, p), DiagonalOperator(W, p), p)


def evaluate(m: ConjugacyMap, x: FinSeq, direction: Literal["forward", "inverse"] = "forward") -> FinSeq:
    if x.p != m.p:
        raise ExponentMismatch(f"map acts on l^{m.p}, vector is in l^{x.p}")
    if direction == "forward":
        stages = m.stages
    elif direction == "inverse":
        stages = tuple(s.inverted() for s in reversed(m.stages))
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    for stage in stages:
        x = stage(x)
    return x


def inverse(m: ConjugacyMap) -> ConjugacyMap:
    return ConjugacyMap(tuple(s.inverted() for s in reversed(m.stages)), m.target, m.source, m.p)


def compose(a: ConjugacyMap, b: ConjugacyMap) -> ConjugacyMap:
    """Apply ``a`` then ``b``; certifies a.source -> b.target."""
    if a.p != b.p:
        raise ExponentMismatch(f"cannot compose maps on l^{a.p} and l^{b.p}")
    if a.target != b.source:
        raise CertificateMismatch("a.target does not match b.source")
    return ConjugacyMap(a.stages + b.stages, a.source, b.target, a.p)


def conjugacy_defect(
    m: ConjugacyMap,
    samples: int = 1000,
    seed: int = 0,
    scale_range: tuple[float, float] = (1e-3, 1e3),
) -> DefectReport:
    defects = np.zeros(samples)
    abs_max = 0.0
    for i in range(samples):
        x = random_finseq(sample_rng(seed, i), m.p, scale_range)
        lhs = evaluate(m, m.source(x))
        rhs = m.target(evaluate(m, x))
        err = norm_p(lhs - rhs)
        ref = norm_p(rhs)
        defects[i] = err / ref if ref > 0 else err
        abs_max = max(abs_max, err)
    if samples == 0:
        return DefectReport(0, 0.0, 0.0, None)
    # regenerate rather than keep every sample alive
    worst = random_finseq(sample_rng(seed, int(defects.argmax())), m.p, scale_range)
    return DefectReport(
        samples=samples,
        max_defect=float(defects.max()),
        mean_defect=float(defects.mean()),
        worst_witness=worst,
        max_abs_defect=abs_max,
        defects=defects,
    )
