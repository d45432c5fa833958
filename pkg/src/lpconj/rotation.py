"""Phase warp f_w and its coordinatewise lift F_W.

For complex w with |w| != 1, f_w(z) = z * exp(i theta ln|z| / ln|w|) where
theta = arg w. It preserves |z| and turns multiplication by |w| into
multiplication by w: f_w(|w| z) = w f_w(z). f_w(0) = 0 and f_0 is the
identity. The lift F_W applies f_{w_n} to the n-th coordinate and so
conjugates D_|W| to D_W.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisViolation
from .lp_core import (
    ConstantWeights,
    FinSeq,
    HarmonicWeights,
    ListWeights,
    ModulusWeights,
    ReciprocalWeights,
    WeightSeq,
)

__all__ = [
    "PhaseWarp",
    "phase_warp",
    "phase_warp_inverse",
    "rotation_forward",
    "rotation_inverse",
    "check_no_unimodular",
]


@dataclass(frozen=True)
class PhaseWarp:
    w: complex
    theta: float = 0.0
    log_mod: float = 0.0

    def __post_init__(self) -> None:
        w = complex(self.w)
        object.__setattr__(self, "w", w)
        if w == 0:
            object.__setattr__(self, "theta", 0.0)
            object.__setattr__(self, "log_mod", 0.0)
            return
        if abs(w) == 1.0:
            raise HypothesisViolation(f"|w| = 1 for w = {w}: the phase warp needs |w| != 1")
        object.__setattr__(self, "theta", cmath.phase(w))
        object.__setattr__(self, "log_mod", math.log(abs(w)))


def _spin(pw: PhaseWarp, z: complex, sign: float) -> complex:
    z = complex(z)
    if pw.w == 0 or z == 0 or pw.theta == 0.0:
        return z
    return z * cmath.exp(1j * sign * pw.theta * math.log(abs(z)) / pw.log_mod)


def phase_warp(pw: PhaseWarp, z: complex) -> complex:
    return _spin(pw, z, 1.0)


def phase_warp_inverse(pw: PhaseWarp, z: complex) -> complex:
    return _spin(pw, z, -1.0)


def check_no_unimodular(W: WeightSeq) -> None:
    """Raise unless |w_n| != 1 for every nonzero w_n.

    Decided from the descriptor alone: finite lists are scanned, harmonic
    sequences c + a/n are solved for |c + a/n| = 1 over positive integers.
    """
    if isinstance(W, ConstantWeights):
        bad = W.value != 0 and abs(W.value) == 1.0
    elif isinstance(W, ListWeights):
        bad = any(v != 0 and abs(v) == 1.0 for v in W.values + (W.tail,))
    elif isinstance(W, HarmonicWeights):
        bad = _harmonic_hits_unit_circle(W)
    elif isinstance(W, (ReciprocalWeights, ModulusWeights)):
        check_no_unimodular(W.base)
        bad = False
    else:
        raise HypothesisViolation(f"cannot certify |w_n| != 1 for descriptor kind {W.kind!r}")
    if bad:
        raise HypothesisViolation("some |w_n| = 1: the phase-warp lift needs |w_n| != 1 for all n")


def _harmonic_hits_unit_circle(W: HarmonicWeights) -> bool:
    # |c + a t|^2 = 1 is a quadratic in t = 1/n; check the integer n nearest each root
    c, a = W.c, W.a
    if a == 0:
        return c != 0 and abs(c) == 1.0
    A = abs(a) ** 2
    B = 2 * (c * a.conjugate()).real
    C = abs(c) ** 2 - 1
    disc = B * B - 4 * A * C
    if disc < 0:
        return False
    for t in ((-B + math.sqrt(disc)) / (2 * A), (-B - math.sqrt(disc)) / (2 * A)):
        if 0 < t <= 1:
            for n in {math.floor(1 / t), math.ceil(1 / t)}:
                if n >= 1 and abs(c + a / n) == 1.0:
                    return True
    return False


def _lift(W: WeightSeq, x: FinSeq, sign: float) -> FinSeq:
    check_no_unimodular(W)
    if x.support_size == 0:
        return x
    w = W.at(x.indices)
    z = x.values
    theta = np.angle(w)
    mod_w = np.abs(w)
    active = (theta != 0) & (mod_w != 0)
    out = z.copy()
    if np.any(active):
        zz = z[active]
        angle = sign * theta[active] * np.log(np.abs(zz)) / np.log(mod_w[active])
        out[active] = zz * np.exp(1j * angle)
    return x.with_values(out)


def rotation_forward(W: WeightSeq, x: FinSeq) -> FinSeq:
    """F_W(x)_n = f_{w_n}(x_n); norm preserving."""
    return _lift(W, x, 1.0)


def rotation_inverse(W: WeightSeq, x: FinSeq) -> FinSeq:
    return _lift(W, x, -1.0)
