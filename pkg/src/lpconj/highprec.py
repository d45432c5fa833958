"""mpmath reference evaluations, used only to cross-check the binary64 paths.

The working precision (decimal digits) comes from the LPCONJ_PRECISION
environment variable, default 50.
"""

from __future__ import annotations

import os
from typing import Sequence

import mpmath

DEFAULT_DIGITS = 50


def digits() -> int:
    raw = os.environ.get("LPCONJ_PRECISION", "")
    return int(raw) if raw.strip() else DEFAULT_DIGITS


def power_diff(t_hi: float, t_lo: float, s: float, dps: int | None = None) -> float:
    with mpmath.workdps(dps or digits()):
        return float(mpmath.mpf(t_hi) ** mpmath.mpf(s) - mpmath.mpf(t_lo) ** mpmath.mpf(s))


def warp_forward(values: Sequence[complex], exponents: Sequence[float], p: float, dps: int | None = None) -> list[complex]:
    """Warp of the vector with the given (support) coordinates, summing tails
    at high precision and subtracting the powers directly."""
    with mpmath.workdps(dps or digits()):
        pp = mpmath.mpf(p)
        mods = [mpmath.mpf(abs(complex(v))) ** pp for v in values]
        tails = [mpmath.mpf(0)] * (len(mods) + 1)
        for i in range(len(mods) - 1, -1, -1):
            tails[i] = tails[i + 1] + mods[i]
        out = []
        for i, v in enumerate(values):
            s = mpmath.mpf(exponents[i])
            rad = tails[i] ** s - tails[i + 1] ** s
            z = mpmath.mpc(complex(v))
            out.append(complex(z / abs(z) * rad ** (1 / pp)))
        return out


def phase_warp(w: complex, z: complex, dps: int | None = None) -> complex:
    with mpmath.workdps(dps or digits()):
        w, z = mpmath.mpc(w), mpmath.mpc(z)
        if w == 0 or z == 0:
            return complex(z)
        theta = mpmath.arg(w)
        return complex(z * mpmath.expj(theta * mpmath.log(abs(z)) / mpmath.log(abs(w))))
