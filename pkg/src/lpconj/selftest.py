"""Randomised invariant suite behind ``lpconj selftest``.

Each check returns a :class:`Check` with a pass flag and the worst observed
slack. Everything is derived from the seed, so reports are reproducible
byte for byte.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import highprec
from .conjugacy import build_conjugacy_to_doubling, build_conjugacy_to_halving, conjugacy_defect
from .lp_core import ConstantWeights, DiagonalOperator, FinSeq, HarmonicWeights, ListWeights, norm_p
from .probe import escape_profile
from .rotation import PhaseWarp, phase_warp
from .sampling import random_finseq, sample_rng
from .warp_map import ExponentSeq, WarpMap, exponents_from_weights, naive_power_map, warp_forward, warp_inverse


@dataclass
class Check:
    name: str
    passed: bool
    samples: int
    worst: float
    bound: float
    extra: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.passed = bool(self.passed)
        self.worst = float(self.worst)
        self.bound = float(self.bound)

    def to_json(self) -> dict[str, Any]:
        out = {"name": self.name, "passed": self.passed, "samples": self.samples, "worst": self.worst, "bound": self.bound}
        out.update(self.extra)
        return out


def power_sandwich_slack(a, b, s, r):
    """min(middle - lower, upper - middle) for (1-a)(a^r-b^r) <= a^s-b^s <= (a-b)/(1-a)."""
    mid = a**s - b**s
    lower = (1 - a) * (a**r - b**r)
    upper = (a - b) / (1 - a)
    return np.minimum(mid - lower, upper - mid)


def check_power_sandwich(seed: int, n: int = 100_000) -> Check:
    rng = np.random.default_rng([seed, 1])
    a = rng.uniform(0.0, 1.0, n)
    b = a * rng.uniform(0.0, 1.0, n)
    r = rng.integers(1, 9, n).astype(float)
    s = 1.0 + (r - 1.0) * rng.uniform(0.0, 1.0, n)
    worst = float(power_sandwich_slack(a, b, s, r).min())
    return Check("power_difference_sandwich", worst >= -1e-12, n, worst, -1e-12)


def check_root_contraction(seed: int, n: int = 100_000) -> Check:
    rng = np.random.default_rng([seed, 2])
    a = np.exp(rng.uniform(-10, 5, n))
    s = rng.uniform(1.0, 8.0, n)
    x = np.exp(rng.uniform(-10, 5, n)) * (rng.uniform(size=n) > 0.05)
    y = np.exp(rng.uniform(-10, 5, n))
    f = lambda t: (a + t**s) ** (1 / s)  # noqa: E731
    worst = float((np.abs(x - y) - np.abs(f(x) - f(y))).min())
    return Check("root_contraction", worst >= -1e-12, n, worst, -1e-12)


def random_exponents(rng: np.random.Generator, r_max: float = 4.0, length: int = 200) -> ExponentSeq:
    vals = rng.uniform(1.0, r_max, length)
    return ExponentSeq.from_list(list(vals), float(rng.uniform(1.0, r_max)))


def norm_bounds(x_norm: float, p: float, r: float) -> tuple[float, float]:
    """Two-sided bounds on ||warp(x)||_p from ||x||_p, integer bound r."""
    if x_norm**p <= 0.5:
        return 2 ** (-1 / p) * x_norm**r, 2 ** (1 / p) * x_norm
    return 2 ** (-r / p) * x_norm, 2 ** (r / p) * x_norm**r


def check_norm_sandwich(seed: int, n: int = 10_000, ps=(1.0, 1.5, 2.0)) -> Check:
    worst = math.inf
    total = 0
    for branch in (0, 1):
        for j, p in enumerate(ps):
            half = 0.5 ** (1 / p)
            rng_range = (1e-3, half) if branch == 0 else (half * (1 + 1e-9), 1e2)
            for i in range(n):
                rng = sample_rng(seed, 10_000_000 * (1 + branch) + 1_000_000 * j + i)
                if i % 10 == 0:
                    S = random_exponents(rng)
                x = random_finseq(rng, p, rng_range)
                xn = norm_p(x)
                if (xn**p <= 0.5) != (branch == 0):
                    continue
                lo, hi = norm_bounds(xn, p, math.ceil(S.r))
                yn = norm_p(warp_forward(WarpMap(S, p), x))
                worst = min(worst, (yn - lo) / lo, (hi - yn) / hi)
                total += 1
    return Check("norm_sandwich", worst >= -1e-12, total, worst, -1e-12)


def check_roundtrip(seed: int, n: int = 1000) -> Check:
    worst = 0.0
    for i in range(n):
        rng = sample_rng(seed, 20_000_000 + i)
        p = (1.0, 1.5, 2.0)[i % 3]
        h = WarpMap(random_exponents(rng), p)
        x = random_finseq(rng, p)
        back = warp_inverse(h, warp_forward(h, x))
        worst = max(worst, norm_p(back - x) / norm_p(x))
    return Check("warp_roundtrip", worst <= 1e-9, n, worst, 1e-9)


def check_phase_conjugacy(seed: int, n: int = 10_000) -> Check:
    rng = np.random.default_rng([seed, 3])
    worst = 0.0
    for _ in range(n):
        m = rng.choice([rng.uniform(0.1, 0.9), rng.uniform(1.1, 10.0)])
        w = m * np.exp(1j * rng.uniform(-np.pi, np.pi))
        z = np.exp(rng.uniform(-5, 5)) * np.exp(1j * rng.uniform(-np.pi, np.pi))
        pw = PhaseWarp(w)
        err = abs(phase_warp(pw, abs(w) * z) - w * phase_warp(pw, z)) / (1 + abs(z))
        worst = max(worst, err)
    return Check("phase_conjugacy", worst <= 1e-10, n, worst, 1e-10)


def check_scaling_identity(seed: int, n: int = 1000) -> Check:
    """warp_S(rho x) == D_|W| warp_S(x) with s_n = log_rho |w_n|."""
    W = HarmonicWeights(2.0, 1.0)
    rho = W.inf_modulus
    worst = 0.0
    for i in range(n):
        p = (1.0, 1.5, 2.0)[i % 3]
        h = WarpMap(exponents_from_weights(W, rho), p)
        x = random_finseq(sample_rng(seed, 30_000_000 + i), p)
        lhs = warp_forward(h, x.scale(rho))
        rhs = DiagonalOperator(W, p)(warp_forward(h, x))
        worst = max(worst, norm_p(lhs - rhs) / norm_p(rhs))
    return Check("warp_scaling_identity", worst <= 1e-9, n, worst, 1e-9)


DOUBLING_CASES = {
    "constant:2": ConstantWeights(2.0),
    "constant:4": ConstantWeights(4.0),
    "list:2,8,tail=2": ListWeights((2.0, 8.0), 2.0),
    "harmonic:2,1": HarmonicWeights(2.0, 1.0),
}
HALVING_CASES = {
    "constant:0.25": ConstantWeights(0.25),
    "list:0.3,0.5,tail=0.5": ListWeights((0.3, 0.5), 0.5),
}


def check_doubling(seed: int, n: int = 1000, p: float = 1.0) -> list[Check]:
    out = []
    for label, W in DOUBLING_CASES.items():
        rep = conjugacy_defect(build_conjugacy_to_doubling(W, p), n, seed)
        bound = 0.0 if label == "constant:2" else 1e-8
        out.append(Check(f"doubling_defect[{label}]", rep.max_defect <= bound, n, rep.max_defect, bound))
    return out


def check_halving(seed: int, n: int = 1000, p: float = 1.0) -> list[Check]:
    out = []
    for label, W in HALVING_CASES.items():
        rep = conjugacy_defect(build_conjugacy_to_halving(W, p), n, seed)
        out.append(Check(f"halving_defect[{label}]", rep.max_defect <= 1e-8, n, rep.max_defect, 1e-8))
    return out


def harmonic_escape_oracle(n: int, factor: int = 2) -> int:
    """Smallest k with (1 + 1/n)^k > factor, decided in exact integers."""
    k = 1
    num, den = n + 1, n
    while num <= factor * den:
        num *= n + 1
        den *= n
        k += 1
    return k


def check_escape(seed: int) -> list[Check]:
    idx = [10, 100, 1000, 10_000]
    prof = escape_profile(HarmonicWeights(1.0, 1.0), 1.0, 0.1, idx, 2.0)
    oracle = [harmonic_escape_oracle(n) for n in idx]
    times = prof.escape_times
    ok = times == oracle and all(a < b for a, b in zip(times, times[1:])) and prof.divergence_flag
    out = [Check("escape_divergence[harmonic:1,1]", ok, len(idx), float(max(times)), float(max(oracle)), {"escape_times": times})]
    bound = math.ceil(math.log(2) / math.log(1.1)) + 1
    worst = 0
    rng = np.random.default_rng([seed, 4])
    for W in (ConstantWeights(1.1), HarmonicWeights(1.1, 2.0), ListWeights(tuple(rng.uniform(1.1, 3.0, 20)), 1.1 + 0.5j)):
        prof = escape_profile(W, 1.0, 0.1, list(range(1, 60)), 2.0)
        worst = max(worst, max(prof.escape_times))
    out.append(Check("escape_uniform_bound[inf>=1.1]", worst <= bound, 3, float(worst), float(bound)))
    return out


def check_naive_counterexample() -> Check:
    """The coordinatewise power map breaks the lower norm bound on flat vectors;
    the tail-sum warp does not."""
    S = ExponentSeq.constant(2.0)
    violated_naive, held_warp = False, True
    for p in (1.0, 2.0):
        for k in range(1, 11):
            N = 2**k
            x = FinSeq(np.arange(1, N + 1), np.full(N, N ** (-1 / p)), p)
            lo, hi = norm_bounds(norm_p(x), p, 2)
            naive = norm_p(naive_power_map(S, x))
            warped = norm_p(warp_forward(WarpMap(S, p), x))
            violated_naive |= not (lo * (1 - 1e-12) <= naive <= hi * (1 + 1e-12))
            held_warp &= lo * (1 - 1e-12) <= warped <= hi * (1 + 1e-12)
    ok = violated_naive and held_warp
    return Check("naive_map_counterexample", ok, 20, float(violated_naive), 1.0, {"warp_within_bounds": held_warp})


def check_highprec(seed: int, n: int = 200) -> Check:
    worst = 0.0
    for i in range(n):
        rng = sample_rng(seed, 40_000_000 + i)
        p = (1.0, 1.5, 2.0)[i % 3]
        S = random_exponents(rng)
        x = random_finseq(rng, p, (1e-2, 1e2), max_support=20)
        y = warp_forward(WarpMap(S, p), x)
        ref = highprec.warp_forward(x.values, S.at(x.indices), p)
        err = max(abs(a - b) / abs(b) for a, b in zip(y.values, ref))
        worst = max(worst, err)
    return Check("highprec_crosscheck", worst <= 1e-10, n, worst, 1e-10, {"digits": highprec.digits()})


def run_all(seed: int = 7, scale: float = 1.0, log: Callable[[str], None] | None = None) -> list[Check]:
    """Run every check. ``scale`` multiplies sample counts (1.0 = full size)."""

    def sz(n: int) -> int:
        return max(1, int(n * scale))

    steps: list[Callable[[], Check | list[Check]]] = [
        lambda: check_power_sandwich(seed, sz(100_000)),
        lambda: check_root_contraction(seed, sz(100_000)),
        lambda: check_norm_sandwich(seed, sz(10_000)),
        lambda: check_roundtrip(seed, sz(1000)),
        lambda: check_phase_conjugacy(seed, sz(10_000)),
        lambda: check_scaling_identity(seed, sz(1000)),
        lambda: check_doubling(seed, sz(1000)),
        lambda: check_halving(seed, sz(1000)),
        lambda: check_escape(seed),
        check_naive_counterexample,
    ]
    if os.environ.get("LPCONJ_PRECISION", "").strip():
        steps.append(lambda: check_highprec(seed))
    results: list[Check] = []
    for step in steps:
        res = step()
        for c in res if isinstance(res, list) else [res]:
            results.append(c)
            if log is not None:
                log(f"{'PASS' if c.passed else 'FAIL'} {c.name} worst={c.worst:.3e} bound={c.bound:.1e}")
    return results
