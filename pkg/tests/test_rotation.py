import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpconj.errors import HypothesisViolation
from lpconj.lp_core import ConstantWeights, DiagonalOperator, FinSeq, HarmonicWeights, ListWeights, ModulusWeights, norm_p
from lpconj.rotation import (
    PhaseWarp,
    check_no_unimodular,
    phase_warp,
    phase_warp_inverse,
    rotation_forward,
    rotation_inverse,
)


def test_real_positive_w_is_identity():
    pw = PhaseWarp(4)
    for z in (1.5, -2 + 3j, 1e-9j):
        assert phase_warp(pw, z) == z


def test_w_2i_examples():
    pw = PhaseWarp(2j)
    # 2 * exp(i (ln 2 / ln 2)(pi/2)) = 2i
    assert abs(phase_warp(pw, 2) - 2j) < 1e-15
    assert abs(phase_warp_inverse(pw, 2j) - 2) < 1e-15
    # f(4) = 4 e^{i pi} = -4 and w f(2) = 2i * 2i = -4
    assert abs(phase_warp(pw, 4) - (-4)) < 1e-14
    assert abs(2j * phase_warp(pw, 2) - (-4)) < 1e-14


def test_zero_and_w_zero_conventions():
    assert phase_warp(PhaseWarp(3j), 0) == 0
    assert phase_warp_inverse(PhaseWarp(3j), 0) == 0
    assert phase_warp(PhaseWarp(0), 1 + 1j) == 1 + 1j


@pytest.mark.parametrize("w", [1, -1, 1j, cmath.exp(0.3j)])
def test_unimodular_rejected(w):
    with pytest.raises(HypothesisViolation):
        PhaseWarp(w)


def test_matches_high_precision():
    rng = np.random.default_rng(5)
    for _ in range(200):
        w = complex(np.exp(rng.uniform(-3, 3)) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
        if abs(abs(w) - 1) < 1e-3:
            continue
        z = complex(np.exp(rng.uniform(-10, 10)) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
        with mpmath.workdps(40):
            W, Z = mpmath.mpc(w), mpmath.mpc(z)
            ref = complex(Z * mpmath.expj(mpmath.arg(W) * mpmath.log(abs(Z)) / mpmath.log(abs(W))))
        assert abs(phase_warp(PhaseWarp(w), z) - ref) <= 1e-12 * abs(z) * (1 + abs(math.log(abs(z))))


moduli = st.one_of(st.floats(0.1, 0.9), st.floats(1.1, 10))
angles = st.floats(-math.pi, math.pi)
zs = st.builds(lambda r, a: r * cmath.exp(1j * a), st.floats(1e-6, 1e6), angles)


@settings(max_examples=1000, deadline=None)
@given(moduli, angles, zs)
def test_multiplicative_conjugacy(m, a, z):
    w = m * cmath.exp(1j * a)
    pw = PhaseWarp(w)
    assert abs(phase_warp(pw, abs(w) * z) - w * phase_warp(pw, z)) <= 1e-10 * (1 + abs(z))


@settings(max_examples=1000, deadline=None)
@given(moduli, angles, zs)
def test_modulus_preserved_and_inverse(m, a, z):
    pw = PhaseWarp(m * cmath.exp(1j * a))
    fz = phase_warp(pw, z)
    assert abs(fz) == pytest.approx(abs(z), rel=1e-13)
    assert abs(phase_warp_inverse(pw, fz) - z) <= 1e-12 * abs(z)


def test_lift_examples():
    x = FinSeq.from_dict({1: 2, 3: -1 + 0.5j}, 1.5)
    assert rotation_forward(ConstantWeights(3), x) == x
    y = rotation_forward(ConstantWeights(2j), FinSeq.from_dict({1: 2}, 1))
    assert abs(y.entries[1] - 2j) < 1e-15
    back = rotation_inverse(ConstantWeights(2j), FinSeq.from_dict({1: 2j}, 1))
    assert abs(back.entries[1] - 2) < 1e-15


def _random_vec(rng, p):
    k = int(rng.integers(1, 40))
    idx = rng.choice(np.arange(1, 150), size=k, replace=False)
    vals = (rng.standard_normal(k) + 1j * rng.standard_normal(k)) * np.exp(rng.uniform(-5, 5, k))
    return FinSeq(idx, vals, p)


@pytest.mark.parametrize(
    "W",
    [ConstantWeights(2j), ListWeights((0.3j, -4, 2 + 2j), 0.5 - 0.1j), HarmonicWeights(3j, -1 + 1j)],
)
def test_lift_norm_preserving_and_conjugates(W):
    rng = np.random.default_rng(9)
    for i in range(1000):
        p = (1.0, 1.5, 2.0)[i % 3]
        x = _random_vec(rng, p)
        y = rotation_forward(W, x)
        assert norm_p(y) == pytest.approx(norm_p(x), rel=1e-12)
        assert norm_p(rotation_inverse(W, y) - x) <= 1e-12 * norm_p(x)
        lhs = rotation_forward(W, DiagonalOperator(ModulusWeights(W), p)(x))
        rhs = DiagonalOperator(W, p)(y)
        assert norm_p(lhs - rhs) <= 1e-10 * norm_p(rhs)


def test_lift_rejects_unimodular_entries():
    x = FinSeq.from_dict({1: 1}, 1)
    for W in (ListWeights((2, 1j), 3), HarmonicWeights(0.5, 0.5), ConstantWeights(-1)):
        with pytest.raises(HypothesisViolation):
            rotation_forward(W, x)
    check_no_unimodular(ListWeights((0, 2), 3))
    check_no_unimodular(HarmonicWeights(2, 1))
