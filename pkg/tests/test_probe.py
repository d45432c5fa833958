import csv
import io
import math

import pytest

from lpconj.errors import DescriptorError, HypothesisViolation
from lpconj.lp_core import ConstantWeights, DiagonalOperator, FinSeq, HarmonicWeights, ListWeights
from lpconj.probe import escape_profile, escape_time
from lpconj.selftest import harmonic_escape_oracle


def test_escape_time_examples():
    D2 = DiagonalOperator.scalar(2, 1)
    # ||2x|| = 2 eps is not > 2 eps; ||4x|| is
    assert escape_time(D2, FinSeq.basis(1, 0.1, 1), 0.2) == 2
    D = DiagonalOperator(HarmonicWeights(1, 1), 1)
    assert escape_time(D, FinSeq.basis(10, 0.1, 1), 0.2) == 8
    D1 = DiagonalOperator(ListWeights((1,), 2), 1)
    assert escape_time(D1, FinSeq.basis(1, 0.1, 1), 0.2, cap=500) is None


def test_escape_time_rejects_small_radius():
    with pytest.raises(DescriptorError):
        escape_time(DiagonalOperator.scalar(2, 1), FinSeq.basis(1, 1.0, 1), 1.0)


def test_oracle_matches_float_threshold():
    for n in (1, 2, 10, 100, 1000):
        k = harmonic_escape_oracle(n)
        assert (1 + 1 / n) ** k > 2 >= (1 + 1 / n) ** (k - 1)
        assert k == math.floor(math.log(2) / math.log1p(1 / n)) + 1


def test_harmonic_profile_diverges():
    idx = [10, 100, 1000, 10_000]
    prof = escape_profile(HarmonicWeights(1, 1), 1, 0.1, idx)
    assert prof.escape_times == [8, 70, 694, 6932]
    assert prof.escape_times == [harmonic_escape_oracle(n) for n in idx]
    assert all(a < b for a, b in zip(prof.escape_times, prof.escape_times[1:]))
    assert prof.divergence_flag


def test_constant_profiles():
    prof = escape_profile(ConstantWeights(2), 1.5, 0.1, [1, 10, 100, 1000])
    assert prof.escape_times == [2, 2, 2, 2]
    assert not prof.divergence_flag
    prof = escape_profile(ConstantWeights(1), 1, 0.1, [1, 5], cap=50)
    assert prof.escape_times == [None, None]
    assert prof.divergence_flag


@pytest.mark.parametrize(
    "W", [ConstantWeights(1.1), HarmonicWeights(1.1, 3), ListWeights((5, 1.2j, -1.1), 1.1 + 1j), ConstantWeights(-1.1)]
)
def test_uniform_bound_when_inf_at_least_1_1(W):
    bound = math.ceil(math.log(2) / math.log(1.1)) + 1
    assert bound == 9
    prof = escape_profile(W, 2, 0.1, range(1, 80))
    assert max(prof.escape_times) <= bound


def test_phase_does_not_matter():
    a = escape_profile(HarmonicWeights(1, 1), 1, 0.1, [10, 100])
    b = escape_profile(HarmonicWeights(1j, 1j), 1, 0.1, [10, 100])
    assert a.escape_times == b.escape_times


def test_profile_rejects_bad_input():
    with pytest.raises(HypothesisViolation):
        escape_profile(ConstantWeights(0.5), 1, 0.1, [1])
    with pytest.raises(DescriptorError):
        escape_profile(ConstantWeights(2), 1, 0.0, [1])
    with pytest.raises(DescriptorError):
        escape_profile(ConstantWeights(2), 1, 0.1, [1], radius_factor=1.0)


def test_profile_serialisation():
    prof = escape_profile(ConstantWeights(1), 1, 0.1, [3, 1], cap=10)
    rows = list(csv.DictReader(io.StringIO(prof.to_csv())))
    assert [r["index"] for r in rows] == ["1", "3"]
    assert all(r["escape_time"] == "" and r["sentinel_flag"] == "1" for r in rows)
    js = prof.to_json()
    assert js["divergence_flag"] is True
    assert "heuristic" in js["divergence_flag_kind"]
    assert js["rows"][0] == {"index": 1, "escape_time": None, "sentinel": True}
