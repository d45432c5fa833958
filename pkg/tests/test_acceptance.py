"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v -s`` or
``python tests/test_acceptance.py``. The lines are printed outside pytest's
output capture, so they also show up in a plain ``pytest -v`` run.
"""

import json
import math
import subprocess
import sys
import time

import pytest

from lpconj import selftest
from lpconj.conjugacy import build_conjugacy_to_doubling, build_conjugacy_to_halving, conjugacy_defect
from lpconj.lp_core import ConstantWeights, FinSeq, HarmonicWeights, ListWeights, norm_p
from lpconj.probe import escape_profile
from lpconj.rotation import PhaseWarp, phase_warp
from lpconj.warp_map import ExponentSeq, WarpMap, warp_forward, warp_inverse

SEED = 7


@pytest.fixture
def report(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(n, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {n:2d}: {detail}"
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print("\n" + line)
        else:
            print(line)
        return ok

    return emit


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def test_01_power_difference_sandwich(report):
    c, dt = timed(selftest.check_power_sandwich, SEED, 100_000)
    ok = c.passed and c.samples == 100_000 and dt < 5
    assert report(1, ok, f"power sandwich, {c.samples} tuples, min slack {c.worst:.2e} >= -1e-12, {dt:.2f}s < 5s")


def test_02_root_contraction(report):
    c, dt = timed(selftest.check_root_contraction, SEED, 100_000)
    ok = c.passed and c.samples == 100_000 and dt < 5
    assert report(2, ok, f"root contraction, {c.samples} tuples, min slack {c.worst:.2e} >= -1e-12, {dt:.2f}s < 5s")


def test_03_norm_sandwich(report):
    c, dt = timed(selftest.check_norm_sandwich, SEED, 10_000)
    # 10^4 per branch per p, minus the rare draws that land in the other branch
    ok = c.passed and c.samples >= 0.99 * 2 * 3 * 10_000 and dt < 30
    assert report(3, ok, f"norm sandwich, {c.samples} vectors, min rel slack {c.worst:.2e} >= -1e-12, {dt:.2f}s < 30s")


def test_04_roundtrip_and_mutation(report):
    c = selftest.check_roundtrip(SEED, 1000)
    # documented witness: perturbing s_2 by 0.1 on the inverse side
    x = FinSeq.from_dict({1: 0.5, 2: 0.4, 3: 0.3}, 1)
    S = ExponentSeq.from_list([2.0, 3.0, 1.5], 1.5)
    S_mut = ExponentSeq.from_list([2.0, 3.1, 1.5], 1.5)
    back = warp_inverse(WarpMap(S_mut, 1), warp_forward(WarpMap(S, 1), x))
    mut = norm_p(back - x) / norm_p(x)
    ok = c.passed and mut > 1e-3
    assert report(4, ok, f"round trip worst rel err {c.worst:.2e} <= 1e-9 on {c.samples}; mutated s_2 gives {mut:.2e} > 1e-3")


def test_05_phase_warp_conjugacy(report):
    c = selftest.check_phase_conjugacy(SEED, 10_000)
    pw = PhaseWarp(2j)
    e1 = abs(phase_warp(pw, 4) - (-4))
    e2 = abs(2j * phase_warp(pw, 2) - (-4))
    ok = c.passed and e1 <= 1e-14 and e2 <= 1e-14
    assert report(5, ok, f"phase warp worst {c.worst:.2e} <= 1e-10 on {c.samples}; witness errors {e1:.1e}, {e2:.1e} <= 1e-14")


def test_06_doubling_pipeline(report):
    parts, ok = [], True
    for label, W in selftest.DOUBLING_CASES.items():
        rep = conjugacy_defect(build_conjugacy_to_doubling(W, 1.0), 1000, SEED, (1e-3, 1e3))
        bound = 0.0 if label == "constant:2" else 1e-8
        ok &= rep.max_defect <= bound
        parts.append(f"{label}={rep.max_defect:.1e}")
    assert report(6, ok, "doubling defect over 1000 samples: " + ", ".join(parts))


def test_07_halving_pipeline(report):
    parts, ok = [], True
    for label, W in selftest.HALVING_CASES.items():
        rep = conjugacy_defect(build_conjugacy_to_halving(W, 1.0), 1000, SEED, (1e-3, 1e3))
        ok &= rep.max_defect <= 1e-8
        parts.append(f"{label}={rep.max_defect:.1e}")
    assert report(7, ok, "halving defect over 1000 samples: " + ", ".join(parts))


def test_08_escape_time_obstruction(report):
    idx = [10, 100, 1000, 10_000]
    prof = escape_profile(HarmonicWeights(1.0, 1.0), 1.0, 0.1, idx)
    times = prof.escape_times
    oracle = [selftest.harmonic_escape_oracle(n) for n in idx]
    increasing = all(a < b for a, b in zip(times, times[1:]))
    bound = math.ceil(math.log(2) / math.log(1.1)) + 1
    worst = 0
    for W in (ConstantWeights(1.1), ConstantWeights(-1.1j), HarmonicWeights(1.1, 2.0), ListWeights((3.0, 1.1, 7j), 1.1)):
        for p in (1.0, 2.0):
            worst = max(worst, max(escape_profile(W, p, 0.1, range(1, 101)).escape_times))
    ok = times == oracle and increasing and prof.divergence_flag and bound == 9 and worst <= bound
    assert report(8, ok, f"escape times {times} == oracle {oracle}, increasing; inf>=1.1 worst {worst} <= {bound}")


def test_09_naive_power_map_counterexample(report):
    c = selftest.check_naive_counterexample()
    ok = c.passed and c.extra["warp_within_bounds"]
    assert report(9, ok, f"naive map violates norm sandwich: {bool(c.worst)}; tail-sum warp within bounds: {c.extra['warp_within_bounds']}")


def test_10_cli_selftest_deterministic(report, tmp_path):
    outs, times = [], []
    for i in range(2):
        dest = tmp_path / f"selftest{i}.json"
        t0 = time.perf_counter()
        proc = subprocess.run(
            [sys.executable, "-m", "lpconj", "selftest", "--seed", "7", "--out", str(dest)],
            capture_output=True,
            text=True,
        )
        times.append(time.perf_counter() - t0)
        assert proc.returncode == 0, proc.stdout + proc.stderr
        outs.append(dest.read_bytes())
    same = outs[0] == outs[1]
    ok = same and max(times) < 120 and json.loads(outs[0])["passed"]
    assert report(10, ok, f"selftest --seed 7 byte-identical: {same}; runtimes {times[0]:.1f}s, {times[1]:.1f}s < 120s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
