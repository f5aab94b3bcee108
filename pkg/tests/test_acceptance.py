"""Acceptance criteria for the package, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line; the lines are printed in the
pytest terminal summary, or directly when this file is run as a script::

    python tests/test_acceptance.py
"""
import math
import time

import numpy as np

from wehrl import (
    SOUTH,
    SpinState,
    analyze,
    coherent_state,
    entropy_lower_bound,
    ln_c_quadrature,
    max_pairwise_chord_sq,
    multiset_distance,
    s_norm_exact,
    s_norm_quadrature,
    synthesize,
    wehrl_closed,
    wehrl_quadrature,
)
from wehrl.closed_forms import chords_from_points, spin1_entropy, spin2_entropy, spin32_entropy
from wehrl.entropy import coherent_entropy
from wehrl.majorana import _amp_distance, chord_sq_matrix
from wehrl.search import (
    SearchConfig,
    minimize_entropy,
    perturbation_sweep,
    predicted_quadratic_coefficient,
    quadratic_coefficient,
)
from wehrl.spin import random_points, random_state

SEED = 20240611

# every state whose closed-form entropy is computed below, as (twice_j, value)
SAMPLED: list[tuple[int, float]] = []
# closed-form values of the random samples of criteria 2 and 3
RANDOM_SAMPLES: list[tuple[int, float]] = []
RESULTS: dict[int, str] = {}


def closed_value(state: SpinState) -> float:
    value = wehrl_closed(state).value
    SAMPLED.append((state.twice_j, value))
    return value


def record(number: int, title: str, passed: bool, detail: str, elapsed: float, budget: float | None = None) -> bool:
    within = budget is None or elapsed < budget
    limit = f" (limit {budget:g} s)" if budget is not None else ""
    status = "PASS" if passed and within else "FAIL"
    RESULTS[number] = f"criterion {number} [{status}] {title}: {detail}; {elapsed:.2f} s{limit}"
    return passed and within


def test_criterion_1_coherent_entropy():
    start = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng([SEED, 1])
    for n in (1, 2, 3, 4, 5, 6, 10, 20):
        omega = random_points(1, rng)[0]
        state = coherent_state(n, omega)
        target = n / (n + 1)
        worst = max(worst, abs(closed_value(state) - target), abs(wehrl_quadrature(state).value - target))
    elapsed = time.perf_counter() - start
    assert record(1, "coherent-state entropy", worst < 1e-8, f"worst |S - 2j/(2j+1)| = {worst:.2e} (tol 1e-8)", elapsed, 1.0)


def test_criterion_2_closed_vs_oracle():
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 3, 4, 5, 6, 8):
        rng = np.random.default_rng([SEED, 2, n])
        for _ in range(200):
            state = random_state(n, rng)
            closed = closed_value(state)
            RANDOM_SAMPLES.append((n, closed))
            worst = max(worst, abs(closed - wehrl_quadrature(state).value))
    elapsed = time.perf_counter() - start
    assert record(2, "closed form vs quadrature", worst < 1e-6, f"1200 states, worst difference {worst:.2e} (tol 1e-6)", elapsed, 120.0)


def test_criterion_3_chord_formulas():
    start = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng([SEED, 3])
    for n in (2, 3, 4):
        for _ in range(500):
            points = random_points(n, rng)
            state, _ = synthesize(n, points)
            closed = closed_value(state)
            RANDOM_SAMPLES.append((n, closed))
            d = chord_sq_matrix(points)
            if n == 2:
                formula = spin1_entropy(d[0, 1])
            elif n == 3:
                formula = spin32_entropy(d[1, 2], d[0, 2], d[0, 1])
            else:
                formula = spin2_entropy(chords_from_points(points))
            worst = max(worst, abs(formula - closed))
    elapsed = time.perf_counter() - start
    assert record(3, "chord-length formulas", worst < 1e-9, f"1500 configurations, worst difference {worst:.2e} (tol 1e-9)", elapsed, 60.0)


def test_criterion_4_minimum_is_coherent():
    if not RANDOM_SAMPLES:
        test_criterion_2_closed_vs_oracle()
        test_criterion_3_chord_formulas()
    start = time.perf_counter()
    worst_gap, worst_spread, alarms = 0.0, 0.0, 0
    for n in (2, 3, 4, 5, 6):
        report = minimize_entropy(SearchConfig(n, restarts=16, seed=SEED))
        SAMPLED.append((n, report.best_value))
        worst_gap = max(worst_gap, abs(report.gap))
        worst_spread = max(worst_spread, report.max_chord_sq)
        alarms += len(report.alarms)
    below = max(coherent_entropy(n) - v for n, v in RANDOM_SAMPLES)
    elapsed = time.perf_counter() - start
    passed = worst_gap < 1e-4 and worst_spread < 1e-3 and alarms == 0 and below < 1e-9
    detail = (
        f"worst gap {worst_gap:.2e} (tol 1e-4), minimizer chord^2 {worst_spread:.2e} (tol 1e-3), "
        f"alarms {alarms}, deepest random sample {-below:.3e} above 2j/(2j+1)"
    )
    assert record(4, "minimal entropy is coherent", passed, detail, elapsed, 600.0)


def test_criterion_5_s_norms():
    start = time.perf_counter()
    worst_bound, worst_match, false_ones = -math.inf, 0.0, 0
    rng = np.random.default_rng([SEED, 5])
    for n in (2, 3, 4):
        for _ in range(100):
            state = random_state(n, rng)
            closed_value(state)
            spread = max_pairwise_chord_sq(analyze(state).points)
            for s in (2, 3, 4):
                exact = s_norm_exact(state, s)
                worst_bound = max(worst_bound, exact - 1.0)
                worst_match = max(worst_match, abs(exact - s_norm_quadrature(state, s)))
                if abs(exact - 1.0) < 1e-12 and spread > 1e-6:
                    false_ones += 1
        for omega in random_points(5, rng):
            state = coherent_state(n, omega)
            for s in (2, 3, 4):
                if abs(s_norm_exact(state, s) - 1.0) >= 1e-12:
                    false_ones += 1
    known = abs(s_norm_exact(SpinState.basis(2, 0), 2) - 2 / 3)
    elapsed = time.perf_counter() - start
    passed = worst_bound <= 0.0 and worst_match < 1e-10 and false_ones == 0 and known < 1e-12
    detail = (
        f"max(norm - 1) = {worst_bound:.2e}, exact vs quadrature {worst_match:.2e} (tol 1e-10), "
        f"misclassified unit norms {false_ones}, |1,0> s=2 error {known:.1e}"
    )
    assert record(5, "s-norm bound", passed, detail, elapsed, 60.0)


def test_criterion_6_ln_c_identity():
    start = time.perf_counter()
    worst = 0.0
    rng = np.random.default_rng([SEED, 6])
    for i in range(100):
        state = random_state(1 + i % 6, rng)
        closed_value(state)
        worst = max(worst, abs(ln_c_quadrature(state) - math.log(analyze(state).c)))
    elapsed = time.perf_counter() - start
    assert record(6, "ln c identity", worst < 1e-6, f"100 states, worst difference {worst:.2e} (tol 1e-6)", elapsed, 60.0)


def test_criterion_7_perturbation():
    start = time.perf_counter()
    worst_c, worst_rel = 0.0, 0.0
    for n in (2, 3, 4, 6):
        for row in perturbation_sweep(n, [0.04, 0.02, 0.01, 0.005]):
            worst_c = max(worst_c, abs(row.c_measured - row.c_predicted))
            SAMPLED.append((n, row.entropy))
        predicted = predicted_quadratic_coefficient(n)
        worst_rel = max(worst_rel, abs(quadratic_coefficient(n, 0.01) / predicted - 1.0))
    elapsed = time.perf_counter() - start
    passed = worst_c < 1e-10 and worst_rel < 0.02
    detail = f"worst 1/c error {worst_c:.2e} (tol 1e-10), worst quadratic coefficient error {100 * worst_rel:.3f}% (tol 2%)"
    assert record(7, "near-coherent expansion", passed, detail, elapsed, 60.0)


def test_criterion_9_round_trip():
    start = time.perf_counter()
    worst_points, worst_amps = 0.0, 0.0
    rng = np.random.default_rng([SEED, 9])
    for i in range(500):
        n = 1 + i % 6
        kind = (i // 6) % 4
        if kind == 0:
            state = random_state(n, rng)
        elif kind == 1:
            amps = random_state(n, rng).amps.copy()
            amps[-1] = 0.0  # top amplitude removed: the polynomial loses degree
            state = SpinState(n, amps / np.linalg.norm(amps)) if n > 1 else SpinState.basis(1, -1)
        else:
            points = random_points(n, rng)
            if kind == 2 and n > 1:
                copies = int(rng.integers(1, n))
                points = points[: n - copies] + [points[0]] * copies
            elif kind == 3:
                south = int(rng.integers(1, n + 1))
                points = points[: n - south] + [SOUTH] * south
            state, _ = synthesize(n, points)
            worst_points = max(worst_points, multiset_distance(analyze(state).points, points))
        closed_value(state)
        decomp = analyze(state)
        worst_amps = max(worst_amps, _amp_distance(decomp.state().amps, state.amps))
        again = analyze(decomp.state())
        worst_points = max(worst_points, multiset_distance(again.points, decomp.points))
    elapsed = time.perf_counter() - start
    passed = worst_points < 1e-6 and worst_amps < 1e-8
    detail = f"500 inputs, worst point distance {worst_points:.2e} (tol 1e-6), worst amplitude distance {worst_amps:.2e} (tol 1e-8)"
    assert record(9, "points/state round trip", passed, detail, elapsed)


def test_criterion_8_lower_bound():
    # runs last so it sees every state sampled by the criteria above
    start = time.perf_counter()
    rng = np.random.default_rng([SEED, 8])
    for n in range(1, 21):
        closed_value(random_state(n, rng))
    worst = max(entropy_lower_bound(n) - v for n, v in SAMPLED)
    elapsed = time.perf_counter() - start
    detail = f"{len(SAMPLED)} states, closest approach {-worst:.3e} above the bound"
    assert record(8, "entropy lower bound", worst <= 0.0, detail, elapsed)


def summary_lines() -> list[str]:
    return [RESULTS[k] for k in sorted(RESULTS)]


if __name__ == "__main__":
    tests = [
        test_criterion_1_coherent_entropy,
        test_criterion_2_closed_vs_oracle,
        test_criterion_3_chord_formulas,
        test_criterion_4_minimum_is_coherent,
        test_criterion_5_s_norms,
        test_criterion_6_ln_c_identity,
        test_criterion_7_perturbation,
        test_criterion_9_round_trip,
        test_criterion_8_lower_bound,
    ]
    for test in tests:
        try:
            test()
        except AssertionError:
            pass
    print("\n".join(summary_lines()))
