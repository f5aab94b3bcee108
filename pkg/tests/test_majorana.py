import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from wehrl import (
    NORTH,
    SOUTH,
    SpherePoint,
    SpinState,
    analyze,
    chord_sq,
    coherent_state,
    husimi,
    multiset_distance,
    rotate_to_north,
    synthesize,
)
from wehrl.errors import CountMismatch, DegenerateState
from wehrl.majorana import (
    POLE_SWAP,
    _amp_distance,
    canonical_order,
    chord_sq_matrix,
    rotate_amplitudes,
    rotate_points,
    rotate_state,
    spinors,
    su2_rotation,
)
from wehrl.spin import random_points, random_state

from strategies import points_st, states


@given(st.integers(1, 12), points_st)
def test_coherent_state_points_coincide(n, omega):
    decomp = analyze(coherent_state(n, omega))
    assert decomp.c == pytest.approx(1.0, abs=1e-12)
    assert multiset_distance(decomp.points, [omega] * n) < 1e-6


def test_spin_one_zero_projection_is_two_poles():
    decomp = analyze(SpinState.basis(2, 0))
    assert decomp.c == pytest.approx(2.0, abs=1e-14)
    assert multiset_distance(decomp.points, [NORTH, SOUTH]) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_lowest_weight_is_south(n):
    decomp = analyze(SpinState.basis(n, -n))
    assert decomp.c == pytest.approx(1.0)
    assert all(pt.theta == math.pi for pt in decomp.points)


def test_synthesize_two_poles():
    state, c = synthesize(2, [NORTH, SOUTH])
    assert abs(abs(state.inner(SpinState.basis(2, 0))) - 1) < 1e-15
    assert c == pytest.approx(2.0)


@given(st.floats(0.01, math.pi))
def test_synthesize_north_plus_tilted(theta):
    mu = math.sin(theta / 2) ** 2
    state, c = synthesize(2, [NORTH, SpherePoint(theta, 0.0)])
    # m = (1, 0, -1) amplitudes up to normalization
    expected = np.array([0.0, math.sqrt(mu) / math.sqrt(2), math.sqrt(1 - mu)])
    expected /= np.linalg.norm(expected)
    assert _amp_distance(state.amps, expected) < 1e-12
    assert 1 / c == pytest.approx(1 - mu / 2, abs=1e-14)


def test_count_mismatch():
    with pytest.raises(CountMismatch):
        synthesize(3, [NORTH, SOUTH])


def test_degenerate_state():
    from wehrl.majorana import MajoranaDecomposition

    zero = object.__new__(SpinState)
    object.__setattr__(zero, "twice_j", 2)
    object.__setattr__(zero, "amps", np.zeros(3, dtype=complex))
    with pytest.raises(DegenerateState):
        analyze(zero)
    with pytest.raises(CountMismatch):
        MajoranaDecomposition(2, (NORTH,), 1.0)


@given(states(max_twice_j=10))
def test_resynthesis_reproduces_state(state):
    decomp = analyze(state)
    assert _amp_distance(decomp.state().amps, state.amps) < 1e-8
    assert decomp.c >= 1 - 1e-12


# distinct points closer than this are not resolvable from double-precision
# amplitudes once they sit next to a high-multiplicity cluster
MIN_SEPARATION = 0.05

poles_or_points = st.one_of(points_st, st.sampled_from([NORTH, SOUTH]))


@given(st.integers(1, 12).flatmap(lambda n: st.lists(poles_or_points, min_size=n, max_size=n)), st.integers(0, 4))
def test_round_trip_points(points, copies):
    d2 = chord_sq_matrix(points)
    assume(np.all((d2 == 0) | (d2 >= MIN_SEPARATION**2)))
    points = (points + [points[0]] * copies)[:12]
    state, c = synthesize(len(points), points)
    decomp = analyze(state)
    assert multiset_distance(decomp.points, points) < 1e-6
    assert _amp_distance(decomp.state().amps, state.amps) < 1e-8
    assert decomp.c == pytest.approx(c, rel=1e-8)


@pytest.mark.parametrize("theta", [1e-3, 0.05, 0.125, math.pi - 0.125, math.pi - 1e-3])
def test_cluster_next_to_pole(theta):
    # a 12-fold point this close to a pole has amplitudes below 1e-14
    points = [SpherePoint(theta, 0.3)] * 12
    decomp = analyze(synthesize(12, points)[0])
    assert multiset_distance(decomp.points, points) < 1e-6
    assert decomp.c == pytest.approx(1.0, abs=1e-10)


def test_cluster_with_close_neighbour():
    points = [SpherePoint(1.03, 5.094)] * 6 + [SpherePoint(1.082, 4.986), SpherePoint(2.3, 4.9)]
    decomp = analyze(synthesize(8, points)[0])
    assert multiset_distance(decomp.points, points) < 1e-6


@pytest.mark.parametrize("multiplicity", [2, 3, 4])
def test_round_trip_with_coincident_points(rng, multiplicity):
    for _ in range(20):
        base = random_points(6 - multiplicity, rng)
        points = base + [base[0]] * multiplicity
        state, _ = synthesize(len(points), points)
        decomp = analyze(state)
        assert multiset_distance(decomp.points, points) < 1e-6
        assert _amp_distance(decomp.state().amps, state.amps) < 1e-8


def test_round_trip_with_degree_drop(rng):
    for n in range(1, 7):
        for south in range(1, n + 1):
            points = random_points(n - south, rng) + [SOUTH] * south
            state, _ = synthesize(n, points)
            assert abs(state.amps[-1]) < 1e-15
            assert multiset_distance(analyze(state).points, points) < 1e-6


@given(states(max_twice_j=8))
def test_zeros_sit_at_antipodes(state):
    for pt in analyze(state).points:
        assert husimi(state, pt.antipode()) < 1e-20


@given(states(max_twice_j=8), points_st)
def test_factorization(state, omega):
    decomp = analyze(state)
    product = decomp.c * np.prod([1 - chord_sq(omega, pt) for pt in decomp.points])
    assert abs(husimi(state, omega) - product) < 1e-10


@given(states(min_twice_j=1, max_twice_j=8), st.data())
def test_rotate_to_north(state, data):
    decomp = analyze(state)
    i = data.draw(st.integers(0, state.twice_j - 1))
    moved = rotate_to_north(decomp, i)
    assert moved.points[i].theta < 1e-12
    assert moved.c == decomp.c
    assert_allclose(chord_sq_matrix(moved.points), chord_sq_matrix(decomp.points), atol=1e-12)


def test_rotate_to_north_fixed_cases():
    decomp = analyze(coherent_state(3, NORTH))
    assert multiset_distance(rotate_to_north(decomp, 0).points, decomp.points) == 0.0
    two_poles = analyze(SpinState.basis(2, 0))
    south_index = [pt.theta for pt in two_poles.points].index(math.pi)
    moved = rotate_to_north(two_poles, south_index)
    assert multiset_distance(moved.points, [NORTH, SOUTH]) < 1e-12


def test_chord_sq_examples():
    pt = SpherePoint(1.0, 2.0)
    assert chord_sq(pt, pt) == pytest.approx(0.0, abs=1e-16)
    assert chord_sq(pt, pt.antipode()) == pytest.approx(1.0, abs=1e-15)
    assert chord_sq(NORTH, SpherePoint(math.pi / 2, 0.7)) == pytest.approx(0.5, abs=1e-15)


@given(points_st, points_st)
def test_chord_sq_geometry(a, b):
    gamma = math.acos(np.clip(np.dot(a.xyz(), b.xyz()), -1, 1))
    assert chord_sq(a, b) == pytest.approx(math.sin(gamma / 2) ** 2, abs=1e-12)
    assert chord_sq(a, b) == chord_sq(b, a)


def test_canonical_order(rng):
    points = random_points(6, rng)
    ordered = canonical_order(points)
    thetas = [pt.theta for pt in ordered]
    assert thetas == sorted(thetas, reverse=True)
    assert canonical_order(ordered[::-1]) == ordered


def test_analysis_is_deterministic(rng):
    state = random_state(6, rng)
    assert analyze(state) == analyze(SpinState(6, state.amps.copy()))


def test_spinor_convention():
    a, b = spinors([SpherePoint(0.8, 1.3)])
    back = SpherePoint.from_spinor(complex(a[0]), complex(b[0]))
    assert back.theta == pytest.approx(0.8) and back.phi == pytest.approx(1.3)


@given(states(max_twice_j=10), points_st, st.floats(0.0, 2 * math.pi))
def test_rotate_state_matches_rotated_points(state, axis_pt, angle):
    u = su2_rotation(axis_pt.xyz(), angle)
    decomp = analyze(state)
    expected, _ = synthesize(state.twice_j, rotate_points(decomp.points, u))
    assert _amp_distance(rotate_state(state, u).amps, expected.amps) < 1e-9


def test_pole_swap_permutes_amplitudes():
    amps = np.array([1.0, 2.0, 3.0, 4.0])
    assert_allclose(rotate_amplitudes(3, amps, POLE_SWAP), [4.0, -3.0, 2.0, -1.0], atol=1e-15)
