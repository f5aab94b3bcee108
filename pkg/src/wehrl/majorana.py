"""Points-on-the-sphere (Majorana) representation of spin states.

A spin-j state is, up to a positive constant ``c`` and a global phase, the
symmetric (top-spin) projection of a product of 2j spin-1/2 coherent states.
Writing each factor as a spinor ``(a_i, b_i)``, the projection has amplitudes

    psi_k = C_k / sqrt(binom(2j, k)),   sum_k C_k x**k = prod_i (a_i x + b_i)

so ``sum_k sqrt(binom) psi_k z**k`` vanishes at ``z = -b_i/a_i``: the zeros of
the Husimi function sit at the antipodes of the points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import linkage, to_tree
from scipy.optimize import linear_sum_assignment

from .errors import CountMismatch, DegenerateState
from .spin import SpherePoint, SpinState, check_twice_j, sqrt_binomials

ZERO_AMP_TOL = 1e-14  # relative; smaller amplitudes count as exact zeros
PLAUSIBLE_MERGE_ERR = 1e-4  # centroid-only error below which a merge is refined
MERGE_AMP_TOL = 1e-12  # amplitude error a root merge may cost before it is rejected


@dataclass(frozen=True)
class MajoranaDecomposition:
    twice_j: int
    points: tuple[SpherePoint, ...]
    c: float

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) != self.twice_j:
            raise CountMismatch(f"spin {self.twice_j}/2 needs {self.twice_j} points, got {len(self.points)}")

    def state(self) -> SpinState:
        return synthesize(self.twice_j, self.points)[0]


# -- array-level helpers ----------------------------------------------------

def spinors(points: Sequence[SpherePoint]) -> tuple[np.ndarray, np.ndarray]:
    theta = np.array([pt.theta for pt in points], dtype=float)
    phi = np.array([pt.phi for pt in points], dtype=float)
    return spinors_from_angles(theta, phi)


def spinors_from_angles(theta, phi) -> tuple[np.ndarray, np.ndarray]:
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    a = np.cos(theta / 2) * np.exp(-0.5j * phi)
    b = np.sin(theta / 2) * np.exp(0.5j * phi)
    return a, b


def product_amplitudes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Unnormalized top-spin projection of ``(x) (a_i|up> + b_i|down>)``."""
    coeffs = np.ones(1, dtype=complex)
    for ai, bi in zip(a, b):
        coeffs = np.convolve(coeffs, [bi, ai])
    return coeffs / sqrt_binomials(len(a))


def points_from_spinors(a: np.ndarray, b: np.ndarray) -> list[SpherePoint]:
    return [SpherePoint.from_spinor(complex(ai), complex(bi)) for ai, bi in zip(a, b)]


def su2_to_north(a: complex, b: complex) -> np.ndarray:
    """SU(2) matrix mapping the unit spinor ``(a, b)`` onto ``|up>``."""
    norm = math.hypot(abs(a), abs(b))
    a, b = a / norm, b / norm
    return np.array([[np.conj(a), np.conj(b)], [-b, a]])


def apply_su2(u: np.ndarray, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return u[0, 0] * a + u[0, 1] * b, u[1, 0] * a + u[1, 1] * b


def su2_rotation(axis, angle: float) -> np.ndarray:
    """Spin-1/2 matrix ``exp(-i angle n.sigma/2)`` for a rotation about ``axis``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    c, s = math.cos(angle / 2), math.sin(angle / 2)
    # basis order (up, down)
    return np.array([
        [c - 1j * s * n[2], -1j * s * (n[0] - 1j * n[1])],
        [-1j * s * (n[0] + 1j * n[1]), c + 1j * s * n[2]],
    ])


# rotation by pi about the y axis: swaps the poles, amplitudes only permute
POLE_SWAP = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)


def rotate_points(points: Sequence[SpherePoint], u: np.ndarray) -> list[SpherePoint]:
    a, b = spinors(points)
    return points_from_spinors(*apply_su2(u, a, b))


def rotate_amplitudes(twice_j: int, amps: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Amplitudes of ``amps`` after the rotation with spin-1/2 matrix ``u``.

    Acts on the product polynomial ``prod(a_i x + b_i)`` by the substitution
    ``(a, b) -> u (a, b)``, so no roots are needed.
    """
    n = twice_j
    sb = sqrt_binomials(n)
    coeffs = np.asarray(amps, dtype=complex) * sb
    first = np.array([u[1, 0], u[0, 0]])  # u00 x + u10, lowest degree first
    second = np.array([u[1, 1], u[0, 1]])  # u01 x + u11
    pow_first = [np.ones(1, dtype=complex)]
    pow_second = [np.ones(1, dtype=complex)]
    for _ in range(n):
        pow_first.append(np.convolve(pow_first[-1], first))
        pow_second.append(np.convolve(pow_second[-1], second))
    out = np.zeros(n + 1, dtype=complex)
    for k in range(n + 1):
        if coeffs[k] != 0:
            out += coeffs[k] * np.convolve(pow_first[k], pow_second[n - k])
    return out / sb


def rotate_state(state: SpinState, u: np.ndarray) -> SpinState:
    """Apply the spin-j representative of the SU(2) matrix ``u`` to ``state``."""
    return SpinState.normalized(state.twice_j, rotate_amplitudes(state.twice_j, state.amps, u))


# -- public operations ------------------------------------------------------

def synthesize(twice_j: int, points: Sequence[SpherePoint]) -> tuple[SpinState, float]:
    """State represented by ``points`` together with its constant ``c``."""
    twice_j = check_twice_j(twice_j)
    points = list(points)
    if len(points) != twice_j:
        raise CountMismatch(f"spin {twice_j}/2 needs {twice_j} points, got {len(points)}")
    amps = product_amplitudes(*spinors(points))
    norm2 = float(np.sum(np.abs(amps) ** 2))
    return SpinState(twice_j, amps / math.sqrt(norm2)), 1.0 / norm2


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of ``sum coeffs[k] z**k`` (leading coefficient nonzero)."""
    deg = len(coeffs) - 1
    if deg == 0:
        return np.empty(0, dtype=complex)
    # substitute z = s w with s the geometric-mean root modulus, so a group of
    # roots huddled near 0 (points near a pole) is not swamped by rounding
    scale = (abs(coeffs[0]) / abs(coeffs[-1])) ** (1.0 / deg)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        scaled = coeffs * scale ** np.arange(deg + 1)
    if not (np.all(np.isfinite(scaled)) and scaled[-1] != 0 and scaled[0] != 0):
        scale, scaled = 1.0, coeffs
    monic = scaled[:-1] / scaled[-1]
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic
    return scale * np.linalg.eigvals(comp)


def _expand(lead: complex, values: np.ndarray, mult: Sequence[int]) -> np.ndarray:
    """Coefficients (lowest first) of ``lead * prod (x - v)**m``."""
    poly = np.array([lead], dtype=complex)
    for v, m in zip(values, mult):
        for _ in range(m):
            poly = np.convolve(poly, [-v, 1.0])
    return poly


def _structured_refine(coeffs: np.ndarray, values: np.ndarray, mult: Sequence[int], iters: int = 6) -> np.ndarray:
    """Gauss-Newton on distinct roots with fixed multiplicities.

    Residual rows are scaled by ``1/sqrt(binomial)`` so the fit minimizes the
    amplitude error rather than the raw coefficient error. A step is kept only
    if it lowers the residual.
    """
    deg = len(coeffs) - 1
    weight = 1.0 / sqrt_binomials(deg)
    lead = coeffs[-1]

    def residual(vals):
        return (_expand(lead, vals, mult) - coeffs) * weight

    values = values.astype(complex)
    res = residual(values)
    norm = np.linalg.norm(res)
    for _ in range(iters):
        jac = np.empty((deg + 1, len(values)), dtype=complex)
        for i, (v, m) in enumerate(zip(values, mult)):
            reduced = list(mult)
            reduced[i] -= 1
            column = -m * _expand(lead, values, reduced)
            jac[:, i] = np.concatenate([column, [0.0]]) * weight
        step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        trial = values + step
        trial_res = residual(trial)
        trial_norm = np.linalg.norm(trial_res)
        if not trial_norm < norm:
            break
        values, res, norm = trial, trial_res, trial_norm
    return values


def _merge_clusters(coeffs: np.ndarray, roots: np.ndarray, error, budget: float) -> np.ndarray:
    """Collapse clusters of eigenvalues into multiple roots.

    An m-fold root comes back from the eigensolver as m values scattered by
    about eps**(1/m). Walking the single-linkage tree from the top, a subtree
    becomes one m-fold root if, after refining all roots with that
    multiplicity structure, the reconstruction error stays within ``budget``;
    otherwise its children are tried.
    """
    n = len(roots)
    if n < 2:
        return roots.copy()
    xyz = np.array([pt.xyz() for pt in _points_from_roots(roots, 0)])
    tree = to_tree(linkage(xyz, method="single"))
    groups = [[i] for i in range(n)]  # accepted structure, by raw-root index
    best = roots.copy()

    def build(structure):
        values = np.array([roots[g].mean() for g in structure])
        mult = [len(g) for g in structure]
        refined = _structured_refine(coeffs, values, mult)
        out = np.empty(n, dtype=complex)
        for g, v in zip(structure, refined):
            out[g] = v
        return out

    # repeat the walk: a merge can make a neighbouring cluster refinable
    merged = True
    while merged:
        merged = False
        stack = [tree]
        while stack:
            node = stack.pop()
            if node.is_leaf():
                continue
            members = sorted(node.pre_order())
            if members in groups:
                continue
            trial = [g for g in groups if not set(members).intersection(g)] + [members]
            # cheap screen: a true cluster already reconstructs well from its mean
            rough = best.copy()
            rough[members] = roots[members].mean()
            if error(rough) <= PLAUSIBLE_MERGE_ERR:
                values = build(trial)
                if error(values) <= budget:
                    groups, best, merged = trial, values, True
                    continue
            stack.extend([node.get_right(), node.get_left()])
    if len(groups) == n:
        values = build(groups)
        return values if error(values) <= error(roots) else roots.copy()
    return best


def _points_from_roots(roots: np.ndarray, n_south: int) -> list[SpherePoint]:
    # root z_k of the amplitude polynomial <-> spinor |up> - z_k|down>
    a = np.concatenate([np.ones(len(roots)), np.zeros(n_south)]).astype(complex)
    b = np.concatenate([-roots, np.ones(n_south)]).astype(complex)
    norm = np.sqrt(np.abs(a) ** 2 + np.abs(b) ** 2)
    return points_from_spinors(a / norm, b / norm)


def _amp_distance(x: np.ndarray, y: np.ndarray) -> float:
    """Distance between two normalized amplitude vectors, minimized over phase."""
    ov = np.vdot(x, y)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(x * phase - y))


def canonical_order(points: Sequence[SpherePoint]) -> list[SpherePoint]:
    """Descending theta, ties broken by ascending phi."""
    return sorted(points, key=lambda pt: (-pt.theta, pt.phi))


def _discarded_top(amps: np.ndarray) -> float:
    """Largest nonzero amplitude the degree threshold would drop at the top end."""
    mags = np.abs(amps)
    small = mags < ZERO_AMP_TOL * mags.max()
    top = len(mags) - int(np.argmax(~small[::-1]))  # first index of the trailing run
    return float(mags[top:].max(initial=0.0))


def _analyze_amplitudes(n: int, amps: np.ndarray) -> tuple[list[SpherePoint], float]:
    mags = np.abs(amps)
    kept = mags >= ZERO_AMP_TOL * mags.max()
    degree = int(np.nonzero(kept)[0][-1])
    coeffs = (amps * sqrt_binomials(n))[: degree + 1]
    low = int(np.nonzero(coeffs)[0][0])  # exact zero roots, i.e. points at the north pole
    raw = _companion_roots(coeffs[low:])
    zeros = np.zeros(low, dtype=complex)
    target = amps / np.linalg.norm(amps)

    def candidate(roots):
        points = _points_from_roots(np.concatenate([zeros, roots]), n - degree)
        rebuilt, c = synthesize(n, points)
        return _amp_distance(rebuilt.amps, target), points, c

    raw_err, points, c = candidate(raw)
    roots = _merge_clusters(coeffs[low:], raw, lambda r: candidate(r)[0], max(2 * raw_err, MERGE_AMP_TOL))
    err, pts, cc = candidate(roots)
    if err <= max(2 * raw_err, MERGE_AMP_TOL):
        return pts, cc
    return points, c


def analyze(state: SpinState) -> MajoranaDecomposition:
    """Decompose ``state`` into its 2j points and normalization constant ``c``.

    Top amplitudes below ``ZERO_AMP_TOL`` relative to the largest count as
    zero and become points at the south pole. Thresholding a tiny but
    nonzero amplitude would misplace points close to (not at) the south
    pole, so those are found in the pole-swapped frame instead.
    """
    n = state.twice_j
    if float(np.max(np.abs(state.amps))) < 1e-14:
        raise DegenerateState("all amplitudes vanish")
    # subnormal amplitudes carry no usable digits; treat them as exact zeros
    amps = np.where(np.abs(state.amps) < np.finfo(float).tiny, 0, state.amps)
    swapped = rotate_amplitudes(n, amps, POLE_SWAP)
    lost, lost_swapped = _discarded_top(amps), _discarded_top(swapped)
    if lost == 0 or lost_swapped > 0:
        points, c = _analyze_amplitudes(n, amps)
    if lost > 0:
        pts, c_swapped = _analyze_amplitudes(n, swapped)
        pts = rotate_points(pts, POLE_SWAP.conj().T)
        if lost_swapped == 0:
            points, c = pts, c_swapped
        else:
            # each frame resolves the points near its own north pole
            north = [pt for pt in points if pt.theta < math.pi / 2]
            south = [pt for pt in pts if pt.theta >= math.pi / 2]
            if len(north) + len(south) == n:
                points = north + south
                c = synthesize(n, points)[1]
            elif lost_swapped < lost:
                points, c = pts, c_swapped
    return MajoranaDecomposition(n, tuple(canonical_order(points)), c)


def rotate_to_north(decomp: MajoranaDecomposition, i: int) -> MajoranaDecomposition:
    """Rigidly rotate all points so that point ``i`` (0-based) lands on the north pole."""
    a, b = spinors(decomp.points)
    u = su2_to_north(a[i], b[i])
    ra, rb = apply_su2(u, a, b)
    rb[i] = 0.0
    return replace(decomp, points=tuple(points_from_spinors(ra, rb)))


def chord_sq(a: SpherePoint, b: SpherePoint) -> float:
    """Squared chordal distance on the radius-1/2 sphere, ``sin^2(gamma/2)``."""
    # |<a|b>|^2 = cos^2(gamma/2) for spin-1/2 coherent states
    sa, sb = a.spinor, b.spinor
    cross = sa[0] * sb[1] - sa[1] * sb[0]
    return min(max(abs(cross) ** 2, 0.0), 1.0)


def chord_sq_matrix(points: Sequence[SpherePoint]) -> np.ndarray:
    a, b = spinors(points)
    cross = np.outer(a, b) - np.outer(b, a)
    return np.clip(np.abs(cross) ** 2, 0.0, 1.0)


def max_pairwise_chord_sq(points: Sequence[SpherePoint]) -> float:
    if len(points) < 2:
        return 0.0
    return float(chord_sq_matrix(points).max())


def multiset_distance(xs: Sequence[SpherePoint], ys: Sequence[SpherePoint]) -> float:
    """Largest chordal distance under the optimal matching of two point multisets."""
    if len(xs) != len(ys):
        raise CountMismatch(f"cannot match {len(xs)} points against {len(ys)}")
    if not xs:
        return 0.0
    ax, bx = spinors(xs)
    ay, by = spinors(ys)
    cost = np.sqrt(np.clip(np.abs(np.outer(ax, by) - np.outer(bx, ay)) ** 2, 0, 1))
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
