"""Wehrl entropy of pure spin states, s-norms and the ln c identity.

The closed form evaluates, for a state with points ``omega_i`` and constant
``c``,

    S = sum_i sum_k w_k |psi_k^(i)|^2 - ln c,   w_k = sum_{n=0}^{2j-k} 1/(2j+1-n)

where ``psi^(i)`` is the state rigidly rotated so that ``omega_i`` sits at the
north pole. The quadrature routines integrate the Husimi density directly and
serve as independent oracles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np
from scipy.integrate import quad

from .errors import CeilingExceeded
from .majorana import (
    analyze,
    apply_su2,
    product_amplitudes,
    spinors,
    su2_to_north,
)
from .quadrature import QuadratureGrid
from .spin import MAX_TWICE_J, SpherePoint, SpinState, check_twice_j, sqrt_binomials

SOUTH_AMP_TOL = 1e-8
LN_C_PHI_NODES = 8192


@dataclass(frozen=True)
class EntropyReport:
    value: float
    method: str
    c: float
    twice_j: int
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "method": self.method,
            "c": self.c,
            "twice_j": self.twice_j,
            "diagnostics": dict(self.diagnostics),
        }


def weight_table(twice_j: int) -> np.ndarray:
    """``w_k = sum_{n=0}^{2j-k} 1/(2j+1-n)`` for ``k = j + m = 0..2j``."""
    # w_k = 1/(k+1) + ... + 1/(2j+1), accumulated from the small end
    recip = 1.0 / np.arange(1, twice_j + 2)
    return np.cumsum(recip[::-1])[::-1]


def coherent_entropy(twice_j: int) -> float:
    return twice_j / (twice_j + 1)


def entropy_lower_bound(twice_j: int) -> float:
    """``ln((4j+1)/(2j+1))``, valid for every spin-j state."""
    return math.log((2 * twice_j + 1) / (twice_j + 1))


# -- closed form ------------------------------------------------------------

def _closed_from_spinors(a: np.ndarray, b: np.ndarray) -> tuple[float, float, float]:
    """Entropy, c and the largest rotated ``|psi_{-j}|`` for unit spinors."""
    n = len(a)
    amps = product_amplitudes(a, b)
    norm2 = float(np.sum(np.abs(amps) ** 2))
    c = 1.0 / norm2
    w = weight_table(n)
    total = 0.0
    south = 0.0
    for i in range(n):
        u = su2_to_north(a[i], b[i])
        ra, rb = apply_su2(u, a, b)
        prob = np.abs(product_amplitudes(ra, rb)) ** 2
        prob /= prob.sum()
        south = max(south, math.sqrt(prob[0]))
        total += float(np.dot(w, prob))
    return total - math.log(c), c, south


def wehrl_from_points(twice_j: int, points: Sequence[SpherePoint]) -> EntropyReport:
    twice_j = check_twice_j(twice_j, minimum=1)
    a, b = spinors(points)
    value, c, south = _closed_from_spinors(a, b)
    if south > SOUTH_AMP_TOL:
        raise ArithmeticError(f"rotated state has |psi_-j| = {south:.3g}; rotation is broken")
    return EntropyReport(value, "closed-form", c, twice_j, {"max_rotated_south_amp": south})


@lru_cache(maxsize=None)
def _extended_tables(twice_j: int, dps: int):
    with mpmath.workdps(dps):
        sqrt_binom = [mpmath.sqrt(mpmath.binomial(twice_j, k)) for k in range(twice_j + 1)]
        recip = [mpmath.mpf(1) / r for r in range(1, twice_j + 2)]
        w = [mpmath.fsum(recip[k:]) for k in range(twice_j + 1)]
        w_top = w[-1]
        # entropy excess uses w_k - w_2j so the coherent part never gets formed
        excess = [wk - w_top for wk in w]
    return sqrt_binom, excess


def _extended_product(a, b, sqrt_binom):
    coeffs = [mpmath.mpc(1)]
    for ai, bi in zip(a, b):
        nxt = [mpmath.mpc(0)] * (len(coeffs) + 1)
        for k, ck in enumerate(coeffs):
            nxt[k] += ck * bi
            nxt[k + 1] += ck * ai
        coeffs = nxt
    return [ck / sb for ck, sb in zip(coeffs, sqrt_binom)]


def wehrl_excess_extended(theta: Sequence[float], phi: Sequence[float], dps: int = 40) -> float:
    """``S - 2j/(2j+1)`` for the points ``(theta_k, phi_k)`` in ``dps``-digit arithmetic.

    Near a coherent state the excess can be twenty orders of magnitude below
    the entropy itself; the float returned here keeps full relative precision.
    """
    twice_j = len(theta)
    sqrt_binom, excess = _extended_tables(twice_j, dps)
    with mpmath.workdps(dps):
        th = [mpmath.mpf(float(t)) / 2 for t in theta]
        ph = [mpmath.mpf(float(p)) / 2 for p in phi]
        a = [mpmath.cos(t) * mpmath.expj(-p) for t, p in zip(th, ph)]
        b = [mpmath.sin(t) * mpmath.expj(p) for t, p in zip(th, ph)]
        norm2 = mpmath.fsum(abs(x) ** 2 for x in _extended_product(a, b, sqrt_binom))
        total = mpmath.mpf(0)
        for i in range(twice_j):
            ua, ub = mpmath.conj(a[i]), mpmath.conj(b[i])
            ra = [ua * x + ub * y for x, y in zip(a, b)]
            rb = [a[i] * y - b[i] * x for x, y in zip(a, b)]
            rb[i] = mpmath.mpc(0)
            prob = [abs(x) ** 2 for x in _extended_product(ra, rb, sqrt_binom)]
            total += mpmath.fsum(e * q for e, q in zip(excess, prob)) / mpmath.fsum(prob)
        return float(total + mpmath.log(norm2))


def wehrl_closed(state: SpinState) -> EntropyReport:
    """Wehrl entropy via the points representation (no quadrature)."""
    decomp = analyze(state)
    return wehrl_from_points(state.twice_j, decomp.points)


# -- quadrature oracles -----------------------------------------------------

def husimi_grid(state: SpinState, grid: QuadratureGrid) -> np.ndarray:
    """``|<Omega|psi>|^2`` on the grid, shape ``(n_p, n_phi)``."""
    n = state.twice_j
    p, _ = grid.p_nodes
    k = np.arange(n + 1)
    radial = sqrt_binomials(n) * np.exp(0.5 * k * np.log(p)[:, None] + 0.5 * (n - k) * np.log1p(-p)[:, None])
    phase = np.exp(1j * np.outer(k, grid.phi_nodes))
    ov = (radial * state.amps) @ phase
    return ov.real**2 + ov.imag**2


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def _entropy_on(state: SpinState, grid: QuadratureGrid) -> tuple[float, float]:
    h = husimi_grid(state, grid)
    scale = state.twice_j + 1
    return -scale * grid.average(_xlogx(h)), scale * grid.average(h)


def wehrl_quadrature(state: SpinState, grid: QuadratureGrid | None = None, check: bool = False) -> EntropyReport:
    """Wehrl entropy by direct integration of ``-(2j+1) h ln h``.

    With ``check=True`` the integral is repeated on the doubled grid and the
    difference is reported as ``doubling_delta``.
    """
    check_twice_j(state.twice_j, minimum=1)
    grid = grid or QuadratureGrid.default(state.twice_j)
    value, norm = _entropy_on(state, grid)
    diag = {"n_p": grid.n_p, "n_phi": grid.n_phi, "normalization": norm}
    if check:
        fine, _ = _entropy_on(state, grid.doubled())
        diag["doubling_delta"] = abs(fine - value)
    c = analyze(state).c
    return EntropyReport(value, "quadrature", c, state.twice_j, diag)


def ln_c_quadrature(state: SpinState, grid: QuadratureGrid | None = None) -> float:
    """``2j + avg(ln h)``, which equals ``ln c`` of the state's decomposition.

    ``ln h`` has logarithmic singularities at the antipodes of the points, so
    by default the azimuthal average is taken with a fine trapezoid rule and
    the ``p`` integral is done adaptively. Passing ``grid`` forces a plain
    tensor-product rule instead (slow to converge; useful for comparisons).
    """
    n = state.twice_j
    if grid is not None:
        h = husimi_grid(state, grid)
        return n + grid.average(np.log(np.maximum(h, np.finfo(float).tiny)))

    k = np.arange(n + 1)
    phi = 2 * np.pi * (np.arange(LN_C_PHI_NODES) + 0.5) / LN_C_PHI_NODES
    phase = np.exp(1j * np.outer(k, phi))
    weighted = sqrt_binomials(n) * state.amps

    def ring_average(p):
        radial = np.exp(0.5 * k * math.log(p) + 0.5 * (n - k) * math.log1p(-p))
        ov = (radial * weighted) @ phase
        h = np.maximum(ov.real**2 + ov.imag**2, np.finfo(float).tiny)
        return float(np.mean(np.log(h)))

    value, _ = quad(ring_average, 0.0, 1.0, limit=1000, epsabs=1e-11, epsrel=1e-11)
    return n + value


def s_norm_quadrature(state: SpinState, s: float, grid: QuadratureGrid | None = None) -> float:
    """``(2js + 1) * avg(h**s)`` over the sphere."""
    if s < 1:
        raise ValueError(f"s must be >= 1, got {s}")
    n = state.twice_j
    if grid is None:
        if float(s).is_integer():
            grid = QuadratureGrid.exact_for_power(n, int(s))
        else:
            grid = QuadratureGrid.default(n)
    h = husimi_grid(state, grid)
    return (n * s + 1) * grid.average(h**s)


def s_norm_exact(state: SpinState, s: int) -> float:
    """``(2js + 1) * avg(h**s)`` for integer ``s`` as a finite sum.

    The amplitude polynomial raised to the s-th power is the (unnormalized)
    top-spin projection of ``psi^(x)s``; its squared norm is the integral.
    """
    if int(s) != s or s < 1:
        raise ValueError(f"s must be a positive integer, got {s}")
    s = int(s)
    n = state.twice_j
    if n * s > MAX_TWICE_J:
        raise CeilingExceeded(f"2js = {n * s} exceeds the ceiling {MAX_TWICE_J}")
    base = state.amps * sqrt_binomials(n)
    poly = np.ones(1, dtype=complex)
    for _ in range(s):
        poly = np.convolve(poly, base)
    top = poly / sqrt_binomials(n * s)
    return float(np.sum(np.abs(top) ** 2))
