"""Numerical campaigns: entropy minimization and the near-coherent expansion."""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .entropy import _closed_from_spinors, coherent_entropy, wehrl_excess_extended, wehrl_quadrature
from .majorana import (
    apply_su2,
    max_pairwise_chord_sq,
    points_from_spinors,
    spinors_from_angles,
    su2_rotation,
    su2_to_north,
    synthesize,
)
from .quadrature import QuadratureGrid
from .spin import NORTH, SpherePoint, check_twice_j

RECENTER_EVERY = 50
ALARM_TOL = 1e-9
EXTENDED_DPS = 40
CONTRACTION_FACTORS = (0.5, 0.8)
DOUBLE_NOISE = 1e-15  # resolution of the double-precision excess
EXTENDED_NOISE = 1e-36


@dataclass(frozen=True)
class SearchConfig:
    twice_j: int
    restarts: int = 16
    max_iters: int = 5000
    seed: int = 0
    polish_iters: int = 150
    tol: float = 1e-10  # simplex size (radians) at which Nelder-Mead stops

    def __post_init__(self):
        check_twice_j(self.twice_j, minimum=2)
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.polish_iters < 0:
            raise ValueError(f"polish_iters must be >= 0, got {self.polish_iters}")


@dataclass
class MinimizeReport:
    twice_j: int
    seed: int
    best_value: float
    best_points: list[SpherePoint]
    gap: float
    max_chord_sq: float
    trace: list[dict] = field(default_factory=list)
    alarms: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "twice_j": self.twice_j,
            "seed": self.seed,
            "best_value": self.best_value,
            "coherent_value": coherent_entropy(self.twice_j),
            "gap": self.gap,
            "max_chord_sq": self.max_chord_sq,
            "best_points": [[pt.theta, pt.phi] for pt in self.best_points],
            "trace": self.trace,
            "alarms": self.alarms,
        }


def _excess(x: np.ndarray) -> float:
    theta, phi = x[0::2], x[1::2]
    a, b = spinors_from_angles(theta, phi)
    return _closed_from_spinors(a, b)[0] - coherent_entropy(len(theta))


def _excess_extended(x: np.ndarray) -> float:
    return wehrl_excess_extended(x[0::2], x[1::2], EXTENDED_DPS)


def _recenter(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    a, b = spinors_from_angles(x[0::2], x[1::2])
    pts = points_from_spinors(*apply_su2(u, a, b))
    out = np.empty_like(x)
    out[0::2] = [pt.theta for pt in pts]
    out[1::2] = [pt.phi for pt in pts]
    return out


def _equator_rotation(x: np.ndarray) -> np.ndarray | None:
    """SU(2) matrix moving the chordal centroid of the configuration onto the equator."""
    theta, phi = x[0::2], x[1::2]
    xyz = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)])
    centroid = xyz.mean(axis=1)
    if np.linalg.norm(centroid) < 1e-12:
        return None
    ca, cb = SpherePoint.from_xyz(*centroid).spinor
    return su2_rotation([0.0, 1.0, 0.0], math.pi / 2) @ su2_to_north(ca, cb)


def _contract(objective, x: np.ndarray, f: float, factor: float) -> tuple[np.ndarray, float]:
    """Shrink the configuration toward its centroid by ``factor`` (stereographic chart)."""
    theta, phi = x[0::2], x[1::2]
    xyz = np.stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]).mean(axis=1)
    if np.linalg.norm(xyz) < 1e-12:
        return x, f
    u = su2_to_north(*SpherePoint.from_xyz(*xyz).spinor)
    a, b = apply_su2(u, *spinors_from_angles(theta, phi))
    if np.any(np.abs(a) < 1e-12):
        return x, f
    zeta = factor * b / a
    norm = np.sqrt(1.0 + np.abs(zeta) ** 2)
    y = _angles(points_from_spinors(1.0 / norm, zeta / norm))
    return y, objective(y)


def _angles(points) -> np.ndarray:
    x = np.empty(2 * len(points))
    x[0::2] = [pt.theta for pt in points]
    x[1::2] = [pt.phi for pt in points]
    return x


def _spread(x: np.ndarray) -> float:
    return math.sqrt(max_pairwise_chord_sq(points_from_spinors(*spinors_from_angles(x[0::2], x[1::2]))))


def _nelder_mead(objective, x: np.ndarray, max_iters: int, noise: float, xatol: float) -> tuple[np.ndarray, int, bool]:
    """Nelder-Mead in chunks of ``RECENTER_EVERY`` iterations.

    Between chunks the configuration is rotated so its chordal centroid sits on
    the equator (the simplex is rotated along), and contraction toward the
    centroid is tried; a contraction is kept only if it lowers the objective
    by more than ``noise``, after which the simplex is rebuilt at the new scale.
    Near a coherent state the excess is flat to high order in the point
    spread, a direction plain Nelder-Mead follows very slowly.
    """
    simplex = None
    iters = 0
    f = objective(x)
    while iters < max_iters:
        u = _equator_rotation(x)
        if u is not None:
            x = _recenter(x, u)
            if simplex is not None:
                simplex = np.array([_recenter(v, u) for v in simplex])
        chunk = min(RECENTER_EVERY, max_iters - iters)
        options = {"maxiter": chunk, "xatol": xatol, "fatol": noise, "adaptive": True}
        if simplex is not None:
            options["initial_simplex"] = simplex
        res = minimize(objective, x, method="Nelder-Mead", options=options)
        iters += int(res.nit)
        x, simplex, f = res.x, res.final_simplex[0], float(res.fun)

        contracted = False
        for factor in CONTRACTION_FACTORS:
            while True:
                y, fy = _contract(objective, x, f, factor)
                if not fy < f - noise:
                    break
                x, f, contracted = y, fy, True
        if contracted:
            step = max(0.25 * _spread(x), 1e-9)
            simplex = np.vstack([x, x + step * np.eye(len(x))])
        elif res.nit < chunk:
            return x, iters, bool(res.success)
    return x, iters, False


def _summary(restart: int, x: np.ndarray, iters: int, converged: bool, excess: float) -> dict:
    points = points_from_spinors(*spinors_from_angles(x[0::2], x[1::2]))
    return {
        "restart": restart,
        "value": coherent_entropy(len(points)) + excess,
        "excess": excess,
        "iterations": iters,
        "converged": converged,
        "max_chord_sq": max_pairwise_chord_sq(points),
        "points": [[pt.theta, pt.phi] for pt in points],
    }


def _run_restart(twice_j: int, seed: int, restart: int, max_iters: int, polish_iters: int, tol: float) -> dict:
    rng = np.random.default_rng([seed, restart])
    x = np.empty(2 * twice_j)
    x[0::2] = np.arccos(rng.uniform(-1.0, 1.0, twice_j))
    x[1::2] = rng.uniform(0.0, 2 * math.pi, twice_j)
    x, iters, converged = _nelder_mead(_excess, x, max_iters, DOUBLE_NOISE, tol)
    # the double-precision excess bottoms out near 1e-16 while the spread can
    # still be ~0.1; finish with the excess evaluated in extended precision
    x, polish, _ = _nelder_mead(_excess_extended, x, polish_iters, EXTENDED_NOISE, tol)
    out = _summary(restart, x, iters + polish, converged, _excess_extended(x))
    out["polish_iterations"] = polish
    return out


def default_workers() -> int:
    raw = os.environ.get("WEHRL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"WEHRL_THREADS must be an integer, got {raw!r}") from None


def minimize_entropy(config: SearchConfig, workers: int | None = None) -> MinimizeReport:
    """Multi-start Nelder-Mead search for the minimal Wehrl entropy at spin j.

    Each restart draws its own generator from ``(seed, restart)`` so the report
    does not depend on ``workers``.
    """
    workers = default_workers() if workers is None else workers
    args = [(config.twice_j, config.seed, r, config.max_iters, config.polish_iters, config.tol) for r in range(config.restarts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            trace = list(pool.map(_run_restart, *zip(*args)))
    else:
        trace = [_run_restart(*a) for a in args]

    target = coherent_entropy(config.twice_j)
    alarms = []
    for entry in trace:
        if entry["excess"] < -ALARM_TOL:
            pts = [SpherePoint(t, p) for t, p in entry["points"]]
            state, _ = synthesize(config.twice_j, pts)
            grid = QuadratureGrid.default(config.twice_j).doubled()
            alarms.append({
                "restart": entry["restart"],
                "closed": entry["value"],
                "quadrature": wehrl_quadrature(state, grid).value,
            })

    best = min(trace, key=lambda e: (e["value"], e["restart"]))
    best_points = [SpherePoint(t, p) for t, p in best["points"]]
    return MinimizeReport(
        twice_j=config.twice_j,
        seed=config.seed,
        best_value=best["value"],
        best_points=best_points,
        gap=best["value"] - target,
        max_chord_sq=best["max_chord_sq"],
        trace=trace,
        alarms=alarms,
    )


@dataclass(frozen=True)
class SweepRow:
    eps: float
    entropy: float
    c_measured: float
    c_predicted: float
    ratio: float


def perturbed_points(twice_j: int, eps: float) -> list[SpherePoint]:
    """``2j - 1`` points at the north pole and one at squared chord ``eps``."""
    theta = 2 * math.asin(math.sqrt(eps))
    return [NORTH] * (twice_j - 1) + [SpherePoint(theta, 0.0)]


def perturbation_sweep(twice_j: int, eps_values: Sequence[float]) -> list[SweepRow]:
    """Entropy of a slightly split coherent state versus the quadratic expansion.

    ``c_measured`` and ``c_predicted`` are the measured and predicted ``1/c``;
    ``ratio`` is ``(S - 2j/(2j+1)) / eps^2``.
    """
    twice_j = check_twice_j(twice_j, minimum=2)
    rows = []
    for eps in eps_values:
        if not 0.0 < eps <= 0.05:
            raise ValueError(f"eps={eps} outside (0, 0.05]")
        a, b = spinors_from_angles(*np.array([[pt.theta, pt.phi] for pt in perturbed_points(twice_j, eps)]).T)
        value, c, _ = _closed_from_spinors(a, b)
        rows.append(SweepRow(
            eps=eps,
            entropy=value,
            c_measured=1.0 / c,
            c_predicted=1.0 - (twice_j - 1) * eps / twice_j,
            ratio=(value - coherent_entropy(twice_j)) / eps**2,
        ))
    return rows


def quadratic_coefficient(twice_j: int, eps: float) -> float:
    """Richardson extrapolation of the sweep ratio from ``eps`` and ``eps/2``.

    The ratio carries a term linear in ``eps`` (the cubic term of the
    entropy), so one halving step cancels it.
    """
    coarse, fine = perturbation_sweep(twice_j, [eps, eps / 2])
    return 2 * fine.ratio - coarse.ratio


def predicted_quadratic_coefficient(twice_j: int) -> float:
    """``c / (8 j^2)`` in the ``eps -> 0`` limit, where ``c -> 1``."""
    return 1.0 / (2 * twice_j**2)
