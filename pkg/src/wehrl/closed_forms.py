"""Explicit Wehrl entropies for spin 1, 3/2 and 2 in terms of chord lengths.

All parameters are squared chordal distances on the sphere of radius 1/2,
i.e. ``sin^2(gamma/2)`` for an angular separation ``gamma``.

Spin-2 edges follow the tetrahedron labeling with vertices 1..4::

    eps = (2,3)  mu = (1,3)  nu = (1,2)  alpha = (1,4)  beta = (2,4)  gamma = (3,4)

so the opposite-edge pairs are (alpha, eps), (beta, mu) and (gamma, nu).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import astuple, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .errors import CountMismatch, DegenerateGeometry, NotEmbeddable
from .majorana import chord_sq_matrix
from .spin import SpherePoint

EMBED_TOL = 1e-9
COS_TOL = 1e-12
DEGENERATE_CHORD = 1e-9

# vertex pairs (0-based) for each labeled edge
EDGE_VERTICES = {
    "eps": (1, 2),
    "mu": (0, 2),
    "nu": (0, 1),
    "alpha": (0, 3),
    "beta": (1, 3),
    "gamma": (2, 3),
}


@dataclass(frozen=True)
class Spin2Edges:
    eps: float
    mu: float
    nu: float
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name, value in zip(EDGE_VERTICES, astuple(self)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"edge {name}={value} outside [0, 1]")

    @classmethod
    def from_matrix(cls, d: np.ndarray) -> Spin2Edges:
        return cls(**{name: float(d[i, k]) for name, (i, k) in EDGE_VERTICES.items()})

    def matrix(self) -> np.ndarray:
        d = np.zeros((4, 4))
        for name, (i, k) in EDGE_VERTICES.items():
            d[i, k] = d[k, i] = getattr(self, name)
        return d

    def relabeled(self, perm: Sequence[int]) -> Spin2Edges:
        """Edges seen after moving vertex ``v`` to position ``perm[v]``."""
        d = self.matrix()
        out = np.zeros_like(d)
        for i in range(4):
            for k in range(4):
                out[perm[i], perm[k]] = d[i, k]
        return Spin2Edges.from_matrix(out)


def _xlnx(x: float) -> float:
    return x * math.log(x) if x > 0 else 0.0


def spin1_entropy(mu: float) -> float:
    """Entropy of the spin-1 state whose two points have squared chord ``mu``."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu={mu} outside [0, 1]")
    inv_c = 1.0 - mu / 2
    return 2.0 / 3.0 + (mu / 2 + _xlnx(inv_c)) / inv_c


def cos_phi(eps: float, mu: float, nu: float) -> float:
    """Cosine of the dihedral angle at vertex 3 between planes (1,3) and (2,3).

    Point 3 at the north pole, point 1 at azimuth 0 with ``sin^2(theta_1/2) = mu``
    and point 2 with ``sin^2(theta_2/2) = eps``; ``nu`` is the (1,2) chord.
    """
    denom = eps * mu * (1 - eps) * (1 - mu)
    if denom <= 0:
        raise DegenerateGeometry(f"azimuth undefined for eps={eps}, mu={mu}")
    return (eps + mu - nu - 2 * eps * mu) / (2 * math.sqrt(denom))


def _gram_psd(d: np.ndarray, tol: float = COS_TOL) -> bool:
    gram = 1.0 - 2.0 * d
    return bool(np.linalg.eigvalsh(gram).min() >= -tol)


def spin32_realizable(eps: float, mu: float, nu: float) -> bool:
    for x, y, opposite in ((eps, mu, nu), (mu, nu, eps), (nu, eps, mu)):
        if min(x, 1 - x, y, 1 - y) < DEGENERATE_CHORD:
            continue  # azimuth ill-conditioned at this vertex
        try:
            return abs(cos_phi(x, y, opposite)) <= 1 + COS_TOL
        except DegenerateGeometry:
            continue
    # every vertex has a coincident or antipodal neighbour
    d = np.array([[0, nu, mu], [nu, 0, eps], [mu, eps, 0]], dtype=float)
    return _gram_psd(d)


def spin32_entropy(eps: float, mu: float, nu: float) -> float:
    for name, value in (("eps", eps), ("mu", mu), ("nu", nu)):
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"{name}={value} outside [0, 1]")
    if not spin32_realizable(eps, mu, nu):
        raise NotEmbeddable(f"({eps}, {mu}, {nu}) are not the chords of three points on a sphere")
    total = eps + mu + nu
    inv_c = 1.0 - total / 3
    pairs = eps * mu + eps * nu + mu * nu
    return 0.75 + (total / 3 - pairs / 6 + _xlnx(inv_c)) / inv_c


def edge_sums(edges: Spin2Edges) -> dict[str, float]:
    """The four symmetric edge sums: lines, opposite pairs, wedges, triangles."""
    e, m, n, a, b, g = edges.eps, edges.mu, edges.nu, edges.alpha, edges.beta, edges.gamma
    lines = e + m + n + a + b + g
    pairs = a * e + b * m + g * n
    squares = (lines**2 - (e * e + m * m + n * n + a * a + b * b + g * g)) / 2
    wedges = squares - pairs  # the twelve products of edges sharing a vertex
    triangles = a * m * n + e * b * n + e * m * g + a * b * g
    return {"lines": lines, "pairs": pairs, "wedges": wedges, "triangles": triangles}


def spin2_inverse_c(edges: Spin2Edges) -> float:
    sums = edge_sums(edges)
    return 1.0 - sums["lines"] / 4 + sums["pairs"] / 12


def spin2_entropy(edges: Spin2Edges) -> float:
    """Spin-2 entropy from the six edges.

    Non-embeddable edge sets are evaluated all the same; check with
    :func:`embeddable4` when that matters.
    """
    sums = edge_sums(edges)
    inv_c = 1.0 - sums["lines"] / 4 + sums["pairs"] / 12
    sigma = (-sums["triangles"] / 2 - 5 * sums["pairs"] / 3 - sums["wedges"] + 3 * sums["lines"]) / 12
    if inv_c <= 0:
        return math.nan
    return 0.8 + (sigma + _xlnx(inv_c)) / inv_c


def chords_from_points(points: Sequence[SpherePoint]) -> Spin2Edges:
    if len(points) != 4:
        raise CountMismatch(f"need exactly 4 points, got {len(points)}")
    return Spin2Edges.from_matrix(chord_sq_matrix(points))


@dataclass(frozen=True)
class Embedding:
    ok: bool
    residual: float
    points: tuple[SpherePoint, ...]


def embed_points(d: np.ndarray, pole: int = 2) -> Embedding:
    """Try to place points with squared chords ``d`` on the sphere.

    Vertex ``pole`` goes to the north pole; every other vertex gets its polar
    angle from its chord to the pole and its azimuth from the dihedral-angle
    relation with a reference vertex. All mirror choices of the azimuth signs
    are tried and the one that best reproduces the remaining chords wins.
    """
    size = len(d)
    theta = np.zeros(size)
    for v in range(size):
        theta[v] = 2 * math.asin(math.sqrt(min(max(d[pole, v], 0.0), 1.0)))
    free = [v for v in range(size) if v != pole and 0 < d[pole, v] < 1]
    cos_az = {}
    if free:
        ref, rest = free[0], free[1:]
        cos_az[ref] = 1.0
        for v in rest:
            x, y = d[pole, v], d[pole, ref]
            cos_az[v] = (x + y - d[ref, v] - 2 * x * y) / (2 * math.sqrt(x * y * (1 - x) * (1 - y)))
    best = None
    signs_needed = [v for v in cos_az if abs(cos_az[v]) < 1]
    for signs in itertools.product((1.0, -1.0), repeat=len(signs_needed)):
        sign = dict(zip(signs_needed, signs))
        pts = []
        for v in range(size):
            if v in cos_az:
                cz = min(max(cos_az[v], -1.0), 1.0)
                az = sign.get(v, 1.0) * math.acos(cz)
            else:
                az = 0.0
            pts.append(SpherePoint(theta[v], az % (2 * math.pi)))
        residual = float(np.abs(chord_sq_matrix(pts) - d).max())
        if best is None or residual < best.residual:
            best = Embedding(residual <= EMBED_TOL, residual, tuple(pts))
        if best.ok:
            break
    if not best.ok:
        best = _polish_embedding(d, best)
    return best


def _polish_embedding(d: np.ndarray, start: Embedding) -> Embedding:
    # acos loses half the digits near |cos| = 1; a least-squares pass recovers them
    x0 = np.array([[pt.theta, pt.phi] for pt in start.points]).ravel()
    iu = np.triu_indices(len(d), 1)

    def residuals(x):
        t, p = x[0::2], x[1::2]
        xyz = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=1)
        return ((1.0 - xyz @ xyz.T) / 2 - d)[iu]

    fit = least_squares(residuals, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
    residual = float(np.abs(residuals(fit.x)).max())
    if residual >= start.residual:
        return start
    pts = tuple(SpherePoint(*_wrap(t, p)) for t, p in fit.x.reshape(-1, 2))
    residual = float(np.abs(chord_sq_matrix(list(pts)) - d).max())
    return Embedding(residual <= EMBED_TOL, residual, pts)


def _wrap(theta: float, phi: float) -> tuple[float, float]:
    theta = theta % (2 * math.pi)
    if theta > math.pi:
        theta, phi = 2 * math.pi - theta, phi + math.pi
    return theta, phi % (2 * math.pi)


def embeddable4(edges: Spin2Edges) -> Embedding:
    """Whether four points on the sphere realize ``edges``, with a certificate.

    Vertex 3 is placed at the north pole, vertex 1 fixes the azimuth origin,
    and vertices 2 and 4 follow from the dihedral-angle relations; the returned
    residual is the worst chord mismatch of the best mirror choice.
    """
    return embed_points(edges.matrix(), pole=2)


VERTEX_PERMUTATIONS = tuple(itertools.permutations(range(4)))
