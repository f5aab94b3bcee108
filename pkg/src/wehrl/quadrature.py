"""Tensor-product quadrature for averages over the sphere, ``dOmega / 4pi``.

With ``p = cos^2(theta/2)`` the normalized measure is ``dp dphi / 2pi``, so a
Gauss-Legendre rule on ``p in [0, 1]`` times the uniform rule on ``phi``
integrates polynomials of degree ``<= 2 n_p - 1`` in ``p`` and trigonometric
polynomials of degree ``< n_phi`` in ``phi`` exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class QuadratureGrid:
    n_p: int
    n_phi: int

    def __post_init__(self):
        if self.n_p < 1 or self.n_phi < 1:
            raise ValueError(f"grid sizes must be positive, got n_p={self.n_p}, n_phi={self.n_phi}")

    @classmethod
    def default(cls, twice_j: int) -> QuadratureGrid:
        """Grid for ``h ln h`` integrands at spin ``twice_j / 2`` (error ~1e-9)."""
        return cls(twice_j + 256, 2 * twice_j + 512)

    @classmethod
    def exact_for_power(cls, twice_j: int, s: int) -> QuadratureGrid:
        """Smallest grid that is exact for ``husimi**s`` with integer ``s``."""
        return cls(-(-twice_j * s // 2) + 1, 2 * twice_j * s + 1)

    def doubled(self) -> QuadratureGrid:
        return QuadratureGrid(2 * self.n_p, 2 * self.n_phi)

    @cached_property
    def p_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        x, w = np.polynomial.legendre.leggauss(self.n_p)
        return 0.5 * (x + 1.0), 0.5 * w

    @cached_property
    def phi_nodes(self) -> np.ndarray:
        # half-step offset keeps nodes off the phi = 0 meridian used by test geometry
        return 2 * np.pi * (np.arange(self.n_phi) + 0.5) / self.n_phi

    @property
    def size(self) -> int:
        return self.n_p * self.n_phi

    def average(self, values: np.ndarray) -> float:
        """Sphere average of ``values`` sampled on the ``(n_p, n_phi)`` grid."""
        _, wp = self.p_nodes
        # fixed-order reductions: phi first, then the p weights
        return float(np.dot(wp, np.mean(values, axis=1)))
