"""Spin-j states, Bloch coherent states and Husimi densities.

States are stored in the ``|j, m>`` basis indexed by ``k = j + m``, so
``amps[0]`` is the ``m = -j`` component and ``amps[2j]`` the highest weight.
Spins are always carried as the integer ``twice_j`` so half-integers are exact.

Phase convention: the coherent state at ``(theta, phi)`` has components

    sqrt(binom(2j, k)) * p**(k/2) * (1-p)**((2j-k)/2) * exp(-1j*m*phi)

with ``p = cos(theta/2)**2``. Only phase-invariant quantities are physical.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CeilingExceeded, NotNormalized

MAX_TWICE_J = 60
NORM_TOL = 1e-12


def check_twice_j(twice_j: int, minimum: int = 0) -> int:
    if int(twice_j) != twice_j:
        raise ValueError(f"twice_j must be an integer, got {twice_j!r}")
    twice_j = int(twice_j)
    if twice_j < minimum:
        raise ValueError(f"twice_j must be >= {minimum}, got {twice_j}")
    if twice_j > MAX_TWICE_J:
        raise CeilingExceeded(f"twice_j={twice_j} exceeds the ceiling 2j <= {MAX_TWICE_J}")
    return twice_j


def spin_label(twice_j: int) -> str:
    """Human readable spin, e.g. ``3/2``."""
    return str(Fraction(twice_j, 2))


@lru_cache(maxsize=None)
def _sqrt_binom(n: int) -> np.ndarray:
    k = np.arange(n + 1)
    logb = math.lgamma(n + 1) - np.array([math.lgamma(i + 1) + math.lgamma(n - i + 1) for i in k])
    out = np.exp(0.5 * logb)
    out.flags.writeable = False
    return out


def sqrt_binomials(n: int) -> np.ndarray:
    """``sqrt(binom(n, k))`` for ``k = 0..n`` (read-only, cached)."""
    if n > MAX_TWICE_J:
        raise CeilingExceeded(f"degree {n} exceeds the ceiling {MAX_TWICE_J}")
    return _sqrt_binom(n)


@dataclass(frozen=True)
class SpherePoint:
    """A point on the unit sphere, ``theta`` in [0, pi], ``phi`` in [0, 2pi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta = float(self.theta)
        phi = float(self.phi)
        if not (-1e-12 <= theta <= math.pi + 1e-12):
            raise ValueError(f"theta={theta} outside [0, pi]")
        object.__setattr__(self, "theta", min(max(theta, 0.0), math.pi))
        object.__setattr__(self, "phi", phi % (2 * math.pi))

    @classmethod
    def from_xyz(cls, x, y, z) -> SpherePoint:
        r = math.sqrt(x * x + y * y + z * z)
        if r == 0:
            raise ValueError("zero vector has no direction")
        theta = math.atan2(math.hypot(x, y), z)
        phi = math.atan2(y, x) if (x or y) else 0.0
        return cls(theta, phi)

    @classmethod
    def from_spinor(cls, a: complex, b: complex) -> SpherePoint:
        """Point whose spin-1/2 coherent state is ``a|up> + b|down>`` up to phase."""
        theta = 2.0 * math.atan2(abs(b), abs(a))
        if abs(a) == 0 or abs(b) == 0:
            return cls(theta, 0.0)
        return cls(theta, cmath.phase(b) - cmath.phase(a))

    @property
    def p(self) -> float:
        return math.cos(self.theta / 2) ** 2

    @property
    def z(self) -> complex:
        """Stereographic coordinate ``cot(theta/2) e^{i phi}``; infinite at the north pole."""
        if self.theta == 0.0:
            return complex(math.inf, 0.0)
        return cmath.rect(1.0 / math.tan(self.theta / 2), self.phi)

    @property
    def spinor(self) -> tuple[complex, complex]:
        half = 0.5 * self.phi
        return (
            math.cos(self.theta / 2) * cmath.exp(-1j * half),
            math.sin(self.theta / 2) * cmath.exp(1j * half),
        )

    def xyz(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array([st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)])

    def antipode(self) -> SpherePoint:
        return SpherePoint(math.pi - self.theta, self.phi + math.pi)


NORTH = SpherePoint(0.0, 0.0)
SOUTH = SpherePoint(math.pi, 0.0)


@dataclass(frozen=True, eq=False)
class SpinState:
    """Normalized spin-j state; ``amps[k]`` is the amplitude of ``m = k - j``."""

    twice_j: int
    amps: np.ndarray

    def __post_init__(self):
        twice_j = check_twice_j(self.twice_j)
        amps = np.array(self.amps, dtype=complex).reshape(-1)
        if amps.shape != (twice_j + 1,):
            raise ValueError(f"spin {spin_label(twice_j)} needs {twice_j + 1} amplitudes, got {amps.size}")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if not abs(norm2 - 1.0) <= NORM_TOL:
            raise NotNormalized(f"state norm^2 = {norm2!r}, must equal 1 within {NORM_TOL}")
        amps.flags.writeable = False
        object.__setattr__(self, "twice_j", twice_j)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def normalized(cls, twice_j: int, amps) -> SpinState:
        amps = np.asarray(amps, dtype=complex)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise NotNormalized("the zero vector cannot be normalized")
        return cls(twice_j, amps / norm)

    @classmethod
    def basis(cls, twice_j: int, twice_m: int) -> SpinState:
        """The eigenstate ``|j, m>`` (``twice_m = 2m``)."""
        k, rem = divmod(twice_j + twice_m, 2)
        if rem or not 0 <= k <= twice_j:
            raise ValueError(f"2m={twice_m} is not a valid projection for 2j={twice_j}")
        amps = np.zeros(twice_j + 1, dtype=complex)
        amps[k] = 1.0
        return cls(twice_j, amps)

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice_j, 2)

    @property
    def dim(self) -> int:
        return self.twice_j + 1

    def inner(self, other: SpinState) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(self.amps, other.amps))

    def __eq__(self, other):
        if not isinstance(other, SpinState):
            return NotImplemented
        return self.twice_j == other.twice_j and np.array_equal(self.amps, other.amps)

    def __hash__(self):
        return hash((self.twice_j, self.amps.tobytes()))

    def __repr__(self):
        return f"SpinState(twice_j={self.twice_j}, amps={self.amps.tolist()!r})"


def coherent_amplitudes(twice_j: int, theta, phi) -> np.ndarray:
    """Coherent-state amplitudes, broadcasting over array-valued angles.

    The result has shape ``broadcast(theta, phi).shape + (2j+1,)``.
    """
    theta = np.asarray(theta, dtype=float)[..., None]
    phi = np.asarray(phi, dtype=float)[..., None]
    k = np.arange(twice_j + 1)
    cos_half = np.cos(theta / 2)
    sin_half = np.sin(theta / 2)
    # 0**0 == 1 in numpy, which is what the poles need
    mag = sqrt_binomials(twice_j) * cos_half**k * sin_half ** (twice_j - k)
    m = k - twice_j / 2
    return mag * np.exp(-1j * m * phi)


def coherent_state(twice_j: int, omega: SpherePoint) -> SpinState:
    twice_j = check_twice_j(twice_j)
    amps = coherent_amplitudes(twice_j, omega.theta, omega.phi)
    # renormalize away the last ulp so the strict norm check always holds
    return SpinState(twice_j, amps / np.linalg.norm(amps))


def overlap(state: SpinState, omega: SpherePoint) -> complex:
    """``<Omega|psi>`` under the package phase convention."""
    coh = coherent_amplitudes(state.twice_j, omega.theta, omega.phi)
    return complex(np.vdot(coh, state.amps))


def husimi(state: SpinState, omega: SpherePoint) -> float:
    """Husimi density ``|<Omega|psi>|^2`` in [0, 1]."""
    return abs(overlap(state, omega)) ** 2


def random_state(twice_j: int, rng: np.random.Generator) -> SpinState:
    """Unitarily invariant (Haar) random state."""
    twice_j = check_twice_j(twice_j)
    z = rng.standard_normal(twice_j + 1) + 1j * rng.standard_normal(twice_j + 1)
    return SpinState.normalized(twice_j, z)


def random_points(count: int, rng: np.random.Generator) -> list[SpherePoint]:
    """Points drawn uniformly on the sphere."""
    cos_theta = rng.uniform(-1.0, 1.0, count)
    phi = rng.uniform(0.0, 2 * math.pi, count)
    return [SpherePoint(math.acos(c), f) for c, f in zip(cos_theta, phi)]
