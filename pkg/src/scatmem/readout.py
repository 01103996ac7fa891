"""Interference readout: extract Bloch observables from intensity profiles.

An odd-wave profile carries ``A1 = |a1|^2 - |a2|^2`` and an even-wave
profile carries ``A2 = 2 Re(a1* a2)``. ``A3 = 2 Im(a1* a2)`` is recovered
by an even read after a known odd rotation. Together they fix the state up
to a global phase.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PAULIS, MemoryState, canonical_phase
from .errors import IllConditionedReadout, InconsistentObservables, InsufficientData
from .smatrix import IntensityProfile, Parity, intensity

DEFAULT_GRID_POINTS = 64
DEFAULT_EPS_PHI = 0.02
BLOCH_TOL = 1e-6


@dataclass(frozen=True)
class Observables:
    A1: float
    A2: float
    A3: float

    @classmethod
    def from_state(cls, s: MemoryState) -> Observables:
        cross = s.a1.conjugate() * s.a2
        return cls(abs(s.a1) ** 2 - abs(s.a2) ** 2, 2.0 * cross.real, 2.0 * cross.imag)

    @classmethod
    def from_bloch(cls, n) -> Observables:
        return cls(float(n[2]), float(n[0]), float(n[1]))

    def bloch_vector(self) -> np.ndarray:
        """Bloch vector ordered (x, y, z) = (A2, A3, A1)."""
        return np.array([self.A2, self.A3, self.A1])

    def bloch_norm(self) -> float:
        return math.sqrt(self.A1 ** 2 + self.A2 ** 2 + self.A3 ** 2)


@dataclass(frozen=True)
class NoiseModel:
    """Additive Gaussian intensity noise; ``samples_per_x`` draws are averaged per point."""

    sigma: float = 0.0
    samples_per_x: int = 1
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0.0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if int(self.samples_per_x) < 1:
            raise ValueError("samples_per_x must be a positive integer")

    @property
    def noiseless(self) -> bool:
        return self.sigma == 0.0

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


def default_grid(k: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """``points`` positions evenly covering one beat period ``(0, pi/k]``."""
    if points < 1:
        raise ValueError("grid needs at least one point")
    return np.arange(1, points + 1) * (math.pi / (k * points))


def sample_profile(parity: Parity, s: MemoryState, k: float, phi: float, x,
                   noise: NoiseModel | None = None,
                   rng: np.random.Generator | None = None) -> IntensityProfile:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.asarray(intensity(parity, s, k, phi, x), dtype=float)
    if noise is not None and noise.sigma > 0.0:
        rng = noise.rng() if rng is None else rng
        draws = rng.normal(0.0, noise.sigma, size=(len(x), int(noise.samples_per_x)))
        y = y + draws.mean(axis=1)
    return IntensityProfile(x, y)


def _extract(profile: IntensityProfile, k: float, phi: float, eps_phi: float) -> float:
    # model: I(x) = 2[1 + cos(2kx) cos(phi)] - 2 A sin(2kx) sin(phi), linear in A
    if abs(math.sin(phi)) < eps_phi:
        raise IllConditionedReadout(
            f"|sin(phi)| = {abs(math.sin(phi)):.3g} is below the margin {eps_phi}"
        )
    n = len(profile)
    if n == 2 or n == 0:
        raise InsufficientData(f"need one point or at least 3 for a fit, got {n}")
    two_kx = 2.0 * k * profile.x
    y = profile.intensity - 2.0 * (1.0 + np.cos(two_kx) * math.cos(phi))
    basis = -2.0 * np.sin(two_kx) * math.sin(phi)
    if n == 1:
        if abs(math.sin(two_kx[0])) < eps_phi:
            raise IllConditionedReadout("sample point lies near a node of sin(2kx)")
        return float(y[0] / basis[0])
    gram = float(basis @ basis)
    if gram < (eps_phi ** 2) * n:
        raise IllConditionedReadout("grid does not resolve the interference term")
    return float(basis @ y) / gram


def extract_A1(profile: IntensityProfile, k: float, phi_odd: float,
               eps_phi: float = DEFAULT_EPS_PHI) -> float:
    """Estimate ``A1`` from an odd-wave intensity profile.

    A single sample is inverted directly (best at ``x = pi/(4k)``, where
    ``A1 = (1 - I/2) / sin(phi)``); three or more samples are fitted by
    linear least squares in ``A1``.
    """
    return _extract(profile, k, phi_odd, eps_phi)


def extract_A2(profile: IntensityProfile, k: float, phi_even: float,
               eps_phi: float = DEFAULT_EPS_PHI) -> float:
    """Estimate ``A2`` from an even-wave intensity profile (see :func:`extract_A1`)."""
    return _extract(profile, k, phi_even, eps_phi)


def extract_A3(A2_rotated: float, A2: float, phi0: float,
               eps_phi: float = DEFAULT_EPS_PHI) -> float:
    """Solve ``A2' = cos(2 phi0) A2 + sin(2 phi0) A3`` for ``A3``.

    ``A2'`` is the even-read value after an odd rotation with known phase
    ``phi0``; for ``phi0 = -pi/4`` this is simply ``A3 = -A2'``.
    """
    s2 = math.sin(2.0 * phi0)
    if abs(s2) < eps_phi:
        raise IllConditionedReadout(f"|sin(2 phi0)| = {abs(s2):.3g} is too small")
    return (A2_rotated - A2 * math.cos(2.0 * phi0)) / s2


def reconstruct_state(obs: Observables, tol: float | None = BLOCH_TOL) -> MemoryState:
    """Canonical-phase state with the given Bloch observables.

    A Bloch vector longer than ``1 + tol`` is rejected; anything else is
    projected onto the unit sphere first. Pass ``tol=None`` to always
    project (useful for noisy estimates).
    """
    n = obs.bloch_vector()
    norm = float(np.linalg.norm(n))
    if not math.isfinite(norm):
        raise InconsistentObservables("observables are not finite")
    if tol is not None and norm > 1.0 + tol:
        raise InconsistentObservables(
            f"Bloch norm {norm:.9g} exceeds 1 by more than {tol:g}"
        )
    if norm == 0.0:
        raise InconsistentObservables("zero Bloch vector does not determine a pure state")
    x, y, z = n / norm
    a1 = math.sqrt(max(0.0, (1.0 + z) / 2.0))
    m2 = math.sqrt(max(0.0, (1.0 - z) / 2.0))
    r = math.hypot(x, y)
    a2 = complex(m2, 0.0) if r == 0.0 else m2 * complex(x, y) / r
    nrm = math.hypot(a1, abs(a2))
    return canonical_phase(MemoryState(a1 / nrm, a2 / nrm))


def bloch_rotation(U) -> np.ndarray:
    """SO(3) matrix ``R_ij = tr(sigma_i U sigma_j U^dag) / 2`` acting on (x, y, z)."""
    U = np.asarray(U, dtype=complex)
    Ud = U.conj().T
    return np.array([[0.5 * np.trace(si @ U @ sj @ Ud).real for sj in PAULIS]
                     for si in PAULIS])
