"""Closed-form S-matrices and interference intensities of the two-channel point interaction.

The even sector sees only ``g1 sigma_1`` and the odd sector only
``g3 sigma_3``, so

    S_even(k) = exp(i sigma_1 phi_even(k)),  phi_even(k) = -2 arctan(g1 / (2k))
    S_odd(k)  = exp(i sigma_3 phi_odd(k)),   phi_odd(k)  = -2 arctan(g3 k / 2)

Wavefunctions and intensities are evaluated on the x > 0 half-line only.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import SIGMA1, SIGMA3, Coupling, MemoryState, pauli_exp


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def generator(self) -> np.ndarray:
        return SIGMA1 if self is Parity.EVEN else SIGMA3


@dataclass(frozen=True)
class ScatteringEvent:
    """One admissible incident wave: a parity channel and a wavenumber."""

    parity: Parity
    k: float

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity(self.parity))
        k = float(self.k)
        if not k > 0.0 or not np.isfinite(k):
            raise ValueError(f"wavenumber must be finite and positive, got {k!r}")
        object.__setattr__(self, "k", k)

    def phase(self, c: Coupling) -> float:
        return phase_shift(self.parity, c, self.k)

    def matrix(self, c: Coupling) -> np.ndarray:
        return scattering_matrix(self.parity, c, self.k)


@dataclass(frozen=True)
class IntensityProfile:
    """Intensity samples ``|Psi(x)|^2`` at positions ``x > 0``."""

    x: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.intensity, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("x and intensity must be 1-d arrays of equal length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "intensity", y)

    def __len__(self):
        return len(self.x)


def _check_k(k):
    k = np.asarray(k, dtype=float)
    if np.any(~(k > 0)) or np.any(~np.isfinite(k)):
        raise ValueError("wavenumber k must be finite and > 0")
    return k


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("wavefunction is evaluated only for x > 0")
    return x


def _scalar(a):
    return float(a) if np.ndim(a) == 0 else a


def phase_shift(parity: Parity, c: Coupling, k):
    """Eigenphase of the S-matrix in the given parity channel.

    Accepts scalar or array ``k``. For positive coupling the result lies in
    ``(-pi, 0)``; for negative coupling in ``(0, pi)``.
    """
    k = _check_k(k)
    if Parity(parity) is Parity.EVEN:
        phi = -2.0 * np.arctan(c.g1 / (2.0 * k))
    else:
        phi = -2.0 * np.arctan(c.g3 * k / 2.0)
    return _scalar(phi)


def scattering_matrix(parity: Parity, c: Coupling, k) -> np.ndarray:
    parity = Parity(parity)
    return pauli_exp(parity.generator, phase_shift(parity, c, k))


def odd_total_wave(s: MemoryState, k, phi, x):
    """Incident and scattered terms of the odd-wave solution at ``x > 0``.

    Returns ``(incident, scattered)``, each of shape ``(2,) + x.shape``:
    ``incident = (a1, a2) e^{-ikx}`` and
    ``scattered = (a1 e^{i phi}, a2 e^{-i phi}) e^{ikx}``.
    """
    x = _check_x(x)
    k = _check_k(k)
    a = s.vector.reshape((2,) + (1,) * x.ndim)
    incoming = np.exp(-1j * k * x)
    outgoing = np.exp(1j * k * x)
    rot = np.array([np.exp(1j * phi), np.exp(-1j * phi)]).reshape(a.shape)
    return a * incoming, a * rot * outgoing


def even_total_wave(s: MemoryState, k, phi, x):
    """Even-wave analog of :func:`odd_total_wave`, built in the sigma_1 eigenbasis.

    ``S_even`` is diagonal in the basis ``(1, +-1)/sqrt(2)`` with eigenvalues
    ``e^{+-i phi}``; the scattered term is rotated back to channel basis.
    """
    x = _check_x(x)
    k = _check_k(k)
    h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
    b = h @ s.vector
    shape = (2,) + (1,) * x.ndim
    rot = np.array([np.exp(1j * phi), np.exp(-1j * phi)])
    incident = s.vector.reshape(shape) * np.exp(-1j * k * x)
    scattered = (h @ (rot * b)).reshape(shape) * np.exp(1j * k * x)
    return incident, scattered


def _intensity(bloch_component, k, phi, x):
    # |Psi|^2 = 2[1 + cos(2kx) cos(phi) - n sin(2kx) sin(phi)], n the Bloch
    # component along the channel's generator
    if np.ndim(x) == 0 and np.ndim(k) == 0 and np.ndim(phi) == 0:
        x, k, phi = float(x), float(k), float(phi)
        if not x > 0:
            raise ValueError("wavefunction is evaluated only for x > 0")
        if not (k > 0 and math.isfinite(k)):
            raise ValueError("wavenumber k must be finite and > 0")
        two_kx = 2.0 * k * x
        return 2.0 * (1.0 + math.cos(two_kx) * math.cos(phi)
                      - bloch_component * math.sin(two_kx) * math.sin(phi))
    x = _check_x(x)
    k = _check_k(k)
    two_kx = 2.0 * k * x
    val = 2.0 * (1.0 + np.cos(two_kx) * np.cos(phi)
                 - bloch_component * np.sin(two_kx) * np.sin(phi))
    return _scalar(val)


def odd_intensity(s: MemoryState, k, phi, x):
    """``Psi(x)^dag Psi(x)`` for the odd-wave solution; depends on ``A1 = |a1|^2 - |a2|^2``."""
    a1 = abs(s.a1) ** 2 - abs(s.a2) ** 2
    return _intensity(a1, k, phi, x)


def even_intensity(s: MemoryState, k, phi, x):
    """``Psi(x)^dag Psi(x)`` for the even-wave solution; depends on ``A2 = 2 Re(a1* a2)``."""
    a2 = 2.0 * (s.a1.conjugate() * s.a2).real
    return _intensity(a2, k, phi, x)


def intensity(parity: Parity, s: MemoryState, k, phi, x):
    if Parity(parity) is Parity.EVEN:
        return even_intensity(s, k, phi, x)
    return odd_intensity(s, k, phi, x)
