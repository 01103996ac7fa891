"""Independent check of the closed-form S-matrices from the point-interaction matching conditions.

Integrating ``-psi'' + V psi = k^2 psi`` across ``x = 0`` gives

* even term ``g1 delta(x) delta(x') sigma_1``: ``psi`` is continuous and
  ``psi'(0+) - psi'(0-) = g1 sigma_1 psi(0)``;
* odd term ``g3 delta'_p(x) delta'_p(x') sigma_3``: ``psi'`` is continuous and
  ``psi(0+) - psi(0-) = -g3 sigma_3 psi'(0)``.

The odd condition uses ``psi'(0)`` as the average of the one-sided
derivatives; for parity-odd solutions both sides agree, so the one-sided
subtraction in ``delta'_p`` is unambiguous here. Scattering solutions are
built per incident channel and the outgoing amplitudes solved from the
2x2 linear matching systems. Nothing here uses the closed-form phases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SIGMA0, SIGMA1, SIGMA3, Coupling
from .errors import SolverError
from .smatrix import Parity, scattering_matrix


@dataclass(frozen=True)
class MatchingConditions:
    """Jump matrices at ``x = 0``.

    ``derivative_jump``: ``psi'(0+) - psi'(0-) = derivative_jump @ psi(0)`` (even sector).
    ``value_jump``: ``psi(0+) - psi(0-) = value_jump @ psi'(0)`` (odd sector).
    """

    derivative_jump: np.ndarray
    value_jump: np.ndarray


def derive_matching(g1: float, g3: float) -> MatchingConditions:
    """Matching conditions for couplings ``g1, g3`` (zero allowed: free continuity)."""
    return MatchingConditions(float(g1) * SIGMA1, -float(g3) * SIGMA3)


def _solve(lhs, rhs):
    if abs(np.linalg.det(lhs)) < 1e-300:
        raise SolverError("singular matching system")
    return np.linalg.solve(lhs, rhs)


def numeric_smatrix(g1: float, g3: float, k: float) -> tuple[np.ndarray, np.ndarray]:
    """S-matrices ``(S_even, S_odd)`` solved from the matching conditions.

    Even ansatz (cosine-like, free S = I):
        psi(x) = e^{-ik|x|} s + e^{ik|x|} o
    gives ``2ik (o - s) = D (s + o)``, i.e. ``(2ik - D) o = (2ik + D) s``.

    Odd ansatz (sine-like, free S = I):
        psi(x) = sgn(x) [-e^{-ik|x|} s + e^{ik|x|} o]
    gives ``psi(0+) - psi(0-) = 2 (o - s)`` and ``psi'(0) = ik (s + o)``, so
    ``(2 - ik J) o = (2 + ik J) s``.

    Solving with ``s`` running over both channels yields ``o = S s``.
    """
    if not k > 0:
        raise ValueError("k must be > 0")
    mc = derive_matching(g1, g3)
    D, J = mc.derivative_jump, mc.value_jump
    s_even = _solve(2j * k * SIGMA0 - D, 2j * k * SIGMA0 + D)
    s_odd = _solve(2.0 * SIGMA0 - 1j * k * J, 2.0 * SIGMA0 + 1j * k * J)
    return s_even, s_odd


def eigenphases(S: np.ndarray, generator: np.ndarray) -> tuple[float, float]:
    """Phases of ``S`` on the generator's +1 and -1 eigenvectors."""
    w, V = np.linalg.eigh(generator)
    plus, minus = V[:, np.argmax(w)], V[:, np.argmin(w)]
    return (float(np.angle(plus.conj() @ S @ plus)),
            float(np.angle(minus.conj() @ S @ minus)))


@dataclass(frozen=True)
class VerificationReport:
    max_deviation: float
    worst_k: float
    worst_parity: str
    tol: float
    points: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol

    def as_dict(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "worst_k": self.worst_k,
            "worst_parity": self.worst_parity,
            "tol": self.tol,
            "points": self.points,
            "passed": self.passed,
        }


def verify_closed_form(c: Coupling, k_grid, tol: float = 1e-10) -> VerificationReport:
    """Max elementwise ``|numeric - closed form|`` over a wavenumber grid."""
    ks = np.atleast_1d(np.asarray(k_grid, dtype=float))
    if ks.size == 0:
        raise ValueError("k grid is empty")
    worst = (-1.0, float("nan"), "")
    for k in ks:
        s_even, s_odd = numeric_smatrix(c.g1, c.g3, float(k))
        for parity, S in ((Parity.EVEN, s_even), (Parity.ODD, s_odd)):
            dev = float(np.max(np.abs(S - scattering_matrix(parity, c, float(k)))))
            if dev > worst[0]:
                worst = (dev, float(k), parity.value)
    return VerificationReport(worst[0], worst[1], worst[2], float(tol), int(ks.size))


def log_grid(k_min: float = 1e-2, k_max: float = 1e2, points: int = 100) -> np.ndarray:
    return np.geomspace(k_min, k_max, points)
