"""Memory states, SU(2) algebra and coupling parameters.

Units follow hbar = 2m = 1, so the scattering equation reads
``-psi'' + V psi = k**2 psi``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NormalizationError, NotUnitaryError

SIGMA0 = np.eye(2, dtype=complex)
SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA1, SIGMA2, SIGMA3)

NORM_ATOL = 1e-10
UNITARY_ATOL = 1e-9
# below this |a1| the canonical representative fixes the phase of a2 instead
CANONICAL_EPS = 1e-12


@dataclass(frozen=True)
class MemoryState:
    """Normalized two-channel memory content ``a1|1> + a2|2>``.

    Construction checks the norm; use :func:`normalize` for raw vectors.
    """

    a1: complex
    a2: complex

    def __post_init__(self):
        a1, a2 = complex(self.a1), complex(self.a2)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        norm2 = abs(a1) ** 2 + abs(a2) ** 2
        if not math.isfinite(norm2) or abs(norm2 - 1.0) > NORM_ATOL:
            raise NormalizationError(
                f"memory state must have unit norm, got |a|^2 = {norm2!r}"
            )

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a1, self.a2], dtype=complex)

    @classmethod
    def from_vector(cls, v) -> MemoryState:
        return cls(complex(v[0]), complex(v[1]))

    def norm(self) -> float:
        return math.sqrt(abs(self.a1) ** 2 + abs(self.a2) ** 2)


STANDARD_STATE = MemoryState(1.0, 0.0)


@dataclass(frozen=True)
class Coupling:
    """Strengths of the two point-interaction terms.

    ``g1`` multiplies ``delta(x) delta(x') sigma_1`` (inverse length) and
    ``g3`` multiplies ``delta'_p(x) delta'_p(x') sigma_3`` (length). Both
    must be nonzero.
    """

    g1: float
    g3: float

    def __post_init__(self):
        for name in ("g1", "g3"):
            value = float(getattr(self, name))
            if value == 0.0 or not math.isfinite(value):
                raise ValueError(f"{name} must be finite and nonzero, got {value!r}")
            object.__setattr__(self, name, value)


def normalize(raw) -> MemoryState:
    """Scale a nonzero complex pair to unit norm."""
    v = np.asarray(raw, dtype=complex).reshape(2)
    n = float(np.linalg.norm(v))
    if not math.isfinite(n) or n == 0.0:
        raise NormalizationError(f"cannot normalize vector with norm {n!r}")
    return MemoryState.from_vector(v / n)


def canonical_phase(s: MemoryState) -> MemoryState:
    """Return the representative of ``s`` with ``a1`` real and nonnegative.

    When ``|a1| < 1e-12`` the phase of ``a2`` is fixed instead (a2 real > 0)
    and ``a1`` is rotated along with it.
    """
    if abs(s.a1) >= CANONICAL_EPS:
        ref = s.a1
    else:
        ref = s.a2
    phase = cmath.exp(-1j * cmath.phase(ref))
    a1 = s.a1 * phase
    a2 = s.a2 * phase
    if abs(s.a1) >= CANONICAL_EPS:
        a1 = complex(abs(s.a1), 0.0)
    else:
        a2 = complex(abs(s.a2), 0.0)
    return MemoryState(a1, a2)


def check_unitary(U, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Validate a 2x2 unitary and return it as a complex array."""
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise NotUnitaryError(f"expected a 2x2 matrix, got shape {U.shape}")
    if not np.all(np.isfinite(U)):
        raise NotUnitaryError("matrix has non-finite entries")
    dev = np.max(np.abs(U.conj().T @ U - SIGMA0))
    if dev > atol:
        raise NotUnitaryError(f"matrix is not unitary (max |U^dag U - I| = {dev:.3e})")
    return U


def as_su2(U, atol: float = UNITARY_ATOL) -> np.ndarray:
    """Rescale a U(2) matrix by a phase so its determinant is 1.

    The choice of square root is the principal one; the result is defined up
    to the SU(2) sign ambiguity, which every contract here tolerates.
    """
    U = check_unitary(U, atol)
    det = np.linalg.det(U)
    return U / np.sqrt(det)


def is_special_unitary(U, atol: float = 1e-12) -> bool:
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        return False
    unitary = np.max(np.abs(U.conj().T @ U - SIGMA0)) <= atol
    return bool(unitary and abs(np.linalg.det(U) - 1.0) <= atol)


def pauli_exp(sigma: np.ndarray, theta) -> np.ndarray:
    """``exp(i sigma theta) = cos(theta) I + i sin(theta) sigma`` for a Pauli matrix."""
    return math.cos(theta) * SIGMA0 + 1j * math.sin(theta) * sigma


def apply_unitary(U, s: MemoryState) -> MemoryState:
    """Return ``U s``. ``U`` must be unitary; the state is not renormalized."""
    U = check_unitary(U)
    return MemoryState.from_vector(U @ s.vector)


def inner(s: MemoryState, t: MemoryState) -> complex:
    return s.a1.conjugate() * t.a1 + s.a2.conjugate() * t.a2


def fidelity_up_to_phase(s: MemoryState, t: MemoryState) -> float:
    """``|<s|t>|``; equals 1 exactly when the states differ by a global phase."""
    return min(1.0, abs(inner(s, t)))


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    """Draw a Haar-random SU(2) matrix.

    SU(2) is the unit 3-sphere of quaternions, and the Haar measure is the
    uniform measure on it.
    """
    q = rng.standard_normal(4)
    q /= np.linalg.norm(q)
    u = complex(q[0], q[1])
    v = complex(q[2], q[3])
    return np.array([[u, v], [-v.conjugate(), u.conjugate()]])


def random_state(rng: np.random.Generator) -> MemoryState:
    """Draw a state uniformly from the Bloch sphere."""
    return normalize(rng.standard_normal(2) + 1j * rng.standard_normal(2))
