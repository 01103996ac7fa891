"""Purity loss from imperfectly admissible incident waves.

When the two channel out-waves of a scattering event do not coincide, the
memory becomes entangled with the departing wave and tracing the wave out
damps the memory's coherence in the eigenbasis of the event's generator
by the overlap ``c = <psi_out,2 | psi_out,1>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Coupling, MemoryState
from .smatrix import Parity, ScatteringEvent

DENSITY_ATOL = 1e-12

# columns: generator eigenvectors for eigenvalues +1, -1
_EIGENBASIS = {
    Parity.EVEN: np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0),
    Parity.ODD: np.eye(2, dtype=complex),
}


@dataclass(frozen=True)
class OverlapModel:
    c: complex = 1.0

    def __post_init__(self):
        c = complex(self.c)
        if abs(c) > 1.0 + 1e-12:
            raise ValueError(f"|overlap| must be <= 1, got {abs(c)!r}")
        object.__setattr__(self, "c", c)


def check_density(rho, atol: float = DENSITY_ATOL) -> np.ndarray:
    """Validate a 2x2 density matrix (Hermitian, unit trace, PSD)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected 2x2 density matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > atol:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}, not 1")
    if np.min(np.linalg.eigvalsh(rho)) < -atol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho


def to_density(s: MemoryState) -> np.ndarray:
    v = s.vector
    return np.outer(v, v.conj())


def imperfect_scatter(rho, ev: ScatteringEvent, c: Coupling, m: OverlapModel) -> np.ndarray:
    """Apply ``S rho S^dag`` and damp the eigenbasis coherence by ``m.c``.

    With ``m.c == 1`` this is exactly the unitary (admissible) update.
    """
    rho = np.asarray(rho, dtype=complex)
    S = ev.matrix(c)
    out = S @ rho @ S.conj().T
    if m.c == 1.0:
        return out
    V = _EIGENBASIS[ev.parity]
    eig = V.conj().T @ out @ V
    eig[0, 1] *= m.c
    eig[1, 0] *= m.c.conjugate()
    out = V @ eig @ V.conj().T
    return 0.5 * (out + out.conj().T)


def purity(rho) -> float:
    """``tr(rho^2)``."""
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def purity_trace(s: MemoryState, events, c: Coupling, m: OverlapModel) -> list[float]:
    """Purity after each event of ``events``, starting from the pure state ``s``."""
    rho = to_density(s)
    out = []
    for ev in events:
        rho = imperfect_scatter(rho, ev, c, m)
        out.append(purity(rho))
    return out
