"""Scattering-based quantum memory.

A two-channel memory is written, read and reset purely by scattering waves
off a one-dimensional point interaction whose even and odd S-matrices are
``exp(i sigma_1 phi_even)`` and ``exp(i sigma_3 phi_odd)``.
"""
from .core import (
    SIGMA1,
    SIGMA2,
    SIGMA3,
    STANDARD_STATE,
    Coupling,
    MemoryState,
    apply_unitary,
    canonical_phase,
    fidelity_up_to_phase,
    normalize,
)
from .decoherence import OverlapModel, imperfect_scatter, purity, to_density
from .protocol import MemoryCell, ReadReport, read, reset, write
from .readout import NoiseModel, Observables, reconstruct_state
from .smatrix import Parity, ScatteringEvent, phase_shift, scattering_matrix
from .synthesis import KBounds, Schedule, schedule_product, state_transfer_unitary, synthesize_unitary

__version__ = "0.1.0"
