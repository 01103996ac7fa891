"""Write, read and reset a memory cell through scattering.

Every operation acts on the cell by scattering events only, so the stored
state stays pure. Reading measures three interference observables along a
short chain of known events, solves back to the pre-read amplitudes and
then undoes the chain with a restoration schedule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    STANDARD_STATE,
    Coupling,
    MemoryState,
    apply_unitary,
    fidelity_up_to_phase,
)
from .errors import ProtocolError, SchedulingError
from .readout import (
    DEFAULT_EPS_PHI,
    DEFAULT_GRID_POINTS,
    NoiseModel,
    Observables,
    bloch_rotation,
    default_grid,
    extract_A1,
    extract_A2,
    reconstruct_state,
    sample_profile,
)
from .smatrix import Parity, ScatteringEvent
from .synthesis import (
    KBounds,
    Schedule,
    schedule_product,
    state_transfer_unitary,
    synthesize_unitary,
)

RESET_ATOL = 1e-9
# odd rotation between the two even reads
READ_ROTATION_PHASE = -math.pi / 4


@dataclass
class MemoryCell:
    """A memory and the scattering events applied to it since ``initial``."""

    state: MemoryState = STANDARD_STATE
    history: list[ScatteringEvent] = field(default_factory=list)
    initial: MemoryState | None = None

    def __post_init__(self):
        if self.initial is None:
            self.initial = self.state

    def scatter(self, ev: ScatteringEvent, c: Coupling) -> MemoryState:
        self.state = apply_unitary(ev.matrix(c), self.state)
        self.history.append(ev)
        return self.state

    def run(self, sch: Schedule, c: Coupling) -> MemoryState:
        for ev in sch.events:
            self.scatter(ev, c)
        return self.state

    def replay(self, c: Coupling) -> MemoryState:
        """Recompute the current state from ``initial`` and the history."""
        return apply_unitary(schedule_product(self.history, c), self.initial)


@dataclass(frozen=True)
class ReadReport:
    observables: Observables
    reconstructed: MemoryState
    events_applied: Schedule
    restoration: Schedule


def is_reset(s: MemoryState, atol: float = RESET_ATOL) -> bool:
    return fidelity_up_to_phase(s, STANDARD_STATE) >= 1.0 - atol


def read_events(c: Coupling) -> list[ScatteringEvent]:
    """The fixed read chain: odd read, even read, odd rotation, even read.

    Read wavenumbers put the phase at -pi/2 (``|sin(phi)| = 1``); the
    rotation has phase -pi/4. Signs follow the couplings.
    """
    k_odd = 2.0 / abs(c.g3)
    k_even = abs(c.g1) / 2.0
    k_rot = 2.0 / abs(c.g3) * math.tan(abs(READ_ROTATION_PHASE) / 2.0)
    return [
        ScatteringEvent(Parity.ODD, k_odd),
        ScatteringEvent(Parity.EVEN, k_even),
        ScatteringEvent(Parity.ODD, k_rot),
        ScatteringEvent(Parity.EVEN, k_even),
    ]


def write(cell: MemoryCell, target: MemoryState, c: Coupling, b: KBounds) -> MemoryCell:
    """Write ``target`` onto a reset cell (state ``|1>`` up to phase)."""
    if not is_reset(cell.state):
        raise ProtocolError("memory is not in the standard state |1>; reset it before writing")
    U = state_transfer_unitary(cell.state, target)
    cell.run(synthesize_unitary(U, c, b), c)
    return cell


def read(cell: MemoryCell, c: Coupling, b: KBounds, noise: NoiseModel | None = None,
         grid_points: int = DEFAULT_GRID_POINTS,
         eps_phi: float = DEFAULT_EPS_PHI) -> tuple[MemoryCell, ReadReport]:
    """Read the cell non-destructively.

    Each observable refers to the state just before its own event; the
    known event unitaries map those back to the pre-read Bloch vector,
    which is obtained from a 3x3 linear solve. The cell is then returned to
    its pre-read state by a schedule synthesized for the exact inverse of
    the chain's net unitary, which is known even when intensities are noisy.
    """
    noise = noise or NoiseModel()
    rng = noise.rng()
    events = read_events(c)
    for ev in events:
        if not b.contains(ev.k):
            raise SchedulingError(
                f"read wavenumber {ev.k:.6g} ({ev.parity.value}) lies outside "
                f"[{b.k_min:.6g}, {b.k_max:.6g}]"
            )

    net = np.eye(2, dtype=complex)
    rows, values = [], []
    for i, ev in enumerate(events):
        phi = ev.phase(c)
        measured = i != 2
        if measured:
            x = default_grid(ev.k, grid_points)
            prof = sample_profile(ev.parity, cell.state, ev.k, phi, x, noise, rng)
            if ev.parity is Parity.ODD:
                values.append(extract_A1(prof, ev.k, phi, eps_phi))
                axis = 2
            else:
                values.append(extract_A2(prof, ev.k, phi, eps_phi))
                axis = 0
            rows.append(bloch_rotation(net)[axis])
        cell.scatter(ev, c)
        net = ev.matrix(c) @ net

    bloch0 = np.linalg.solve(np.array(rows), np.array(values))
    obs = Observables.from_bloch(bloch0)
    reconstructed = reconstruct_state(obs, tol=None if noise.sigma > 0 else 1e-6)

    applied = Schedule(tuple(events), net)
    restoration = synthesize_unitary(net.conj().T, c, b)
    cell.run(restoration, c)
    return cell, ReadReport(obs, reconstructed, applied, restoration)


def reset(cell: MemoryCell, c: Coupling, b: KBounds, noise: NoiseModel | None = None,
          grid_points: int = DEFAULT_GRID_POINTS) -> MemoryCell:
    """Read the cell, then scatter it from the read-off state to ``|1>``."""
    cell, report = read(cell, c, b, noise, grid_points)
    U = state_transfer_unitary(report.reconstructed, STANDARD_STATE)
    cell.run(synthesize_unitary(U, c, b), c)
    return cell
