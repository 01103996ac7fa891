"""Compile SU(2) targets into finite schedules of scattering events.

Even events generate ``exp(i sigma_1 phi)`` and odd events ``exp(i sigma_3 phi)``,
so a target is split into X-Z-X Euler angles and each angle is realized by
one or two events whose phases sum to it modulo 2 pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    SIGMA0,
    Coupling,
    MemoryState,
    check_unitary,
)
from .errors import NotUnitaryError, SchedulingError
from .smatrix import Parity, ScatteringEvent, phase_shift, scattering_matrix

TWO_PI = 2.0 * math.pi
DEFAULT_EPS_PHI = 0.02
# angles closer than this to 0 (mod 2 pi) are dropped
ZERO_ANGLE_ATOL = 1e-12

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)


def _k_for_phase(parity: Parity, c: Coupling, phi: float) -> float:
    t = math.tan(-phi / 2.0)
    if parity is Parity.EVEN:
        return c.g1 / (2.0 * t)
    return 2.0 / c.g3 * t


@dataclass(frozen=True)
class KBounds:
    """Allowed wavenumber range plus a phase margin kept away from 0 and +-pi."""

    k_min: float
    k_max: float
    eps_phi: float = DEFAULT_EPS_PHI

    def __post_init__(self):
        if not (0.0 < self.k_min < self.k_max) or not math.isfinite(self.k_max):
            raise ValueError(f"need 0 < k_min < k_max, got ({self.k_min}, {self.k_max})")
        if not 0.0 < self.eps_phi < math.pi / 2:
            raise ValueError(f"eps_phi must lie in (0, pi/2), got {self.eps_phi}")

    @classmethod
    def for_coupling(cls, c: Coupling, eps_phi: float = DEFAULT_EPS_PHI) -> KBounds:
        """Tightest bounds whose phase range covers ``[-pi + eps, -eps]`` in both channels."""
        ks = []
        for parity in Parity:
            g = c.g1 if parity is Parity.EVEN else c.g3
            sign = 1.0 if g > 0 else -1.0
            for phi in (-eps_phi, -math.pi + eps_phi):
                ks.append(_k_for_phase(parity, c, sign * phi))
        return cls(min(ks), max(ks), eps_phi)

    def contains(self, k: float, rtol: float = 1e-12) -> bool:
        return self.k_min * (1 - rtol) <= k <= self.k_max * (1 + rtol)

    def phase_interval(self, parity: Parity, c: Coupling) -> tuple[float, float]:
        """Closed interval of single-event phases reachable under these bounds."""
        parity = Parity(parity)
        p1 = phase_shift(parity, c, self.k_min)
        p2 = phase_shift(parity, c, self.k_max)
        lo, hi = min(p1, p2), max(p1, p2)
        g = c.g1 if parity is Parity.EVEN else c.g3
        if g > 0:
            lo, hi = max(lo, -math.pi + self.eps_phi), min(hi, -self.eps_phi)
        else:
            lo, hi = max(lo, self.eps_phi), min(hi, math.pi - self.eps_phi)
        if lo > hi:
            raise SchedulingError(
                f"no {parity.value} phase is reachable for k in "
                f"[{self.k_min}, {self.k_max}] with margin {self.eps_phi}",
                interval=None,
            )
        return lo, hi


@dataclass(frozen=True)
class Schedule:
    """Ordered scattering events; the first event scatters first."""

    events: tuple[ScatteringEvent, ...] = ()
    intended_unitary: np.ndarray = field(default_factory=lambda: SIGMA0.copy())

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)


def schedule_product(sch, c: Coupling) -> np.ndarray:
    """Net unitary of successive scatterings: ``S_n ... S_2 S_1``."""
    events = sch.events if isinstance(sch, Schedule) else sch
    U = SIGMA0.copy()
    for ev in events:
        if not isinstance(ev, ScatteringEvent):
            raise TypeError(f"not a ScatteringEvent: {ev!r}")
        U = scattering_matrix(ev.parity, c, ev.k) @ U
    return U


def _check_su2(U, atol=1e-9):
    U = check_unitary(U, atol)
    if abs(np.linalg.det(U) - 1.0) > atol:
        raise NotUnitaryError(f"expected det U = 1, got {np.linalg.det(U):.6g}")
    return U


def _zxz(V):
    # V = exp(i s3 a) exp(i s1 b) exp(i s3 g), with V = [[u, v], [-v*, u*]]:
    # u = cos(b) e^{i(a+g)}, v = i sin(b) e^{i(a-g)}
    u, v = V[0, 0], V[0, 1]
    b = math.atan2(abs(v), abs(u))
    if abs(v) < 1e-12:
        return _arg(u), 0.0, 0.0
    if abs(u) < 1e-12:
        return _arg(v) - math.pi / 2, b, 0.0
    s = _arg(u)
    d = _arg(v) - math.pi / 2
    return (s + d) / 2, b, (s - d) / 2


def _arg(z: complex) -> float:
    return math.atan2(z.imag, z.real)


def euler_xzx(U) -> tuple[float, float, float]:
    """Angles ``(alpha, beta, gamma)`` in ``[0, 2 pi)`` with

        exp(i sigma_1 alpha) exp(i sigma_3 beta) exp(i sigma_1 gamma) = +-U.

    Conjugation by the Hadamard matrix swaps sigma_1 and sigma_3, so the
    Z-X-Z angles of ``H U H`` are the X-Z-X angles of ``U``. At gimbal lock
    (beta = 0) gamma is set to 0.
    """
    U = _check_su2(U)
    a, b, g = _zxz(_HADAMARD @ U @ _HADAMARD)
    return a % TWO_PI, b % TWO_PI, g % TWO_PI


def _representative(theta: float, positive_coupling: bool) -> float:
    r = theta % TWO_PI
    if r < ZERO_ANGLE_ATOL or TWO_PI - r < ZERO_ANGLE_ATOL:
        return 0.0
    return r - TWO_PI if positive_coupling else r


def rotation_to_events(parity: Parity, theta: float, c: Coupling, b: KBounds) -> list[ScatteringEvent]:
    """Realize ``exp(i sigma theta)`` with at most two events of the given parity.

    ``theta`` is reduced to ``(-2 pi, 0]`` (positive coupling) or ``[0, 2 pi)``
    (negative coupling). One event is used if the phase fits the reachable
    interval, otherwise two equal halves.

    Raises
    ------
    SchedulingError
        If neither the angle nor its half is reachable.
    """
    parity = Parity(parity)
    g = c.g1 if parity is Parity.EVEN else c.g3
    r = _representative(float(theta), g > 0)
    if r == 0.0:
        return []
    lo, hi = b.phase_interval(parity, c)
    for n in (1, 2):
        phi = r / n
        if lo <= phi <= hi:
            k = min(max(_k_for_phase(parity, c, phi), b.k_min), b.k_max)
            return [ScatteringEvent(parity, k)] * n
    raise SchedulingError(
        f"{parity.value} rotation by {theta:.6g} rad is unreachable with at most two "
        f"events; feasible single-event phase interval is [{lo:.6g}, {hi:.6g}]",
        interval=(lo, hi),
    )


def _events_for_angle(parity, theta, c, b):
    # exp(i sigma (theta + pi)) = -exp(i sigma theta); the sign is a global
    # phase, so take whichever of theta, theta + pi needs fewer events
    best, err = None, None
    for cand in (theta, theta + math.pi):
        try:
            evs = rotation_to_events(parity, cand, c, b)
        except SchedulingError as exc:
            err = err or exc
            continue
        if best is None or len(evs) < len(best):
            best = evs
        if not evs:
            break
    if best is None:
        raise err
    return best


def synthesize_unitary(U, c: Coupling, b: KBounds) -> Schedule:
    """Schedule whose product equals ``U`` up to a sign (at most six events)."""
    U = _check_su2(U)
    alpha, beta, gamma = euler_xzx(U)
    events = []
    # rightmost factor scatters first
    events += _events_for_angle(Parity.EVEN, gamma, c, b)
    events += _events_for_angle(Parity.ODD, beta, c, b)
    events += _events_for_angle(Parity.EVEN, alpha, c, b)
    return Schedule(tuple(events), U.copy())


def _column_completion(s: MemoryState) -> np.ndarray:
    # SU(2) matrix with first column s
    return np.array([[s.a1, -s.a2.conjugate()], [s.a2, s.a1.conjugate()]])


def state_transfer_unitary(src: MemoryState, dst: MemoryState) -> np.ndarray:
    """Special unitary mapping ``src`` to ``dst`` (up to global phase)."""
    return _column_completion(dst) @ _column_completion(src).conj().T


def schedule_residual(sch: Schedule, c: Coupling) -> float:
    """``|tr(U^dag P)| - 2`` for the intended unitary ``U`` and realized product ``P``."""
    P = schedule_product(sch, c)
    return abs(np.trace(sch.intended_unitary.conj().T @ P)) - 2.0

