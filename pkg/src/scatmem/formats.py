"""On-disk formats: state, schedule and read-report JSON documents, CSV profiles.

All JSON documents carry ``format_version``; floats are written with full
``repr`` precision so a save/load round trip is exact.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .core import NORM_ATOL, Coupling, MemoryState, normalize
from .smatrix import IntensityProfile, ScatteringEvent
from .synthesis import Schedule

FORMAT_VERSION = 1
STATE_NORM_ATOL = 1e-9


class FormatError(ValueError):
    pass


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _complex(pair) -> complex:
    if not isinstance(pair, (list, tuple)) or len(pair) != 2:
        raise FormatError(f"expected [re, im], got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _check_version(doc: dict, kind: str) -> None:
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(f"unsupported {kind} format_version {doc.get('format_version')!r}")


def state_to_doc(s: MemoryState) -> dict:
    return {"format_version": FORMAT_VERSION, "a1": _pair(s.a1), "a2": _pair(s.a2)}


def state_from_doc(doc: dict) -> MemoryState:
    _check_version(doc, "state")
    try:
        a1, a2 = _complex(doc["a1"]), _complex(doc["a2"])
    except KeyError as exc:
        raise FormatError(f"state document lacks {exc}") from None
    norm = math.sqrt(abs(a1) ** 2 + abs(a2) ** 2)
    if abs(norm - 1.0) > STATE_NORM_ATOL:
        raise FormatError(f"stored state has norm {norm!r}, expected 1")
    if abs(norm - 1.0) <= NORM_ATOL:
        return MemoryState(a1, a2)
    return normalize([a1, a2])


def save_state(path, s: MemoryState) -> None:
    Path(path).write_text(dumps(state_to_doc(s)), encoding="utf-8")


def load_state(path) -> MemoryState:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not a JSON document ({exc})") from None
    return state_from_doc(doc)


def matrix_to_doc(U) -> list:
    return [[_pair(complex(z)) for z in row] for row in np.asarray(U)]


def matrix_from_doc(rows) -> np.ndarray:
    return np.array([[_complex(p) for p in row] for row in rows], dtype=complex)


def schedule_to_doc(sch: Schedule, c: Coupling) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "coupling": {"g1": c.g1, "g3": c.g3},
        "events": [
            {"parity": ev.parity.value, "k": ev.k, "phi": ev.phase(c)} for ev in sch.events
        ],
        "intended_unitary": matrix_to_doc(sch.intended_unitary),
    }


def schedule_from_doc(doc: dict) -> Schedule:
    _check_version(doc, "schedule")
    events = tuple(ScatteringEvent(e["parity"], e["k"]) for e in doc["events"])
    return Schedule(events, matrix_from_doc(doc["intended_unitary"]))


def report_to_doc(report, c: Coupling, fidelity: float | None = None) -> dict:
    obs = report.observables
    doc = {
        "format_version": FORMAT_VERSION,
        "observables": {"A1": obs.A1, "A2": obs.A2, "A3": obs.A3},
        "reconstructed": state_to_doc(report.reconstructed),
        "events_applied": schedule_to_doc(report.events_applied, c),
        "restoration": schedule_to_doc(report.restoration, c),
    }
    if fidelity is not None:
        doc["fidelity"] = fidelity
    return doc


def profile_to_csv(profile: IntensityProfile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "intensity"])
    for x, y in zip(profile.x, profile.intensity):
        w.writerow([format(float(x), ".17g"), format(float(y), ".17g")])
    return buf.getvalue()


def profile_from_csv(text: str) -> IntensityProfile:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != ["x", "intensity"]:
        raise FormatError("expected header 'x,intensity'")
    data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float).reshape(-1, 2)
    return IntensityProfile(data[:, 0], data[:, 1])


def purity_to_csv(values) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["event_index", "purity"])
    for i, p in enumerate(values, start=1):
        w.writerow([i, format(float(p), ".17g")])
    return buf.getvalue()
