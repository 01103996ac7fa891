"""Command-line interface.

Commands: phases, synth, write, read, reset, intensity, verify, decohere.

Configuration comes from built-in defaults, then an optional flat
``key = value`` file (``--config``), then command-line flags; flags win.

Exit codes:
    0  success
    2  usage error (bad arguments or configuration)
    3  protocol error (e.g. write onto a memory that is not reset)
    4  scheduling error (rotation unreachable within the k bounds)
    5  verification failure (oracle deviation above tolerance)
    6  readout error (ill-conditioned or inconsistent observables)
    7  invalid input file
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from . import formats
from .core import (
    STANDARD_STATE,
    Coupling,
    MemoryState,
    as_su2,
    canonical_phase,
    fidelity_up_to_phase,
    haar_su2,
    normalize,
)
from .decoherence import OverlapModel, purity_trace
from .errors import ProtocolError, ReadoutError, SchedulingError
from .oracle import log_grid, verify_closed_form
from .protocol import MemoryCell, read, reset, write
from .readout import NoiseModel, sample_profile
from .smatrix import Parity, ScatteringEvent, phase_shift
from .synthesis import KBounds, schedule_residual, state_transfer_unitary, synthesize_unitary

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PROTOCOL = 3
EXIT_SCHEDULING = 4
EXIT_VERIFICATION = 5
EXIT_READOUT = 6
EXIT_FILE = 7


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    g1: float = 2.0
    g3: float = 2.0
    k_min: float | None = None
    k_max: float | None = None
    eps_phi: float = 0.02
    noise_sigma: float = 0.0
    samples_per_x: int = 1
    grid_points: int = 64
    seed: int = 0

    def coupling(self) -> Coupling:
        return Coupling(self.g1, self.g3)

    def bounds(self) -> KBounds:
        default = KBounds.for_coupling(self.coupling(), self.eps_phi)
        return KBounds(
            self.k_min if self.k_min is not None else default.k_min,
            self.k_max if self.k_max is not None else default.k_max,
            self.eps_phi,
        )

    def noise(self) -> NoiseModel:
        return NoiseModel(self.noise_sigma, self.samples_per_x, self.seed)


_CONFIG_TYPES = {f.name: f for f in fields(Config)}


def _convert(key: str, raw: str):
    if key in ("samples_per_x", "grid_points", "seed"):
        return int(raw)
    return float(raw)


def load_config(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            out[key] = _convert(key, raw)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {raw!r}") from None
    return out


def resolve_config(args) -> Config:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    for key in _CONFIG_TYPES:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    cfg = replace(Config(), **values)
    try:
        cfg.coupling()
        cfg.bounds()
        cfg.noise()
    except ValueError as exc:
        raise UsageError(f"invalid configuration: {exc}") from None
    if cfg.grid_points < 1:
        raise UsageError("grid_points must be >= 1")
    return cfg


def fmt(x: float) -> str:
    return format(float(x), ".13g")


def _parse_numbers(text: str, n: int) -> list[float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected {n} comma-separated numbers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated numbers, got {len(vals)}")
    return vals


def parse_state(text: str) -> MemoryState:
    """``re1,im1,re2,im2`` -> normalized state."""
    r1, i1, r2, i2 = _parse_numbers(text, 4)
    try:
        return normalize([complex(r1, i1), complex(r2, i2)])
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def parse_unitary(text: str) -> np.ndarray:
    """Eight numbers: row-major ``re,im`` pairs of a 2x2 unitary."""
    v = _parse_numbers(text, 8)
    U = np.array([[complex(v[0], v[1]), complex(v[2], v[3])],
                  [complex(v[4], v[5]), complex(v[6], v[7])]])
    try:
        return as_su2(U)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_phases(args, cfg: Config) -> int:
    if not args.k > 0:
        raise UsageError("k must be > 0")
    c = cfg.coupling()
    plus = phase_shift(Parity.EVEN, c, args.k)
    minus = phase_shift(Parity.ODD, c, args.k)
    print(f"{fmt(plus)}, {fmt(minus)}")
    return EXIT_OK


def cmd_synth(args, cfg: Config) -> int:
    chosen = [x for x in (args.state, args.unitary) if x is not None] + ([1] if args.haar else [])
    if len(chosen) != 1:
        raise UsageError("give exactly one of --state, --unitary, --haar")
    if args.state is not None:
        U = state_transfer_unitary(STANDARD_STATE, parse_state(args.state))
    elif args.unitary is not None:
        U = parse_unitary(args.unitary)
    else:
        U = haar_su2(np.random.default_rng(cfg.seed))
    c = cfg.coupling()
    sch = synthesize_unitary(U, c, cfg.bounds())
    residual = schedule_residual(sch, c)
    _emit(formats.dumps(formats.schedule_to_doc(sch, c)), args.out)
    stream = sys.stdout if args.out else sys.stderr
    print(f"residual {fmt(residual)}", file=stream)
    return EXIT_OK


def _load_cell(path) -> MemoryCell:
    return MemoryCell(formats.load_state(path))


def cmd_write(args, cfg: Config) -> int:
    cell = _load_cell(args.state_file)
    target = parse_state(args.target)
    write(cell, target, cfg.coupling(), cfg.bounds())
    formats.save_state(args.state_file, canonical_phase(cell.state))
    return EXIT_OK


def cmd_read(args, cfg: Config) -> int:
    before = formats.load_state(args.state_file)
    cell = MemoryCell(before)
    cell, report = read(cell, cfg.coupling(), cfg.bounds(), cfg.noise(), cfg.grid_points,
                        cfg.eps_phi)
    fid = fidelity_up_to_phase(report.reconstructed, before)
    formats.save_state(args.state_file, canonical_phase(cell.state))
    _emit(formats.dumps(formats.report_to_doc(report, cfg.coupling(), fid)), args.report)
    return EXIT_OK


def cmd_reset(args, cfg: Config) -> int:
    path = Path(args.state_file)
    if not path.exists():
        formats.save_state(path, STANDARD_STATE)
        return EXIT_OK
    cell = _load_cell(path)
    reset(cell, cfg.coupling(), cfg.bounds(), cfg.noise(), cfg.grid_points)
    formats.save_state(path, canonical_phase(cell.state))
    return EXIT_OK


def _state_arg(args) -> MemoryState:
    if (args.state is None) == (args.state_file is None):
        raise UsageError("give exactly one of --state, --state-file")
    if args.state is not None:
        return parse_state(args.state)
    return formats.load_state(args.state_file)


def cmd_intensity(args, cfg: Config) -> int:
    if args.points < 1:
        raise UsageError("points must be >= 1")
    if not (0 < args.x_min <= args.x_max) or not math.isfinite(args.x_max):
        raise UsageError("x range must satisfy 0 < x_min <= x_max")
    if not args.k > 0:
        raise UsageError("k must be > 0")
    s = _state_arg(args)
    parity = Parity(args.parity)
    phi = phase_shift(parity, cfg.coupling(), args.k)
    x = np.linspace(args.x_min, args.x_max, args.points)
    _emit(formats.profile_to_csv(sample_profile(parity, s, args.k, phi, x)), args.out)
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    if args.points < 1 or not (0 < args.k_start <= args.k_stop):
        raise UsageError("need points >= 1 and 0 < k_start <= k_stop")
    rep = verify_closed_form(cfg.coupling(), log_grid(args.k_start, args.k_stop, args.points),
                             args.tol)
    _emit(formats.dumps({"format_version": formats.FORMAT_VERSION, **rep.as_dict()}), args.out)
    if not rep.passed:
        print(f"verification failed: max deviation {rep.max_deviation:.3e} at "
              f"k = {rep.worst_k:.6g} ({rep.worst_parity}) > tol {rep.tol:.1e}", file=sys.stderr)
        return EXIT_VERIFICATION
    return EXIT_OK


def cmd_decohere(args, cfg: Config) -> int:
    if args.events < 1:
        raise UsageError("events must be >= 1")
    try:
        model = OverlapModel(complex(args.overlap))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    c = cfg.coupling()
    parity = Parity(args.parity)
    if args.k is not None:
        k = args.k
    elif parity is Parity.EVEN:
        k = abs(c.g1) / 2.0
    else:
        k = 2.0 / abs(c.g3)
    if not k > 0:
        raise UsageError("k must be > 0")
    s = _state_arg(args)
    trace = purity_trace(s, [ScatteringEvent(parity, k)] * args.events, c, model)
    _emit(formats.purity_to_csv(trace), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="flat key = value configuration file")
    g.add_argument("--g1", type=float)
    g.add_argument("--g3", type=float)
    g.add_argument("--k-min", dest="k_min", type=float)
    g.add_argument("--k-max", dest="k_max", type=float)
    g.add_argument("--eps-phi", dest="eps_phi", type=float)
    g.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    g.add_argument("--samples-per-x", dest="samples_per_x", type=int)
    g.add_argument("--grid-points", dest="grid_points", type=int)
    g.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="scatmem", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", parents=[common], help="print even and odd phase shifts")
    p.add_argument("--k", type=float, required=True)
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("synth", parents=[common], help="compile a target into a schedule")
    p.add_argument("--state", help="target state re1,im1,re2,im2 (transfer from |1>)")
    p.add_argument("--unitary", help="target 2x2 unitary as 8 numbers, row-major re,im")
    p.add_argument("--haar", action="store_true", help="Haar-random target drawn from --seed")
    p.add_argument("--out", help="schedule file (default: stdout)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("write", parents=[common], help="write a state onto a reset memory")
    p.add_argument("state_file")
    p.add_argument("--target", required=True, help="re1,im1,re2,im2")
    p.set_defaults(func=cmd_write)

    p = sub.add_parser("read", parents=[common], help="read the memory non-destructively")
    p.add_argument("state_file")
    p.add_argument("--report", help="read report file (default: stdout)")
    p.set_defaults(func=cmd_read)

    p = sub.add_parser("reset", parents=[common], help="reset the memory to |1>")
    p.add_argument("state_file", help="created at |1> if it does not exist")
    p.set_defaults(func=cmd_reset)

    p = sub.add_parser("intensity", parents=[common], help="CSV intensity profile")
    p.add_argument("--parity", choices=[q.value for q in Parity], default="odd")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--x-min", dest="x_min", type=float, required=True)
    p.add_argument("--x-max", dest="x_max", type=float, required=True)
    p.add_argument("--points", type=int, default=64)
    p.add_argument("--state")
    p.add_argument("--state-file", dest="state_file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_intensity)

    p = sub.add_parser("verify", parents=[common], help="cross-check S-matrices against the oracle")
    p.add_argument("--k-start", dest="k_start", type=float, default=1e-2)
    p.add_argument("--k-stop", dest="k_stop", type=float, default=1e2)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("decohere", parents=[common], help="purity after imperfect events")
    p.add_argument("--overlap", required=True, help="overlap c, e.g. 0.9 or 0.9+0.1j")
    p.add_argument("--events", type=int, required=True)
    p.add_argument("--parity", choices=[q.value for q in Parity], default="odd")
    p.add_argument("--k", type=float)
    p.add_argument("--state")
    p.add_argument("--state-file", dest="state_file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decohere)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"scatmem {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProtocolError as exc:
        print(f"protocol error: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except SchedulingError as exc:
        print(f"scheduling error: {exc}", file=sys.stderr)
        return EXIT_SCHEDULING
    except ReadoutError as exc:
        print(f"readout error: {exc}", file=sys.stderr)
        return EXIT_READOUT
    except (formats.FormatError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"bad input file: {exc}", file=sys.stderr)
        return EXIT_FILE


if __name__ == "__main__":
    sys.exit(main())
