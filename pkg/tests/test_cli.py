import json
import math

import numpy as np
import pytest

from scatmem import formats
from scatmem.cli import (
    EXIT_FILE,
    EXIT_PROTOCOL,
    EXIT_SCHEDULING,
    EXIT_USAGE,
    EXIT_VERIFICATION,
    load_config,
    main,
)
from scatmem.core import MemoryState, apply_unitary, fidelity_up_to_phase
from scatmem.synthesis import schedule_product
from scatmem.core import Coupling

R = 1 / math.sqrt(2)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_phases_output(capsys):
    code, out, _ = run(capsys, "phases", "--g1", 2, "--g3", 2, "--k", 1)
    assert code == 0
    assert out.strip() == "-1.570796326795, -1.570796326795"


def test_phases_small_angle(capsys):
    code, out, _ = run(capsys, "phases", "--g1", 2, "--k", 1e6)
    plus = float(out.split(",")[0])
    assert plus == pytest.approx(-2e-6, rel=1e-9)


def test_phases_rejects_zero_k(capsys):
    code, _, err = run(capsys, "phases", "--k", 0)
    assert code == EXIT_USAGE and "k must be > 0" in err


def test_synth_identity(capsys, tmp_path):
    out = tmp_path / "s.json"
    code, stdout, _ = run(capsys, "synth", "--unitary", "1,0,0,0,0,0,1,0", "--out", out)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["events"] == [] and doc["format_version"] == 1
    assert stdout.startswith("residual")


def test_synth_state_target(capsys, tmp_path):
    out = tmp_path / "s.json"
    assert run(capsys, "synth", "--state", "0,0,1,0", "--out", out)[0] == 0
    sch = formats.schedule_from_doc(json.loads(out.read_text()))
    P = schedule_product(sch, Coupling(2, 2))
    assert fidelity_up_to_phase(apply_unitary(P, MemoryState(1, 0)), MemoryState(0, 1)) >= 1 - 1e-12


def test_synth_residual_random_targets(capsys):
    for seed in range(100):
        code, stdout, err = run(capsys, "synth", "--haar", "--seed", seed)
        assert code == 0
        residual = float(err.split()[1])
        assert abs(residual) <= 1e-9
        assert len(json.loads(stdout)["events"]) <= 6


def test_synth_u2_input_is_rescaled(capsys):
    # sigma_1 has det -1; accepted as i sigma_1 after the boundary rescale
    code, stdout, err = run(capsys, "synth", "--unitary", "0,0,1,0,1,0,0,0")
    assert code == 0 and abs(float(err.split()[1])) < 1e-9


def test_synth_scheduling_error_exit(capsys):
    code, _, err = run(capsys, "synth", "--unitary", f"{math.cos(1)},{math.sin(1)},0,0,0,0,{math.cos(1)},{-math.sin(1)}",
                       "--k-min", 0.9, "--k-max", 1.1)
    assert code == EXIT_SCHEDULING and "feasible" in err


def test_synth_requires_one_target(capsys):
    assert run(capsys, "synth")[0] == EXIT_USAGE
    assert run(capsys, "synth", "--haar", "--state", "1,0,0,0")[0] == EXIT_USAGE


def test_reset_write_read_flow(capsys, tmp_path):
    f = tmp_path / "mem.json"
    assert run(capsys, "reset", f)[0] == 0
    assert formats.load_state(f) == MemoryState(1, 0)
    target = MemoryState(R, complex(math.cos(1.0), math.sin(1.0)) * R)
    assert run(capsys, "write", f, "--target", f"{R},0,{target.a2.real},{target.a2.imag}")[0] == 0
    stored = formats.load_state(f)
    assert fidelity_up_to_phase(stored, target) >= 1 - 1e-9
    assert stored.a1.imag == 0.0 and stored.a1.real > 0

    report = tmp_path / "r.json"
    assert run(capsys, "read", f, "--report", report)[0] == 0
    doc = json.loads(report.read_text())
    assert doc["fidelity"] == pytest.approx(1.0, abs=1e-9)
    assert len(doc["events_applied"]["events"]) == 4
    after = formats.load_state(f)
    assert fidelity_up_to_phase(after, stored) >= 1 - 1e-9
    assert abs(after.a1 - stored.a1) < 1e-9 and abs(after.a2 - stored.a2) < 1e-9

    assert run(capsys, "write", f, "--target", "0,0,1,0")[0] == EXIT_PROTOCOL
    assert run(capsys, "reset", f)[0] == 0
    assert fidelity_up_to_phase(formats.load_state(f), MemoryState(1, 0)) >= 1 - 1e-9


def test_reset_arbitrary_file(capsys, tmp_path):
    f = tmp_path / "mem.json"
    formats.save_state(f, MemoryState(0.6, -0.8j))
    assert run(capsys, "reset", f)[0] == 0
    assert fidelity_up_to_phase(formats.load_state(f), MemoryState(1, 0)) >= 1 - 1e-9


def test_bad_state_file(capsys, tmp_path):
    f = tmp_path / "mem.json"
    f.write_text(json.dumps({"format_version": 1, "a1": [1, 0], "a2": [1, 0]}))
    assert run(capsys, "read", f)[0] == EXIT_FILE
    f.write_text(json.dumps({"format_version": 99, "a1": [1, 0], "a2": [0, 0]}))
    assert run(capsys, "read", f)[0] == EXIT_FILE
    assert run(capsys, "read", tmp_path / "missing.json")[0] == EXIT_FILE


def test_state_file_round_trip(tmp_path, rng):
    from scatmem.core import random_state
    f = tmp_path / "s.json"
    for _ in range(50):
        s = random_state(rng)
        formats.save_state(f, s)
        assert formats.load_state(f) == s


def test_state_file_slightly_off_norm_is_renormalized(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"format_version": 1, "a1": [1 + 5e-10, 0], "a2": [0, 0]}))
    assert formats.load_state(f).a1 == 1.0


def test_intensity_quarter_wave(capsys):
    code, out, _ = run(capsys, "intensity", "--parity", "odd", "--k", 1, "--x-min", math.pi / 4,
                       "--x-max", math.pi / 4, "--points", 1, "--state", "1,0,0,0")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,intensity" and len(lines) == 2
    assert float(lines[1].split(",")[1]) == pytest.approx(4.0, abs=1e-14)


def test_intensity_node_is_state_independent(capsys):
    # sin 2kx = 0, cos 2kx = 1 at x = pi/k
    vals = []
    for st in ("1,0,0,0", "0,0,1,0", "1,0,0,1"):
        code, out, _ = run(capsys, "intensity", "--k", 1, "--x-min", math.pi, "--x-max", math.pi,
                           "--points", 1, "--state", st, "--g3", 3)
        vals.append(float(out.strip().splitlines()[1].split(",")[1]))
    phi = -2 * math.atan(1.5)
    assert vals == pytest.approx([2 * (1 + math.cos(phi))] * 3, abs=1e-12)


def test_intensity_csv_matches_formula(capsys, tmp_path):
    from scatmem.smatrix import even_intensity
    f = tmp_path / "m.json"
    s = MemoryState(0.6, 0.8j)
    formats.save_state(f, s)
    out = tmp_path / "p.csv"
    assert run(capsys, "intensity", "--parity", "even", "--k", 0.7, "--x-min", 0.1, "--x-max", 5,
               "--points", 33, "--state-file", f, "--out", out)[0] == 0
    prof = formats.profile_from_csv(out.read_text())
    phi = -2 * math.atan(2.0 / 1.4)
    assert np.array_equal(prof.intensity, even_intensity(s, 0.7, phi, prof.x))


@pytest.mark.parametrize("extra", [
    ["--points", 0],
    ["--x-min", 0, "--x-max", 1],
    ["--x-min", 2, "--x-max", 1],
])
def test_intensity_usage_errors(capsys, extra):
    base = {"--k": 1, "--x-min": 0.1, "--x-max": 1, "--points": 4, "--state": "1,0,0,0"}
    for i in range(0, len(extra), 2):
        base[extra[i]] = extra[i + 1]
    argv = ["intensity"] + [str(v) for kv in base.items() for v in kv]
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_verify_default_and_failure(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and json.loads(out)["passed"] is True
    code, out, err = run(capsys, "verify", "--tol", 0, "--g1", 0.5, "--g3", 3)
    assert code == EXIT_VERIFICATION and "max deviation" in err


def test_decohere_examples(capsys):
    code, out, _ = run(capsys, "decohere", "--overlap", 1, "--events", 10, "--state", "1,0,1,0")
    rows = out.strip().splitlines()
    assert code == 0 and rows[0] == "event_index,purity" and len(rows) == 11
    assert all(float(r.split(",")[1]) == pytest.approx(1.0, abs=1e-12) for r in rows[1:])

    code, out, _ = run(capsys, "decohere", "--overlap", 0.9, "--events", 20, "--state", "1,0,1,0")
    vals = [float(r.split(",")[1]) for r in out.strip().splitlines()[1:]]
    assert vals == pytest.approx([(1 + 0.81 ** n) / 2 for n in range(1, 21)], abs=1e-12)
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_decohere_rejects_large_overlap(capsys):
    assert run(capsys, "decohere", "--overlap", 1.5, "--events", 2, "--state", "1,0,0,0")[0] == EXIT_USAGE


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# couplings\ng1 = 4\ng3 = 4\nseed = 3\n")
    assert load_config(cfg) == {"g1": 4.0, "g3": 4.0, "seed": 3}
    code, out, _ = run(capsys, "phases", "--config", cfg, "--k", 2)
    assert out.strip() == "-1.570796326795, -2.651635327336"
    code, out, _ = run(capsys, "phases", "--config", cfg, "--g1", 2, "--k", 1)
    assert out.strip().split(",")[0] == "-1.570796326795"


def test_config_errors(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "phases", "--config", cfg, "--k", 1)[0] == EXIT_USAGE
    assert run(capsys, "phases", "--g1", 0, "--k", 1)[0] == EXIT_USAGE


def test_noisy_read_via_cli(capsys, tmp_path):
    f = tmp_path / "m.json"
    formats.save_state(f, MemoryState(R, 1j * R))
    code, out, _ = run(capsys, "read", f, "--noise-sigma", 0.01, "--grid-points", 1024, "--seed", 5)
    assert code == 0
    assert json.loads(out)["fidelity"] >= 0.999
    assert fidelity_up_to_phase(formats.load_state(f), MemoryState(R, 1j * R)) >= 1 - 1e-9
