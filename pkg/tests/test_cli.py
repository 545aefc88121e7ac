"""Command line front end: outputs, exit codes, determinism, coverage."""

import json
import subprocess
import sys

import numpy as np
import pytest

from lpgeo import cli


def run_cli(tmp_path, command, config, fmt="json", name="cfg.json"):
    cfg_path = tmp_path / name
    cfg_path.write_text(json.dumps(config))
    out_path = tmp_path / f"out.{fmt}"
    code = cli.main([command, "--config", str(cfg_path), "--out", str(out_path),
                     "--format", fmt])
    return code, out_path


def test_metric_command(tmp_path):
    config = {
        "grid": {"kind": "circle", "n": 256},
        "functions": [
            {"name": "constant", "value": 1.0},
            {"name": "cosine"},
        ],
        "p": 2.0,
    }
    code, out = run_cli(tmp_path, "metric", config)
    assert code == 0
    result = json.loads(out.read_text())
    assert result["value"] == pytest.approx(0.7071067811865476, abs=1e-10)


def test_geodesic_command_csv_anchor(tmp_path):
    config = {
        "grid": {"kind": "circle", "n": 64},
        "functions": [
            {"name": "constant", "value": 1.0},
            {"name": "constant", "value": 4.0},
        ],
        "p": 2.0,
        "t": 0.5,
    }
    code, out = run_cli(tmp_path, "geodesic", config, fmt="csv")
    assert code == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    rho = [float(r[2]) for r in rows if r[0] == "rho"]
    assert len(rho) == 64
    assert np.max(np.abs(np.array(rho) - 2.25)) < 1e-14


def test_malformed_young_label_exits_2(tmp_path, capsys):
    config = {
        "grid": {"kind": "circle", "n": 64},
        "functions": [{"name": "cosine"}, {"name": "constant", "value": 1.0}],
        "young": "exponential",
    }
    code, _ = run_cli(tmp_path, "luxemburg", config)
    assert code == 2
    assert "young" in capsys.readouterr().err


def test_unknown_builtin_exits_2(tmp_path):
    config = {"grid": {"kind": "circle", "n": 64},
              "functions": [{"name": "sawtooth"}, {"name": "cosine"}]}
    code, _ = run_cli(tmp_path, "metric", config)
    assert code == 2


def test_missing_config_file_exits_2(tmp_path):
    code = cli.main(["metric", "--config", str(tmp_path / "absent.json")])
    assert code == 2


def test_negative_tolerance_override_exits_2(tmp_path):
    config = {"tolerances": {"decay_tol": -1.0}, "functions": []}
    code, _ = run_cli(tmp_path, "metric", config)
    assert code == 2


def test_computation_error_exits_3(tmp_path, capsys):
    # a non-decaying line density violates the boundary invariant mid-run
    config = {
        "grid": {"kind": "line", "n": 2001, "half_width": 10.0},
        "functions": [
            {"name": "constant", "value": 0.5},
            {"name": "gaussian-bump"},
        ],
    }
    code, _ = run_cli(tmp_path, "metric", config)
    assert code == 3
    assert "DecayViolation" in capsys.readouterr().err


def test_inline_values_and_length_check(tmp_path):
    config = {
        "grid": {"kind": "circle", "n": 64},
        "functions": [
            {"values": [1.0] * 64},
            {"name": "cosine"},
        ],
        "p": 2.0,
    }
    code, out = run_cli(tmp_path, "metric", config)
    assert code == 0
    bad = dict(config, functions=[{"values": [1.0] * 32}, {"name": "cosine"}])
    code, _ = run_cli(tmp_path, "metric", bad, name="bad.json")
    assert code == 2


def test_luxemburg_command(tmp_path):
    config = {
        "grid": {"kind": "circle", "n": 256},
        "functions": [
            {"name": "constant", "value": 1.0},
            {"name": "constant", "value": 1.0},
        ],
        "young": "loglinear",
    }
    code, out = run_cli(tmp_path, "luxemburg", config)
    assert code == 0
    result = json.loads(out.read_text())
    assert result["norm"] == pytest.approx(0.806465994236327, abs=1e-6)
    assert result["invariance_before"] == pytest.approx(result["invariance_after"], abs=1e-7)


def test_schwarzian_command(tmp_path):
    config = {
        "grid": {"kind": "line", "n": 2001, "half_width": 10.0},
        "functions": [{"name": "gaussian-bump"}],
        "p": 2.0,
    }
    code, out = run_cli(tmp_path, "schwarzian", config)
    assert code == 0
    result = json.loads(out.read_text())
    s = np.array(result["schwarzian"], dtype=float)
    assert abs(s[1000] + 1.0) < 1e-6  # S(0) = -1 for slope 1 + exp(-x^2)
    assert result["chain_residual"] < 1e-5


def test_symplectic_command(tmp_path):
    config = {"grid": {"n": 16}, "p": 2.0, "amplitude": 0.05}
    code, out = run_cli(tmp_path, "symplectic", config)
    assert code == 0
    result = json.loads(out.read_text())
    assert result["projection_lhs"] == pytest.approx(result["projection_rhs"], abs=1e-8)
    assert result["primitive_norm"] <= 1e-10
    assert result["harmonic_gap"] <= 1e-10


def test_fisher_hyperbolic_command(tmp_path):
    config = {"generator": "gaussian"}
    code, out = run_cli(tmp_path, "fisher-hyperbolic", config)
    assert code == 0
    result = json.loads(out.read_text())
    assert result["fisher_tt"] == pytest.approx(1.0, abs=1e-6)
    assert result["fisher_ss"] == pytest.approx(2.0, abs=1e-6)


def test_embed_and_bers_and_cocycle_commands(tmp_path):
    embed_cfg = {
        "grid": {"kind": "circle", "n": 128},
        "functions": [{"name": "constant", "value": 1.0}],
        "p": 2.0,
    }
    code, out = run_cli(tmp_path, "embed", embed_cfg, name="e.json")
    assert code == 0
    result = json.loads(out.read_text())
    assert result["chart_lp_norm"] == pytest.approx(2.0, abs=1e-10)

    line_cfg = {
        "grid": {"kind": "line", "n": 2001, "half_width": 10.0},
        "functions": [{"name": "gaussian-bump", "amplitude": 0.5}],
        "p": 2.0,
    }
    code, out = run_cli(tmp_path, "embed", line_cfg, name="e2.json")
    assert code == 0
    result = json.loads(out.read_text())
    assert result["diagram_gap"] < 1e-12
    assert result["round_trip_error"] < 1e-9

    code, out = run_cli(tmp_path, "bers", line_cfg, name="b.json")
    assert code == 0
    result = json.loads(out.read_text())
    assert result["integral"] <= 1e-10
    assert result["dynamics_min_tangent"] < 1.0

    cocycle_cfg = {
        "grid": {"kind": "circle", "n": 256},
        "functions": [
            {"name": "cosine", "amplitude": 6.283185307179586},
            {"name": "sine", "amplitude": -6.283185307179586},
        ],
        "p": 2.0,
    }
    code, out = run_cli(tmp_path, "cocycle", cocycle_cfg, name="c.json")
    assert code == 0
    result = json.loads(out.read_text())
    assert result["gelfand_fuchs"] == pytest.approx(-4 * np.pi ** 3, rel=1e-6)
    assert result["group_cocycle_residual"] < 1e-6


def test_byte_identical_outputs_across_processes(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({
        "grid": {"kind": "circle", "n": 128},
        "functions": [
            {"name": "constant", "value": 1.0},
            {"name": "sine", "amplitude": 0.5, "offset": 1.5},
        ],
        "p": 3.0,
        "t": 0.25,
    }))
    outs = []
    for k in range(2):
        out_path = tmp_path / f"run{k}.csv"
        subprocess.run(
            [sys.executable, "-m", "lpgeo.cli", "geodesic", "--config", str(cfg_path),
             "--out", str(out_path), "--format", "csv"],
            check=True,
        )
        outs.append(out_path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_csv_report(tmp_path, capsys):
    code, out = run_cli(tmp_path, "verify", {}, fmt="csv")
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "key,index,value"
    assert "passed,,true" in lines
    assert any(line.startswith("checks.criterion,") for line in lines)
    stdout = capsys.readouterr().out
    assert stdout.count("[PASS]") >= 30 and "[FAIL]" not in stdout


def test_every_operation_is_reachable():
    import importlib

    required = {
        "grids": ["integrate", "derivative", "compose", "invert_monotone"],
        "densities": [
            "lp_fisher_norm", "geodesic_explicit", "dens_geodesic_residual",
            "prob_geodesic_residual", "chern_geodesic_residual",
            "flat_embed", "flat_embed_inverse", "moser_map_1d",
        ],
        "diff_line": [
            "phi_p", "phi_p_inverse", "w1p_energy", "gamma", "gamma_inverse",
            "line_fp_norm", "psi_p", "psi_p_inverse", "extended_phi_infty",
        ],
        "schwarzian": [
            "schwarz_potential", "schwarzian", "schwarzian_chain_residual",
            "lp_schwarzian", "lp_schwarzian_chain_residual", "bers_map",
            "schwarzian_preimage", "dynamics_tangent_check",
        ],
        "cocycles": [
            "log_jacobian", "bott_thurston_c", "gelfand_fuchs_omega",
            "mixed_derivative_check", "omega_lp_sphere", "virasoro_bracket",
            "group_cocycle_residual",
        ],
        "symplectic": [
            "wedge22", "lp_symplectic_norm", "l2_symplectic_inner",
            "projection_pushforward_check", "harmonic_part",
        ],
        "orlicz": [
            "luxemburg_norm", "luxemburg_first_variation",
            "orlicz_finsler_invariance", "phi_embedding",
            "orlicz_geodesic_residual", "lp_reduction_residual",
        ],
        "hyperbolic": ["fisher_matrix", "hyperbolic_check"],
    }
    mapped = set()
    for ops in cli.COMMAND_OPERATIONS.values():
        mapped.update(ops)
    for module, ops in required.items():
        mod = importlib.import_module(f"lpgeo.{module}")
        for op in ops:
            assert hasattr(mod, op), f"lpgeo.{module}.{op} missing"
            assert f"{module}.{op}" in mapped, f"{module}.{op} unreachable from the CLI"
    # and the mapping itself only names real operations
    for name in mapped:
        module, op = name.split(".")
        assert hasattr(importlib.import_module(f"lpgeo.{module}"), op)


def test_bers_writes_dynamics_when_requested(tmp_path):
    # dynamics guard for mixed-sign Schwarzian surfaces as exit 3
    cfg = {
        "grid": {"kind": "line", "n": 2001, "half_width": 10.0},
        "functions": [{"values": list(
            np.exp(0.8 * np.linspace(-10, 10, 2001) *
                   np.exp(-np.linspace(-10, 10, 2001) ** 2 / 2)) - 1.0)}],
    }
    code, _ = run_cli(tmp_path, "bers", cfg)
    assert code == 3
