import json
import math

import pytest

from kerrmich.cli import CliError, main, parse_grid, parse_n2
from kerrmich.core import HBAR, C_LIGHT


def order_band(value, decade, factor=5.0):
    return decade / factor <= value <= decade * factor


def run_cli(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


class TestFlagParsing:
    def test_n2_defaults_to_cm2(self):
        assert parse_n2("1e-17") == 1e-17 * 1e-4

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("1e-17cm2", 1e-17 * 1e-4),
            ("1e-17cm^2/W", 1e-17 * 1e-4),
            ("1e-21m2", 1e-21),
            ("1e-21 m2/W", 1e-21),
            ("0", 0.0),
        ],
    )
    def test_n2_suffixes(self, text, expected):
        assert parse_n2(text) == expected

    def test_n2_garbage(self):
        with pytest.raises(CliError):
            parse_n2("fast")

    def test_grid_parsing(self):
        g = parse_grid("tau=1e-13:1e-10:50:log")
        assert (g.parameter, g.lo, g.hi, g.points, g.spacing) == (
            "tau",
            1e-13,
            1e-10,
            50,
            "log",
        )
        assert parse_grid("eta=0.5:1:3").spacing == "linear"

    def test_grid_n2_values_carry_units(self):
        g = parse_grid("n2=1e-18:1e-16:3:log")
        assert g.lo == 1e-18 * 1e-4
        assert g.hi == 1e-16 * 1e-4

    @pytest.mark.parametrize("text", ["tau", "tau=1:2", "tau=1:2:3:4:5", "tau=a:b:3"])
    def test_grid_garbage(self, text):
        with pytest.raises(CliError):
            parse_grid(text)


class TestEstimate:
    def test_giant_regime(self, capsys):
        code, out, _ = run_cli(capsys, "estimate", "--regime", "giant-eit")
        assert code == 0
        got = json.loads(out)
        assert order_band(got["improvement"], 1e-6)
        assert order_band(got["delta_x_m"], 1e-20)
        assert order_band(got["n_photons"], 1e14)
        assert set(got) == {
            "n_photons",
            "chi",
            "k",
            "delta_x_m",
            "delta_x_linear_m",
            "improvement",
            "validity",
        }
        assert got["validity"]["small_signal"] is True

    def test_natural_regime(self, capsys):
        code, out, _ = run_cli(capsys, "estimate", "--regime", "natural")
        assert code == 0
        assert order_band(json.loads(out)["delta_x_m"], 1e-21)

    def test_explicit_linear_medium(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "estimate",
            "--wavelength", "500e-9",
            "--tau", "1e-10",
            "--area", "1e-6",
            "--power", "1e6",
            "--n2", "0",
        )
        assert code == 0
        assert json.loads(out)["improvement"] == 1.0

    def test_missing_flags(self, capsys):
        code, out, err = run_cli(capsys, "estimate", "--tau", "1e-12")
        assert code == 1
        assert out == ""
        assert err.count("\n") == 1
        assert "--wavelength" in err

    def test_invalid_value(self, capsys):
        code, _, err = run_cli(
            capsys,
            "estimate",
            "--wavelength", "500e-9",
            "--tau=-1e-12",
            "--area", "1e-6",
            "--power", "1e6",
            "--n2", "1e-2",
        )
        assert code == 1
        assert "duration" in err

    def test_regime_with_override(self, capsys):
        code, out, _ = run_cli(
            capsys, "estimate", "--regime", "giant-eit", "--eta", "0.25"
        )
        assert code == 0
        got = json.loads(out)
        # quarter efficiency doubles both resolutions, ratio unchanged
        assert order_band(got["improvement"], 1e-6)
        assert order_band(got["delta_x_m"], 2e-20)

    def test_agrees_with_one_point_sweep(self, capsys):
        code, est_out, _ = run_cli(capsys, "estimate", "--regime", "giant-eit")
        assert code == 0
        est = json.loads(est_out)
        code, sweep_out, _ = run_cli(capsys, "sweep", "--regime", "giant-eit")
        assert code == 0
        header, row = sweep_out.strip().split("\n")
        cols = dict(zip(header.split(","), [float(v) for v in row.split(",")]))
        assert cols["n_photons"] == est["n_photons"]
        assert cols["chi"] == est["chi"]
        assert cols["k_per_m"] == est["k"]
        assert cols["delta_x_m"] == est["delta_x_m"]
        assert cols["delta_x_linear_m"] == est["delta_x_linear_m"]
        assert cols["improvement"] == est["improvement"]
        for margin in (
            "margin_small_signal",
            "margin_thermal",
            "margin_dephasing",
            "margin_operating_point",
            "margin_nl_dominant",
        ):
            assert cols[margin] == est["validity"][margin]


class TestSweep:
    def test_log_grid_endpoints_echoed_exactly(self, capsys):
        code, out, _ = run_cli(
            capsys, "sweep", "--regime", "giant-eit", "--grid", "tau=1e-13:1e-10:5:log"
        )
        assert code == 0
        lines = out.strip().split("\n")
        assert len(lines) == 6
        assert lines[1].split(",")[0] == repr(1e-13)
        assert lines[-1].split(",")[0] == repr(1e-10)

    def test_malformed_grid(self, capsys):
        code, _, err = run_cli(
            capsys, "sweep", "--regime", "giant-eit", "--grid", "tau=oops"
        )
        assert code == 1
        assert "malformed grid" in err

    def test_row_cap(self, capsys):
        code, _, err = run_cli(
            capsys,
            "sweep",
            "--regime", "giant-eit",
            "--grid", "eta=0.1:1:11",
            "--max-rows", "10",
        )
        assert code == 1
        assert "cap" in err

    def test_deterministic_output(self, capsys):
        args = ("sweep", "--regime", "giant-eit", "--grid", "sigma=0:0.1:9")
        code_a, out_a, _ = run_cli(capsys, *args)
        code_b, out_b, _ = run_cli(capsys, *args)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_improvement_monotone_in_tau_at_fixed_photons(self, capsys):
        # 50 taus around the giant preset, power co-varied to pin the
        # photon number; the nonlinear advantage strengthens as tau shrinks
        taus = [1e-11 * (1e-9 / 1e-11) ** (i / 49) for i in range(50)]
        omega = 2.0 * math.pi * C_LIGHT / 500e-9
        photons = 1e6 * 1e-10 / (HBAR * omega)
        improvements = []
        for tau in taus:
            code, out, _ = run_cli(
                capsys,
                "estimate",
                "--regime", "giant-eit",
                "--tau", repr(tau),
                "--power", repr(photons * HBAR * omega / tau),
            )
            assert code == 0
            improvements.append(json.loads(out)["improvement"])
        assert all(b > a for a, b in zip(improvements, improvements[1:]))

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "sweep",
            "--regime", "giant-eit",
            "--grid", "eta=0.5:1:2",
            "--format", "json",
        )
        assert code == 0
        got = json.loads(out)
        assert len(got["rows"]) == 2
        assert got["rows"][0]["eta"] == 0.5


class TestVerify:
    def test_small_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--max-photons", "4")
        assert code == 0
        assert "PASS" in out
        assert "FAIL" not in out

    def test_impossible_tolerance(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify", "--max-photons", "4", "--tolerance", "0"
        )
        assert code == 2
        assert "FAIL" in out

    def test_vacuum_only(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--max-photons", "0")
        assert code == 0

    def test_photon_cap(self, capsys):
        code, _, err = run_cli(capsys, "verify", "--max-photons", "31")
        assert code == 1
        assert "cap" in err

    def test_deterministic_for_seed(self, capsys):
        args = ("verify", "--max-photons", "9", "--seed", "42", "--cases", "3")
        _, out_a, _ = run_cli(capsys, *args)
        _, out_b, _ = run_cli(capsys, *args)
        assert out_a == out_b

    def test_default_run_passes(self, capsys):
        code, out, _ = run_cli(capsys, "verify")
        assert code == 0
        assert "0 failed" in out

    def test_extra_cases_are_run(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--max-photons", "4", "--cases", "2")
        assert code == 0
        assert out.count("random[") == 2

    def test_dim_margin_accepted(self, capsys):
        code, _, _ = run_cli(
            capsys, "verify", "--max-photons", "4", "--dim-margin", "10"
        )
        assert code == 0


class TestRegimes:
    def test_lists_both_presets(self, capsys):
        code, out, _ = run_cli(capsys, "regimes")
        assert code == 0
        got = json.loads(out)
        names = [r["name"] for r in got["regimes"]]
        assert sorted(names) == ["giant-eit", "natural"]

    def test_giant_operating_length(self, capsys):
        _, out, _ = run_cli(capsys, "regimes")
        giant = [r for r in json.loads(out)["regimes"] if r["name"] == "giant-eit"][0]
        assert order_band(giant["report"]["arm_length_m"], 100.0)
        assert giant["report"]["notes"] == []

    def test_natural_signal_bound_and_note(self, capsys):
        _, out, _ = run_cli(capsys, "regimes")
        natural = [r for r in json.loads(out)["regimes"] if r["name"] == "natural"][0]
        assert order_band(natural["report"]["x_max_m"], 1e-10)
        assert order_band(natural["report"]["sigma_max"], 1e-8)
        assert order_band(natural["report"]["nt_max"], 1e6)
        assert len(natural["report"]["notes"]) == 1


class TestOutputFiles:
    def test_json_output_embeds_manifest(self, capsys, tmp_path):
        target = tmp_path / "estimate.json"
        code, out, _ = run_cli(
            capsys, "estimate", "--regime", "giant-eit", "--output", str(target)
        )
        assert code == 0
        assert out == ""
        got = json.loads(target.read_text())
        assert got["manifest"]["tool"] == "kerrmich"
        assert got["manifest"]["parameters"]["tau"] == 1e-10
        assert "estimate" in got["manifest"]["command"]

    def test_csv_output_gets_manifest_sidecar(self, capsys, tmp_path):
        target = tmp_path / "rows.csv"
        code, _, _ = run_cli(
            capsys,
            "sweep",
            "--regime", "giant-eit",
            "--grid", "eta=0.5:1:3",
            "--output", str(target),
        )
        assert code == 0
        manifest = json.loads((tmp_path / "rows.csv.manifest.json").read_text())
        assert manifest["seed"] == 42
        assert manifest["grids"][0]["parameter"] == "eta"
        assert target.read_text().startswith("tau_s,")

    def test_rerun_reproduces_output_bytes(self, capsys, tmp_path):
        target = tmp_path / "rows.csv"
        sidecar = tmp_path / "rows.csv.manifest.json"
        args = (
            "sweep",
            "--regime", "natural",
            "--grid", "nt=0:10:5",
            "--output", str(target),
        )
        run_cli(capsys, *args)
        first, manifest_a = target.read_bytes(), json.loads(sidecar.read_text())
        run_cli(capsys, *args)
        second, manifest_b = target.read_bytes(), json.loads(sidecar.read_text())
        assert first == second
        manifest_a.pop("timestamp")
        manifest_b.pop("timestamp")
        assert manifest_a == manifest_b


def test_no_command(capsys):
    code, _, err = run_cli(capsys)
    assert code == 1
    assert "command" in err


def test_unknown_flag(capsys):
    code, _, err = run_cli(capsys, "estimate", "--regime", "giant-eit", "--bogus")
    assert code == 1
    assert "bogus" in err
