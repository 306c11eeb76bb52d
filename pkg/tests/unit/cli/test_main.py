import os
import json
import re
import numpy as np
import pytest
from click.testing import CliRunner
from src.algebra.exceptions import RepresentationError
from src.algebra.representation import build_standard_rep
from src.fields.grid import FieldGrid
from src.fields.repository import HEADER, SNAPSHOT_MAGIC, SNAPSHOT_VERSION, SnapshotRepository
from src.dynamics.initial_data import make_plane_wave
from src.lorentz.transformations import apply_to_grid, rotation
from src.cli.main import cli

FIXTURE_FOLDER = os.path.join(os.path.dirname(__file__), "../../fixtures/evolve")


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, tmp_path, *arguments):
    return runner.invoke(cli, ["--output-dir", str(tmp_path), *arguments])


def write_header_snapshot(path, shape, spacing):
    body = np.zeros(int(np.prod(shape)) * 10, dtype="<c16").tobytes()
    path.write_bytes(HEADER.pack(SNAPSHOT_MAGIC, SNAPSHOT_VERSION, *shape, spacing, 0.0) + body)
    return path


def write_config(path, **values):
    defaults = {"shape": "1,1,16", "dx": "0.0625", "dt": "0.015625", "steps": "4"}
    defaults.update(values)
    path.write_text("".join(f"{key} = {value}\n" for key, value in defaults.items()))
    return path


class TestVerify:
    def test_passes(self, runner, tmp_path):
        result = invoke(runner, tmp_path, "verify")
        assert result.exit_code == 0
        assert "PASS" in result.stdout
        assert (tmp_path / "manifest.json").exists()

    def test_exact_at_zero_tolerance(self, runner, tmp_path):
        assert invoke(runner, tmp_path, "verify", "--tolerance", "0").exit_code == 0

    def test_key_value_format(self, runner, tmp_path):
        result = invoke(runner, tmp_path, "verify", "--format", "kv")
        values = dict(re.findall(r"^(\w+)=(\S+)$", result.stdout, flags=re.MULTILINE))
        assert result.exit_code == 0
        assert values["passed"] == "1"
        assert values["span_dimension"] == "100"
        assert float(values["max_residual"]) == 0.0
        assert "kdp_trilinear" in values

    def test_broken_representation(self, runner, tmp_path, monkeypatch):
        def broken():
            raise RepresentationError("corrupted")

        monkeypatch.setattr("src.cli.main.build_standard_rep", broken)
        assert invoke(runner, tmp_path, "verify").exit_code == 1

    def test_negative_tolerance(self, runner, tmp_path):
        assert invoke(runner, tmp_path, "verify", "--tolerance", "-1").exit_code == 2


class TestEvolve:
    def test_fixture_run(self, runner, tmp_path):
        result = invoke(runner, tmp_path, "evolve", os.path.join(FIXTURE_FOLDER, "plane_wave.conf"))
        assert result.exit_code == 0
        drift = float(re.search(r"energy drift: (\S+)", result.stdout).group(1))
        assert drift <= 1e-6
        assert sorted(path.name for path in tmp_path.glob("snapshot_*.kdp")) == ["snapshot_000000.kdp", "snapshot_000050.kdp", "snapshot_000100.kdp"]
        lines = (tmp_path / "timeseries.csv").read_text().splitlines()
        assert lines[0] == "time,total_energy,div_E_residual,curl_A_residual,full_constraint_residual"
        assert len(lines) == 1 + 11
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["command"] == "evolve"
        assert len(manifest["config_hash"]) == 64

    def test_final_snapshot_is_readable(self, runner, tmp_path):
        invoke(runner, tmp_path, "evolve", os.path.join(FIXTURE_FOLDER, "plane_wave.conf"))
        grid = SnapshotRepository(tmp_path).read_snapshot("snapshot_000100.kdp")
        assert grid.shape == (1, 1, 64)
        assert grid.time == pytest.approx(100 * 0.00390625)

    def test_untracked_potentials_write_nan(self, runner, tmp_path):
        config = write_config(tmp_path / "run.conf", track_potentials="false")
        assert invoke(runner, tmp_path, "evolve", str(config)).exit_code == 0
        table = np.loadtxt(tmp_path / "timeseries.csv", delimiter=",", skiprows=1)
        assert np.all(np.isnan(table[:, 3:]))
        assert np.all(np.isfinite(table[:, :3]))

    def test_missing_config(self, runner, tmp_path):
        assert invoke(runner, tmp_path, "evolve", str(tmp_path / "absent.conf")).exit_code == 2

    def test_invalid_config(self, runner, tmp_path):
        config = write_config(tmp_path / "run.conf", polarization="0,0,1")
        assert invoke(runner, tmp_path, "evolve", str(config)).exit_code == 2

    def test_cfl_violation(self, runner, tmp_path):
        config = write_config(tmp_path / "run.conf", dt="0.05")
        assert invoke(runner, tmp_path, "evolve", str(config)).exit_code == 3

    def test_non_finite_snapshot(self, runner, tmp_path):
        data = np.zeros((1, 1, 16, 10))
        data[0, 0, 3, 0] = np.nan
        SnapshotRepository(tmp_path).write_snapshot(FieldGrid(shape=(1, 1, 16), spacing=0.0625, data=data), "start.kdp")
        config = write_config(tmp_path / "run.conf", initial="snapshot", snapshot_path="start.kdp")
        assert invoke(runner, tmp_path, "evolve", str(config)).exit_code == 4

    def test_snapshot_with_empty_lattice(self, runner, tmp_path):
        write_header_snapshot(tmp_path / "start.kdp", (0, 1, 16), 0.0625)
        config = write_config(tmp_path / "run.conf", initial="snapshot", snapshot_path="start.kdp")
        assert invoke(runner, tmp_path, "evolve", str(config)).exit_code == 2

    def test_output_dir_from_config(self, runner, tmp_path):
        config = write_config(tmp_path / "run.conf", output_dir="results")
        assert invoke(runner, tmp_path / "unused", "evolve", str(config)).exit_code == 0
        assert (tmp_path / "results" / "timeseries.csv").exists()
        assert (tmp_path / "results" / "manifest.json").exists()


class TestBell:
    def test_default_angles(self, runner, tmp_path):
        result = invoke(runner, tmp_path, "bell")
        assert result.exit_code == 0
        assert "lhs = 1.500000000000, violated = 1" in result.stdout

    def test_equal_angles(self, runner, tmp_path):
        result = invoke(runner, tmp_path, "bell", "--alpha", "0d", "--beta", "0d", "--gamma", "0d")
        assert result.exit_code == 0
        assert "lhs = 1.000000000000, violated = 0" in result.stdout

    def test_radians(self, runner, tmp_path):
        result = invoke(runner, tmp_path, "bell", "--alpha", "0r", "--beta", f"{np.pi / 6!r}r", "--gamma", f"{np.pi / 3!r}r")
        assert "lhs = 1.500000000000, violated = 1" in result.stdout

    def test_scan(self, runner, tmp_path):
        assert invoke(runner, tmp_path, "bell", "--scan", "4").exit_code == 0
        lines = (tmp_path / "bell_scan.csv").read_text().splitlines()
        assert lines[0] == "alpha_deg,beta_deg,gamma_deg,lhs,violated"
        assert len(lines) == 1 + 64

    def test_reruns_are_identical(self, runner, tmp_path):
        invoke(runner, tmp_path / "first", "bell", "--scan", "3")
        invoke(runner, tmp_path / "second", "bell", "--scan", "3")
        assert (tmp_path / "first" / "bell_scan.csv").read_bytes() == (tmp_path / "second" / "bell_scan.csv").read_bytes()
        hashes = [json.loads((tmp_path / run / "manifest.json").read_text())["config_hash"] for run in ("first", "second")]
        assert hashes[0] == hashes[1]

    @pytest.mark.parametrize("angle", ["30", "abc", "30x", "nand"])
    def test_malformed_angle(self, runner, tmp_path, angle):
        assert invoke(runner, tmp_path, "bell", "--alpha", angle).exit_code == 2

    def test_scan_too_small(self, runner, tmp_path):
        assert invoke(runner, tmp_path, "bell", "--scan", "1").exit_code == 2


class TestTransform:
    @pytest.fixture
    def snapshot(self, tmp_path):
        grid = make_plane_wave((0.0, 0.0, 2.0 * np.pi), (1, 0, 0), 1.0, (1, 1, 8), 0.125)
        return SnapshotRepository(tmp_path).write_snapshot(grid, "wave.kdp"), grid

    def test_rotation(self, runner, tmp_path, snapshot):
        path, grid = snapshot
        result = invoke(runner, tmp_path, "transform", str(path), str(tmp_path / "rotated.kdp"), "--kind", "rotation", "--axis", "z", "--angle", "90d")
        assert result.exit_code == 0
        rotated = SnapshotRepository(tmp_path).read_snapshot("rotated.kdp")
        expected = apply_to_grid(rotation(build_standard_rep(), "z", np.pi / 2), grid)
        np.testing.assert_allclose(rotated.data, expected.data, atol=1e-15)

    def test_boost_keeps_lattice(self, runner, tmp_path, snapshot):
        path, grid = snapshot
        result = invoke(runner, tmp_path, "transform", str(path), str(tmp_path / "boosted.kdp"), "--kind", "boost", "--axis", "0,0,1", "--rapidity", "0.5")
        assert result.exit_code == 0
        boosted = SnapshotRepository(tmp_path).read_snapshot("boosted.kdp")
        assert boosted.shape == grid.shape
        assert boosted.total_energy() == pytest.approx(np.exp(-1.0) * grid.total_energy(), rel=1e-12)

    def test_invalid_axis(self, runner, tmp_path, snapshot):
        path, _ = snapshot
        result = invoke(runner, tmp_path, "transform", str(path), str(tmp_path / "out.kdp"), "--kind", "rotation", "--axis", "1,1,0", "--angle", "10d")
        assert result.exit_code == 2

    @pytest.mark.parametrize("shape, spacing", [((0, 1, 1), 0.1), ((1, 1, 1), -0.1)])
    def test_invalid_header(self, runner, tmp_path, shape, spacing):
        path = write_header_snapshot(tmp_path / "bad.kdp", shape, spacing)
        result = invoke(runner, tmp_path, "transform", str(path), str(tmp_path / "out.kdp"), "--kind", "boost")
        assert result.exit_code == 2

    def test_corrupt_snapshot(self, runner, tmp_path):
        (tmp_path / "bad.kdp").write_bytes(b"garbage")
        result = invoke(runner, tmp_path, "transform", str(tmp_path / "bad.kdp"), str(tmp_path / "out.kdp"), "--kind", "boost")
        assert result.exit_code == 2


class TestObservables:
    def test_writes_table(self, runner, tmp_path):
        grid = make_plane_wave((0.0, 0.0, 2.0 * np.pi), (1, 0, 0), 1.0, (1, 1, 8), 0.125)
        path = SnapshotRepository(tmp_path).write_snapshot(grid, "wave.kdp")
        result = invoke(runner, tmp_path / "out", "observables", str(path))
        assert result.exit_code == 0
        table = np.loadtxt(tmp_path / "out" / "observables.csv", delimiter=",", skiprows=1)
        assert table.shape == (8, 7)
        np.testing.assert_allclose(table[:, 6], table[:, 3], atol=1e-12)
        assert json.loads((tmp_path / "out" / "manifest.json").read_text())["command"] == "observables"

    @pytest.mark.parametrize("shape, spacing", [((0, 1, 1), 0.1), ((1, 1, 1), -0.1)])
    def test_invalid_header(self, runner, tmp_path, shape, spacing):
        path = write_header_snapshot(tmp_path / "bad.kdp", shape, spacing)
        assert invoke(runner, tmp_path / "out", "observables", str(path)).exit_code == 2


class TestUsage:
    def test_unknown_command(self, runner, tmp_path):
        assert invoke(runner, tmp_path, "plot").exit_code == 2
