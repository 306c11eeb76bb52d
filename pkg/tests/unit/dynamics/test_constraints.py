import numpy as np
import pytest
from src.fields.grid import FieldGrid
from src.fields.wavefunction import project_gamma
from src.dynamics import stencil
from src.dynamics.conf import EvolutionConfig
from src.dynamics.constraints import constraint_residual, dalembert_residual, matrix_constraint, physical_from_matrix
from src.dynamics.exceptions import ShapeMismatchError
from src.dynamics.initial_data import analytic_plane_wave, make_plane_wave

N = 32
DX = 1.0 / N
KZ = (0.0, 0.0, 2.0 * np.pi)


class TestConstraintResidual:
    def test_discrete_consistent_wave_satisfies_constraints(self, rep):
        grid = make_plane_wave(KZ, (1, 0, 0), 1.0, (1, 1, N), DX, discrete_consistent=True)
        report = constraint_residual(rep, grid)
        assert report.div_E_residual < 1e-12
        assert report.curl_A_residual < 1e-12
        assert report.full_constraint_residual < 1e-12

    def test_analytic_wave_has_stencil_sized_curl_residual(self, rep):
        grid = make_plane_wave(KZ, (1, 0, 0), 1.0, (1, 1, N), DX)
        report = constraint_residual(rep, grid)
        assert 0 < report.curl_A_residual < 1e-2

    def test_longitudinal_field_violates_gauss_law(self, rep):
        E = np.zeros((N, 1, 1, 3))
        E[:, 0, 0, 0] = np.sin(2.0 * np.pi * np.arange(N) * DX)
        zeros = np.zeros((N, 1, 1, 3))
        grid = FieldGrid.from_fields(E, zeros, zeros, np.zeros((N, 1, 1)), DX)
        assert constraint_residual(rep, grid).div_E_residual > 0.05

    def test_zero_state(self, rep):
        report = constraint_residual(rep, FieldGrid.zeros((4, 4, 4), 0.25, time=0.5))
        assert report.div_E_residual == 0.0
        assert report.curl_A_residual == 0.0
        assert report.full_constraint_residual == 0.0
        assert report.time == 0.5

    def test_untracked_potentials_report_only_gauss_law(self, rep):
        grid = make_plane_wave(KZ, (1, 0, 0), 1.0, (1, 1, N), DX)
        report = constraint_residual(rep, grid, track_potentials=False)
        assert report.curl_A_residual is None
        assert report.full_constraint_residual is None
        assert report.div_E_residual < 1e-12

    def test_matrix_form_maps_onto_physical_form(self, rep, rng):
        data = rng.normal(size=(4, 4, 4, 10))
        grid = FieldGrid(shape=(4, 4, 4), spacing=0.25, data=data)
        E, H, A, _ = grid.fields(fundamental_length=3.0)
        residual = matrix_constraint(rep, grid.data, 0.25, 4, 3.0)
        curl_part, div_part = physical_from_matrix(residual, 3.0)
        np.testing.assert_allclose(curl_part, H - stencil.curl(A, 0.25), atol=1e-10)
        np.testing.assert_allclose(div_part, stencil.div(E, 0.25), atol=1e-10)

    def test_matrix_form_lives_on_constraint_rows(self, rep, rng):
        residual = matrix_constraint(rep, rng.normal(size=(4, 4, 4, 10)), 0.25, 4, 1.0)
        assert not np.any(residual[..., [0, 1, 2, 6, 7, 8]])


class TestDalembertResidual:
    @pytest.fixture
    def cfg(self):
        return EvolutionConfig(dt=0.25 * DX, steps=1, dx=DX, c=1.0)

    def history(self, cfg, factory):
        return [factory(time) for time in (0.3 - cfg.dt, 0.3, 0.3 + cfg.dt)]

    def test_plane_wave_is_a_wave_solution(self, cfg):
        grids = self.history(cfg, lambda time: analytic_plane_wave(KZ, (1, 0, 0), 1.0, (1, 1, N), DX, time=time, c=1.0))
        scale = (2.0 * np.pi) ** 2 * stencil.l2_norm(project_gamma(grids[1].data), DX)
        assert dalembert_residual(grids, cfg) / scale < 1e-2

    def test_uniform_field_is_exactly_zero(self, cfg):
        data = np.zeros((2, 2, 2, 10))
        data[..., 0] = 1.0
        grids = self.history(cfg, lambda time: FieldGrid(shape=(2, 2, 2), spacing=DX, data=data, time=time))
        assert dalembert_residual(grids, cfg) == 0.0

    def test_random_states_are_not_wave_solutions(self, cfg, rng):
        grids = self.history(cfg, lambda time: FieldGrid(shape=(4, 4, 4), spacing=DX, data=rng.normal(size=(4, 4, 4, 10)), time=time))
        assert dalembert_residual(grids, cfg) > 1.0

    def test_requires_three_grids(self, cfg):
        grid = FieldGrid.zeros((2, 2, 2), DX)
        with pytest.raises(ShapeMismatchError):
            dalembert_residual([grid, grid], cfg)

    def test_requires_one_lattice(self, cfg):
        with pytest.raises(ShapeMismatchError):
            dalembert_residual([FieldGrid.zeros((2, 2, 2), DX), FieldGrid.zeros((2, 2, 4), DX), FieldGrid.zeros((2, 2, 2), DX)], cfg)
