import numpy as np
import pytest
from src.algebra import representation
from src.algebra.exceptions import IndexOutOfRangeError, RepresentationError
from src.algebra.representation import (
    BetaRep,
    algebra_span_dimension,
    build_standard_rep,
    first_order_residual,
    saturated_span_dimension,
    sigma,
    verify_algebra,
)


def plane_wave_point(k: float, z: float, x0: float, fundamental_length: float):
    """psi and d psi / dx^mu of E = x cos(kz - k x0), H = y cos(...), A = x sin(...) / k."""
    phase = k * z - k * x0
    cos, sin = np.cos(phase), np.sin(phase)
    scale = np.sqrt(2.0)
    psi = np.zeros(10)
    psi[0] = -cos / scale
    psi[4] = cos / scale
    psi[6] = -sin / (k * fundamental_length * scale)
    d_phase = np.zeros(10)
    d_phase[0] = sin / scale
    d_phase[4] = -sin / scale
    d_phase[6] = -cos / (k * fundamental_length * scale)
    derivatives = np.outer([-k, 0.0, 0.0, k], d_phase)
    return psi, derivatives


class TestBuildStandardRep:
    def test_gamma_is_field_projector(self, rep):
        assert np.array_equal(rep.gamma, np.diag([1.0] * 6 + [0.0] * 4))

    def test_beta0_cubed_is_beta0(self, rep):
        assert np.array_equal(rep.beta[0] @ rep.beta[0] @ rep.beta[0], rep.beta[0])

    def test_beta1_cubed_is_minus_beta1(self, rep):
        assert np.array_equal(rep.beta[1] @ rep.beta[1] @ rep.beta[1], -rep.beta[1])

    def test_eta_is_diagonal_sign_matrix(self, rep):
        assert np.array_equal(rep.eta, np.diag([1.0, 1, 1, -1, -1, -1, 1, 1, 1, -1]))

    def test_contravariant_entries(self, rep):
        upper = rep.beta_upper
        assert upper[0, 0, 6] == -1j and upper[0, 6, 0] == 1j
        assert upper[1, 0, 9] == 1j and upper[1, 5, 7] == -1j
        assert upper[3, 3, 7] == 1j and upper[3, 4, 6] == -1j
        assert np.array_equal(upper[1:], -rep.beta[1:])
        # every beta swaps the field block and the potential block
        assert not np.any(upper[:, 0:6, 0:6]) and not np.any(upper[:, 6:10, 6:10])

    def test_matrices_are_read_only(self, rep):
        with pytest.raises(ValueError):
            rep.beta[0, 0, 0] = 1.0

    def test_failed_derivation_aborts(self, monkeypatch):
        standard = representation._standard_betas
        monkeypatch.setattr(representation, "_standard_betas", lambda: 2.0 * standard())
        with pytest.raises(RepresentationError):
            build_standard_rep.__wrapped__()

    def test_plane_wave_solves_first_order_equation(self, rep):
        for fundamental_length in (1.0, 7.0):
            psi, derivatives = plane_wave_point(k=2.0, z=0.3, x0=0.1, fundamental_length=fundamental_length)
            residual = first_order_residual(rep, derivatives, psi, fundamental_length)
            assert np.max(np.abs(residual)) < 1e-14

    def test_first_order_equation_detects_wrong_magnetic_field(self, rep):
        psi, derivatives = plane_wave_point(k=2.0, z=0.3, x0=0.1, fundamental_length=1.0)
        psi[4] *= -1.0
        residual = first_order_residual(rep, derivatives, psi)
        assert np.max(np.abs(residual)) > 0.1


class TestVerifyAlgebra:
    def test_standard_rep_passes(self, rep):
        report = verify_algebra(rep, 1e-12)
        assert report.passed
        assert report.max_residual <= 1e-12

    def test_standard_rep_is_exact(self, rep):
        report = verify_algebra(rep, 0.0)
        assert report.passed
        assert report.max_residual == 0.0

    def test_report_names_every_identity(self, rep):
        names = [name for name, _ in verify_algebra(rep, 1e-12).identity_breakdown]
        assert names == [
            "kdp_trilinear",
            "metric_signature",
            "gamma_idempotent",
            "gamma_anticommutator",
            "gamma_diagonal",
            "eta_definition",
            "eta_involution",
            "eta_beta0",
            "eta_anticommutes_spatial",
            "beta_tilde_definition",
            "sigma_antisymmetry",
        ]

    def test_zeroed_beta0_breaks_eta_identity(self, rep):
        beta = np.array(rep.beta)
        beta[0] = 0.0
        broken = BetaRep(beta=beta, gamma=rep.gamma, eta=rep.eta, beta_tilde=rep.beta_tilde, sigmas=rep.sigmas, metric=rep.metric)
        report = verify_algebra(broken, 1e-12, span_word_length=1)
        residuals = dict(report.identity_breakdown)
        assert not report.passed
        assert residuals["eta_definition"] > 0
        assert report.max_residual == max(residuals.values())

    def test_derived_rep_with_zeroed_beta0_fails(self, rep):
        beta = np.array(rep.beta)
        beta[0] = 0.0
        report = verify_algebra(BetaRep.from_betas(beta), 1e-12, span_word_length=1)
        assert not report.passed
        assert dict(report.identity_breakdown)["eta_anticommutes_spatial"] > 0

    def test_span_dimension_is_reported(self, rep):
        assert verify_algebra(rep, 1e-12).span_dimension == 100


class TestSigma:
    def test_diagonal_is_zero(self, rep):
        assert np.array_equal(sigma(rep, 0, 0), np.zeros((10, 10)))

    def test_sigma01_is_beta_tilde1(self, rep):
        assert np.array_equal(sigma(rep, 0, 1), rep.beta_tilde[0])

    def test_antisymmetric(self, rep):
        for mu in range(4):
            for nu in range(4):
                assert np.array_equal(sigma(rep, mu, nu), -sigma(rep, nu, mu))

    def test_sigma12_generates_z_rotation(self, rep):
        field = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0, 0, 0, 0])
        expected = np.array([-2.0, 1.0, 0.0, -5.0, 4.0, 0.0, 0, 0, 0, 0])
        assert np.array_equal(sigma(rep, 1, 2) @ field, expected)

    @pytest.mark.parametrize("mu, nu", [(4, 0), (0, -1), (1.5, 2)])
    def test_index_out_of_range(self, rep, mu, nu):
        with pytest.raises(IndexOutOfRangeError):
            sigma(rep, mu, nu)


class TestSpanDimension:
    def test_length_one_span(self, rep):
        assert algebra_span_dimension(rep, 1) == 5

    def test_saturates_at_full_matrix_algebra(self, rep):
        assert saturated_span_dimension(rep) == 100
        assert algebra_span_dimension(rep, 12) == 100

    def test_non_decreasing(self, rep):
        dimensions = [algebra_span_dimension(rep, length) for length in range(1, 13)]
        assert dimensions == sorted(dimensions)
        assert dimensions[-1] == 100

    def test_zero_representation(self):
        zero = BetaRep.from_betas(np.zeros((4, 10, 10)))
        assert algebra_span_dimension(zero, 1) == 1
        assert algebra_span_dimension(zero, 5) == 1

    def test_rejects_empty_words(self, rep):
        with pytest.raises(ValueError):
            algebra_span_dimension(rep, 0)
