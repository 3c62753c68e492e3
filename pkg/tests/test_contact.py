import numpy as np
import pytest

from quadric_lab import lie_core as lc
from quadric_lab.contact import (
    contact_data,
    d_eta_tensor,
    expected_ricci,
    expected_ricci_count,
    nabla_xi_residual,
    normal_jacobi_on_M,
    ricci,
    ricci_gauss_oracle,
    ricci_operator,
    ricci_report,
    scalar_curvature,
    scalar_curvature_formula,
)
from quadric_lab.hypersurfaces import HypersurfaceFrame, HypersurfaceModel, build_M
from quadric_lab.quadric import vector_at_angle

ALPHAS = [0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0]


def frame_and_shape(n=4, model=None):
    return build_M(n, model or HypersurfaceModel("tube", 0.5))


# ---------------------------------------------------------------------------
# almost contact structure
# ---------------------------------------------------------------------------


class TestContactStructure:
    @pytest.mark.parametrize("model", [HypersurfaceModel("minimal"), HypersurfaceModel("tube", 1.0),
                                       HypersurfaceModel("equidistant", 0.25)], ids=lambda m: m.label)
    def test_structure_equations(self, model):
        frame, rep = build_M(5, model)
        cd = contact_data(frame, rep.matrix)
        assert max(cd.structure_residuals().values()) < 1e-12
        assert np.abs(cd.d_eta).max() < 1e-12
        assert nabla_xi_residual(frame, rep.matrix) < 1e-12

    def test_phi_is_skew(self):
        frame, _ = frame_and_shape()
        assert np.abs(frame.phi + frame.phi.T).max() < 1e-14

    def test_negative_control_identity_on_C(self):
        # A = id on C and alpha on xi: d eta = 2 omega with omega(X, Y) = g(phi X, Y)
        frame, _ = frame_and_shape()
        shape = np.eye(frame.dim)
        shape[-1, -1] = 3.0
        d = d_eta_tensor(frame, shape)
        assert np.abs(d - 2.0 * frame.phi.T).max() < 1e-12
        assert np.abs(d[:-1, :-1]).max() > 1.0  # C is not integrable

    def test_negative_control_random_non_hopf(self):
        frame, _ = frame_and_shape()
        rng = np.random.default_rng(0)
        m = rng.standard_normal((frame.dim, frame.dim))
        shape = m + m.T
        xi = np.zeros(frame.dim)
        xi[-1] = 1.0
        assert np.abs(shape @ xi - (xi @ shape @ xi) * xi).max() > 1e-3  # not Hopf
        assert np.abs(d_eta_tensor(frame, shape)).max() > 1e-3
        assert nabla_xi_residual(frame, shape) < 1e-12  # the identity itself still holds

    def test_hopf_integrable_iff_anticommuting(self):
        frame, rep = frame_and_shape()
        phi = frame.phi
        # forward: the model is Hopf with A phi + phi A = 0 and d eta vanishes on C
        assert np.abs(d_eta_tensor(frame, rep.matrix)[:-1, :-1]).max() < 1e-12
        # backward: perturb within C keeping Aξ = αξ; integrability breaks with the anticommutator
        rng = np.random.default_rng(1)
        pert = np.zeros_like(rep.matrix)
        b = rng.standard_normal((frame.dim - 1, frame.dim - 1))
        pert[:-1, :-1] = b + b.T
        shape = rep.matrix + 0.1 * pert
        anti = shape @ phi + phi @ shape
        d = d_eta_tensor(frame, shape)
        assert np.abs(anti).max() > 1e-3
        assert np.abs(d[:-1, :-1]).max() == pytest.approx(np.abs(anti[:-1, :-1]).max())


# ---------------------------------------------------------------------------
# normal Jacobi operator
# ---------------------------------------------------------------------------


class TestNormalJacobi:
    def test_block_values(self):
        frame, _ = frame_and_shape(5)
        k = normal_jacobi_on_M(frame)
        assert np.allclose(np.diag(k), [0, 0] + [-1] * 6 + [-4])

    def test_rejects_non_isotropic_normal(self):
        frame, _ = frame_and_shape(4)
        bad = HypersurfaceFrame(4, frame.tangent, vector_at_angle(4, 0.2), frame.blocks,
                                frame.reeb, frame.phi)
        with pytest.raises(lc.AlgebraError):
            normal_jacobi_on_M(bad)


# ---------------------------------------------------------------------------
# Ricci tensor and scalar curvature
# ---------------------------------------------------------------------------


class TestRicci:
    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("n", [3, 5])
    def test_spectrum_and_cluster_count(self, n, alpha):
        rr = ricci(HypersurfaceModel.from_alpha(alpha), n)
        assert rr.spectrum.residual_against(expected_ricci(n, alpha)) < 1e-9
        want = {0.0: 2, 4.0: 3}.get(alpha, 4)
        assert rr.eigenvalue_count == want == expected_ricci_count(alpha)

    def test_n3_alpha4_still_three_clusters(self):
        rr = ricci(HypersurfaceModel.from_alpha(4.0), 3)
        assert rr.spectrum.multiplicities_match(expected_ricci(3, 4.0))

    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_scalar_independent_of_alpha(self, n):
        vals = [scalar_curvature(HypersurfaceModel.from_alpha(a), n) for a in ALPHAS]
        assert max(vals) - min(vals) < 1e-9
        assert vals[0] == pytest.approx(scalar_curvature_formula(n))

    def test_scalar_values(self):
        assert [scalar_curvature_formula(n) for n in (3, 4, 5)] == [-26.0, -52.0, -86.0]

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0, 4.0])
    def test_gauss_oracle_agrees(self, alpha):
        frame, rep = build_M(4, HypersurfaceModel.from_alpha(alpha))
        diff = ricci_gauss_oracle(frame, rep.matrix) - ricci_operator(frame, rep.matrix, rep.alpha)
        assert np.abs(diff).max() < 1e-8

    def test_phi_relation(self):
        frame, rep = frame_and_shape(5)
        assert ricci_report(frame, rep.matrix, rep.alpha).phi_relation_residual < 1e-9

    def test_pseudo_einstein_only_minimal(self):
        for alpha in ALPHAS:
            rr = ricci(HypersurfaceModel.from_alpha(alpha), 4)
            assert rr.pseudo_einstein is (alpha == 0.0)
        rr = ricci(HypersurfaceModel("minimal"), 4)
        assert rr.pseudo_einstein_residual < 1e-12
