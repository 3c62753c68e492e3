import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadric_lab import lie_core as lc
from quadric_lab import quadric as qg
from quadric_lab.roots import ALPHA12, ALPHA122, ALPHA2, dual_basis, p_root_space, root_vector
from quadric_lab.spectrum import SpectrumReport, cluster_eigenvalues

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def unit(v):
    return v / np.linalg.norm(v)


def coords_of(space):
    return np.stack([qg.to_coords(b) for b in space.basis], axis=1)


# ---------------------------------------------------------------------------
# spectrum utilities
# ---------------------------------------------------------------------------


class TestSpectrum:
    def test_clusters_merge_round_off(self):
        clusters = cluster_eigenvalues(np.array([1.0, 1.0 + 1e-13, 0.0, -2.0]), np.eye(4))
        assert [c.multiplicity for c in clusters] == [2, 1, 1]
        assert [c.value for c in clusters] == pytest.approx([1.0, 0.0, -2.0])
        assert clusters[0].basis.shape == (4, 2)

    def test_from_matrix_and_eigenspace(self):
        rep = SpectrumReport.from_matrix(np.diag([3.0, -1.0, 3.0]))
        assert rep.pairs == [(3.0, 2), (-1.0, 1)]
        assert rep.eigenspace(3.0).shape == (3, 2)
        assert rep.residual_against([(3.0, 2), (-1.0, 1)]) == 0.0

    def test_dimension_mismatch_is_infinite(self):
        rep = SpectrumReport.from_matrix(np.diag([1.0, 2.0]))
        assert rep.residual_against([(1.0, 3)]) == np.inf

    def test_multiplicity_mismatch_detected(self):
        rep = SpectrumReport.from_matrix(np.diag([1.0, 2.0]))
        assert rep.residual_against([(1.0, 2)]) == 1.0
        assert not rep.multiplicities_match([(1.0, 2)])
        assert rep.multiplicities_match([(2.0, 1), (1.0, 1)])

    def test_asymmetric_flagged(self):
        rep = SpectrumReport.from_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
        assert rep.symmetry_residual == 1.0


# ---------------------------------------------------------------------------
# metric, complex structure, real structures
# ---------------------------------------------------------------------------


class TestMetricAndJ:
    def test_dual_basis_metric(self):
        h1, h2 = dual_basis(4)
        assert qg.g_metric(h1, h1) == pytest.approx(0.5)
        assert qg.g_metric(h1, h2) == pytest.approx(0.5)
        assert qg.g_metric(h2, h2) == pytest.approx(1.0)

    def test_frame_orthonormal(self):
        fr = qg.p_frame(3)
        gram = np.array([[qg.g_metric(a, b) for b in fr] for a in fr])
        assert np.abs(gram - np.eye(6)).max() < 1e-15

    @given(seeds)
    @settings(max_examples=30)
    def test_coords_roundtrip_and_J(self, seed):
        rng = np.random.default_rng(seed)
        x = lc.p_part(lc.random_element(5, rng))
        c = qg.to_coords(x)
        assert np.abs(qg.from_coords(c) - x).max() < 1e-14
        assert np.abs(qg.to_coords(qg.J_apply(x)) - qg.J_matrix(5) @ c).max() < 1e-13
        assert c @ c == pytest.approx(qg.g_metric(x, x))

    def test_J_is_complex_structure(self):
        x = lc.p_part(lc.random_element(4, np.random.default_rng(0)))
        assert np.abs(qg.J_apply(qg.J_apply(x)) + x).max() < 1e-14
        assert qg.g_metric(qg.J_apply(x), x) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("n", [3, 5])
    def test_J_moves_root_spaces(self, n):
        jm = qg.J_matrix(n)
        img = jm @ coords_of(p_root_space(n, ALPHA2))
        assert qg.span_residual(img, coords_of(p_root_space(n, ALPHA12))) < 1e-12
        jh = qg.to_coords(qg.J_apply(root_vector(ALPHA122, n)))
        assert qg.inclusion_residual(jh[:, None], coords_of(p_root_space(n, ALPHA122))) < 1e-12


class TestRealStructures:
    @pytest.mark.parametrize("phi", [0.0, 0.7, np.pi / 2, 2.0])
    def test_axioms(self, phi):
        cm = qg.real_structure_matrix(4, phi)
        jm = qg.J_matrix(4)
        assert np.abs(cm @ cm - np.eye(8)).max() < 1e-15
        assert np.abs(cm @ jm + jm @ cm).max() < 1e-15
        assert np.abs(cm.T @ cm - np.eye(8)).max() < 1e-15

    def test_matrix_and_coords_agree(self):
        x = lc.p_part(lc.random_element(4, np.random.default_rng(1)))
        for phi in (0.0, 1.1):
            lhs = qg.to_coords(qg.RealStructure(phi)(x))
            assert np.abs(lhs - qg.real_structure_matrix(4, phi) @ qg.to_coords(x)).max() < 1e-14

    def test_C0_fixes_first_row(self):
        v = qg.fixed_space(3, 0.0)
        assert qg.span_residual(v, np.eye(6)[:, :3]) < 1e-14

    @pytest.mark.parametrize("phi", [0.3, np.pi / 2, 2.5])
    def test_fixed_space_rotates_by_half_angle(self, phi):
        n = 4
        v0 = qg.fixed_space(n, 0.0)
        rot = np.cos(phi / 2) * v0 + np.sin(phi / 2) * qg.J_matrix(n) @ v0
        assert qg.span_residual(qg.fixed_space(n, phi), rot) < 1e-13


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------


class TestCurvature:
    def test_operator_matches_literal_formula(self):
        rng = np.random.default_rng(2)
        n = 4
        x, y, z = (lc.p_part(lc.random_element(n, rng)) for _ in range(3))
        lit = qg.to_coords(qg.curvature(x, y, z, 0.4))
        op = qg.curvature_operator(qg.to_coords(y), qg.to_coords(z), 0.4) @ qg.to_coords(x)
        assert np.abs(lit - op).max() < 1e-12

    def test_tensor_matches_operator(self):
        t = qg.curvature_tensor(3)
        rng = np.random.default_rng(3)
        x, y, z = rng.standard_normal((3, 6))
        assert np.abs(np.einsum("xyzw,x,y,z->w", t, x, y, z)
                      - qg.curvature_operator(y, z) @ x).max() < 1e-12

    @pytest.mark.parametrize("n", [3, 4])
    def test_symmetries(self, n):
        t = qg.curvature_tensor(n, 0.9)
        assert np.abs(t + np.einsum("xyzw->yxzw", t)).max() < 1e-13
        assert np.abs(t - np.einsum("xyzw->zwxy", t)).max() < 1e-13
        bianchi = t + np.einsum("xyzw->yzxw", t) + np.einsum("xyzw->zxyw", t)
        assert np.abs(bianchi).max() < 1e-13

    def test_phi_independent(self):
        assert np.abs(qg.curvature_tensor(4, 0.0) - qg.curvature_tensor(4, 1.3)).max() < 1e-13

    @pytest.mark.parametrize("n", [3, 6])
    def test_einstein(self, n):
        assert np.abs(qg.ricci_contraction(n) + 2 * n * np.eye(2 * n)).max() < 1e-12

    def test_isotropic_holomorphic_sectional_curvature(self):
        v = qg.vector_at_angle(5, np.pi / 4)
        jv = qg.J_matrix(5) @ v
        assert jv @ (qg.jacobi_matrix(v) @ jv) == pytest.approx(-4.0)

    def test_principal_holomorphic_sectional_curvature(self):
        v = qg.vector_at_angle(5, 0.0)
        jv = qg.J_matrix(5) @ v
        assert jv @ (qg.jacobi_matrix(v) @ jv) == pytest.approx(-2.0)


# ---------------------------------------------------------------------------
# singular vectors and Jacobi spectra
# ---------------------------------------------------------------------------


class TestClassification:
    def test_principal(self):
        cls = qg.classify_singular(qg.vector_at_angle(4, 0.0, phi=1.0))
        assert cls.kind is qg.Kind.PRINCIPAL
        assert cls.aligned_phi == pytest.approx(1.0, abs=1e-7)

    def test_isotropic(self):
        assert qg.classify_singular(qg.vector_at_angle(4, np.pi / 4)).kind is qg.Kind.ISOTROPIC

    @pytest.mark.parametrize("t", [0.3 - 1e-6, 0.3, 0.3 + 1e-6])
    def test_regular_angle_recovered(self, t):
        cls = qg.classify_singular(qg.vector_at_angle(5, t))
        assert cls.kind is qg.Kind.REGULAR
        assert cls.t == pytest.approx(t, abs=1e-9)

    @given(seeds, st.floats(min_value=0.0, max_value=np.pi / 4))
    @settings(max_examples=40, deadline=None)
    def test_decomposition_reconstructs(self, seed, t):
        rng = np.random.default_rng(seed)
        n = 4
        basis = qg.fixed_space(n, 0.0)
        q, _ = np.linalg.qr(rng.standard_normal((n, 2)))
        u, w = basis @ q[:, 0], basis @ q[:, 1]
        v = qg.vector_at_angle(n, t, u, w)
        cls = qg.classify_singular(v)
        assert cls.t == pytest.approx(t, abs=1e-6)
        if 1e-4 < t < np.pi / 4 - 1e-4:
            rebuilt = np.cos(cls.t) * cls.u + np.sin(cls.t) * qg.J_matrix(n) @ cls.w
            assert np.abs(rebuilt - v).max() < 1e-6

    def test_matrix_input_accepted(self):
        x = qg.from_coords(qg.vector_at_angle(3, 0.2))
        assert qg.classify_singular(x).t == pytest.approx(0.2, abs=1e-9)

    def test_non_unit_rejected(self):
        with pytest.raises(lc.AlgebraError):
            qg.classify_singular(2.0 * qg.vector_at_angle(3, 0.2))

    def test_near_unit_normalized(self):
        v = (1 + 1e-8) * qg.vector_at_angle(3, 0.2)
        assert qg.classify_singular(v).t == pytest.approx(0.2, abs=1e-8)

    def test_non_tangent_matrix_rejected(self):
        with pytest.raises(lc.AlgebraError):
            qg.classify_singular(lc.random_element(3, np.random.default_rng(0)))


class TestJacobiSpectra:
    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_principal(self, n):
        rep, _ = qg.jacobi_spectrum(qg.vector_at_angle(n, 0.0))
        assert rep.residual_against([(0.0, n), (-2.0, n)]) < 1e-12

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_isotropic(self, n):
        rep, _ = qg.jacobi_spectrum(qg.vector_at_angle(n, np.pi / 4))
        assert rep.residual_against([(0.0, 3), (-1.0, 2 * n - 4), (-4.0, 1)]) < 1e-12

    def test_arctan_half(self):
        rep, _ = qg.jacobi_spectrum(qg.vector_at_angle(4, np.arctan(0.5)))
        assert rep.residual_against([(0.0, 2), (-0.4, 3), (-1.6, 2), (-3.6, 1)]) < 1e-12

    @given(seeds)
    @settings(max_examples=30, deadline=None)
    def test_random_unit_vector_matches_closed_form(self, seed):
        v = unit(np.random.default_rng(seed).standard_normal(8))
        rep, cls = qg.jacobi_spectrum(v)
        assert rep.flags["closed_form_residual"] < 1e-8
        assert abs(np.trace(qg.jacobi_matrix(v)) + 8) < 1e-12  # Ric(v, v) = -2n
