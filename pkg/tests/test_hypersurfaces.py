import numpy as np
import pytest

from quadric_lab import lie_core as lc
from quadric_lab.hypersurfaces import (
    HypersurfaceModel,
    ModelKind,
    P_normal,
    _coords_of,
    aligned_structure,
    build_M,
    build_P,
    expected_spectrum,
    half_angle_spaces,
    heisenberg_check,
    integrate_jacobi,
    jacobi_transport_shape,
    lie_triple_check,
    ode_transport_check,
    rk4_propagator,
    shape_by_bracket,
    transport_factors,
)
from quadric_lab.quadric import (
    C0_matrix,
    J_matrix,
    Kind,
    classify_singular,
    inclusion_residual,
    real_structure_matrix,
    span_residual,
    to_coords,
)
from quadric_lab.roots import (
    ALPHA1,
    ALPHA12,
    ALPHA122,
    ALPHA2,
    build_named_subalgebras,
    cartan_subspace,
    nilradical,
    p_root_space,
    root_vector,
)

RADII = [0.25, 0.5, 1.0, 2.0]


# ---------------------------------------------------------------------------
# model parameters
# ---------------------------------------------------------------------------


class TestModelParameters:
    def test_tube_alpha_decreases_to_two(self):
        alphas = [HypersurfaceModel("tube", r).alpha for r in np.linspace(0.1, 8, 50)]
        assert all(a > b for a, b in zip(alphas, alphas[1:]))
        assert alphas[-1] == pytest.approx(2.0, abs=1e-12)
        assert alphas[-1] > 2.0

    def test_equidistant_value(self):
        assert HypersurfaceModel("equidistant", 0.5).alpha == pytest.approx(1.5232, abs=1e-4)

    def test_fixed_alphas(self):
        assert HypersurfaceModel("minimal").alpha == 0.0
        assert HypersurfaceModel("horocyclic").alpha == 2.0

    @pytest.mark.parametrize("alpha,kind", [(0.0, "minimal"), (1.0, "equidistant"),
                                            (2.0, "horocyclic"), (3.0, "tube")])
    def test_from_alpha_roundtrip(self, alpha, kind):
        m = HypersurfaceModel.from_alpha(alpha)
        assert m.kind is ModelKind(kind)
        assert m.alpha == pytest.approx(alpha, abs=1e-12)

    @pytest.mark.parametrize("args", [("tube", None), ("tube", 0.0), ("equidistant", -1.0),
                                      ("minimal", 1.0), ("tube", float("nan"))])
    def test_invalid_models(self, args):
        with pytest.raises(ValueError):
            HypersurfaceModel(*args)

    @pytest.mark.parametrize("alpha,kind", [(1.0, "minimal"), (3.0, "equidistant"),
                                            (1.0, "tube"), (-1.0, None)])
    def test_invalid_alpha(self, alpha, kind):
        with pytest.raises(ValueError):
            HypersurfaceModel.from_alpha(alpha, kind)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            HypersurfaceModel("sphere")

    def test_n_too_small(self):
        with pytest.raises(lc.AlgebraError):
            build_M(2, HypersurfaceModel("minimal"))


# ---------------------------------------------------------------------------
# bracket machinery
# ---------------------------------------------------------------------------


class TestBracketMachinery:
    def test_non_subalgebra_rejected(self):
        n = 4
        p = lc.Subspace.from_elements([lc.p_part(lc.random_element(n, np.random.default_rng(i)))
                                       for i in range(3)])
        with pytest.raises(lc.AlgebraError):
            shape_by_bracket(p, root_vector(ALPHA1, n))

    def test_heisenberg(self):
        n = 4
        assert heisenberg_check(build_named_subalgebras(n)["n1"])
        assert not heisenberg_check(nilradical(n))
        assert not heisenberg_check(cartan_subspace(n))  # abelian

    def test_heisenberg_raises_on_non_subalgebra(self):
        with pytest.raises(lc.AlgebraError):
            heisenberg_check(p_root_space(4, ALPHA2))

    def test_lie_triple_negative(self):
        n = 4
        m = p_root_space(n, ALPHA1).direct_sum(p_root_space(n, ALPHA2))
        ok, res = lie_triple_check(m)
        assert not ok and res > 1e-3

    @pytest.mark.parametrize("n", [3, 5])
    def test_lie_triple_positive(self, n):
        ok, res = lie_triple_check(p_root_space(n, ALPHA12).direct_sum(p_root_space(n, ALPHA2)))
        assert ok and res < 1e-12


# ---------------------------------------------------------------------------
# the complex hypersurface P
# ---------------------------------------------------------------------------


class TestP:
    @pytest.mark.parametrize("n", [3, 4, 7])
    def test_spectrum(self, n):
        _, rep = build_P(n)
        assert rep.spectrum.residual_against([(1.0, n - 2), (0.0, 2), (-1.0, n - 2)]) < 1e-9

    @pytest.mark.parametrize("phi", [0.0, np.pi / 4, np.pi / 2, np.pi])
    def test_all_checks(self, phi):
        _, rep = build_P(5, phi)
        failed = {k: c.residual for k, c in rep.checks.items() if not c.passed}
        assert not failed

    def test_T0_independent_of_normal(self):
        f0, _ = build_P(4, 0.0)
        f1, _ = build_P(4, 1.234)
        assert span_residual(f0.block("T0"), f1.block("T0")) < 1e-10

    def test_half_angle_at_zero_is_p_a1a2(self):
        n = 4
        t1, tm1 = half_angle_spaces(n, 0.0)
        x = _coords_of(p_root_space(n, ALPHA12))
        assert span_residual(t1, x) < 1e-14
        assert span_residual(tm1, J_matrix(n) @ x) < 1e-14

    def test_T1_moves_with_normal(self):
        f0, _ = build_P(4, 0.0)
        f1, _ = build_P(4, np.pi / 2)
        assert span_residual(f0.block("T1"), f1.block("T1")) > 0.1

    def test_normal_is_isotropic(self):
        for phi in (0.0, 0.9):
            cls = classify_singular(to_coords(P_normal(4, phi)))
            assert cls.kind is Kind.ISOTROPIC


# ---------------------------------------------------------------------------
# the Hopf family
# ---------------------------------------------------------------------------


def all_models():
    out = [HypersurfaceModel("minimal"), HypersurfaceModel("horocyclic")]
    out += [HypersurfaceModel("tube", r) for r in RADII]
    out += [HypersurfaceModel("equidistant", r) for r in RADII]
    return out


class TestHopfFamily:
    @pytest.mark.parametrize("model", all_models(), ids=lambda m: m.label)
    @pytest.mark.parametrize("n", [3, 4, 6])
    def test_checks_and_spectrum(self, n, model):
        _, rep = build_M(n, model)
        failed = {k: c.residual for k, c in rep.checks.items() if not c.passed}
        assert not failed
        assert rep.spectrum.residual_against(expected_spectrum(n, model.alpha)) < 1e-9

    def test_minimal_eigenspaces(self):
        n = 5
        frame, rep = build_M(n, HypersurfaceModel("minimal"))
        jm = J_matrix(n)
        x2 = _coords_of(p_root_space(n, ALPHA2))
        x12 = _coords_of(p_root_space(n, ALPHA12))
        assert span_residual(frame.block("T1"), x2 - jm @ x2) < 1e-10
        assert span_residual(frame.block("T1"), x12 + jm @ x12) < 1e-10
        assert span_residual(frame.block("Tm1"), x2 + jm @ x2) < 1e-10
        t0 = np.concatenate([frame.block("CQ"), frame.block("xi")], axis=1)
        a = np.stack([to_coords(root_vector(ALPHA1, n)), to_coords(root_vector(ALPHA122, n))], axis=1)
        pred = np.concatenate([a, _coords_of(p_root_space(n, ALPHA122))], axis=1)
        assert span_residual(t0, pred) < 1e-10

    def test_minimal_T1_aligned_with_quarter_turn_structure(self):
        # p_alpha2 lies in J V(C0), so T1 = {u + Ju} sits in V(C_{pi/2}) = V(J C0)
        n = 4
        frame, _ = build_M(n, HypersurfaceModel("minimal"))
        t1 = frame.block("T1")
        assert np.abs(real_structure_matrix(n, np.pi / 2) @ t1 - t1).max() < 1e-12
        phi, res = aligned_structure(t1)
        assert phi == pytest.approx(np.pi / 2) and res < 1e-12

    def test_horocyclic_eigenspaces(self):
        n = 5
        frame, _ = build_M(n, HypersurfaceModel("horocyclic"))
        x12 = _coords_of(p_root_space(n, ALPHA12))
        assert span_residual(frame.block("T1"), x12) < 1e-10
        assert np.abs(C0_matrix(n) @ x12 - x12).max() < 1e-14
        assert span_residual(frame.block("Tm1"), _coords_of(p_root_space(n, ALPHA2))) < 1e-10

    @pytest.mark.parametrize("r", RADII)
    def test_tube_mean_curvature(self, r):
        _, rep = build_M(4, HypersurfaceModel("tube", r))
        assert np.trace(rep.matrix) == pytest.approx(2 / np.tanh(2 * r), abs=1e-12)

    def test_normal_is_isotropic(self):
        for model in all_models():
            frame, _ = build_M(3, model)
            assert classify_singular(frame.normal).kind is Kind.ISOTROPIC

    def test_reeb_is_minus_J_normal(self):
        frame, _ = build_M(4, HypersurfaceModel("tube", 1.0))
        assert np.abs(frame.reeb + J_matrix(4) @ frame.normal).max() < 1e-15
        assert np.abs(frame.tangent.T @ frame.normal).max() < 1e-14

    def test_frame_orthonormal(self):
        for model in all_models():
            frame, _ = build_M(4, model)
            assert np.abs(frame.tangent.T @ frame.tangent - np.eye(7)).max() < 1e-12


# ---------------------------------------------------------------------------
# Jacobi transport and its ODE oracle
# ---------------------------------------------------------------------------


class TestJacobiTransport:
    def test_factors_satisfy_jacobi_equation(self):
        # D'' = -R D with R = 0, -1, -1 on T0, T1, Tm1 and -4 on xi
        h = 1e-5
        for kind in ("tube", "equidistant"):
            for r in (0.3, 1.1):
                d = {k: v[0] for k, v in transport_factors(kind, r).items()}
                dp = {k: (transport_factors(kind, r + h)[k][0] - transport_factors(kind, r - h)[k][0]) / (2 * h)
                      for k in d}
                for k, curv in (("T0", 0.0), ("T1", -1.0), ("Tm1", -1.0), ("xi", -4.0)):
                    assert dp[k] == pytest.approx(transport_factors(kind, r)[k][1], rel=1e-8)
                    fp = transport_factors(kind, r + h)[k][1]
                    fm = transport_factors(kind, r - h)[k][1]
                    assert (fp - fm) / (2 * h) == pytest.approx(-curv * d[k], rel=1e-6, abs=1e-8)

    def test_closed_form_alpha(self):
        for r in RADII:
            assert jacobi_transport_shape("tube", r, 4).alpha == pytest.approx(2 / np.tanh(2 * r))
            assert jacobi_transport_shape("equidistant", r, 4).alpha == pytest.approx(2 * np.tanh(2 * r))

    def test_rk4_propagator_on_rotation(self):
        gen = np.array([[0.0, 1.0], [-1.0, 0.0]])
        prop = rk4_propagator(gen, 1e-3, 1000)
        exact = np.array([[np.cos(1), np.sin(1)], [-np.sin(1), np.cos(1)]])
        assert np.abs(prop - exact).max() < 1e-12

    def test_integrate_rejects_bad_radius(self):
        with pytest.raises(ValueError):
            integrate_jacobi(np.zeros((1, 1)), np.eye(1), np.zeros((1, 1)), 0.12345, 1e-2)

    def test_integrate_scalar_hyperbolic(self):
        d, dp = integrate_jacobi(-np.eye(1), np.eye(1), np.zeros((1, 1)), 1.0, 1e-3)
        assert d[0, 0] == pytest.approx(np.cosh(1.0), rel=1e-11)
        assert dp[0, 0] == pytest.approx(np.sinh(1.0), rel=1e-11)

    @pytest.mark.parametrize("kind", ["tube", "equidistant"])
    @pytest.mark.parametrize("r", [0.25, 1.0])
    def test_ode_matches_closed_form(self, kind, r):
        res = ode_transport_check(kind, 3, r)
        assert max(res.values()) < 1e-6

    def test_transport_rejects_bad_kind(self):
        with pytest.raises(ValueError):
            transport_factors("minimal", 1.0)
        with pytest.raises(ValueError):
            transport_factors("tube", 0.0)


def test_inclusion_residual_zero_columns():
    assert inclusion_residual(np.zeros((4, 0)), np.eye(4)) == 0.0
