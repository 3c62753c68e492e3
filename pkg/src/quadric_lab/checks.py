"""Registry of verification checks.

Each check yields a :class:`CheckRecord` carrying an anchor string (which
claim it certifies), the expected and computed values, a residual and a
tolerance.  The CLI and the acceptance tests both consume these records.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import lie_core as lc
from . import quadric as qg
from .contact import (
    contact_data,
    expected_ricci,
    expected_ricci_count,
    nabla_xi_residual,
    ricci_gauss_oracle,
    ricci_report,
    scalar_curvature_formula,
)
from .hypersurfaces import (
    HypersurfaceModel,
    ModelKind,
    P_normal_space,
    build_M,
    build_P,
    expected_spectrum,
    heisenberg_check,
    lie_triple_check,
    ode_transport_check,
)
from .roots import (
    ALPHA1,
    ALPHA12,
    ALPHA122,
    ALPHA2,
    POSITIVE_ROOTS,
    an_metric,
    build_named_subalgebras,
    build_roots,
    cartan_subspace,
    dual_basis,
    g0_dimension,
    g0_space,
    iwasawa_frame,
    k0_space,
    k_root_space,
    nilradical,
    orthogonality_residual,
    p_root_space,
    root_space,
    root_vector,
)

DEFAULT_TOL = 1e-9
ODE_TOL = 1e-6
ANGLE_TOL = 1e-6
DEFAULT_NS = (3, 4, 5, 6)
DEFAULT_RS = (0.25, 0.5, 1.0, 2.0)
ODE_RADII = (0.25, 0.5, 1.0)
RICCI_ALPHAS = (0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0)


@dataclass(frozen=True)
class CheckRecord:
    anchor: str
    name: str
    n: int
    model: str
    expected: Any
    computed: Any
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)

    def sort_key(self):
        return (self.anchor, self.n, self.model, self.name)

    def to_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "name": self.name,
            "n": self.n,
            "model": self.model,
            "expected": _plain(self.expected),
            "computed": _plain(self.computed),
            "residual": _plain(self.residual),
            "tol": self.tol,
            "pass": self.passed,
        }


def _plain(x):
    """Convert numpy scalars and arrays to JSON-friendly Python objects."""
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        if not np.isfinite(v):
            return str(v)
        return 0.0 if v == 0 else v
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


@dataclass
class Collector:
    n: int
    model: str
    tol: float = DEFAULT_TOL
    records: list[CheckRecord] = field(default_factory=list)

    def add(self, anchor: str, name: str, expected, computed, residual: float,
            tol: float | None = None) -> CheckRecord:
        rec = CheckRecord(anchor, name, self.n, self.model, expected, computed,
                          float(residual), self.tol if tol is None else tol)
        self.records.append(rec)
        return rec

    def flag(self, anchor: str, name: str, expected: bool, computed: bool) -> CheckRecord:
        return self.add(anchor, name, expected, computed, 0.0 if expected == computed else 1.0)


def _spectrum_pairs(spec) -> list[list[float]]:
    return [[round(v, 12), m] for v, m in spec.pairs]


# ---------------------------------------------------------------------------
# Lie algebra and root system
# ---------------------------------------------------------------------------


def killing_oracle_residual(n: int, rng: np.random.Generator, samples: int = 5) -> float:
    """Relative gap between ``n tr(XY)`` and ``tr(ad X ad Y)`` on the full
    standard basis and a few random pairs."""
    basis = lc.so_basis(n)
    ads = np.array([lc.ad_matrix(b, basis) for b in basis])
    brute = np.einsum("aij,bji->ab", ads, ads)
    closed = np.array([[lc.killing(x, y) for y in basis] for x in basis])
    worst = float(np.abs(brute - closed).max() / max(1.0, np.abs(closed).max()))
    for _ in range(samples):
        x, y = lc.random_element(n, rng), lc.random_element(n, rng)
        bf = float(np.trace(lc.ad_matrix(x, basis) @ lc.ad_matrix(y, basis)))
        cf = lc.killing(x, y)
        worst = max(worst, abs(bf - cf) / max(1.0, abs(cf)))
    return worst


def structure_checks(n: int, seed: int = 0, tol: float = DEFAULT_TOL) -> list[CheckRecord]:
    rng = np.random.default_rng([seed, n, 1])
    c = Collector(n, "-", tol)
    A = "lie algebra"
    c.add(A, "killing_bruteforce", "n tr(XY) = tr(ad X ad Y)", "relative gap",
          killing_oracle_residual(n, rng))
    xs = [lc.random_element(n, rng) for _ in range(3)]
    jac = lc.bracket(xs[0], lc.bracket(xs[1], xs[2])) + lc.bracket(xs[1], lc.bracket(xs[2], xs[0])) \
        + lc.bracket(xs[2], lc.bracket(xs[0], xs[1]))
    c.add(A, "jacobi_identity", 0.0, float(np.abs(jac).max()), float(np.abs(jac).max()))
    gram = lc._gram(lc.so_basis(n))
    c.add(A, "b_theta_positive", "min eigenvalue > 0", float(np.linalg.eigvalsh(gram).min()),
          0.0 if np.linalg.eigvalsh(gram).min() > 0 else 1.0)

    R = "root system"
    roots = build_roots(n)
    c.add(R, "root_space_eigen", 0.0, max(r.eigen_residual() for r in roots),
          max(r.eigen_residual() for r in roots))
    mults = {str(r.label): r.multiplicity for r in roots if r.label.positive}
    exp_mults = {"a1": 1, "a2": n - 2, "a1+a2": n - 2, "a1+2a2": 1}
    c.add(R, "multiplicities", exp_mults, mults,
          max(abs(mults[k] - v) for k, v in exp_mults.items()))
    total = lc.Subspace.from_elements(
        [b for r in roots for b in r.space.basis] + list(g0_space(n).basis), n=n)
    dim_g = (n + 1) * (n + 2) // 2
    c.add(R, "dimension_audit", dim_g, total.dim,
          abs(2 * sum(exp_mults.values()) + g0_dimension(n) - dim_g) + abs(total.dim - dim_g))
    spaces = [r.space for r in roots] + [g0_space(n)]
    c.add(R, "root_spaces_orthogonal", 0.0, orthogonality_residual(spaces),
          orthogonality_residual(spaces), tol=1e-10)
    th = max(root_space(n, -lab).span_residual(root_space(n, lab).map(lc.cartan_theta))
             for lab in POSITIVE_ROOTS)
    c.add(R, "theta_swaps_roots", 0.0, th, th)
    pk = max(p_root_space(n, lab).direct_sum(k_root_space(n, lab)).span_residual(
        root_space(n, lab).direct_sum(root_space(n, -lab))) for lab in POSITIVE_ROOTS)
    c.add(R, "p_plus_k_equals_pm_roots", 0.0, pk, pk)
    c.add(R, "k0_dimension", (n - 2) * (n - 3) // 2, k0_space(n).dim,
          abs(k0_space(n).dim - (n - 2) * (n - 3) // 2))

    h1, h2 = dual_basis(n)
    rv_err = 0.0
    for r in roots:
        for h in (h1, h2):
            rv_err = max(rv_err, abs(0.25 * np.trace(r.root_vector @ h) - r.label(h)))
    c.add(R, "root_vector_duality", 0.0, rv_err, rv_err)
    norms = {str(lab): 0.25 * float(np.trace(root_vector(lab, n) @ root_vector(lab, n)))
             for lab in POSITIVE_ROOTS}
    exp_norms = {"a1": 4.0, "a2": 2.0, "a1+a2": 2.0, "a1+2a2": 4.0}
    c.add(R, "root_vector_norms", exp_norms, norms, max(abs(norms[k] - v) for k, v in exp_norms.items()))
    dual = max(np.abs(2 * h1 - root_vector(ALPHA12, n)).max(), np.abs(2 * h2 - root_vector(ALPHA122, n)).max())
    c.add(R, "dual_basis_root_vectors", 0.0, float(dual), float(dual))
    gm = abs(qg.g_metric(root_vector(ALPHA1, n), root_vector(ALPHA1, n)) - 4.0)
    c.add(R, "g_norm_H_alpha1", 4.0, qg.g_metric(root_vector(ALPHA1, n), root_vector(ALPHA1, n)), gm)

    I = "iwasawa"
    fr = iwasawa_frame(n)
    c.add(I, "a_abelian", 0.0, fr.abelian_residual(), fr.abelian_residual())
    lcs = fr.lower_central_dims()
    c.flag(I, "n_nilpotent", True, lcs[-1] == 0)
    vals = [an_metric(h1, h1), an_metric(h2, h2)]
    c.add(I, "an_metric_dual_basis", [0.5, 1.0], vals, max(abs(vals[0] - 0.5), abs(vals[1] - 1.0)))
    nn = nilradical(n)
    iso = 0.0
    for _ in range(10):
        xh = np.einsum("a,aij->ij", rng.standard_normal(nn.dim), nn.basis)
        iso = max(iso, abs(an_metric(xh, xh) - qg.g_metric(lc.p_part(xh), lc.p_part(xh))))
    c.add(I, "an_metric_isometry", 0.0, iso, iso)
    zh = root_space(n, ALPHA1).basis[0]
    c.add(I, "minimal_normal_unit", 1.0, an_metric(zh, zh), abs(an_metric(zh, zh) - 1.0))

    S = "subalgebras"
    subs = build_named_subalgebras(n)
    closure = max(lc.closure_residual(s) for s in subs.values())
    c.add(S, "named_closed", 0.0, closure, closure, tol=1e-10)
    dims = {k: s.dim for k, s in subs.items()}
    exp_dims = {"d": 2 * n - 2, "n1": 2 * n - 3, "s1": 2 * n - 1, "h1": 2 * n - 1,
                "a1": 1, "a_up1": 1, "g1": 3}
    c.add(S, "dimensions", exp_dims, {k: dims[k] for k in exp_dims},
          max(abs(dims[k] - v) for k, v in exp_dims.items()))
    c.flag(S, "heisenberg_n1", True, heisenberg_check(subs["n1"]))
    c.flag(S, "heisenberg_d", False, heisenberg_check(subs["d"]))
    c.flag(S, "heisenberg_n", False, heisenberg_check(nilradical(n)))
    center = lc.bracket_span(subs["n1"], subs["n1"])
    cz = center.span_residual(root_space(n, ALPHA122))
    c.add(S, "n1_center", 0.0, cz, cz)
    for name in ("d", "s1", "h1"):
        c.flag(S, f"solvable_{name}", True, lc.is_solvable(subs[name]))
    lang = subs["q1"].span_residual(subs["m1"].direct_sum(subs["a1"], subs["n1"]))
    c.add(S, "langlands_q1", 0.0, lang, lang)
    k1 = subs["k1"].span_residual(k_root_space(n, ALPHA1).direct_sum(k0_space(n)))
    c.add(S, "k1_pieces", 0.0, k1, k1)

    L = "lie triple systems"
    a = cartan_subspace(n)
    h_up = lc.Subspace.from_elements([root_vector(ALPHA1, n)])
    triples = {
        "normal_space_P": P_normal_space(n),
        "C0_normal_space_P": lc.Subspace.from_elements([root_vector(ALPHA122, n)]).direct_sum(
            p_root_space(n, ALPHA122)),
        "p_a1a2_plus_p_a2": p_root_space(n, ALPHA12).direct_sum(p_root_space(n, ALPHA2)),
        "normal_space_sigma": a.direct_sum(p_root_space(n, ALPHA122), p_root_space(n, ALPHA1)),
        "a_plus_p_a1": a.direct_sum(p_root_space(n, ALPHA1)),
        "a_up_plus_p_a1": h_up.direct_sum(p_root_space(n, ALPHA1)),
    }
    for name, m in triples.items():
        ok, res = lie_triple_check(m)
        c.add(L, name, 0.0, res, res, tol=1e-10)
    c0 = qg.RealStructure(0.0)
    c0nu = P_normal_space(n).map(c0.apply)
    res = c0nu.span_residual(triples["C0_normal_space_P"])
    c.add(L, "C0_maps_normal_space", 0.0, res, res)

    B = "bracket relations"
    tsig = triples["p_a1a2_plus_p_a2"]
    target = k0_space(n).direct_sum(k_root_space(n, ALPHA1), k_root_space(n, ALPHA122))
    res = target.containment_residual(lc.bracket_span(tsig, tsig))
    c.add(B, "p_sigma_brackets_in_k", 0.0, res, res, tol=1e-10)
    rels = [
        (k0_space(n), ALPHA12, ALPHA12, "k0_p_a1a2"),
        (k_root_space(n, ALPHA1), ALPHA12, ALPHA2, "k_a1_p_a1a2"),
        (k_root_space(n, ALPHA122), ALPHA12, ALPHA2, "k_a1_2a2_p_a1a2"),
        (k0_space(n), ALPHA2, ALPHA2, "k0_p_a2"),
        (k_root_space(n, ALPHA1), ALPHA2, ALPHA12, "k_a1_p_a2"),
        (k_root_space(n, ALPHA122), ALPHA2, ALPHA12, "k_a1_2a2_p_a2"),
    ]
    for kspace, src, dst, name in rels:
        img = lc.bracket_span(kspace, p_root_space(n, src))
        res = p_root_space(n, dst).containment_residual(img)
        c.add(B, name, 0.0, res, res, tol=1e-10)
    return c.records


# ---------------------------------------------------------------------------
# quadric geometry
# ---------------------------------------------------------------------------


def geometry_checks(n: int, seed: int = 0, tol: float = DEFAULT_TOL) -> list[CheckRecord]:
    rng = np.random.default_rng([seed, n, 2])
    c = Collector(n, "-", tol)
    G = "quadric geometry"
    ric = qg.ricci_contraction(n)
    res = float(np.abs(ric + 2 * n * np.eye(2 * n)).max())
    c.add(G, "einstein_constant", -2.0 * n, float(np.trace(ric) / (2 * n)), res)

    vs = [qg.to_coords(lc.p_part(lc.random_element(n, rng))) for _ in range(3)]
    jm = qg.J_matrix(n)
    c.add(G, "J_squared", 0.0, float(np.abs(jm @ jm + np.eye(2 * n)).max()),
          float(np.abs(jm @ jm + np.eye(2 * n)).max()))
    worst = 0.0
    for phi in np.linspace(0, 2 * np.pi, 16, endpoint=False):
        cm = qg.real_structure_matrix(n, phi)
        worst = max(worst, np.abs(cm @ cm - np.eye(2 * n)).max(), np.abs(cm @ jm + jm @ cm).max(),
                    np.abs(cm.T @ cm - np.eye(2 * n)).max())
    c.add(G, "real_structures", 0.0, float(worst), float(worst))
    x, y, z = vs
    lit = [qg.curvature(qg.from_coords(x), qg.from_coords(y), qg.from_coords(z), p)
           for p in rng.uniform(0, 2 * np.pi, 5)]
    spread = max(float(np.abs(a - lit[0]).max()) for a in lit)
    c.add(G, "curvature_phi_independent", 0.0, spread, spread)
    t = qg.curvature_tensor(n)
    bianchi = t + np.einsum("xyzw->yzxw", t) + np.einsum("xyzw->zxyw", t)
    pair = t - np.einsum("xyzw->zwxy", t)
    anti = t + np.einsum("xyzw->yxzw", t)
    res = float(max(np.abs(bianchi).max(), np.abs(pair).max(), np.abs(anti).max()))
    c.add(G, "curvature_symmetries", 0.0, res, res)

    J = "jacobi spectra"
    cases = {
        "principal": (0.0, [(0.0, n), (-2.0, n)]),
        "isotropic": (np.pi / 4, [(0.0, 3), (-1.0, 2 * n - 4), (-4.0, 1)]),
        "arctan_half": (np.arctan(0.5), qg.jacobi_closed_form(n, np.arctan(0.5))),
    }
    for name, (tt, exp) in cases.items():
        rep, cls = qg.jacobi_spectrum(qg.vector_at_angle(n, tt))
        c.add(J, name, exp, _spectrum_pairs(rep), rep.residual_against(exp), tol=1e-8)
        c.add(J, f"{name}_t", tt, cls.t, abs(cls.t - tt), tol=ANGLE_TOL)
    worst = 0.0
    for tt in np.linspace(0, np.pi / 4, 20):
        rep, _ = qg.jacobi_spectrum(qg.vector_at_angle(n, tt))
        worst = max(worst, rep.residual_against(qg.jacobi_closed_form(n, tt)))
    c.add(J, "t_grid", "closed form on 20 angles", worst, worst, tol=1e-8)
    return c.records


# ---------------------------------------------------------------------------
# hypersurfaces
# ---------------------------------------------------------------------------


def P_checks(n: int, tol: float = DEFAULT_TOL) -> list[CheckRecord]:
    c = Collector(n, "P", tol)
    A = "complex hypersurface P"
    for phi in (0.0, np.pi / 4, np.pi / 2, np.pi):
        frame, rep = build_P(n, phi)
        tag = f"phi={phi:.6f}"
        for name, chk in rep.checks.items():
            exp = [[1.0, n - 2], [0.0, 2], [-1.0, n - 2]] if name == "spectrum" else 0.0
            comp = _spectrum_pairs(rep.spectrum) if name == "spectrum" else chk.residual
            c.add(A, f"{name}[{tag}]", exp, comp, chk.residual)
    return c.records


def model_checks(n: int, model: HypersurfaceModel, tol: float = DEFAULT_TOL) -> list[CheckRecord]:
    frame, rep = build_M(n, model, tol)
    c = Collector(n, model.label, tol)
    alpha = rep.alpha
    H = f"hopf hypersurface {model.kind.value}"
    for name, chk in rep.checks.items():
        if name == "spectrum":
            c.add(H, name, [[alpha, 1], [0.0, 2], [1.0, n - 2], [-1.0, n - 2]],
                  _spectrum_pairs(rep.spectrum), chk.residual)
        else:
            c.add(H, name, 0.0, chk.residual, chk.residual)
    c.add(H, "hopf_curvature", alpha, float(rep.matrix[-1, -1]), abs(rep.matrix[-1, -1] - alpha))

    K = "contact structure"
    cd = contact_data(frame, rep.matrix)
    for name, res in cd.structure_residuals().items():
        c.add(K, name, 0.0, res, res)
    c.add(K, "d_eta_vanishes", 0.0, float(np.abs(cd.d_eta).max()), float(np.abs(cd.d_eta).max()))
    c.add(K, "d_eta_from_nabla_xi", 0.0, nabla_xi_residual(frame, rep.matrix),
          nabla_xi_residual(frame, rep.matrix))

    C = "ricci curvature"
    rr = ricci_report(frame, rep.matrix, alpha)
    exp = expected_ricci(n, alpha)
    c.add(C, "ricci_spectrum", [[v, m] for v, m in exp], _spectrum_pairs(rr.spectrum),
          rr.spectrum.residual_against(exp))
    want = expected_ricci_count(alpha)
    c.add(C, "ricci_cluster_count", want, rr.eigenvalue_count, abs(rr.eigenvalue_count - want))
    c.add(C, "scalar_curvature", scalar_curvature_formula(n), rr.scalar,
          abs(rr.scalar - scalar_curvature_formula(n)))
    c.add(C, "ricci_phi_relation", 0.0, rr.phi_relation_residual, rr.phi_relation_residual)
    oracle = ricci_gauss_oracle(frame, rep.matrix)
    res = float(np.abs(oracle - rr.matrix).max())
    c.add(C, "gauss_oracle_agreement", 0.0, res, res, tol=max(tol, 1e-8))
    c.flag(C, "pseudo_einstein", abs(alpha) < 1e-12, rr.pseudo_einstein)
    return c.records


def ode_checks(n: int, kind: ModelKind, radii=ODE_RADII, tol: float = ODE_TOL) -> list[CheckRecord]:
    c = Collector(n, f"{kind.value}-ode", tol)
    O = "jacobi transport oracle"
    for r in radii:
        res = ode_transport_check(kind, n, r)
        for name, val in res.items():
            c.add(O, f"{name}[r={r:g}]", 0.0, val, val)
    return c.records


def scalar_spread_check(n: int, scalars: dict[str, float], tol: float = DEFAULT_TOL) -> CheckRecord:
    c = Collector(n, "all", tol)
    vals = list(scalars.values())
    spread = float(max(vals) - min(vals)) if vals else 0.0
    return c.add("ricci curvature", "scalar_alpha_independent", 0.0, spread, spread)


def summarize(records: list[CheckRecord]) -> dict:
    passed = sum(r.passed for r in records)
    return {"total": len(records), "passed": passed, "failed": len(records) - passed}


def expected_model_spectrum(n: int, model: HypersurfaceModel):
    return expected_spectrum(n, model.alpha)
