"""Homogeneous hypersurfaces of the complex hyperbolic quadric at the base
point: the complex hypersurface P^{n-1} and the Hopf family M_alpha.

Orbit models (P, minimal, horocyclic) get their shape operators from the
bracket formula ``A X = [zeta, X]_s`` on the solvable model ``a + n``.  The
tube around P and the equidistant hypersurfaces of the minimal one come from
solving the Jacobi equation along the normal geodesic; since the curvature
tensor is parallel, every tensor is pulled back to ``T_o`` along that geodesic
and all checks run there.

All tangent data is in the coordinates of :mod:`quadric_lab.quadric`
(columns of a ``2n x k`` matrix are g-orthonormal tangent vectors).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from enum import Enum

import numpy as np

from .lie_core import AlgebraError, Subspace, b_theta, bracket, closure_residual, norm_theta, p_part
from .quadric import (
    C0_matrix,
    J_apply,
    J_matrix,
    classify_singular,
    curvature_operator,
    inclusion_residual,
    real_structure_matrix,
    span_residual,
    to_coords,
)
from .roots import (
    ALPHA1,
    ALPHA12,
    ALPHA122,
    an_metric,
    build_named_subalgebras,
    heisenberg_profile,
    lift_to_an,
    p_root_space,
    require_n,
    root_space,
    root_vector,
)
from .spectrum import SpectrumReport

CHECK_TOL = 1e-9


class ModelKind(str, Enum):
    TUBE = "tube"
    MINIMAL = "minimal"
    EQUIDISTANT = "equidistant"
    HOROCYCLIC = "horocyclic"


@dataclass(frozen=True)
class HypersurfaceModel:
    """A member of the Hopf family; ``r`` is the radius for tube and
    equidistant hypersurfaces and ignored otherwise."""

    kind: ModelKind
    r: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.kind in (ModelKind.TUBE, ModelKind.EQUIDISTANT):
            if self.r is None or not np.isfinite(self.r) or self.r <= 0:
                raise ValueError(f"{self.kind.value} needs a radius r > 0, got {self.r}")
            object.__setattr__(self, "r", float(self.r))
        elif self.r is not None:
            raise ValueError(f"{self.kind.value} takes no radius")

    @property
    def alpha(self) -> float:
        if self.kind is ModelKind.TUBE:
            return float(2.0 / np.tanh(2.0 * self.r))
        if self.kind is ModelKind.EQUIDISTANT:
            return float(2.0 * np.tanh(2.0 * self.r))
        if self.kind is ModelKind.HOROCYCLIC:
            return 2.0
        return 0.0

    @classmethod
    def from_alpha(cls, alpha: float, kind: ModelKind | str | None = None) -> "HypersurfaceModel":
        """Invert the alpha formulas.  Without ``kind`` the model is inferred:
        0 minimal, (0, 2) equidistant, 2 horocyclic, above 2 tube."""
        if not np.isfinite(alpha) or alpha < 0:
            raise ValueError(f"alpha must be finite and >= 0, got {alpha}")
        if kind is None:
            if alpha == 0:
                kind = ModelKind.MINIMAL
            elif alpha < 2:
                kind = ModelKind.EQUIDISTANT
            elif alpha == 2:
                kind = ModelKind.HOROCYCLIC
            else:
                kind = ModelKind.TUBE
        kind = ModelKind(kind)
        if kind is ModelKind.MINIMAL:
            if alpha != 0:
                raise ValueError("the minimal model has alpha = 0")
            return cls(kind)
        if kind is ModelKind.HOROCYCLIC:
            if alpha != 2:
                raise ValueError("the horocyclic model has alpha = 2")
            return cls(kind)
        if kind is ModelKind.EQUIDISTANT:
            if not 0 < alpha < 2:
                raise ValueError("equidistant hypersurfaces have 0 < alpha < 2")
            return cls(kind, float(0.5 * np.arctanh(alpha / 2.0)))
        if alpha <= 2:
            raise ValueError("tubes have alpha > 2")
        return cls(kind, float(0.5 * np.arctanh(2.0 / alpha)))

    @property
    def label(self) -> str:
        return self.kind.value if self.r is None else f"{self.kind.value}(r={self.r:g})"


def expected_spectrum(n: int, alpha: float) -> list[tuple[float, int]]:
    return [(alpha, 1), (0.0, 2), (1.0, n - 2), (-1.0, n - 2)]


# ---------------------------------------------------------------------------
# frames and reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    residual: float
    tol: float = CHECK_TOL

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)


@dataclass(frozen=True, eq=False)
class HypersurfaceFrame:
    """Orthonormal tangent frame at o, ordered in blocks.

    For the Hopf models the blocks are ``CQ`` (the complex line spanned by
    ``C zeta``), ``T1``, ``Tm1`` and ``xi``; for P they are ``T0``, ``T1``,
    ``Tm1``.  ``phi`` is the tangential part of J in this frame.
    """

    n: int
    tangent: np.ndarray
    normal: np.ndarray
    blocks: dict
    reeb: np.ndarray | None = None
    phi: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.tangent.shape[1]

    def block(self, name: str) -> np.ndarray:
        lo, hi = self.blocks[name]
        return self.tangent[:, lo:hi]

    @property
    def subbundle_C(self) -> np.ndarray:
        """``ker eta``: everything but the Reeb column."""
        return self.tangent[:, :-1]

    @property
    def subbundle_Q(self) -> np.ndarray:
        lo = self.blocks["T1"][0]
        hi = self.blocks["Tm1"][1]
        return self.tangent[:, lo:hi]

    @property
    def subbundle_CQ(self) -> np.ndarray:
        return self.block("CQ")

    def ambient(self, op: np.ndarray) -> np.ndarray:
        """Extend an operator on the tangent space by zero on the normal space."""
        return self.tangent @ op @ self.tangent.T


@dataclass(frozen=True, eq=False)
class ShapeOperatorReport:
    matrix: np.ndarray
    spectrum: SpectrumReport
    signed_spectrum: SpectrumReport
    alpha: float | None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())


def _orthonormal_columns(cols: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    return u[:, s > tol * max(1.0, s.max())]


def _complement(sub: np.ndarray, within: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``sub`` inside ``within``."""
    proj = within - sub @ (sub.T @ within)
    u, s, _ = np.linalg.svd(proj, full_matrices=False)
    k = within.shape[1] - sub.shape[1]
    return u[:, :k]


def _coords_of(space: Subspace) -> np.ndarray:
    return np.array([to_coords(p_part(b)) for b in space.basis]).T


# ---------------------------------------------------------------------------
# shape operators from brackets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BracketShape:
    """Shape operator of the orbit of ``s`` through o with respect to ``normal``.

    ``matrix`` is in the frame ``frame`` (orthonormal for the left-invariant
    metric on ``a + n``), ``tangent`` holds the p-projections of that frame
    in coordinates, ``koszul`` is the same operator from the Koszul formula.
    """

    matrix: np.ndarray
    koszul: np.ndarray
    frame: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    symmetry_residual: float
    koszul_residual: float
    isometry_residual: float

    def spectrum(self) -> SpectrumReport:
        return SpectrumReport.from_matrix(self.matrix)


def shape_by_bracket(s: Subspace, normal_hat: np.ndarray, tol: float = 1e-10) -> BracketShape:
    """``A X = [zeta, X]_s`` with ``zeta`` the p-part of ``normal_hat`` and
    ``[.]_s`` the B_theta projection onto ``s``."""
    if closure_residual(s) > tol:
        raise AlgebraError(f"{s.label or 'subspace'} is not closed under the bracket")
    nn = norm_theta(normal_hat)
    worst = max((abs(b_theta(normal_hat, b)) / (nn * norm_theta(b)) for b in s.basis), default=0.0)
    if worst > 1e-9:
        raise AlgebraError(f"normal is not orthogonal to {s.label or 'the subalgebra'}: {worst:.2e}")
    frame = s.orthonormal_frame(inner=an_metric)
    zeta = p_part(normal_hat)
    k = len(frame)
    mat = np.empty((k, k))
    kos = np.empty((k, k))
    ad_hat = [bracket(normal_hat, e) for e in frame]
    for j, e in enumerate(frame):
        image = s.project(bracket(zeta, e))
        for i, f in enumerate(frame):
            mat[i, j] = an_metric(f, image)
    for i in range(k):
        for j in range(k):
            kos[i, j] = 0.5 * (an_metric(ad_hat[j], frame[i]) + an_metric(ad_hat[i], frame[j]))
    tangent = np.array([to_coords(p_part(e)) for e in frame]).T
    iso = float(np.abs(tangent.T @ tangent - np.eye(k)).max()) if k else 0.0
    sym = float(np.abs(mat - mat.T).max())
    return BracketShape(mat, kos, frame, tangent, to_coords(zeta), sym,
                        float(np.abs(mat - kos).max()), iso)


def lie_triple_check(m: Subspace, tol: float = 1e-10) -> tuple[bool, float]:
    """``[[m, m], m] ⊆ m`` for a subspace of p."""
    worst = max((float(np.abs(b - p_part(b)).max()) for b in m.basis), default=0.0)
    if worst > tol:
        raise AlgebraError("lie_triple_check needs a subspace of p")
    res = 0.0
    for i, x in enumerate(m.basis):
        for y in m.basis[i + 1:]:
            xy = bracket(x, y)
            for z in m.basis:
                t = bracket(xy, z)
                res = max(res, m.residual(t) / max(1.0, norm_theta(t)))
    return res <= tol, res


def heisenberg_check(s: Subspace, tol: float = 1e-10) -> bool:
    if closure_residual(s) > tol:
        raise AlgebraError(f"{s.label or 'subspace'} is not a subalgebra")
    prof = heisenberg_profile(s)
    return (prof["dim"] == 2 * s.n - 3 and prof["derived_dim"] == 1
            and prof["second_dim"] == 0 and prof["derived_is_center"])


# ---------------------------------------------------------------------------
# the complex hypersurface P^{n-1}
# ---------------------------------------------------------------------------


def P_normal(n: int, phi: float) -> np.ndarray:
    """Unit normal ``(cos(phi) H + sin(phi) J H) / 2`` with ``H = H_alpha1``, as a p-element."""
    h = root_vector(ALPHA1, n)
    return 0.5 * np.cos(phi) * h + 0.5 * np.sin(phi) * J_apply(h)


def P_normal_space(n: int) -> Subspace:
    return Subspace.from_elements([root_vector(ALPHA1, n)], "RH").direct_sum(
        p_root_space(n, ALPHA1), label="nu_o P")


def half_angle_spaces(n: int, phi: float) -> tuple[np.ndarray, np.ndarray]:
    """Predicted ``T1``, ``Tm1`` of P for the normal at angle ``phi``."""
    x = _coords_of(p_root_space(n, ALPHA12))
    jx = J_matrix(n) @ x
    c, s = np.cos(phi / 2), np.sin(phi / 2)
    return c * x + s * jx, s * x - c * jx


def _P_shape(n: int, phi: float) -> BracketShape:
    d = build_named_subalgebras(n)["d"]
    return shape_by_bracket(d, lift_to_an(P_normal(n, phi)))


def build_P(n: int, phi: float = 0.0, tol: float = CHECK_TOL) -> tuple[HypersurfaceFrame, ShapeOperatorReport]:
    n = require_n(n)
    bs = _P_shape(n, phi)
    rep = bs.spectrum()
    expected = [(1.0, n - 2), (0.0, 2), (-1.0, n - 2)]
    t1 = bs.tangent @ rep.eigenspace(1.0)
    t0 = bs.tangent @ rep.eigenspace(0.0)
    tm1 = bs.tangent @ rep.eigenspace(-1.0)
    tangent = np.concatenate([t0, t1, tm1], axis=1)
    k = n - 2
    blocks = {"T0": (0, 2), "T1": (2, 2 + k), "Tm1": (2 + k, 2 + 2 * k)}
    amb = bs.tangent @ bs.matrix @ bs.tangent.T
    matrix = tangent.T @ amb @ tangent
    frame = HypersurfaceFrame(n, tangent, bs.normal, blocks)

    jm = J_matrix(n)
    p1, m1 = half_angle_spaces(n, phi)
    t0_pred = np.concatenate([
        to_coords(root_vector(ALPHA122, n))[:, None], _coords_of(p_root_space(n, ALPHA122))], axis=1)
    normal_space = _coords_of(P_normal_space(n))
    # A for J zeta, expressed on the same tangent space
    bj = _P_shape(n, phi + np.pi / 2)
    amb_j = bj.tangent @ bj.matrix @ bj.tangent.T
    proj = bs.tangent @ bs.tangent.T
    checks = {
        "symmetric": Check(bs.symmetry_residual, tol),
        "koszul_agreement": Check(bs.koszul_residual, tol),
        "isometry": Check(bs.isometry_residual, tol),
        "spectrum": Check(rep.residual_against(expected), tol),
        "T0_fixed": Check(span_residual(t0, t0_pred), tol),
        "half_angle_T1": Check(span_residual(t1, p1), tol),
        "half_angle_Tm1": Check(span_residual(tm1, m1), tol),
        "J_invariant_tangent": Check(inclusion_residual(jm @ bs.tangent, bs.tangent), tol),
        "normal_space": Check(span_residual(normal_space, _complement(bs.tangent, np.eye(2 * n))), tol),
        "A_Jzeta_equals_J_A": Check(float(np.abs(amb_j - proj @ jm @ amb @ proj).max()), tol),
    }
    spec = SpectrumReport.from_matrix(matrix)
    return frame, ShapeOperatorReport(matrix, spec, spec, None, checks)


# ---------------------------------------------------------------------------
# Jacobi transport along the normal geodesic
# ---------------------------------------------------------------------------


def transport_factors(kind: ModelKind | str, r: float) -> dict[str, tuple[float, float]]:
    """``(D(r), D'(r))`` on each parallel block, before the orientation flip.

    Blocks are named after the eigenspaces of the focal data at r = 0
    (``T0``, ``T1``, ``Tm1``) and the Reeb direction ``xi``.
    """
    kind = ModelKind(kind)
    if not np.isfinite(r) or r <= 0:
        raise ValueError(f"radius must be positive, got {r}")
    out = {"T0": (1.0, 0.0), "T1": (np.exp(-r), -np.exp(-r)), "Tm1": (np.exp(r), np.exp(r))}
    if kind is ModelKind.TUBE:
        out["xi"] = (0.5 * np.sinh(2 * r), np.cosh(2 * r))
    elif kind is ModelKind.EQUIDISTANT:
        out["xi"] = (np.cosh(2 * r), 2.0 * np.sinh(2 * r))
    else:
        raise ValueError("Jacobi transport applies to tube and equidistant models")
    return out


def _block_diagonal(n: int, values: dict[str, float]) -> list[float]:
    k = n - 2
    return [values["T0"]] * 2 + [values["T1"]] * k + [values["Tm1"]] * k + [values["xi"]]


def jacobi_transport_shape(kind: ModelKind | str, r: float, n: int) -> ShapeOperatorReport:
    """Closed-form ``-D' D^{-1}`` in the parallel block frame, then flipped.

    The signed matrix is diagonal in the order (T0 x2, T1, Tm1, xi); the
    flipped one is reordered so its blocks read (CQ, T1, Tm1, xi) with the
    Hopf curvature positive.
    """
    n = require_n(n)
    fac = transport_factors(kind, r)
    a = {name: -dp / d for name, (d, dp) in fac.items()}
    signed = np.diag(_block_diagonal(n, a))
    # flipping the normal negates A and swaps the roles of T1 and Tm1
    flipped = np.diag(_block_diagonal(n, {"T0": -a["T0"], "T1": -a["Tm1"], "Tm1": -a["T1"], "xi": -a["xi"]}))
    return ShapeOperatorReport(flipped, SpectrumReport.from_matrix(flipped),
                               SpectrumReport.from_matrix(signed), float(-a["xi"]))


def rk4_propagator(mat: np.ndarray, h: float, steps: int) -> np.ndarray:
    """Propagator of ``y' = M y`` after ``steps`` classical RK4 steps of size h."""
    hm = h * mat
    step = np.eye(len(mat))
    term = np.eye(len(mat))
    for k in range(1, 5):
        term = term @ hm / k
        step = step + term
    return np.linalg.matrix_power(step, steps)


def integrate_jacobi(curv: np.ndarray, d0: np.ndarray, d1: np.ndarray, r: float,
                     h: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """Solve ``D'' + R D = 0`` with constant R by fixed-step RK4; returns (D(r), D'(r))."""
    steps = int(round(r / h))
    if steps < 1 or abs(steps * h - r) > 1e-12 * max(1.0, r):
        raise ValueError(f"radius {r} is not a multiple of the step {h}")
    k = len(curv)
    big = np.block([[np.zeros((k, k)), np.eye(k)], [-curv, np.zeros((k, k))]])
    prop = rk4_propagator(big, h, steps)
    state = prop @ np.concatenate([d0, d1], axis=0)
    return state[:k], state[k:]


def _frozen(a: np.ndarray) -> np.ndarray:
    """Mark an array read-only before it is handed out from a cache."""
    a.flags.writeable = False
    return a


@lru_cache(maxsize=None)
def _focal_data(kind: ModelKind, n: int):
    """Frame of ``zeta^perp`` ordered (T0, T1, Tm1, xi-direction), the focal
    shape operator in it from the bracket formula, and the unit normal."""
    if kind is ModelKind.TUBE:
        bs = _P_shape(n, 0.0)
        rep = bs.spectrum()
        blocks = [bs.tangent @ rep.eigenspace(v) for v in (0.0, 1.0, -1.0)]
        zeta = bs.normal
        cols = np.concatenate(blocks + [(J_matrix(n) @ zeta)[:, None]], axis=1)
        amb = bs.tangent @ bs.matrix @ bs.tangent.T
    else:
        fr, _, bs = _bracket_model(n, ModelKind.MINIMAL)
        cols = np.concatenate([fr.block("CQ"), fr.block("T1"), fr.block("Tm1"), fr.block("xi")], axis=1)
        zeta = fr.normal
        amb = bs.tangent @ bs.matrix @ bs.tangent.T
    return _frozen(cols), _frozen(cols.T @ amb @ cols), _frozen(zeta)


def ode_transport_check(kind: ModelKind | str, n: int, r: float, h: float = 1e-4) -> dict[str, float]:
    """Integrate the Jacobi equation numerically and compare with the closed forms.

    Returns sup residuals for the shape operator ``-D' D^{-1}`` and for the
    Reeb diagonal of D (``sinh(2r)/2`` for tubes, ``cosh(2r)`` otherwise).
    """
    kind = ModelKind(kind)
    n = require_n(n)
    cols, a_focal, zeta = _focal_data(kind, n)
    curv = cols.T @ curvature_operator(zeta, zeta) @ cols
    dim = cols.shape[1]
    d0 = np.eye(dim)
    d1 = -a_focal.copy()
    if kind is ModelKind.TUBE:
        # the Jzeta direction is normal to P: Jacobi field starts at 0 with unit speed
        d0[-1, -1] = 0.0
        d1[-1, :] = 0.0
        d1[:, -1] = 0.0
        d1[-1, -1] = 1.0
    d, dp = integrate_jacobi(curv, d0, d1, r, h)
    a_num = -dp @ np.linalg.inv(d)
    # both closed forms are diagonal in the block order of ``cols``
    fac = transport_factors(kind, r)
    d_closed = np.diag(_block_diagonal(n, {name: v[0] for name, v in fac.items()}))
    a_closed = np.diag(_block_diagonal(n, {name: -v[1] / v[0] for name, v in fac.items()}))
    return {
        "shape": float(np.abs(a_num - a_closed).max()),
        "D": float(np.abs(d - d_closed).max()),
        "xi_diagonal": float(abs(d[-1, -1] - fac["xi"][0])),
    }


# ---------------------------------------------------------------------------
# the Hopf family
# ---------------------------------------------------------------------------


def minimal_normal_hat(n: int) -> np.ndarray:
    """Unit vector of ``g_alpha1`` (left-invariant metric)."""
    return root_space(n, ALPHA1).basis[0]


def _hopf_frame(n: int, tangent: np.ndarray, op: np.ndarray, normal: np.ndarray) -> tuple[HypersurfaceFrame, np.ndarray]:
    """Reorder a tangent frame into (CQ, T1, Tm1, xi) blocks and rewrite the
    operator in it."""
    jm = J_matrix(n)
    xi = -jm @ normal
    c0z = C0_matrix(n) @ normal
    cq = _orthonormal_columns(np.stack([c0z, jm @ c0z], axis=1))
    if cq.shape[1] != 2:
        raise AlgebraError("C zeta and J C zeta do not span a complex line")
    amb = tangent @ op @ tangent.T
    q = _complement(np.concatenate([cq, xi[:, None]], axis=1), tangent)
    w, v = np.linalg.eigh(q.T @ amb @ q)
    order = np.argsort(w)[::-1]
    qv = q @ v[:, order]
    k = n - 2
    t1, tm1 = qv[:, :k], qv[:, k:]
    cols = np.concatenate([cq, t1, tm1, xi[:, None]], axis=1)
    blocks = {"CQ": (0, 2), "T1": (2, 2 + k), "Tm1": (2 + k, 2 + 2 * k), "xi": (2 + 2 * k, 3 + 2 * k)}
    phi = cols.T @ jm @ cols
    frame = HypersurfaceFrame(n, cols, normal, blocks, xi, phi)
    return frame, cols.T @ amb @ cols


@lru_cache(maxsize=None)
def _bracket_model(n: int, kind: ModelKind):
    subs = build_named_subalgebras(n)
    if kind is ModelKind.MINIMAL:
        bs = shape_by_bracket(subs["s1"], minimal_normal_hat(n))
    else:
        bs = shape_by_bracket(subs["h1"], 0.5 * root_vector(ALPHA1, n))
    frame, op = _hopf_frame(n, bs.tangent, bs.matrix, bs.normal)
    return frame, _frozen(op), bs


def aligned_structure(t1: np.ndarray) -> tuple[float, float]:
    """Angle phi maximizing ``sum_i g(C_phi x_i, x_i)`` over an orthonormal
    ``T1`` and the residual of ``T1 ⊂ V(C_phi)``.

    The objective is ``a cos(phi) + b sin(phi)``, so the optimum is
    ``atan2(b, a)``.
    """
    n = t1.shape[0] // 2
    c0t = C0_matrix(n) @ t1
    a = float(np.einsum("ij,ij->", c0t, t1))
    b = float(np.einsum("ij,ij->", J_matrix(n) @ c0t, t1))
    phi = float(np.arctan2(b, a)) % (2 * np.pi)
    cm = real_structure_matrix(n, phi)
    return phi, float(np.abs(cm @ t1 - t1).max()) if t1.shape[1] else 0.0


def hopf_checks(frame: HypersurfaceFrame, op: np.ndarray, alpha: float,
                tol: float = CHECK_TOL) -> dict[str, Check]:
    n = frame.n
    jm = J_matrix(n)
    dim = frame.dim
    xi = np.zeros(dim)
    xi[-1] = 1.0
    phi = frame.phi
    anti = op @ phi + phi @ op
    t1, tm1 = frame.block("T1"), frame.block("Tm1")
    kz = curvature_operator(frame.normal, frame.normal)
    kf = kz @ frame.tangent
    k_tan = frame.tangent.T @ kf
    leak = float(np.abs(kf - frame.tangent @ k_tan).max())
    cls = classify_singular(frame.normal)
    aligned_phi, aligned_res = aligned_structure(t1)
    cm = real_structure_matrix(n, aligned_phi)
    jv = jm @ cm @ jm.T  # reflection fixing J V(C)
    spec = SpectrumReport.from_matrix(op)
    return {
        "symmetric": Check(float(np.abs(op - op.T).max()), tol),
        "spectrum": Check(spec.residual_against(expected_spectrum(n, alpha)), tol),
        "hopf": Check(float(np.abs(op @ xi - alpha * xi).max()), tol),
        "anticommutator": Check(float(np.abs(anti).max()), tol),
        "integrability": Check(float(np.abs(anti[:-1, :-1]).max()), tol),
        "curvature_adapted": Check(max(leak, float(np.abs(k_tan @ op - op @ k_tan).max())), tol),
        "mean_curvature": Check(abs(float(np.trace(op)) - alpha), tol),
        "normal_isotropic": Check(abs(cls.t - np.pi / 4), tol),
        "J_T1_equals_Tm1": Check(span_residual(jm @ t1, tm1), tol),
        "aligned_real_structure": Check(max(aligned_res, float(np.abs(jv @ tm1 - tm1).max())), tol),
    }


def build_M(n: int, model: HypersurfaceModel, tol: float = CHECK_TOL) -> tuple[HypersurfaceFrame, ShapeOperatorReport]:
    """Frame, shape operator and all Hopf-family checks for one model.

    The reported orientation makes the Hopf curvature ``alpha >= 0``.
    """
    n = require_n(n)
    kind = model.kind
    extra: dict[str, Check] = {}
    if kind in (ModelKind.MINIMAL, ModelKind.HOROCYCLIC):
        frame, op, bs = _bracket_model(n, kind)
        signed = op
        extra = {
            "koszul_agreement": Check(bs.koszul_residual, tol),
            "isometry": Check(bs.isometry_residual, tol),
        }
    else:
        cols, _, zeta = _focal_data(kind, n)
        fac = transport_factors(kind, model.r)
        signed = np.diag(_block_diagonal(n, {name: -v[1] / v[0] for name, v in fac.items()}))
        # flip the normal: A -> -A, zeta -> -zeta
        frame, op = _hopf_frame(n, cols, -signed, -zeta)
    alpha = model.alpha
    checks = hopf_checks(frame, op, alpha, tol)
    checks.update(extra)
    return frame, ShapeOperatorReport(op, SpectrumReport.from_matrix(op),
                                      SpectrumReport.from_matrix(signed), alpha, checks)
