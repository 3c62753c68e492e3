"""Riemannian geometry of the complex hyperbolic quadric at the base point.

Tangent vectors are elements of p, i.e. so(2,n) matrices whose only nonzero
block is the off-diagonal ``2 x n`` block ``b``.  Two equivalent views are
offered: the matrix view (``g_metric``, ``J_apply``, ``curvature``), which
evaluates the defining formulas literally, and the coordinate view, where a
tangent vector is its coefficient vector in the g-orthonormal frame
``sqrt(2) E_ij`` of p and every structure is a ``2n x 2n`` matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize_scalar

from .lie_core import AlgebraError, b_theta, bracket, check_element, dimension_of, is_in_p
from .spectrum import SpectrumReport

SQRT2 = np.sqrt(2.0)
UNIT_SLACK = 1e-6


# ---------------------------------------------------------------------------
# matrix view
# ---------------------------------------------------------------------------


def check_tangent(x: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    x = check_element(x)
    if not is_in_p(x, tol):
        raise AlgebraError("tangent vectors must lie in p")
    return x


def g_metric(x: np.ndarray, y: np.ndarray) -> float:
    """Renormalized metric ``g = B_theta / 4n``."""
    return b_theta(x, y) / (4.0 * dimension_of(x))


def g_norm(x: np.ndarray) -> float:
    return float(np.sqrt(max(g_metric(x, x), 0.0)))


def complex_generator(n: int) -> np.ndarray:
    """Element of k whose adjoint action on p is J."""
    z = np.zeros((n + 2, n + 2))
    z[0, 1], z[1, 0] = -1.0, 1.0
    return z


def J_apply(x: np.ndarray) -> np.ndarray:
    return bracket(complex_generator(dimension_of(x)), x)


def conjugation_element(n: int) -> np.ndarray:
    """``c_0 = diag(1, -1, 1, ..., 1)``; Ad(c_0) restricted to p is C_0."""
    return np.diag([1.0, -1.0] + [1.0] * n)


@dataclass(frozen=True)
class RealStructure:
    """``C_phi = cos(phi) C_0 + sin(phi) J C_0``."""

    phi: float = 0.0

    def apply(self, x: np.ndarray) -> np.ndarray:
        c0 = conjugation_element(dimension_of(x))
        cx = c0 @ x @ c0
        return np.cos(self.phi) * cx + np.sin(self.phi) * J_apply(cx)

    __call__ = apply

    def matrix(self, n: int) -> np.ndarray:
        return real_structure_matrix(n, self.phi)


def real_structure_apply(c: RealStructure, x: np.ndarray) -> np.ndarray:
    return c.apply(x)


def curvature(x: np.ndarray, y: np.ndarray, z: np.ndarray, phi: float = 0.0) -> np.ndarray:
    """``R(X, Y) Z`` from the closed formula, with the real structure C_phi."""
    c = RealStructure(phi)
    g = g_metric
    jx, jy, jz = J_apply(x), J_apply(y), J_apply(z)
    cx, cy = c(x), c(y)
    jcx, jcy = J_apply(cx), J_apply(cy)
    return (g(x, z) * y - g(y, z) * x
            + g(jx, z) * jy - g(jy, z) * jx + 2.0 * g(jx, y) * jz
            + g(cx, z) * cy - g(cy, z) * cx
            + g(jcx, z) * jcy - g(jcy, z) * jcx)


# ---------------------------------------------------------------------------
# coordinate view
# ---------------------------------------------------------------------------


def to_coords(x: np.ndarray) -> np.ndarray:
    """Coefficients of a p-element in the g-orthonormal frame ``sqrt(2) E_ij``."""
    return x[:2, 2:].reshape(-1) / SQRT2


def from_coords(c: np.ndarray) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    n = len(c) // 2
    b = SQRT2 * c.reshape(2, n)
    x = np.zeros((n + 2, n + 2))
    x[:2, 2:] = b
    x[2:, :2] = b.T
    return x


def p_frame(n: int) -> np.ndarray:
    """g-orthonormal basis of p as a stack of matrices."""
    return np.array([from_coords(e) for e in np.eye(2 * n)])


def J_matrix(n: int) -> np.ndarray:
    """J in coordinates: ``b -> R b`` with R the quarter turn, so row 0 of
    ``b`` becomes minus row 1 and row 1 becomes row 0."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, -eye], [eye, zero]])


def C0_matrix(n: int) -> np.ndarray:
    return np.diag([1.0] * n + [-1.0] * n)


def real_structure_matrix(n: int, phi: float) -> np.ndarray:
    c0 = C0_matrix(n)
    return np.cos(phi) * c0 + np.sin(phi) * J_matrix(n) @ c0


def fixed_space(n: int, phi: float) -> np.ndarray:
    """Orthonormal columns spanning ``V(C_phi)``."""
    w, v = np.linalg.eigh(real_structure_matrix(n, phi))
    return v[:, w > 0]


def curvature_operator(y: np.ndarray, z: np.ndarray, phi: float = 0.0) -> np.ndarray:
    """Matrix of ``X -> R(X, y) z`` in coordinates."""
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    dim = len(y)
    n = dim // 2
    jm = J_matrix(n)
    cm = real_structure_matrix(n, phi)
    km = jm @ cm
    eye = np.eye(dim)
    out = np.outer(y, z) - (y @ z) * eye
    out += np.outer(jm @ y, jm.T @ z) - ((jm @ y) @ z) * jm + 2.0 * np.outer(jm @ z, jm.T @ y)
    out += np.outer(cm @ y, cm.T @ z) - ((cm @ y) @ z) * cm
    out += np.outer(km @ y, km.T @ z) - ((km @ y) @ z) * km
    return out


def curvature_tensor(n: int, phi: float = 0.0) -> np.ndarray:
    """``T[x, y, z, w]`` = component w of ``R(e_x, e_y) e_z``."""
    dim = 2 * n
    eye = np.eye(dim)
    jm = J_matrix(n)
    cm = real_structure_matrix(n, phi)
    km = jm @ cm
    d = np.einsum
    t = d("xz,yw->xyzw", eye, eye) - d("yz,xw->xyzw", eye, eye)
    t += d("zx,wy->xyzw", jm, jm) - d("zy,wx->xyzw", jm, jm) + 2.0 * d("yx,wz->xyzw", jm, jm)
    t += d("zx,wy->xyzw", cm, cm) - d("zy,wx->xyzw", cm, cm)
    t += d("zx,wy->xyzw", km, km) - d("zy,wx->xyzw", km, km)
    return t


def ricci_contraction(n: int, phi: float = 0.0) -> np.ndarray:
    """``X -> sum_i R(X, e_i) e_i`` evaluated literally on the matrix model."""
    frame = p_frame(n)
    out = np.zeros((2 * n, 2 * n))
    for a, x in enumerate(frame):
        acc = np.zeros_like(x)
        for e in frame:
            acc += curvature(x, e, e, phi)
        out[:, a] = to_coords(acc)
    return out


def jacobi_matrix(v: np.ndarray, phi: float = 0.0) -> np.ndarray:
    """``X -> R(X, v) v`` in coordinates."""
    return curvature_operator(v, v, phi)


# ---------------------------------------------------------------------------
# singular tangent vectors and Jacobi spectra
# ---------------------------------------------------------------------------


class Kind(str, Enum):
    PRINCIPAL = "A-principal"
    ISOTROPIC = "A-isotropic"
    REGULAR = "regular"


@dataclass(frozen=True)
class SingularityClass:
    kind: Kind
    t: float
    aligned_phi: float
    u: np.ndarray
    w: np.ndarray


def _as_unit_coords(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim == 2:
        v = to_coords(check_tangent(v))
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > UNIT_SLACK:
        raise AlgebraError(f"expected a unit tangent vector, got norm {nrm:.6g}")
    return v / nrm


def principal_profile(v: np.ndarray) -> tuple[float, float]:
    """``m(phi) = g(C_phi v, v) = a cos(phi) + b sin(phi)``; returns (a, b)."""
    n = len(v) // 2
    c0v = C0_matrix(n) @ v
    return float(c0v @ v), float((J_matrix(n) @ c0v) @ v)


def classify_singular(v, grid: int = 256, angle_tol: float = 1e-7) -> SingularityClass:
    """Write ``v = cos(t) u + sin(t) J w`` with u, w orthonormal in V(C)."""
    v = _as_unit_coords(v)
    n = len(v) // 2
    jm = J_matrix(n)

    def m(phi):
        return float((real_structure_matrix(n, phi) @ v) @ v)

    phis = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    vals = np.array([m(p) for p in phis])
    k = int(np.argmax(vals))
    step = phis[1] - phis[0]
    res = minimize_scalar(lambda p: -m(p), bounds=(phis[k] - step, phis[k] + step),
                          method="bounded", options={"xatol": 1e-13})
    phi = float(res.x) % (2.0 * np.pi)
    cm = real_structure_matrix(n, phi)
    cv = cm @ v
    plus, minus = v + cv, v - cv
    t = float(np.arctan2(np.linalg.norm(minus), np.linalg.norm(plus)))
    t = min(max(t, 0.0), np.pi / 4)
    u = plus / np.linalg.norm(plus) if np.linalg.norm(plus) > 0 else np.zeros_like(v)
    if np.linalg.norm(minus) > 1e-12:
        # v - Cv = 2 sin(t) J w
        w = -jm @ (minus / np.linalg.norm(minus))
    else:
        w = np.zeros_like(v)
    if t < angle_tol:
        kind = Kind.PRINCIPAL
    elif abs(t - np.pi / 4) < angle_tol:
        kind = Kind.ISOTROPIC
    else:
        kind = Kind.REGULAR
    return SingularityClass(kind, t, phi, u, w)


def jacobi_closed_form(n: int, t: float) -> list[tuple[float, int]]:
    c, s = np.cos(2 * t), np.sin(2 * t)
    return [(0.0, 2), (-1.0 + c, n - 2), (-1.0 - c, n - 2), (-2.0 + 2 * s, 1), (-2.0 - 2 * s, 1)]


def jacobi_spectrum(v, phi: float = 0.0) -> tuple[SpectrumReport, SingularityClass]:
    """Spectrum of ``X -> R(X, v) v`` matched against the closed form at the
    classified angle t.  The report flag ``closed_form_residual`` carries the
    sup distance."""
    v = _as_unit_coords(v)
    n = len(v) // 2
    cls = classify_singular(v)
    expected = jacobi_closed_form(n, cls.t)
    rep = SpectrumReport.from_matrix(jacobi_matrix(v, phi))
    resid = rep.residual_against(expected)
    flags = {"closed_form_residual": resid, "t": cls.t, "kind": cls.kind.value}
    return SpectrumReport(rep.eigenvalues, rep.clusters, rep.symmetry_residual, flags), cls


def vector_at_angle(n: int, t: float, u: np.ndarray | None = None, w: np.ndarray | None = None,
                    phi: float = 0.0) -> np.ndarray:
    """``cos(t) u + sin(t) J w``; defaults to the first two vectors of V(C_phi)."""
    if u is None or w is None:
        basis = fixed_space(n, phi)
        u = basis[:, 0] if u is None else u
        w = basis[:, 1] if w is None else w
    return np.cos(t) * u + np.sin(t) * (J_matrix(n) @ w)


def span_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Mutual projection residual between column spans of orthonormalizable
    matrices; ``inf`` on a dimension mismatch."""
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    if qa.shape[1] != qb.shape[1]:
        return float("inf")
    if qa.shape[1] == 0:
        return 0.0
    ra = np.abs(qb - qa @ (qa.T @ qb)).max()
    rb = np.abs(qa - qb @ (qb.T @ qa)).max()
    return float(max(ra, rb))


def inclusion_residual(a: np.ndarray, b: np.ndarray) -> float:
    """Residual of the column span of ``a`` against that of ``b``."""
    if a.shape[1] == 0:
        return 0.0
    qa, _ = np.linalg.qr(a)
    qb, _ = np.linalg.qr(b)
    return float(np.abs(qa - qb @ (qb.T @ qa)).max())
