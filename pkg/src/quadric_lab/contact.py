"""Almost contact structure and intrinsic curvature of the Hopf hypersurfaces.

Everything is expressed in the block frame (CQ, T1, Tm1, xi) produced by
:func:`quadric_lab.hypersurfaces.build_M`, which is g-orthonormal, so
matrices double as bilinear forms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypersurfaces import HypersurfaceFrame, HypersurfaceModel, build_M
from .lie_core import AlgebraError
from .quadric import Kind, classify_singular, curvature_operator
from .spectrum import SpectrumReport

PSEUDO_EINSTEIN_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class ContactData:
    frame: HypersurfaceFrame
    eta: np.ndarray
    phi_matrix: np.ndarray
    d_eta: np.ndarray

    @property
    def xi(self) -> np.ndarray:
        out = np.zeros(self.frame.dim)
        out[-1] = 1.0
        return out

    def structure_residuals(self) -> dict[str, float]:
        """``eta(xi) = 1``, ``phi xi = 0`` and ``phi^2 = -id + eta (x) xi``."""
        phi = self.phi_matrix
        xi = self.xi
        ident = -np.eye(len(xi)) + np.outer(xi, self.eta)
        return {
            "eta_xi": abs(float(self.eta @ xi) - 1.0),
            "phi_xi": float(np.abs(phi @ xi).max()),
            "phi_squared": float(np.abs(phi @ phi - ident).max()),
        }


def d_eta_tensor(frame: HypersurfaceFrame, shape: np.ndarray) -> np.ndarray:
    """``d eta(e_i, e_j) = g((A phi + phi A) e_i, e_j)``."""
    phi = frame.phi
    return ((shape @ phi + phi @ shape).T).copy()


def contact_data(frame: HypersurfaceFrame, shape: np.ndarray) -> ContactData:
    eta = frame.tangent.T @ frame.reeb
    return ContactData(frame, eta, frame.phi, d_eta_tensor(frame, shape))


def nabla_xi_residual(frame: HypersurfaceFrame, shape: np.ndarray) -> float:
    """``d eta(X, Y) + g(X, phi A Y) - g(Y, phi A X)`` over all frame pairs,
    i.e. ``d eta`` rebuilt from ``nabla_X xi = phi A X``."""
    pa = frame.phi @ shape
    return float(np.abs(d_eta_tensor(frame, shape) + pa - pa.T).max())


def normal_jacobi_on_M(frame: HypersurfaceFrame, tol: float = 1e-9) -> np.ndarray:
    """``K = R(., zeta) zeta`` on the tangent space, with its block values
    (0 on CQ, -1 on Q, -4 on xi) asserted."""
    if classify_singular(frame.normal).kind is not Kind.ISOTROPIC:
        raise AlgebraError("the unit normal is not A-isotropic")
    kz = curvature_operator(frame.normal, frame.normal)
    k = frame.tangent.T @ kz @ frame.tangent
    diag = np.zeros(frame.dim)
    lo, hi = frame.blocks["T1"][0], frame.blocks["Tm1"][1]
    diag[lo:hi] = -1.0
    diag[-1] = -4.0
    resid = float(np.abs(k - np.diag(diag)).max())
    if resid > tol:
        raise AlgebraError(f"normal Jacobi operator has unexpected block values: {resid:.2e}")
    return k


@dataclass(frozen=True, eq=False)
class RicciReport:
    matrix: np.ndarray
    spectrum: SpectrumReport
    pseudo_einstein: bool
    pseudo_einstein_residual: float
    scalar: float
    phi_relation_residual: float
    alpha: float

    @property
    def eigenvalue_count(self) -> int:
        return len(self.spectrum.clusters)


def ricci_operator(frame: HypersurfaceFrame, shape: np.ndarray, alpha: float) -> np.ndarray:
    """``Ric = -2n id - K + alpha A - A^2``."""
    k = normal_jacobi_on_M(frame)
    return -2.0 * frame.n * np.eye(frame.dim) - k + alpha * shape - shape @ shape


def ricci_gauss_oracle(frame: HypersurfaceFrame, shape: np.ndarray) -> np.ndarray:
    """Ricci operator from the contracted Gauss equation:
    ``sum_i R(X, e_i) e_i`` over the tangent frame, plus ``tr(A) A - A^2``."""
    acc = np.zeros((2 * frame.n, 2 * frame.n))
    for e in frame.tangent.T:
        acc += curvature_operator(e, e)
    amb = frame.tangent.T @ acc @ frame.tangent
    return amb + np.trace(shape) * shape - shape @ shape


def expected_ricci(n: int, alpha: float) -> list[tuple[float, int]]:
    return [(-2.0 * n, 2), (-2.0 * n + alpha, n - 2), (-2.0 * n - alpha, n - 2), (-2.0 * n + 4.0, 1)]


def expected_ricci_count(alpha: float, tol: float = 1e-9) -> int:
    if abs(alpha) < tol:
        return 2
    if abs(alpha - 4.0) < tol:
        return 3
    return 4


def scalar_curvature_formula(n: int) -> float:
    return 4.0 - 2.0 * n * (2 * n - 1)


def ricci_report(frame: HypersurfaceFrame, shape: np.ndarray, alpha: float) -> RicciReport:
    ric = ricci_operator(frame, shape, alpha)
    n = frame.n
    xi = np.zeros(frame.dim)
    xi[-1] = 1.0
    pe_res = float(np.abs(ric + 2.0 * n * np.eye(frame.dim) - 4.0 * np.outer(xi, xi)).max())
    spec = SpectrumReport.from_matrix(ric)
    phi = frame.phi
    pe = pe_res < PSEUDO_EINSTEIN_TOL and len(spec.clusters) == 2
    return RicciReport(
        matrix=ric,
        spectrum=spec,
        pseudo_einstein=pe,
        pseudo_einstein_residual=pe_res,
        scalar=float(np.trace(ric)),
        phi_relation_residual=float(np.abs(ric @ phi + phi @ ric + 4.0 * n * phi).max()),
        alpha=alpha,
    )


def ricci(model: HypersurfaceModel, n: int) -> RicciReport:
    frame, rep = build_M(n, model)
    return ricci_report(frame, rep.matrix, rep.alpha)


def scalar_curvature(model: HypersurfaceModel, n: int) -> float:
    return ricci(model, n).scalar
