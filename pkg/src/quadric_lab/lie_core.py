"""Arithmetic in the matrix Lie algebra so(2,n).

Elements are plain ``(2+n, 2+n)`` float arrays.  Subspaces keep their
generating basis untouched and carry the Gram matrix of the positive inner
product ``B_theta(X, Y) = -B(X, theta(Y))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

STRUCT_TOL = 1e-10
SPAN_TOL = 1e-8
SKEW_TOL = 1e-12


class AlgebraError(ValueError):
    """Raised when an input is not a valid so(2,n) object."""


class DimensionMismatch(AlgebraError):
    pass


class SingularGram(AlgebraError):
    pass


# ---------------------------------------------------------------------------
# elements
# ---------------------------------------------------------------------------


def dimension_of(x: np.ndarray) -> int:
    """Return ``n`` for an element of so(2,n)."""
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 3:
        raise DimensionMismatch(f"not a square (2+n)x(2+n) matrix: shape {x.shape}")
    return x.shape[0] - 2


def _same_n(x: np.ndarray, y: np.ndarray) -> int:
    n = dimension_of(x)
    if y.shape != x.shape:
        raise DimensionMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    return n


def indefinite_identity(n: int) -> np.ndarray:
    """``I_{2,n} = diag(-1, -1, 1, ..., 1)``."""
    return np.diag([-1.0, -1.0] + [1.0] * n)


def make_element(n: int, a1, a2, b) -> np.ndarray:
    """Assemble ``[[a1, b], [b^T, a2]]`` with ``a1``, ``a2`` skew."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    b = np.asarray(b, dtype=float)
    if n < 1:
        raise DimensionMismatch(f"n must be positive, got {n}")
    if a1.shape != (2, 2) or a2.shape != (n, n) or b.shape != (2, n):
        raise DimensionMismatch(
            f"expected shapes (2,2), ({n},{n}), (2,{n}); got {a1.shape}, {a2.shape}, {b.shape}"
        )
    if np.abs(a1 + a1.T).max() > SKEW_TOL or np.abs(a2 + a2.T).max() > SKEW_TOL:
        raise AlgebraError("diagonal blocks must be skew-symmetric")
    x = np.zeros((n + 2, n + 2))
    x[:2, :2] = a1
    x[2:, 2:] = a2
    x[:2, 2:] = b
    x[2:, :2] = b.T
    return x


def invariant_residual(x: np.ndarray) -> float:
    """Sup-norm of ``X^T I_{2,n} + I_{2,n} X``; zero on so(2,n)."""
    i2n = indefinite_identity(dimension_of(x))
    return float(np.abs(x.T @ i2n + i2n @ x).max())


def check_element(x: np.ndarray, tol: float = STRUCT_TOL) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    res = invariant_residual(x)
    if res > tol:
        raise AlgebraError(f"matrix is not in so(2,n): residual {res:.3e}")
    return x


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    _same_n(x, y)
    return x @ y - y @ x


def killing(x: np.ndarray, y: np.ndarray) -> float:
    """Killing form of so(2,n), ``n tr(XY)``."""
    n = _same_n(x, y)
    return float(n * np.einsum("ij,ji->", x, y))


def cartan_theta(x: np.ndarray) -> np.ndarray:
    i2n = indefinite_identity(dimension_of(x))
    return i2n @ x @ i2n


def b_theta(x: np.ndarray, y: np.ndarray) -> float:
    return -killing(x, cartan_theta(y))


def cartan_split(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split ``x`` into its k-part and p-part."""
    th = cartan_theta(x)
    return (x + th) / 2.0, (x - th) / 2.0


def k_part(x: np.ndarray) -> np.ndarray:
    return cartan_split(x)[0]


def p_part(x: np.ndarray) -> np.ndarray:
    return cartan_split(x)[1]


def is_in_p(x: np.ndarray, tol: float = STRUCT_TOL) -> bool:
    return float(np.abs(k_part(x)).max()) <= tol


def norm_theta(x: np.ndarray) -> float:
    return float(np.sqrt(max(b_theta(x, x), 0.0)))


def random_element(n: int, rng: np.random.Generator) -> np.ndarray:
    a1 = rng.standard_normal((2, 2))
    a2 = rng.standard_normal((n, n))
    return make_element(n, a1 - a1.T, a2 - a2.T, rng.standard_normal((2, n)))


# ---------------------------------------------------------------------------
# bases and structure constants
# ---------------------------------------------------------------------------


def so_basis(n: int) -> np.ndarray:
    """Standard basis of so(2,n): elementary skew pairs in the diagonal
    blocks, elementary symmetric pairs in the off-diagonal blocks."""
    size = n + 2
    out = []
    for i in range(size):
        for j in range(i + 1, size):
            e = np.zeros((size, size))
            e[i, j] = 1.0
            e[j, i] = 1.0 if (i < 2 <= j) else -1.0
            out.append(e)
    return np.array(out)


def coordinates(x: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Coefficients of ``x`` in a (linearly independent) basis, by least squares."""
    flat = basis.reshape(len(basis), -1).T
    coef, *_ = np.linalg.lstsq(flat, x.reshape(-1), rcond=None)
    return coef


def ad_matrix(x: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Matrix of ``ad(x)`` in ``basis``: column ``k`` holds ``[x, basis_k]``."""
    flat = basis.reshape(len(basis), -1).T
    images = np.array([bracket(x, b).reshape(-1) for b in basis]).T
    coef, *_ = np.linalg.lstsq(flat, images, rcond=None)
    return coef


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


def _gram(basis: np.ndarray) -> np.ndarray:
    if len(basis) == 0:
        return np.zeros((0, 0))
    n = basis.shape[1] - 2
    i2n = np.diag(indefinite_identity(n))
    theta_basis = basis * i2n[None, :, None] * i2n[None, None, :]
    # b_theta(x, y) = -n tr(x theta(y))
    return -n * np.einsum("aij,bji->ab", basis, theta_basis)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Span of a list of so(2,n) elements with its ``B_theta`` Gram matrix.

    The basis is kept as given, so displayed matrices stay recognizable;
    orthonormal frames are derived on demand.
    """

    basis: np.ndarray
    label: str = ""
    gram: np.ndarray = field(init=False, repr=False)
    _chol: tuple | None = field(init=False, repr=False)

    def __post_init__(self):
        basis = np.asarray(self.basis, dtype=float)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise DimensionMismatch(f"basis must have shape (k, N, N), got {basis.shape}")
        gram = _gram(basis)
        chol = None
        if len(basis):
            try:
                chol = cho_factor(gram)
            except LinAlgError as exc:
                raise SingularGram(f"dependent basis for subspace {self.label!r}") from exc
            scale = np.diag(gram).max()
            if np.linalg.eigvalsh(gram).min() < 1e-12 * scale:
                raise SingularGram(f"dependent basis for subspace {self.label!r}")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "_chol", chol)

    @classmethod
    def from_elements(cls, elements: Iterable[np.ndarray], label: str = "", n: int | None = None):
        elements = [np.asarray(e, dtype=float) for e in elements]
        if not elements:
            if n is None:
                raise DimensionMismatch("empty subspace needs an explicit n")
            return cls(np.zeros((0, n + 2, n + 2)), label)
        return cls(np.array(elements), label)

    @classmethod
    def spanned_by(cls, elements: Sequence[np.ndarray], label: str = "", n: int | None = None,
                   tol: float = 1e-9):
        """Independent (B_theta-orthonormal) basis for the span of possibly
        dependent generators."""
        elements = [np.asarray(e, dtype=float) for e in elements]
        if not elements:
            return cls.from_elements([], label, n)
        stack = np.array(elements)
        gram = _gram(stack)
        w, v = np.linalg.eigh(gram)
        scale = max(w.max(), 1.0)
        keep = w > tol * scale
        coeff = v[:, keep] / np.sqrt(w[keep])
        basis = np.einsum("ak,aij->kij", coeff, stack)
        return cls(basis, label)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def n(self) -> int:
        return self.basis.shape[1] - 2

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def coefficients(self, x: np.ndarray) -> np.ndarray:
        if self.dim == 0:
            return np.zeros(0)
        rhs = -self.n * np.einsum("aij,ji->a", self.basis, cartan_theta(x))
        return cho_solve(self._chol, rhs)

    def project(self, x: np.ndarray) -> np.ndarray:
        """``B_theta``-orthogonal projection of ``x`` onto the span."""
        x = np.asarray(x, dtype=float)
        if x.shape != self.basis.shape[1:]:
            raise DimensionMismatch(f"element shape {x.shape} vs subspace {self.basis.shape[1:]}")
        if self.dim == 0:
            return np.zeros_like(x)
        return np.einsum("a,aij->ij", self.coefficients(x), self.basis)

    def residual(self, x: np.ndarray) -> float:
        """``B_theta``-norm of ``x - project(x)``."""
        return norm_theta(x - self.project(x))

    def contains(self, x: np.ndarray, tol: float = SPAN_TOL) -> bool:
        return self.residual(x) <= tol * max(1.0, norm_theta(x))

    def containment_residual(self, other: "Subspace") -> float:
        """Largest relative residual of ``other``'s basis against this span."""
        if other.dim == 0:
            return 0.0
        return max(self.residual(b) / max(norm_theta(b), 1e-300) for b in other.basis)

    def contains_space(self, other: "Subspace", tol: float = SPAN_TOL) -> bool:
        return self.containment_residual(other) <= tol

    def span_residual(self, other: "Subspace") -> float:
        if self.dim != other.dim:
            return float("inf")
        return max(self.containment_residual(other), other.containment_residual(self))

    def same_span(self, other: "Subspace", tol: float = SPAN_TOL) -> bool:
        return self.span_residual(other) <= tol

    def orthonormal_frame(self, inner: Callable[[np.ndarray, np.ndarray], float] = b_theta) -> np.ndarray:
        """Gram-Schmidt (twice) of the basis under ``inner``."""
        frame: list[np.ndarray] = []
        for b in self.basis:
            v = b.copy()
            for _ in range(2):
                for e in frame:
                    v = v - inner(e, v) * e
            nv = inner(v, v)
            if nv <= 1e-24:
                raise SingularGram(f"dependent basis for subspace {self.label!r}")
            frame.append(v / np.sqrt(nv))
        if not frame:
            return np.zeros_like(self.basis)
        return np.array(frame)

    def direct_sum(self, *others: "Subspace", label: str = "") -> "Subspace":
        parts = [self.basis] + [o.basis for o in others]
        return Subspace(np.concatenate(parts, axis=0), label or "+".join(
            p.label for p in (self,) + others))

    def __add__(self, other: "Subspace") -> "Subspace":
        return self.direct_sum(other)

    def map(self, f: Callable[[np.ndarray], np.ndarray], label: str = "") -> "Subspace":
        return Subspace.spanned_by([f(b) for b in self.basis], label, n=self.n)

    def relabel(self, label: str) -> "Subspace":
        return Subspace(self.basis, label)


def project(s: Subspace, x: np.ndarray) -> np.ndarray:
    return s.project(x)


def bracket_span(s: Subspace, t: Subspace, label: str = "") -> Subspace:
    """Span of ``[s, t]``."""
    images = [bracket(x, y) for x in s.basis for y in t.basis]
    return Subspace.spanned_by(images, label, n=s.n)


def closure_residual(s: Subspace) -> float:
    """Largest relative residual of ``[x_i, x_j]`` against ``s``."""
    worst = 0.0
    for i, x in enumerate(s.basis):
        for y in s.basis[i + 1:]:
            z = bracket(x, y)
            nz = norm_theta(z)
            if nz > 0:
                worst = max(worst, s.residual(z) / max(1.0, nz))
    return worst


def is_subalgebra(s: Subspace, tol: float = STRUCT_TOL) -> bool:
    return closure_residual(s) <= tol


def lower_central_series(s: Subspace, max_steps: int | None = None) -> list[int]:
    """Dimensions of ``s, [s,s], [s,[s,s]], ...`` until zero or stable."""
    steps = max_steps if max_steps is not None else s.n + 2
    dims = [s.dim]
    current = s
    for _ in range(steps):
        current = bracket_span(s, current)
        dims.append(current.dim)
        if current.dim == 0 or current.dim == dims[-2]:
            break
    return dims


def derived_series(s: Subspace, max_steps: int | None = None) -> list[int]:
    steps = max_steps if max_steps is not None else s.n + 2
    dims = [s.dim]
    current = s
    for _ in range(steps):
        current = bracket_span(current, current)
        dims.append(current.dim)
        if current.dim == 0 or current.dim == dims[-2]:
            break
    return dims


def is_nilpotent(s: Subspace) -> bool:
    return lower_central_series(s)[-1] == 0


def is_solvable(s: Subspace) -> bool:
    return derived_series(s)[-1] == 0
