"""Restricted roots of so(2,n): the B2 root spaces, root vectors, the
Iwasawa algebra a + n with its left-invariant metric, and the named
subalgebras used by the hypersurface constructions.

Index convention: rows/columns 0, 1 belong to the 2-block, 2 and 3 are the
first two coordinates of the n-block, and 4, ..., n+1 carry the vectors
``v, w`` in R^{n-2}.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lie_core import (
    AlgebraError,
    Subspace,
    STRUCT_TOL,
    bracket,
    bracket_span,
    cartan_theta,
    check_element,
    k_part,
    p_part,
)

MIN_N = 3


def require_n(n: int) -> int:
    if int(n) != n or n < MIN_N:
        raise AlgebraError(f"n must be an integer >= {MIN_N}, got {n}")
    return int(n)


@dataclass(frozen=True, order=True)
class RootLabel:
    """The restricted root ``c1*alpha_1 + c2*alpha_2``."""

    c1: int
    c2: int

    def __post_init__(self):
        if (self.c1, self.c2) not in _B2:
            raise AlgebraError(f"({self.c1}, {self.c2}) is not a root of B2")

    def __call__(self, h: np.ndarray) -> float:
        a1, a2 = a_coordinates(h)
        return self.c1 * (a1 - a2) + self.c2 * a2

    def __neg__(self) -> "RootLabel":
        return RootLabel(-self.c1, -self.c2)

    @property
    def positive(self) -> bool:
        return self.c1 > 0 or (self.c1 == 0 and self.c2 > 0)

    @property
    def long(self) -> bool:
        return self.c2 % 2 == 0

    @property
    def name(self) -> str:
        sign = "" if self.positive else "-"
        c1, c2 = abs(self.c1), abs(self.c2)
        terms = []
        if c1:
            terms.append("a1")
        if c2:
            terms.append("a2" if c2 == 1 else f"{c2}a2")
        body = "+".join(terms)
        return body if not sign else sign + (body if len(terms) == 1 else f"({body})")

    def __str__(self):
        return self.name


_B2 = {(1, 0), (0, 1), (1, 1), (1, 2), (-1, 0), (0, -1), (-1, -1), (-1, -2)}

ALPHA1 = RootLabel(1, 0)
ALPHA2 = RootLabel(0, 1)
ALPHA12 = RootLabel(1, 1)
ALPHA122 = RootLabel(1, 2)
POSITIVE_ROOTS = (ALPHA1, ALPHA2, ALPHA12, ALPHA122)


# ---------------------------------------------------------------------------
# the maximal abelian subspace a
# ---------------------------------------------------------------------------


def a_element(n: int, a1: float, a2: float) -> np.ndarray:
    h = np.zeros((n + 2, n + 2))
    h[0, 2] = h[2, 0] = a1
    h[1, 3] = h[3, 1] = a2
    return h


def a_coordinates(h: np.ndarray) -> tuple[float, float]:
    return float(h[0, 2]), float(h[1, 3])


def dual_basis(n: int) -> tuple[np.ndarray, np.ndarray]:
    """``H^1, H^2`` with ``alpha_i(H^j) = delta_ij``."""
    return a_element(n, 1.0, 0.0), a_element(n, 1.0, 1.0)


@lru_cache(maxsize=None)
def cartan_subspace(n: int) -> Subspace:
    return Subspace.from_elements(dual_basis(n), "a")


def _trace_quarter(x, y):
    return 0.25 * float(np.einsum("ij,ji->", x, y))


def root_vector(label: RootLabel, n: int) -> np.ndarray:
    """``H_alpha`` in a with ``<H_alpha, H> = alpha(H)`` for all H in a."""
    h1, h2 = dual_basis(n)
    gram = np.array([[_trace_quarter(h1, h1), _trace_quarter(h1, h2)],
                     [_trace_quarter(h2, h1), _trace_quarter(h2, h2)]])
    rhs = np.array([label(h1), label(h2)])
    x = np.linalg.solve(gram, rhs)
    return x[0] * h1 + x[1] * h2


# ---------------------------------------------------------------------------
# root spaces
# ---------------------------------------------------------------------------


def _positive_root_basis(n: int, label: RootLabel) -> list[np.ndarray]:
    size = n + 2
    out = []
    if label == ALPHA12:
        for k in range(n - 2):
            x = np.zeros((size, size))
            c = 4 + k
            x[0, c] = x[2, c] = x[c, 0] = 1.0
            x[c, 2] = -1.0
            out.append(x)
    elif label == ALPHA2:
        for k in range(n - 2):
            x = np.zeros((size, size))
            c = 4 + k
            x[1, c] = x[3, c] = x[c, 1] = 1.0
            x[c, 3] = -1.0
            out.append(x)
    elif label == ALPHA1:
        x = np.zeros((size, size))
        x[:4, :4] = [[0, 1, 0, 1], [-1, 0, 1, 0], [0, 1, 0, 1], [1, 0, -1, 0]]
        out.append(x)
    elif label == ALPHA122:
        x = np.zeros((size, size))
        x[:4, :4] = [[0, 1, 0, -1], [-1, 0, 1, 0], [0, 1, 0, -1], [-1, 0, 1, 0]]
        out.append(x)
    else:
        raise AlgebraError(f"{label} is not a positive root")
    return [check_element(x) for x in out]


@lru_cache(maxsize=None)
def root_space(n: int, label: RootLabel) -> Subspace:
    """``g_alpha`` with the explicit parametrization (standard basis vectors
    for ``v``, ``w``; ``x = y = 1`` on the one-dimensional spaces)."""
    n = require_n(n)
    if label.positive:
        return Subspace.from_elements(_positive_root_basis(n, label), f"g_{label}")
    pos = root_space(n, -label)
    return Subspace.from_elements([cartan_theta(b) for b in pos.basis], f"g_{label}")


def k0_space(n: int) -> Subspace:
    """Centralizer of a in k: so(n-2) acting on the last n-2 coordinates."""
    size = n + 2
    out = []
    for i in range(4, size):
        for j in range(i + 1, size):
            x = np.zeros((size, size))
            x[i, j], x[j, i] = 1.0, -1.0
            out.append(x)
    return Subspace.from_elements(out, "k0", n=n)


def g0_space(n: int) -> Subspace:
    return cartan_subspace(n).direct_sum(k0_space(n), label="g0")


def p_root_space(n: int, label: RootLabel) -> Subspace:
    """``p_alpha``: the p-parts of ``g_alpha`` (equal for alpha and -alpha)."""
    lab = label if label.positive else -label
    return Subspace.from_elements([p_part(b) for b in root_space(n, lab).basis], f"p_{lab}")


def k_root_space(n: int, label: RootLabel) -> Subspace:
    lab = label if label.positive else -label
    return Subspace.from_elements([k_part(b) for b in root_space(n, lab).basis], f"k_{lab}")


@dataclass(frozen=True, eq=False)
class RootDatum:
    label: RootLabel
    space: Subspace
    root_vector: np.ndarray

    @property
    def multiplicity(self) -> int:
        return self.space.dim

    def eigen_residual(self) -> float:
        """Largest ``|[H, X] - alpha(H) X|`` over ``H`` in {H^1, H^2} and basis X."""
        worst = 0.0
        for h in dual_basis(self.space.n):
            for x in self.space.basis:
                worst = max(worst, float(np.abs(bracket(h, x) - self.label(h) * x).max()))
        return worst


def build_roots(n: int) -> list[RootDatum]:
    """All eight root data, positive roots first."""
    n = require_n(n)
    labels = list(POSITIVE_ROOTS) + [-r for r in POSITIVE_ROOTS]
    return [RootDatum(lab, root_space(n, lab), root_vector(lab, n)) for lab in labels]


def g0_dimension(n: int) -> int:
    return 2 + (n - 2) * (n - 3) // 2


# ---------------------------------------------------------------------------
# Iwasawa algebra a + n
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def nilradical(n: int) -> Subspace:
    return root_space(n, ALPHA1).direct_sum(
        root_space(n, ALPHA2), root_space(n, ALPHA12), root_space(n, ALPHA122), label="n")


@lru_cache(maxsize=None)
def an_algebra(n: int) -> Subspace:
    return cartan_subspace(n).direct_sum(nilradical(n), label="a+n")


@dataclass(frozen=True, eq=False)
class IwasawaFrame:
    a_basis: tuple[np.ndarray, np.ndarray]
    n_basis: np.ndarray

    @property
    def n(self) -> int:
        return self.n_basis.shape[1] - 2

    def abelian_residual(self) -> float:
        h1, h2 = self.a_basis
        return float(np.abs(bracket(h1, h2)).max())

    def lower_central_dims(self) -> list[int]:
        from .lie_core import lower_central_series
        return lower_central_series(Subspace(self.n_basis, "n"))

    def metric(self, x: np.ndarray, y: np.ndarray) -> float:
        return an_metric(x, y)


def iwasawa_frame(n: int) -> IwasawaFrame:
    n = require_n(n)
    return IwasawaFrame(dual_basis(n), nilradical(n).basis)


def an_decompose(x: np.ndarray, tol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Split an element of a + n into its a- and n-components."""
    n = x.shape[0] - 2
    a = cartan_subspace(n)
    nn = nilradical(n)
    h = a.project(x)
    xh = nn.project(x)
    scale = max(1.0, float(np.abs(x).max()))
    if float(np.abs(x - h - xh).max()) > tol * scale:
        raise AlgebraError("element is not in a + n")
    return h, xh


def an_metric(x: np.ndarray, y: np.ndarray) -> float:
    """Left-invariant metric on a + n:
    ``1/4 tr(H1 H2) - 1/8 tr(X1 theta(X2))``."""
    h1, x1 = an_decompose(x)
    h2, x2 = an_decompose(y)
    return 0.25 * float(np.einsum("ij,ji->", h1, h2)) - 0.125 * float(
        np.einsum("ij,ji->", x1, cartan_theta(x2)))


def lift_to_an(x: np.ndarray) -> np.ndarray:
    """Inverse of the p-projection ``a + n -> p`` on tangent vectors:
    ``x_a + 2 * x_n``.  Satisfies ``p_part(lift_to_an(x)) == x`` for x in p."""
    n = x.shape[0] - 2
    return cartan_subspace(n).project(x) + 2.0 * nilradical(n).project(x)


# ---------------------------------------------------------------------------
# named subalgebras
# ---------------------------------------------------------------------------

SUBALGEBRA_NAMES = ("d", "n1", "s1", "h1", "l1", "m1", "q1", "a1", "a_up1", "g1", "k1")


@lru_cache(maxsize=None)
def build_named_subalgebras(n: int) -> dict[str, Subspace]:
    n = require_n(n)
    g = {lab: root_space(n, lab) for lab in list(POSITIVE_ROOTS) + [-r for r in POSITIVE_ROOTS]}
    a_low = Subspace.from_elements([root_vector(ALPHA122, n)], "a1")
    a_up = Subspace.from_elements([root_vector(ALPHA1, n)], "a_up1")
    k0 = k0_space(n)
    n1 = g[ALPHA2].direct_sum(g[ALPHA12], g[ALPHA122], label="n1")
    out = {
        "a1": a_low,
        "a_up1": a_up,
        "n1": n1,
        "d": a_low.direct_sum(n1, label="d"),
        "s1": cartan_subspace(n).direct_sum(n1, label="s1"),
        "h1": a_low.direct_sum(nilradical(n), label="h1"),
        "g1": g[-ALPHA1].direct_sum(a_up, g[ALPHA1], label="g1"),
        "l1": g[-ALPHA1].direct_sum(g0_space(n), g[ALPHA1], label="l1"),
        "m1": g[-ALPHA1].direct_sum(a_up, g[ALPHA1], k0, label="m1"),
        "k1": k_root_space(n, ALPHA1).direct_sum(k0, label="k1"),
    }
    out["q1"] = out["l1"].direct_sum(n1, label="q1")
    return {name: out[name] for name in SUBALGEBRA_NAMES}


def center(s: Subspace) -> Subspace:
    """Center of a subalgebra, via the null space of the stacked ad-maps."""
    k = s.dim
    if k == 0:
        return s
    rows = []
    for y in s.basis:
        rows.append(np.array([bracket(x, y).reshape(-1) for x in s.basis]).T)
    mat = np.concatenate(rows, axis=0)
    _, sing, vt = np.linalg.svd(mat)
    tol = 1e-9 * max(1.0, sing.max() if sing.size else 1.0)
    rank = int((sing > tol).sum())
    null = vt[rank:]
    elems = [np.einsum("a,aij->ij", c, s.basis) for c in null]
    return Subspace.spanned_by(elems, f"z({s.label})", n=s.n)


def heisenberg_profile(s: Subspace) -> dict:
    derived = bracket_span(s, s)
    second = bracket_span(s, derived)
    z = center(s)
    return {
        "dim": s.dim,
        "derived_dim": derived.dim,
        "second_dim": second.dim,
        "center_dim": z.dim,
        "derived_is_center": derived.dim == z.dim and (derived.dim == 0 or derived.same_span(z)),
    }


def is_heisenberg(s: Subspace) -> bool:
    """``(2n-3)``-dimensional two-step nilpotent with ``[s, s]`` equal to the
    one-dimensional center."""
    prof = heisenberg_profile(s)
    return (prof["dim"] == 2 * s.n - 3 and prof["derived_dim"] == 1
            and prof["second_dim"] == 0 and prof["derived_is_center"])


def orthogonality_residual(spaces: list[Subspace]) -> float:
    """Largest cross ``B_theta`` entry between distinct subspaces, relative to norms."""
    from .lie_core import b_theta, norm_theta
    worst = 0.0
    for i, s in enumerate(spaces):
        for t in spaces[i + 1:]:
            for x in s.basis:
                for y in t.basis:
                    worst = max(worst, abs(b_theta(x, y)) / (norm_theta(x) * norm_theta(y)))
    return worst


__all__ = [
    "RootLabel", "RootDatum", "IwasawaFrame", "ALPHA1", "ALPHA2", "ALPHA12", "ALPHA122",
    "POSITIVE_ROOTS", "SUBALGEBRA_NAMES", "a_element", "a_coordinates", "dual_basis",
    "cartan_subspace", "root_vector", "root_space", "p_root_space", "k_root_space",
    "k0_space", "g0_space", "build_roots", "g0_dimension", "nilradical", "an_algebra",
    "iwasawa_frame", "an_decompose", "an_metric", "lift_to_an", "build_named_subalgebras",
    "center", "heisenberg_profile", "is_heisenberg", "orthogonality_residual", "require_n",
    "STRUCT_TOL",
]
