"""Elementary operators X -> sum_j A_j X B_j and Lüders operations.

A Lüders operation is the special case with A_j = B_j all positive
semidefinite.  In finite dimension the matrix algebra is a Hilbert space
under the trace inner product, and an elementary operator with PSD
coefficients is a positive operator on that space, so its spectrum lies in
[0, inf).  This module provides the vectorized (superoperator) matrix, the
spectrum, positivity certificates on the trace inner product, pseudospectra,
and the block construction that plants a prescribed eigenvalue.

Vectorization convention (fixed repo-wide): column-major stacking, so that
``vec(A X B) = (B^T kron A) vec(X)``.  The transpose, not the conjugate
transpose, appears on the B side.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    PsdCertificate,
    ShapeError,
    SpectrumReport,
    as_square_matrix,
    dist_to_rplus,
    eig,
    frob,
    is_psd,
    op_norm,
    positivity_certificate,
)

__all__ = [
    "ElementaryOperator",
    "HsPositivityReport",
    "LudersEigenvalueDemo",
    "UnattainableEigenvalueError",
    "GridSpec",
    "PseudospectrumGrid",
    "hs_positivity",
    "plant_luders_eigenvalue",
    "pseudospectrum",
]


class UnattainableEigenvalueError(ValueError):
    """An eigenvalue off [0, inf) was requested for a PSD-coefficient operator.

    Carries ``bound``, the analytic lower bound dist(lambda, R+) on how far
    any sum of products of PSD matrices stays from lambda * I; see
    :func:`opsum.lab.residual_lower_bound`.
    """

    def __init__(self, lam: complex, bound: float):
        self.lam = lam
        self.bound = bound
        super().__init__(
            f"lambda = {lam:.6g} is not attainable in finite dimension: sums "
            f"of products of PSD matrices have nonnegative real trace, which "
            f"keeps any such operator at distance >= {bound:.6g} from "
            f"lambda * I (the residual lower bound)")


@dataclass(frozen=True)
class ElementaryOperator:
    """Ordered coefficient pairs (A_j, B_j) defining X -> sum_j A_j X B_j."""

    pairs: tuple
    dim: int
    is_luders: bool
    tolerance: float

    @classmethod
    def build(cls, pairs, tol: float = DEFAULT_TOL) -> "ElementaryOperator":
        """Validate coefficient pairs and detect the Lüders case.

        ``is_luders`` is true iff every A_j equals B_j within tolerance and
        all coefficients are PSD.
        """
        if not pairs:
            raise ValueError("coefficient list must be nonempty")
        validated = []
        dim = None
        for i, (A, B) in enumerate(pairs):
            A = as_square_matrix(A, f"A_{i}")
            B = as_square_matrix(B, f"B_{i}")
            if A.shape != B.shape:
                raise ShapeError(
                    f"pair {i}: A is {A.shape}, B is {B.shape}")
            if dim is None:
                dim = A.shape[0]
            elif A.shape[0] != dim:
                raise ShapeError(
                    f"pair {i} has dimension {A.shape[0]}, expected {dim}")
            validated.append((A, B))
        luders = all(
            op_norm(A - B) <= tol * max(1.0, op_norm(A)) and is_psd(A, tol)
            for A, B in validated)
        return cls(pairs=tuple(validated), dim=dim, is_luders=luders, tolerance=tol)

    @property
    def length(self) -> int:
        return len(self.pairs)

    def apply(self, X) -> np.ndarray:
        """Evaluate sum_j A_j X B_j; linear in X."""
        X = as_square_matrix(X, "X")
        if X.shape[0] != self.dim:
            raise ShapeError(f"X must be {self.dim}x{self.dim}, got {X.shape}")
        out = np.zeros_like(X)
        for A, B in self.pairs:
            out += A @ X @ B
        return out

    __call__ = apply

    def to_matrix(self) -> np.ndarray:
        """Superoperator matrix M = sum_j B_j^T kron A_j (column stacking)."""
        n = self.dim
        M = np.zeros((n * n, n * n), dtype=complex)
        for A, B in self.pairs:
            M += np.kron(B.T, A)
        return M

    def spectrum(self, tol: float = DEFAULT_TOL) -> SpectrumReport:
        """Eigenvalues of the superoperator matrix, with the R+ verdict."""
        return eig(self.to_matrix(), tol)

    def coefficients_psd(self, tol: float = DEFAULT_TOL) -> bool:
        return all(is_psd(A, tol) and is_psd(B, tol) for A, B in self.pairs)


@dataclass(frozen=True)
class HsPositivityReport:
    """Positivity of an elementary operator on the trace inner product.

    ``certificate`` classifies the superoperator matrix on the n^2-dim
    space.  When the operator has length 2 with one commuting coefficient
    side, ``commuting_side`` names it ('left' or 'right'), and the spectrum
    distance to [0, inf) verifies the containment for that configuration.
    """

    certificate: PsdCertificate
    spectrum: SpectrumReport
    coefficients_psd: bool
    commuting_side: str | None


def _commuting_side(op: ElementaryOperator, tol: float) -> str | None:
    if op.length != 2:
        return None
    (A1, B1), (A2, B2) = op.pairs
    scale_a = max(1.0, op_norm(A1) * op_norm(A2))
    scale_b = max(1.0, op_norm(B1) * op_norm(B2))
    if op_norm(A1 @ A2 - A2 @ A1) <= tol * scale_a:
        return "left"
    if op_norm(B1 @ B2 - B2 @ B1) <= tol * scale_b:
        return "right"
    return None


def hs_positivity(op: ElementaryOperator, tol: float = DEFAULT_TOL) -> HsPositivityReport:
    """Certify positivity of the vectorized operator on the trace inner product.

    With all coefficients PSD the superoperator matrix is Hermitian PSD, so
    the spectrum is contained in [0, inf); non-PSD coefficients typically
    yield kind ``"neither"`` with diagnostics.
    """
    M = op.to_matrix()
    return HsPositivityReport(
        certificate=positivity_certificate(M, tol),
        spectrum=eig(M, tol),
        coefficients_psd=op.coefficients_psd(tol),
        commuting_side=_commuting_side(op, tol),
    )


@dataclass(frozen=True)
class LudersEigenvalueDemo:
    """A Lüders operation with a planted eigenvalue.

    Given PSD pairs with sum_j A_j B_j = lam * I, the block coefficients
    T_j = diag(A_j, B_j) are PSD and the Lüders operation
    Phi(X) = sum_j T_j X T_j satisfies Phi(X0) = lam * X0 for the strictly
    upper block matrix X0 = [[0, I], [0, 0]].
    """

    lam: float
    operator: ElementaryOperator
    block_coefficients: tuple
    eigenvector: np.ndarray
    eigen_residual: float


def plant_luders_eigenvalue(lam, pairs, tol: float = 1e-8) -> LudersEigenvalueDemo:
    """Build a Lüders operation with the prescribed eigenvalue ``lam``.

    Parameters
    ----------
    lam : real scalar >= 0
        The eigenvalue to plant.  Values off [0, inf) are rejected: the
        trace bound keeps PSD product sums away from lam * I, and the
        raised error carries that exact bound.
    pairs : list of (A_j, B_j)
        PSD matrices of a common size k with ||sum A_j B_j - lam I||_F
        within ``tol * max(1, |lam|)``.

    Raises
    ------
    UnattainableEigenvalueError
        If dist(lam, R+) > 0.
    ValueError
        If the pairs fail the PSD or product-sum check.
    """
    lam = complex(lam)
    bound = dist_to_rplus(lam)
    if bound > 0.0:
        raise UnattainableEigenvalueError(lam, bound)
    lam = float(lam.real)

    if not pairs:
        raise ValueError("need at least one coefficient pair")
    k = as_square_matrix(pairs[0][0], "A_0").shape[0]
    total = np.zeros((k, k), dtype=complex)
    for i, (A, B) in enumerate(pairs):
        if not is_psd(A) or not is_psd(B):
            raise ValueError(f"pair {i} is not PSD at the default tolerance")
        total += np.asarray(A, dtype=complex) @ np.asarray(B, dtype=complex)
    gap = frob(total - lam * np.eye(k))
    if gap > tol * max(1.0, abs(lam)):
        raise ValueError(
            f"sum of products misses lam * I by {gap:.3e} "
            f"(allowed {tol * max(1.0, abs(lam)):.3e})")

    blocks = tuple(
        np.block([[np.asarray(A, dtype=complex), np.zeros((k, k))],
                  [np.zeros((k, k)), np.asarray(B, dtype=complex)]])
        for A, B in pairs)
    op = ElementaryOperator.build([(T, T) for T in blocks])
    X0 = np.zeros((2 * k, 2 * k), dtype=complex)
    X0[:k, k:] = np.eye(k)
    residual = frob(op.apply(X0) - lam * X0)
    if residual > 1e-10 * max(1.0, abs(lam)):
        raise RuntimeError(
            f"planted eigenvalue residual {residual:.3e} exceeds bound")
    return LudersEigenvalueDemo(
        lam=lam, operator=op, block_coefficients=blocks,
        eigenvector=X0, eigen_residual=residual)


@dataclass(frozen=True)
class GridSpec:
    """Rectangle [re0, re1] x [im0, im1] sampled on a steps x steps lattice."""

    re0: float
    re1: float
    im0: float
    im1: float
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("grid must have at least one step")


@dataclass(frozen=True)
class PseudospectrumGrid:
    """Field of smallest singular values of (M - lambda I) over a grid."""

    re: np.ndarray
    im: np.ndarray
    sigma_min: np.ndarray   # shape (len(im), len(re))

    def rows(self):
        """Yield (re, im, sigma_min) rows, row-major over the grid."""
        for i, b in enumerate(self.im):
            for j, a in enumerate(self.re):
                yield float(a), float(b), float(self.sigma_min[i, j])


def pseudospectrum(op: ElementaryOperator, grid: GridSpec) -> PseudospectrumGrid:
    """Smallest singular value of (vectorized op - lambda I) over a grid.

    Deterministic; grid points are independent, so the evaluation order
    does not affect the result.
    """
    M = op.to_matrix()
    N = M.shape[0]
    re = np.linspace(grid.re0, grid.re1, grid.steps)
    im = np.linspace(grid.im0, grid.im1, grid.steps)
    out = np.empty((grid.steps, grid.steps))
    eye = np.eye(N)
    for i, b in enumerate(im):
        for j, a in enumerate(re):
            out[i, j] = np.linalg.svd(M - (a + 1j * b) * eye, compute_uv=False)[-1]
    return PseudospectrumGrid(re=re, im=im, sigma_min=out)
