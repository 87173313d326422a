"""Equation solvers consumed by the decomposition pipelines.

Three solvers live here:

* :func:`block_inverse` inverts a 2x2 block matrix through the Schur
  complement of its leading block.
* :func:`sylvester_solve` solves A X - X B = C by unitary triangularization
  of both coefficients followed by column-wise back substitution (the dense
  vectorized solve is kept in the test suite as an oracle only).
* :func:`commutator_solve` factors a trace-zero matrix as X Y - Y X.  Every
  commutator has zero trace, and conversely every trace-zero matrix is a
  commutator; the construction first conjugates the target to zero diagonal
  (:func:`zero_diagonalize`), then reads Y off entrywise against a fixed
  diagonal X with unit gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import as_square_matrix, frob

__all__ = [
    "SolverConfig",
    "DEFAULT_SOLVER_CONFIG",
    "BlockMatrix2x2",
    "CommutatorSolution",
    "SingularBlockError",
    "SpectralGapError",
    "NonzeroTraceError",
    "block_inverse",
    "sylvester_solve",
    "zero_diagonalize",
    "commutator_solve",
]


@dataclass(frozen=True)
class SolverConfig:
    """Shared numerical margins; pipelines tune these jointly."""

    spectral_gap_margin: float = 1e-6
    condition_cap: float = 1e12
    trace_tol: float = 1e-10      # zero-trace gate, relative to max(1, ||T||_F)
    diagonal_tol: float = 1e-10   # zero-diagonal target, same scale


DEFAULT_SOLVER_CONFIG = SolverConfig()


class SingularBlockError(ValueError):
    """A required block (or its Schur complement) is numerically singular."""

    def __init__(self, block: str, cond: float, cap: float):
        self.block = block
        self.cond = cond
        super().__init__(
            f"block '{block}' is numerically singular: condition estimate "
            f"{cond:.3e} exceeds cap {cap:.1e}")


class SpectralGapError(ValueError):
    """Coefficient spectra overlap within the configured margin."""

    def __init__(self, lam_a: complex, lam_b: complex, gap: float, margin: float):
        self.closest_pair = (lam_a, lam_b)
        self.gap = gap
        super().__init__(
            f"spectra overlap within margin {margin:.1e}: closest eigenvalue "
            f"pair {lam_a:.6g} and {lam_b:.6g} at distance {gap:.3e}")


class NonzeroTraceError(ValueError):
    """Input trace is not zero; no commutator factorization can exist."""

    def __init__(self, trace: complex, bound: float):
        self.trace = trace
        super().__init__(
            f"trace {trace:.6g} exceeds the zero-trace gate {bound:.3e}; "
            "every commutator X Y - Y X has zero trace, so a nonzero-trace "
            "matrix is not a commutator")


@dataclass(frozen=True)
class BlockMatrix2x2:
    """Blocks u (k x k), x (k x m), y (m x k), z (m x m)."""

    u: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        u = as_square_matrix(self.u, "u")
        z = as_square_matrix(self.z, "z")
        k, m = u.shape[0], z.shape[0]
        x = np.asarray(self.x, dtype=complex)
        y = np.asarray(self.y, dtype=complex)
        if x.shape != (k, m):
            raise ValueError(f"x must be {k}x{m}, got {x.shape}")
        if y.shape != (m, k):
            raise ValueError(f"y must be {m}x{k}, got {y.shape}")

    @classmethod
    def from_matrix(cls, M, k: int) -> "BlockMatrix2x2":
        A = as_square_matrix(M)
        if not 0 < k < A.shape[0]:
            raise ValueError(f"split index {k} out of range for {A.shape[0]}")
        return cls(A[:k, :k], A[:k, k:], A[k:, :k], A[k:, k:])

    def assemble(self) -> np.ndarray:
        return np.block([[self.u, self.x], [self.y, self.z]])


def block_inverse(S: BlockMatrix2x2,
                  config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> BlockMatrix2x2:
    """Invert a 2x2 block matrix via the Schur complement d = (z - y u^-1 x)^-1.

    Requires the leading block u and the Schur complement to be invertible
    (condition estimates below ``config.condition_cap``); the assembled
    inverse is::

        [[u^-1 (1 + x d y u^-1),  -u^-1 x d],
         [-d y u^-1,               d       ]]

    Raises
    ------
    SingularBlockError
        If u or the Schur complement fails the condition cap; the error
        carries the offending block's condition estimate.
    """
    u = np.asarray(S.u, dtype=complex)
    cond_u = float(np.linalg.cond(u))
    if not np.isfinite(cond_u) or cond_u > config.condition_cap:
        raise SingularBlockError("u", cond_u, config.condition_cap)
    u_inv = np.linalg.inv(u)
    schur = S.z - S.y @ u_inv @ S.x
    cond_d = float(np.linalg.cond(schur))
    if not np.isfinite(cond_d) or cond_d > config.condition_cap:
        raise SingularBlockError("z - y u^-1 x", cond_d, config.condition_cap)
    d = np.linalg.inv(schur)
    k = u.shape[0]
    return BlockMatrix2x2(
        u=u_inv @ (np.eye(k) + S.x @ d @ S.y @ u_inv),
        x=-u_inv @ S.x @ d,
        y=-d @ S.y @ u_inv,
        z=d,
    )


def _spectral_gap(A: np.ndarray, B: np.ndarray):
    wa = np.linalg.eigvals(A)
    wb = np.linalg.eigvals(B)
    dist = np.abs(wa[:, None] - wb[None, :])
    i, j = np.unravel_index(np.argmin(dist), dist.shape)
    return float(dist[i, j]), complex(wa[i]), complex(wb[j])


def sylvester_solve(A, B, C,
                    config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> np.ndarray:
    """Solve A X - X B = C, unique when the spectra of A and B are disjoint.

    Both coefficients are reduced to upper triangular form by unitary
    similarity; the triangular system is then solved one column at a time.
    Cost is O(n^3) against O(n^6) for the dense vectorized solve.

    Raises
    ------
    SpectralGapError
        If min |lambda_A - lambda_B| falls below the configured margin; the
        error carries the closest eigenvalue pair.
    """
    A = as_square_matrix(A, "A")
    B = as_square_matrix(B, "B")
    C = np.asarray(C, dtype=complex)
    p, q = A.shape[0], B.shape[0]
    if C.shape != (p, q):
        raise ValueError(f"C must be {p}x{q}, got {C.shape}")

    gap, la, lb = _spectral_gap(A, B)
    if gap < config.spectral_gap_margin:
        raise SpectralGapError(la, lb, gap, config.spectral_gap_margin)

    TA, QA = scipy.linalg.schur(A, output="complex")
    TB, QB = scipy.linalg.schur(B, output="complex")
    F = QA.conj().T @ C @ QB
    Y = np.zeros((p, q), dtype=complex)
    eye = np.eye(p)
    for j in range(q):
        rhs = F[:, j] + Y[:, :j] @ TB[:j, j]
        Y[:, j] = scipy.linalg.solve_triangular(TA - TB[j, j] * eye, rhs, lower=False)
    return QA @ Y @ QB.conj().T


@dataclass(frozen=True)
class CommutatorSolution:
    """Factors X, Y with X Y - Y X equal to the target within ``residual``."""

    X: np.ndarray
    Y: np.ndarray
    residual: float
    similarity_used: np.ndarray


# ---------------------------------------------------------------------------
# zero-diagonalization: find unit vectors with vanishing quadratic form
# ---------------------------------------------------------------------------

def _zero_form_vector_2x2(C: np.ndarray, tiny: float) -> np.ndarray:
    """Unit y in C^2 with y* C y ~ 0, assuming 0 lies in the numerical range.

    Splits C = H + iK into Hermitian parts.  The unit vectors annihilating
    the H-form lie on a circle parameterized by a phase; on that circle the
    K-form is an exact sinusoid, so its root is available in closed form.
    """
    H = (C + C.conj().T) / 2.0
    K = (C - C.conj().T) / 2.0j
    H = (H + H.conj().T) / 2.0
    K = (K + K.conj().T) / 2.0
    mu, U = np.linalg.eigh(H)
    lam_minus = max(-float(mu[0]), 0.0)
    lam_plus = max(float(mu[1]), 0.0)
    total = lam_plus + lam_minus

    if total <= tiny:
        # H ~ 0: kill the K-form across its own eigenvectors
        nu, W = np.linalg.eigh(K)
        span = float(nu[1] - nu[0])
        if span <= tiny:
            return U[:, 0]
        a = math.sqrt(max(float(nu[1]), 0.0) / span)
        b = math.sqrt(max(-float(nu[0]), 0.0) / span)
        return a * W[:, 0] + b * W[:, 1]

    u_plus, u_minus = U[:, 1], U[:, 0]
    amp_plus = math.sqrt(lam_minus / total)   # coefficient on u_plus
    amp_minus = math.sqrt(lam_plus / total)
    base = (amp_plus ** 2) * float(np.real(u_plus.conj() @ K @ u_plus)) \
        + (amp_minus ** 2) * float(np.real(u_minus.conj() @ K @ u_minus))
    kappa = complex(u_plus.conj() @ K @ u_minus)
    R = 2.0 * amp_plus * amp_minus * abs(kappa)
    # K-form along the circle: base + R*cos(arg(kappa) + psi); pick the root
    if R <= tiny:
        psi = 0.0
    else:
        c = min(1.0, max(-1.0, -base / R))
        psi = math.atan2(kappa.imag, kappa.real) - math.acos(c)
    y = amp_plus * np.exp(1j * psi) * u_plus + amp_minus * u_minus
    return y / np.linalg.norm(y)


def _plane_target(M: np.ndarray, u1: np.ndarray, u2: np.ndarray,
                  target: complex, tiny: float) -> np.ndarray:
    """Unit x in span{u1, u2} with x* M x ~ target.

    Valid whenever ``target`` lies in the numerical range of the compression
    of M to the plane, which holds by convexity when it lies on the segment
    between the Rayleigh values of u1 and u2.
    """
    Q, _ = np.linalg.qr(np.column_stack([u1, u2]))
    C = Q.conj().T @ M @ Q
    y = _zero_form_vector_2x2(C - target * np.eye(2), tiny)
    x = Q @ y
    return x / np.linalg.norm(x)


def _segment_distance(p: complex, a: complex, b: complex) -> float:
    """Distance from point p to the segment [a, b] in the complex plane."""
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0.0:
        return abs(p - a)
    t = ((p - a).real * ab.real + (p - a).imag * ab.imag) / denom
    t = min(1.0, max(0.0, t))
    return abs(p - (a + t * ab))


def _zero_form_unit_vector(M: np.ndarray) -> np.ndarray:
    """Unit v with v* M v ~ 0 for a (near) trace-zero matrix M.

    The mean of the eigenvalues is the trace over n, so zero lies in the
    convex hull of the spectrum and hence in the numerical range.  The
    vector is located by walking Rayleigh paths: either an eigenvalue is
    already ~0, or zero sits on a segment between two eigenvalues, or inside
    a triangle of three; segments reduce to the closed-form plane solve and
    triangles to two nested plane solves.  All screening thresholds are
    relative to the spectral scale so tiny-norm blocks behave like unit-norm
    ones.
    """
    m = M.shape[0]
    if m == 1:
        return np.ones(1, dtype=complex)

    w, V = np.linalg.eig(M)
    wscale = float(np.max(np.abs(w)))
    i0 = int(np.argmin(np.abs(w)))
    if wscale <= 1e-13 * max(1.0, frob(M)) or abs(w[i0]) <= 1e-11 * wscale:
        # whole spectrum negligible, or one eigenvalue already sits at zero
        v = V[:, i0]
        return v / np.linalg.norm(v)
    tiny = 1e-13 * wscale

    # best segment through the origin
    best_pair, best_seg = None, math.inf
    for i in range(m):
        for j in range(i + 1, m):
            d = _segment_distance(0.0, complex(w[i]), complex(w[j]))
            if d < best_seg:
                best_seg, best_pair = d, (i, j)
    if best_seg <= 1e-12 * wscale:
        i, j = best_pair
        return _plane_target(M, V[:, i], V[:, j], 0.0, tiny)

    # best triangle containing the origin (inside-ness by signed areas)
    best_triple, best_margin = None, -math.inf
    for i in range(m):
        zi = complex(w[i])
        for j in range(i + 1, m):
            zj = complex(w[j])
            for k in range(j + 1, m):
                zk = complex(w[k])
                area = (zj - zi).real * (zk - zi).imag - (zj - zi).imag * (zk - zi).real
                if abs(area) <= 1e-14 * wscale * wscale:
                    continue
                s1 = (zj - zi).real * (-zi).imag - (zj - zi).imag * (-zi).real
                s2 = (zk - zj).real * (-zj).imag - (zk - zj).imag * (-zj).real
                s3 = (zi - zk).real * (-zk).imag - (zi - zk).imag * (-zk).real
                margin = min(s1 / area, s2 / area, s3 / area)
                if margin > best_margin:
                    best_margin, best_triple = margin, (i, j, k)

    if best_triple is None:
        # numerically collinear spectrum: fall back to the closest segment
        i, j = best_pair
        return _plane_target(M, V[:, i], V[:, j], 0.0, tiny)

    i, j, k = best_triple
    zi, zj, zk = complex(w[i]), complex(w[j]), complex(w[k])
    # cevian from zk through 0 meets the segment [zi, zj] at p = -t zk:
    # solve zi + s (zj - zi) + t zk = 0 for real s, t
    mat = np.array([[(zj - zi).real, zk.real],
                    [(zj - zi).imag, zk.imag]])
    rhs = np.array([-zi.real, -zi.imag])
    try:
        s, _t = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError:
        s = 0.5
    s = min(1.0, max(0.0, float(s)))
    p = zi + s * (zj - zi)
    x1 = _plane_target(M, V[:, i], V[:, j], p, tiny)
    # zero lies on the segment between the achieved value and the third vertex
    return _plane_target(M, x1, V[:, k], 0.0, tiny)


def _householder_with_first_column(v: np.ndarray) -> np.ndarray:
    """Unitary whose first column is the unit vector v."""
    m = v.shape[0]
    e1 = np.zeros(m, dtype=complex)
    e1[0] = 1.0
    phase = v[0] / abs(v[0]) if abs(v[0]) > 0 else 1.0
    u = v + phase * e1
    u = u / np.linalg.norm(u)
    Q = np.eye(m, dtype=complex) - 2.0 * np.outer(u, u.conj())
    # H e1 = -conj(phase) v; rescale the first column so it is exactly v
    Q[:, 0] *= -phase
    return Q


def zero_diagonalize(T0, config: SolverConfig = DEFAULT_SOLVER_CONFIG):
    """Similarity (in fact unitary) conjugation of a trace-zero matrix to zero diagonal.

    Returns ``(R, Z)`` with Z = R @ T0 @ R^-1, R unitary, and every diagonal
    entry of Z below ``config.diagonal_tol * max(1, ||T0||_F)``.  At each
    recursion level a unit vector with vanishing quadratic form is found on
    the numerical range (it exists because the trace, hence the eigenvalue
    centroid, is zero) and extended to an orthonormal basis; the trailing
    block inherits a zero trace and is processed recursively.

    Raises
    ------
    NonzeroTraceError
        If |trace(T0)| exceeds ``config.trace_tol * max(1, ||T0||_F)``.
    """
    A = as_square_matrix(T0, "T0")
    n = A.shape[0]
    scale = max(1.0, frob(A))
    tr = complex(np.trace(A))
    if abs(tr) > config.trace_tol * scale:
        raise NonzeroTraceError(tr, config.trace_tol * scale)

    diag_bound = config.diagonal_tol * scale
    if np.max(np.abs(np.diagonal(A))) <= diag_bound:
        return np.eye(n, dtype=complex), A.copy()

    M = A.copy()
    U = np.eye(n, dtype=complex)
    for d in range(n - 1):
        block = M[d:, d:]
        if np.max(np.abs(np.diagonal(block))) <= diag_bound:
            break
        v = _zero_form_unit_vector(block)
        Q = _householder_with_first_column(v)
        M[d:, d:] = Q.conj().T @ block @ Q
        M[:d, d:] = M[:d, d:] @ Q
        M[d:, :d] = Q.conj().T @ M[d:, :d]
        U[:, d:] = U[:, d:] @ Q

    worst = float(np.max(np.abs(np.diagonal(M))))
    if worst > diag_bound:
        raise RuntimeError(
            f"zero-diagonalization stalled: worst diagonal entry {worst:.3e} "
            f"exceeds target {diag_bound:.3e}")
    R = U.conj().T
    return R, M


def commutator_solve(T0, config: SolverConfig = DEFAULT_SOLVER_CONFIG) -> CommutatorSolution:
    """Factor a trace-zero matrix as a commutator X Y - Y X.

    After conjugating the target to zero diagonal, X is taken as the
    conjugate of diag(1, 2, ..., n) and Y is read off entrywise,
    Y_ij = Z_ij / (i - j) off the diagonal and 0 on it.  The unit gaps in X
    keep ||Y|| at the scale of ||Z|| without amplification.

    Raises
    ------
    NonzeroTraceError
        For any input whose trace exceeds the zero-trace gate; every
        commutator has zero trace, so such inputs admit no factorization.
    """
    A = as_square_matrix(T0, "T0")
    n = A.shape[0]
    scale = max(1.0, frob(A))
    tr = complex(np.trace(A))
    if abs(tr) > config.trace_tol * scale:
        raise NonzeroTraceError(tr, config.trace_tol * scale)

    if frob(A) == 0.0:
        zero = np.zeros_like(A)
        return CommutatorSolution(zero, zero.copy(), 0.0, np.eye(n, dtype=complex))

    R, Z = zero_diagonalize(A, config)
    x = np.arange(1, n + 1, dtype=float)
    gaps = x[:, None] - x[None, :]
    np.fill_diagonal(gaps, 1.0)
    Yz = Z / gaps
    np.fill_diagonal(Yz, 0.0)
    Xz = np.diag(x).astype(complex)

    Rinv = np.linalg.inv(R)
    X = Rinv @ Xz @ R
    Y = Rinv @ Yz @ R
    residual = frob(X @ Y - Y @ X - A)
    bound = 1e-8 * scale
    if residual > bound:
        raise RuntimeError(
            f"commutator residual {residual:.3e} exceeds bound {bound:.3e}")
    return CommutatorSolution(X, Y, residual, R)
