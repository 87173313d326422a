"""Shared generators and independent oracles for the test suite.

Oracles deliberately take different code paths from the implementations they
check: characteristic polynomials come from the trace recursion (not the
eigensolver), Sylvester solutions from the dense Kronecker system, block
inverses from plain dense inversion.
"""

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def charpoly_coefficients(M: np.ndarray) -> np.ndarray:
    """Characteristic polynomial by the Faddeev-LeVerrier trace recursion.

    Returns [1, c1, ..., cn] with p(x) = x^n + c1 x^(n-1) + ... + cn,
    computed without any eigensolve.
    """
    n = M.shape[0]
    coeffs = np.empty(n + 1, dtype=complex)
    coeffs[0] = 1.0
    Mk = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        Mk = M @ Mk
        ck = -np.trace(Mk) / k
        coeffs[k] = ck
        Mk = Mk + ck * np.eye(n)
    return coeffs


def eigenvalues_by_companion(M: np.ndarray) -> np.ndarray:
    """Roots of the characteristic polynomial via the companion matrix."""
    return np.roots(charpoly_coefficients(M))


def sylvester_by_kron(A: np.ndarray, B: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Dense vectorized solve of A X - X B = C (column-major stacking)."""
    p, q = A.shape[0], B.shape[0]
    K = np.kron(np.eye(q), A) - np.kron(B.T, np.eye(p))
    x = np.linalg.solve(K, C.flatten(order="F"))
    return x.reshape((p, q), order="F")


def superop_by_matrix_units(apply_fn, n: int) -> np.ndarray:
    """Assemble a superoperator matrix by applying the map to matrix units.

    Column-major stacking: the column for unit E_pq sits at index q*n + p.
    """
    M = np.empty((n * n, n * n), dtype=complex)
    for q in range(n):
        for p in range(n):
            E = np.zeros((n, n), dtype=complex)
            E[p, q] = 1.0
            M[:, q * n + p] = apply_fn(E).flatten(order="F")
    return M


def random_block_system(rng, k: int, m: int):
    """Well-conditioned random 2x2 block matrix of total size k + m."""
    n = k + m
    U, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    V, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    s = rng.uniform(1.0, 3.0, size=n)
    return (U * s) @ V.conj().T
