import numpy as np
import pytest

from opsum import core
from opsum.randmat import random_complex, random_invertible, random_psd, random_unitary

from conftest import eigenvalues_by_companion


def test_eig_diagonal():
    report = core.eig(np.diag([1.0, 2.0, 3.0]))
    assert np.allclose(report.eigenvalues, [1.0, 2.0, 3.0])
    assert report.is_real_nonnegative
    assert report.max_dist_to_rplus == 0.0


def test_eig_nilpotent():
    report = core.eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(report.eigenvalues, [0.0, 0.0])
    assert report.dimension == 2


def test_eig_matches_companion_oracle(rng):
    M = random_complex(rng, 5)
    w = core.eig(M).eigenvalues
    w_oracle = eigenvalues_by_companion(M)
    assert core.matching_distance(w, w_oracle) < 1e-8


def test_eig_rejects_bad_input():
    with pytest.raises(core.ShapeError):
        core.eig(np.ones((2, 3)))
    with pytest.raises(ValueError):
        core.eig(np.array([[np.inf, 0], [0, 1.0]]))


def test_eig_similarity_invariant(rng):
    for n in (2, 5, 16):
        M = random_complex(rng, n)
        U = random_invertible(rng, n, cond=50.0)
        w1 = core.eig(M).eigenvalues
        w2 = core.eig(U @ M @ np.linalg.inv(U)).eigenvalues
        assert core.matching_distance(w1, w2) <= 1e-7 * max(1.0, core.op_norm(M))


def test_eig_deterministic(rng):
    M = random_complex(rng, 6)
    r1, r2 = core.eig(M), core.eig(M)
    assert np.array_equal(r1.eigenvalues, r2.eigenvalues)


def test_dist_to_rplus_values():
    assert core.dist_to_rplus(-1.0) == 1.0
    assert core.dist_to_rplus(1j) == 1.0
    assert core.dist_to_rplus(-3 + 4j) == 5.0
    assert core.dist_to_rplus(2.5) == 0.0
    assert core.dist_to_rplus(0.0) == 0.0


def test_is_psd_basics(rng):
    assert core.is_psd(np.eye(3))
    assert not core.is_psd(np.diag([1.0, -1e-3]), tol=1e-9)
    Q = random_complex(rng, 4)
    assert core.is_psd(Q.conj().T @ Q)          # Gram construction oracle
    assert core.is_psd(np.zeros((2, 2)))


def test_is_psd_sum_closure(rng):
    for _ in range(20):
        A = random_psd(rng, 4)
        B = random_psd(rng, 4)
        assert core.is_psd(A + B)


def test_positivity_certificate_kinds():
    cert = core.positivity_certificate(np.array([[1.0, 1.0], [0.0, 2.0]]))
    assert cert.kind == "similar-to-positive"
    assert cert.witness is not None
    V = cert.witness
    D = np.linalg.inv(V) @ cert.subject @ V
    assert np.linalg.norm(D - np.diag(np.diagonal(D))) < 1e-8

    assert core.positivity_certificate(np.array([[0.0, 1.0], [0.0, 0.0]])).kind == "neither"
    assert core.positivity_certificate(np.diag([-1.0, 1.0])).kind == "neither"
    assert core.positivity_certificate(np.eye(2)).kind == "positive-semidefinite"


def test_positivity_certificate_repeated_eigenvalues(rng):
    # exact multiplicities stress the witness construction
    S = random_invertible(rng, 6, cond=8.0)
    M = S @ np.diag([2.0, 2.0, 2.0, 0.0, 0.0, 1.0]) @ np.linalg.inv(S)
    cert = core.positivity_certificate(M)
    assert core.is_similar_to_positive(cert)
    V = cert.witness
    D = np.real(np.linalg.inv(V) @ M @ V).diagonal()
    assert np.linalg.norm(V @ np.diag(D) @ np.linalg.inv(V) - M) < 1e-7 * core.op_norm(M)


def test_positivity_certificate_planted_family(rng):
    for n in (2, 5, 16):
        for cond in (10.0, 1e3, 1e4):
            for _ in range(5):
                V = random_invertible(rng, n, cond=cond)
                d = rng.uniform(0.0, 3.0, size=n)
                M = V @ np.diag(d) @ np.linalg.inv(V)
                cert = core.positivity_certificate(M)
                assert core.is_similar_to_positive(cert), (n, cond, cert.diagnostics)


def test_certificate_records_tolerance():
    cert = core.positivity_certificate(np.eye(2), tol=1e-7)
    assert cert.tolerance == 1e-7


def test_hs_inner_identities(rng):
    n = 4
    assert core.hs_inner(np.eye(n), np.eye(n)) == pytest.approx(n)
    X = random_complex(rng, n)
    assert core.hs_inner(X, X) == pytest.approx(np.sum(np.abs(X) ** 2))
    Y = random_complex(rng, n)
    assert core.hs_inner(X, Y) == pytest.approx(np.conj(core.hs_inner(Y, X)))
    with pytest.raises(core.ShapeError):
        core.hs_inner(np.eye(2), np.eye(3))


def test_hs_inner_cauchy_schwarz(rng):
    for _ in range(25):
        X = random_complex(rng, 3)
        Y = random_complex(rng, 3)
        lhs = abs(core.hs_inner(X, Y)) ** 2
        rhs = core.hs_inner(X, X).real * core.hs_inner(Y, Y).real
        assert lhs <= rhs * (1 + 1e-10)


def test_hs_inner_positive_on_luders(rng):
    # <Phi(X), X> >= 0 checked against the vectorized quadratic form
    from opsum.elementary import ElementaryOperator
    n = 3
    op = ElementaryOperator.build(
        [(P, P) for P in (random_psd(rng, n), random_psd(rng, n))])
    Mv = op.to_matrix()
    for _ in range(10):
        X = random_complex(rng, n)
        val = core.hs_inner(op.apply(X), X).real
        x = X.flatten(order="F")
        assert val >= -1e-10
        assert val == pytest.approx(np.real(x.conj() @ Mv @ x), rel=1e-10, abs=1e-10)


def test_matching_distance():
    assert core.matching_distance([1.0, 2.0], [2.0, 1.0]) == 0.0
    assert core.matching_distance([1.0, 2.0], [1.1, 2.0]) == pytest.approx(0.1)
    with pytest.raises(core.ShapeError):
        core.matching_distance([1.0], [1.0, 2.0])
