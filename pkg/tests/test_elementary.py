import numpy as np
import pytest

from opsum.core import ShapeError, dist_to_rplus, frob, matching_distance, op_norm
from opsum.elementary import (
    ElementaryOperator,
    GridSpec,
    UnattainableEigenvalueError,
    hs_positivity,
    plant_luders_eigenvalue,
    pseudospectrum,
)
from opsum.randmat import random_complex, random_psd, random_unitary, scalar_product_pairs

from conftest import superop_by_matrix_units


def luders_from(rng, n, m):
    return ElementaryOperator.build([(P, P) for P in (random_psd(rng, n) for _ in range(m))])


# --- construction -----------------------------------------------------------

def test_build_identity_is_luders():
    op = ElementaryOperator.build([(np.eye(2), np.eye(2))])
    assert op.is_luders and op.length == 1 and op.dim == 2


def test_build_projection_is_luders():
    P = np.diag([1.0, 0.0])
    assert ElementaryOperator.build([(P, P)]).is_luders


def test_build_non_psd_not_luders():
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    assert not ElementaryOperator.build([(N, np.eye(2))]).is_luders


def test_build_rejects_bad_shapes():
    with pytest.raises(ValueError):
        ElementaryOperator.build([])
    with pytest.raises(ShapeError):
        ElementaryOperator.build([(np.eye(2), np.eye(3))])
    with pytest.raises(ShapeError):
        ElementaryOperator.build([(np.eye(2), np.eye(2)), (np.eye(3), np.eye(3))])


# --- apply / vectorize ------------------------------------------------------

def test_apply_identity_map(rng):
    op = ElementaryOperator.build([(np.eye(3), np.eye(3))])
    X = random_complex(rng, 3)
    assert np.allclose(op.apply(X), X)


def test_apply_linear(rng):
    op = luders_from(rng, 3, 2)
    X, Y = random_complex(rng, 3), random_complex(rng, 3)
    a, b = 0.7 - 0.2j, -1.1 + 0.4j
    lhs = op.apply(a * X + b * Y)
    rhs = a * op.apply(X) + b * op.apply(Y)
    assert frob(lhs - rhs) <= 1e-12 * max(1.0, frob(rhs))


def test_vectorize_identity():
    op = ElementaryOperator.build([(np.eye(3), np.eye(3))])
    assert np.allclose(op.to_matrix(), np.eye(9))


def test_vectorize_matches_application(rng):
    A, B = random_complex(rng, 3), random_complex(rng, 3)
    op = ElementaryOperator.build([(A, B)])
    M = op.to_matrix()
    X = random_complex(rng, 3)
    lhs = M @ X.flatten(order="F")
    rhs = (A @ X @ B).flatten(order="F")
    assert np.linalg.norm(lhs - rhs) <= 1e-12 * max(1.0, np.linalg.norm(rhs))


def test_vectorize_additive(rng):
    pairs = [(random_complex(rng, 2), random_complex(rng, 2)) for _ in range(2)]
    M = ElementaryOperator.build(pairs).to_matrix()
    M_sum = sum(ElementaryOperator.build([p]).to_matrix() for p in pairs)
    assert np.allclose(M, M_sum)


# --- spectrum ---------------------------------------------------------------

def test_spectrum_left_multiplication():
    A = np.diag([1.0, 2.0])
    op = ElementaryOperator.build([(A, np.eye(2))])
    w = op.spectrum().eigenvalues
    assert matching_distance(w, [1.0, 1.0, 2.0, 2.0]) < 1e-12


def test_spectrum_identity_n3():
    op = ElementaryOperator.build([(np.eye(3), np.eye(3))])
    assert matching_distance(op.spectrum().eigenvalues, np.ones(9)) < 1e-12


def test_spectrum_matches_matrix_unit_oracle(rng):
    for n, m in [(2, 1), (3, 2), (4, 3), (6, 4)]:
        pairs = [(random_complex(rng, n), random_complex(rng, n)) for _ in range(m)]
        op = ElementaryOperator.build(pairs)
        M_oracle = superop_by_matrix_units(op.apply, n)
        w1 = op.spectrum().eigenvalues
        w2 = np.linalg.eigvals(M_oracle)
        assert matching_distance(w1, w2) <= 1e-8


def test_spectrum_scaling_covariance(rng):
    op = luders_from(rng, 3, 2)
    c = 0.8 - 1.3j
    scaled = ElementaryOperator.build([(c * A, B) for A, B in op.pairs])
    w1 = c * op.spectrum().eigenvalues
    w2 = scaled.spectrum().eigenvalues
    assert matching_distance(w1, w2) <= 1e-9 * max(1.0, np.abs(w1).max())


def test_spectrum_psd_coefficients_nonnegative(rng):
    for _ in range(15):
        op = luders_from(rng, 4, 3)
        report = op.spectrum()
        assert report.max_dist_to_rplus <= 1e-9 * max(1.0, op_norm(op.to_matrix()))


# --- positivity on the trace inner product ----------------------------------

def test_hs_positivity_luders(rng):
    for n, m in [(2, 2), (4, 3), (6, 4)]:
        op = luders_from(rng, n, m)
        rep = hs_positivity(op)
        M = op.to_matrix()
        assert op_norm(M - M.conj().T) <= 1e-10 * max(1.0, op_norm(M))
        assert rep.certificate.min_eigenvalue >= -1e-10 * max(1.0, op_norm(M))
        assert rep.coefficients_psd


def test_hs_positivity_commuting_side(rng):
    # two-sided operator with commuting left coefficients, PSD everywhere
    n = 3
    U = random_unitary(rng, n)
    A1 = (U * rng.uniform(0.5, 2.0, n)) @ U.conj().T
    A2 = (U * rng.uniform(0.5, 2.0, n)) @ U.conj().T
    B1, B2 = random_psd(rng, n), random_psd(rng, n)
    op = ElementaryOperator.build([(A1, B1), (A2, B2)])
    rep = hs_positivity(op)
    assert rep.commuting_side == "left"
    assert rep.spectrum.max_dist_to_rplus <= 1e-9 * max(1.0, op_norm(op.to_matrix()))


def test_hs_positivity_non_psd_coefficient():
    N = np.array([[0.0, 1.0], [0.0, 0.0]])
    op = ElementaryOperator.build([(N, np.eye(2))])
    rep = hs_positivity(op)
    assert rep.certificate.kind == "neither"
    assert not rep.coefficients_psd


# --- planted eigenvalue -----------------------------------------------------

def test_plant_eigenvalue_scalar_case():
    demo = plant_luders_eigenvalue(2.0, [(np.array([[2.0]]), np.array([[1.0]]))])
    assert np.allclose(demo.block_coefficients[0], np.diag([2.0, 1.0]))
    assert demo.eigen_residual <= 1e-10 * 2.0
    out = demo.operator.apply(demo.eigenvector)
    assert frob(out - 2.0 * demo.eigenvector) <= 1e-12


def test_plant_eigenvalue_zero():
    demo = plant_luders_eigenvalue(0.0, [(np.zeros((1, 1)), np.zeros((1, 1)))])
    assert demo.eigen_residual == 0.0


def test_plant_eigenvalue_random_pairs(rng):
    for lam in (0.5, 2.0, 7.0):
        pairs = scalar_product_pairs(lam, k=3, m=3, rng=rng)
        demo = plant_luders_eigenvalue(lam, pairs)
        assert demo.eigen_residual <= 1e-10 * max(1.0, lam)
        assert demo.operator.is_luders
        # lam really is an eigenvalue of the vectorized operator
        w = demo.operator.spectrum().eigenvalues
        assert np.min(np.abs(w - lam)) <= 1e-8 * max(1.0, lam)


@pytest.mark.parametrize("lam", [-1.0, 1j, -2 + 1j])
def test_plant_eigenvalue_rejects_off_axis(lam):
    pairs = [(np.eye(2), np.eye(2))]
    with pytest.raises(UnattainableEigenvalueError) as err:
        plant_luders_eigenvalue(lam, pairs)
    assert err.value.bound == dist_to_rplus(lam)


def test_plant_eigenvalue_rejects_bad_pairs():
    with pytest.raises(ValueError):
        plant_luders_eigenvalue(2.0, [(np.eye(2), np.eye(2))])   # sums to I != 2I
    with pytest.raises(ValueError):
        plant_luders_eigenvalue(1.0, [(np.array([[0.0, 1.0], [0.0, 0.0]]), np.eye(2))])


# --- pseudospectrum ---------------------------------------------------------

def test_pseudospectrum_hits_eigenvalue(rng):
    op = luders_from(rng, 2, 2)
    lam = float(op.spectrum().eigenvalues[0].real)
    grid = pseudospectrum(op, GridSpec(lam, lam, 0.0, 0.0, 1))
    assert grid.sigma_min[0, 0] <= 1e-8 * max(1.0, op_norm(op.to_matrix()))


def test_pseudospectrum_hermitian_resolvent_bound(rng):
    op = luders_from(rng, 2, 2)
    grid = pseudospectrum(op, GridSpec(-1.0, -1.0, 0.0, 0.0, 1))
    # Hermitian PSD superoperator: sigma_min(M + I) = 1 + lambda_min >= 1
    assert grid.sigma_min[0, 0] >= 1.0 - 1e-8


def test_pseudospectrum_matches_svd_oracle(rng):
    op = luders_from(rng, 2, 2)
    M = op.to_matrix()
    grid = pseudospectrum(op, GridSpec(-0.5, 1.5, -0.5, 0.5, 4))
    for re, im, smin in grid.rows():
        shifted = M - (re + 1j * im) * np.eye(M.shape[0])
        oracle = np.sqrt(max(np.linalg.eigvalsh(shifted.conj().T @ shifted)[0], 0.0))
        assert abs(smin - oracle) <= 1e-9 * max(1.0, oracle)


def test_pseudospectrum_rejects_empty_grid():
    with pytest.raises(ValueError):
        GridSpec(0, 1, 0, 1, 0)
