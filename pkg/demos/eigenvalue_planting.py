#!/usr/bin/env python3
"""Plant a prescribed eigenvalue in a Lüders operation on doubled space.

Given PSD pairs whose products sum to lam * I, the block-diagonal
coefficients T_j = diag(A_j, B_j) are PSD and the strictly upper block
matrix X0 = [[0, I], [0, 0]] satisfies sum_j T_j X0 T_j = lam * X0.  In
finite dimension this only works for lam in [0, inf): the trace of a sum of
PSD products is never negative or complex, which bounds how close such an
operator can get to lam * I for any other lam.
"""

import numpy as np

from opsum import UnattainableEigenvalueError, plant_luders_eigenvalue
from opsum.randmat import scalar_product_pairs

rng = np.random.default_rng(4)

for lam in (0.0, 0.5, 2.0, 7.0):
    pairs = scalar_product_pairs(lam, k=2, m=3, rng=rng)
    demo = plant_luders_eigenvalue(lam, pairs)
    w = demo.operator.spectrum().eigenvalues
    hit = np.min(np.abs(w - lam))
    print(f"lam = {lam:>4}: residual of Phi(X0) - lam X0 is {demo.eigen_residual:.1e}; "
          f"closest superoperator eigenvalue is {hit:.1e} away")

print()
for lam in (-1.0, 1j, -2 + 2j):
    try:
        plant_luders_eigenvalue(lam, scalar_product_pairs(1.0, k=2, m=3))
    except UnattainableEigenvalueError as exc:
        print(f"lam = {lam}: rejected, residual lower bound {exc.bound:.4f}")
