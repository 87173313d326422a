#!/usr/bin/env python3
"""Spectra of elementary operators X -> sum_j A_j X B_j.

With PSD coefficients on both sides the vectorized operator is Hermitian
positive semidefinite on the trace inner product, so its spectrum sits in
[0, inf) at any finite matrix size.  Without positivity the spectrum can be
anywhere; the demo shows both, plus the length-two commuting-side case.
"""

import numpy as np

from opsum import ElementaryOperator, hs_inner, hs_positivity
from opsum.randmat import random_psd, random_unitary

rng = np.random.default_rng(3)
n = 3

print("=== a random length-3 operation with PSD coefficients ===")
op = ElementaryOperator.build([(P, P) for P in (random_psd(rng, n) for _ in range(3))])
print(f"coefficients equal and PSD on both sides: {op.is_luders}")
report = op.spectrum()
print(f"superoperator size {n * n}x{n * n}; "
      f"max distance of spectrum to [0, inf): {report.max_dist_to_rplus:.2e}")

rep = hs_positivity(op)
print(f"vectorized matrix classified as: {rep.certificate.kind}")
X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
print(f"<Phi(X), X> = {hs_inner(op.apply(X), X).real:.4f} (always >= 0 here)")

print()
print("=== length two with one commuting side ===")
U = random_unitary(rng, n)
A1 = (U * rng.uniform(0.5, 2.0, n)) @ U.conj().T
A2 = (U * rng.uniform(0.5, 2.0, n)) @ U.conj().T
op2 = ElementaryOperator.build([(A1, random_psd(rng, n)), (A2, random_psd(rng, n))])
rep2 = hs_positivity(op2)
print(f"commuting side detected: {rep2.commuting_side}")
print(f"spectrum distance to [0, inf): {rep2.spectrum.max_dist_to_rplus:.2e}")

print()
print("=== drop positivity and the spectrum escapes ===")
rot = np.array([[0.0, 1.0], [-1.0, 0.0]])
op3 = ElementaryOperator.build([(rot, np.eye(2))])
report3 = op3.spectrum()
print(f"left-multiplication by a rotation: eigenvalues {np.round(report3.eigenvalues, 6)}")
print(f"distance to [0, inf): {report3.max_dist_to_rplus:.1f}")
