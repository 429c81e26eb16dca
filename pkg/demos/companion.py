"""Attacking the last row of a fifth-order companion matrix.

The system x' = A x has characteristic polynomial
s^5 + 13 s^4 + 69 s^3 + 187 s^2 + 260 s + 150, so A is Hurwitz with
abscissa -2. An adversary may rewrite the bottom row (the polynomial
coefficients). We ask how much Frobenius energy it needs to push an
eigenvalue onto the imaginary axis, with and without sign restrictions.

Run with ``python3 demos/companion.py``.
"""
import numpy as np

from specradius import (
    PerturbationStructure,
    abscissa_sweep,
    gen_companion,
    spectral_abscissa,
    stability_radius,
)

A = gen_companion([13, 69, 187, 260, 150])
print("eigenvalues of A:", np.round(np.linalg.eigvals(A), 4))
print("abscissa of A:   ", spectral_abscissa(A))


def bottom_row(lower=None, upper=None, skip_diag=False):
    edges = [(5, j) for j in range(1, 6) if not (skip_diag and j == 5)]
    return PerturbationStructure(5, edges, lower, upper)


# How the worst-case abscissa grows with the budget. With zero restarts every
# grid point starts from the unperturbed matrix.
sweep = abscissa_sweep(A, bottom_row(), [0, 2.5, 5, 7.5, 10, 12.5], restart_policy="zero")
print("\neps     alpha")
for eps, alpha in sweep.as_pairs():
    print(f"{eps:5.1f}  {alpha:+.4f}")

cases = [
    ("whole row, no bounds", bottom_row(), "zero"),
    ("row without (5,5)", bottom_row(skip_diag=True), "zero"),
    ("row without (5,5), 10 restarts", bottom_row(skip_diag=True), "multistart"),
    ("non-positive entries only", bottom_row(upper=0.0), "warm"),
    ("non-negative entries only", bottom_row(lower=0.0), "zero"),
]
print()
for label, H, policy in cases:
    res = stability_radius(A, H, init_policy=policy)
    print(f"{label:32s} radius {res.radius:9.4f}  ({res.iterations} Newton steps, {policy})")

# The zero-start answer without (5,5) is only a local one: the multistart run
# finds a cheaper destabilizing perturbation. Check it directly.
res = stability_radius(A, bottom_row(skip_diag=True))
D = res.final.delta.to_dense()
print("\ncheaper attack: |D|_F =", round(np.linalg.norm(D), 4),
      " abscissa of A + 1.001 D =", round(spectral_abscissa(A + 1.001 * D), 5))
