"""Random perturbations versus the certified worst case.

Sampling feasible perturbations and collecting the eigenvalues of A + D
paints an inner picture of the structured pseudospectrum. Its rightmost point
is a lower bound on the worst-case abscissa; the solver should sit at or
beyond it. The cloud is written to CSV for plotting.

Run with ``python3 demos/sampling_cloud.py [out.csv]``.
"""
import sys

from specradius import (
    PerturbationStructure,
    best_of_starts,
    gen_companion,
    sample_pseudospectrum,
    sampled_abscissa,
)
from specradius.abscissa import multistart_guesses
from specradius.sampling import write_cloud_csv

A = gen_companion([13, 69, 187, 260, 150])
H = PerturbationStructure.rows(5, [5])

for eps in [1.0, 5.0, 10.1465]:
    solver = best_of_starts(A, eps, H, multistart_guesses(H, eps, 10, seed=0)).alpha
    for n in [100, 2000, 20000]:
        cloud = sample_pseudospectrum(A, H, eps, n, seed=0)
        print(f"eps {eps:7.4f}  samples {n:6d}  sampled {sampled_abscissa(cloud):+.4f}  solver {solver:+.4f}")

# Most uniform draws have far less energy than the budget, so the cloud
# approaches the worst case slowly as the sample count grows.
if len(sys.argv) > 1:
    write_cloud_csv(sample_pseudospectrum(A, H, 10.1465, 2000, seed=0), sys.argv[1])
    print("cloud written to", sys.argv[1])
