"""Compromised agents on a ring.

Ten agents follow a circulant consensus-like dynamic: each damps itself with
weight -0.1, is pushed by its successor (+1) and pulled by its predecessor
(-1). A compromised agent can rewrite the three weights in its own row. The
stability radius measures how much energy the attackers need, and how it
falls as more agents are compromised. A sign-preserving attacker may not flip
any weight, which makes it much weaker when acting alone.

Run with ``python3 demos/circulant_agents.py`` (about 20 s).
"""
import warnings

from specradius import MaxIterations, PerturbationStructure, gen_circulant, stability_radius

A = gen_circulant(10, -0.1, 1.0, -1.0)


def compromised(k, signs=False):
    edges, lo, hi = [], [], []
    for a in range(1, k + 1):
        row = [(a, a), (a, a % 10 + 1), (a, (a - 2) % 10 + 1)]
        bounds = [(None, 0.1), (-1.0, None), (None, 1.0)]
        for e, (l, h) in zip(row, bounds):
            edges.append(e)
            lo.append(l if signs else None)
            hi.append(h if signs else None)
    return PerturbationStructure(10, edges, lo, hi)


# Several-agent structures often end on the iteration cap; the best iterate
# found is still a valid lower bound on the abscissa.
warnings.simplefilter("ignore", MaxIterations)

print("agents  free     sign-preserving")
for k in range(1, 11):
    free = stability_radius(A, compromised(k), init_policy="zero").radius
    signed = stability_radius(A, compromised(k, signs=True), init_policy="zero").radius
    print(f"{k:6d}  {free:7.4f}  {signed:7.4f}")

res = stability_radius(A, compromised(1, signs=True), init_policy="warm")
print("\nlone sign-preserving attacker, worst case on row 1:")
for (i, j), v in zip(res.final.delta.structure.edges, res.final.delta.values):
    print(f"  delta[{i},{j}] = {v:+.3f}")
print("every entry sits on its bound, and row 1 of A + delta is zero")
