"""Monte-Carlo estimate of the structured pseudospectrum.

Every sample is a feasible perturbation drawn by
:func:`specradius.perturbation.sample`; all eigenvalues of ``A + Delta`` are
kept. The largest real part over the cloud is a lower bound on the structured
pseudospectral abscissa.
"""
from dataclasses import dataclass, field
import csv
import io

import numpy as np
import scipy.linalg

from .errors import EigenFailure, EmptyCloud
from .perturbation import sample

__all__ = ["SpectrumCloud", "sample_pseudospectrum", "sampled_abscissa", "cloud_to_csv", "write_cloud_csv"]


@dataclass(eq=False)
class SpectrumCloud:
    """Eigenvalues of sampled perturbed matrices.

    ``sample_index[k]`` is the offset (from ``seed``) of the sample that
    produced ``points[k]``; ``failures`` lists the offsets whose
    eigendecomposition failed.
    """

    points: np.ndarray
    epsilon: float
    sample_count: int
    seed: int
    sample_index: np.ndarray
    failures: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)


def sample_pseudospectrum(A, structure, epsilon, n_samples, seed=0):
    """Eigenvalues of ``A + Delta`` for ``n_samples`` seeded feasible perturbations.

    Sample ``k`` uses seed ``seed + k``, so a cloud can be extended or split
    without changing the points already drawn.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    A = np.asarray(A, dtype=float)
    if A.shape != (structure.n, structure.n):
        raise ValueError(f"A has shape {A.shape} but the structure has n={structure.n}")
    pts, idx, failures = [], [], []
    for k in range(n_samples):
        delta = sample(structure, epsilon, seed + k)
        try:
            w = scipy.linalg.eigvals(A + delta.to_dense())
        except (np.linalg.LinAlgError, ValueError):
            failures.append(k)
            continue
        if not np.all(np.isfinite(w)):
            failures.append(k)
            continue
        pts.append(w)
        idx.append(np.full(len(w), k))
    points = np.concatenate(pts) if pts else np.zeros(0, dtype=complex)
    index = np.concatenate(idx) if idx else np.zeros(0, dtype=int)
    return SpectrumCloud(points, float(epsilon), n_samples, seed, index, failures)


def sampled_abscissa(cloud):
    """Largest real part over the cloud."""
    points = cloud.points if isinstance(cloud, SpectrumCloud) else np.asarray(cloud)
    if len(points) == 0:
        raise EmptyCloud("cloud has no points")
    return float(np.max(np.real(points)))


def cloud_to_csv(cloud):
    """CSV text ``re,im,sample_index`` with 17 significant digits and LF line endings."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "sample_index"])
    for z, k in zip(cloud.points, cloud.sample_index):
        w.writerow([f"{z.real:.17g}", f"{z.imag:.17g}", int(k)])
    return buf.getvalue()


def write_cloud_csv(cloud, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(cloud_to_csv(cloud))
