"""Numpy implementations of the hot kernels (fallback for the compiled core)."""

import numpy as np


def csr_matvec(indptr, indices, data, x):
    """y = A @ x for a CSR matrix given by (indptr, indices, data).

    Row sums are accumulated in ascending column-entry order (bincount runs
    through the nnz array in storage order), so results are deterministic.
    """
    n = len(indptr) - 1
    prod = data * x[indices]
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    return np.bincount(rows, weights=prod, minlength=n)


def tri_corner_angles(tri):
    """Inner angles of triangles at each corner.

    Parameters
    ----------
    tri : (m, 3, 2) array of vertex coordinates.

    Returns
    -------
    (m, 3) array; column i is the angle at vertex i, computed as
    atan2(|cross|, dot) of the two edge vectors leaving that corner (stable
    for angles near 0 and near pi).
    """
    tri = np.asarray(tri, dtype=np.float64)
    m = tri.shape[0]
    out = np.empty((m, 3))
    for i in range(3):
        p = tri[:, i]
        u = tri[:, (i + 1) % 3] - p
        v = tri[:, (i + 2) % 3] - p
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        dot = u[:, 0] * v[:, 0] + u[:, 1] * v[:, 1]
        out[:, i] = np.arctan2(np.abs(cross), dot)
    return out
