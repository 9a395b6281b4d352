"""Independent reference implementations used only by the tests.

None of these touch the bitmask kernels or the simplex solver.
"""

import itertools

import numpy as np
from scipy.spatial import ConvexHull

from boolelab.labeling import slot_labels


def brute_force_bounds(expr, scheme):
    """Min/max by iterating ±1 tuples with itertools, last variable fastest,
    starting from all -1 (the opposite order to the kernel)."""
    rows = slot_labels(expr, scheme)
    names = sorted({v for row in rows for v in row})
    lo, hi = None, None
    for values in itertools.product((-1, 1), repeat=len(names)):
        a = dict(zip(names, values))
        total = sum(int(np.prod([a[v] for v in row])) for row in rows)
        lo = total if lo is None else min(lo, total)
        hi = total if hi is None else max(hi, total)
    return lo, hi


def moment_vertices(expr, scheme):
    rows = slot_labels(expr, scheme)
    names = sorted({v for row in rows for v in row})
    pts = set()
    for values in itertools.product((-1, 1), repeat=len(names)):
        a = dict(zip(names, values))
        pts.add(tuple(int(np.prod([a[v] for v in row])) for row in rows))
    return np.array(sorted(pts), dtype=float)


def in_hull(points, target, tol=1e-9):
    """Convex-hull membership that copes with lower-dimensional hulls."""
    target = np.asarray(target, dtype=float)
    origin = points[0]
    diffs = points - origin
    if not np.any(diffs):
        return bool(np.allclose(target, origin, atol=tol))
    u, s, _ = np.linalg.svd(diffs.T, full_matrices=False)
    basis = u[:, s > 1e-9]
    rel = target - origin
    coords = basis.T @ rel
    if np.linalg.norm(basis @ coords - rel) > tol:
        return False
    proj = diffs @ basis
    if basis.shape[1] == 1:
        return bool(proj.min() - tol <= coords[0] <= proj.max() + tol)
    hull = ConvexHull(proj)
    return bool(np.all(hull.equations[:, :-1] @ coords + hull.equations[:, -1] <= tol))
