"""Independent reference computations the tests freeze expectations against.

Everything here is deliberately written from scratch (closed forms, dense
scans, plain loops) rather than imported from the package, so a test
failure localizes to either the library or the oracle but never to shared
code.
"""

import numpy as np
from scipy.optimize import linprog


def orthant_distance(y):
    """Oriented distance of y to -R^m_+ in closed form."""
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    if (y > 0).any():
        return float(np.sqrt((pos * pos).sum()))
    return float(y.max())


def rotated_orthant_distance(rot, y):
    # distance is rotation invariant; undo the rotation first
    return orthant_distance(rot.T @ np.asarray(y, dtype=float))


def arc_distance_2d(dual_normals, y, n=400001):
    """Dense max of <xi, y> over the unit arc of a two-facet dual cone."""
    n1, n2 = np.asarray(dual_normals, dtype=float)
    t1 = np.arctan2(n1[1], n1[0])
    t2 = np.arctan2(n2[1], n2[0])
    delta = (t2 - t1 + np.pi) % (2 * np.pi) - np.pi
    theta = t1 + delta * np.linspace(0.0, 1.0, n)
    xi = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return float((xi @ np.asarray(y, dtype=float)).max())


def dense_neg_cone(generators, reach=6.0, steps=121):
    """Point cloud filling -cone(generators) out to a given coefficient reach."""
    gens = np.asarray(generators, dtype=float)
    axes = [np.linspace(0.0, reach, steps)] * gens.shape[0]
    coeff = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, gens.shape[0])
    return -(coeff @ gens)


def orthant_weak_witness(values, f_bar, tol):
    """Index of a lattice point strictly below f_bar in every coordinate."""
    strict = np.all(f_bar[None, :] - values > tol, axis=1)
    idx = np.flatnonzero(strict)
    return int(idx[0]) if idx.size else None


def orthant_dom_witness(values, f_bar, hard_tol, size_tol):
    """Index of a point dominating f_bar: below in order, distinct in norm."""
    below = np.all(values <= f_bar[None, :] + hard_tol, axis=1)
    apart = np.linalg.norm(values - f_bar[None, :], axis=1) > size_tol
    idx = np.flatnonzero(below & apart)
    return int(idx[0]) if idx.size else None


def metric_series(diff_sup_per_ball):
    """Plain-loop evaluation of sum 2^-i u_i/(1+u_i)."""
    total = 0.0
    for i, u in enumerate(diff_sup_per_ball, start=1):
        total += 2.0 ** -i * u / (1.0 + u)
    return total


def game_value(matrix):
    """Exact value of the simplex-vs-simplex matrix game by one LP."""
    a = np.asarray(matrix, dtype=float)
    kz, kw = a.shape
    # min t : A w <= t 1, w in simplex
    c = np.zeros(kw + 1)
    c[-1] = 1.0
    a_ub = np.hstack([a, -np.ones((kz, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(kz),
                  A_eq=np.concatenate([np.ones(kw), [0.0]])[None, :],
                  b_eq=[1.0], bounds=[(0, None)] * kw + [(None, None)],
                  method="highs")
    assert res.success, res.message
    return float(res.x[-1])


def evp_violations(values, points, x_hat, x_start, epsilon, r, spacing):
    """Counts of lattice points violating each Ekeland conclusion.

    (1) x_hat minimizes v(x) + eps*||x - x_hat|| over the whole lattice,
    (2) ||x_hat - x_start|| < r + spacing,
    (3) v(x_hat) <= v(x_start) - eps*||x_hat - x_start||, all exact.
    """
    values = np.asarray(values, dtype=float)
    points = np.atleast_2d(np.asarray(points, dtype=float))
    x_hat = np.asarray(x_hat, dtype=float).reshape(-1)
    x_start = np.asarray(x_start, dtype=float).reshape(-1)
    k_hat = int(np.argmin(np.linalg.norm(points - x_hat[None, :], axis=1)))
    k0 = int(np.argmin(np.linalg.norm(points - x_start[None, :], axis=1)))
    shifted = values + epsilon * np.linalg.norm(points - x_hat[None, :], axis=1)
    n_min = int((shifted < shifted[k_hat] - 1e-12).sum())
    n_rad = 0 if np.linalg.norm(x_hat - x_start) < r + spacing + 1e-12 else 1
    drop = values[k0] - epsilon * np.linalg.norm(x_hat - x_start)
    n_desc = 0 if values[k_hat] <= drop + 1e-12 else 1
    return n_min, n_rad, n_desc
