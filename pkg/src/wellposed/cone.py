"""Polyhedral ordering cones and their dual descriptions.

An ordering cone is kept in a doubled representation: primal generators
(vectors whose conic hull is the cone) and dual generators (unit outward
facet normals of -C, equivalently the extreme rays of the dual cone C*).
Membership tests run against the dual description, everything that needs
rays runs against the primal one.  For ambient dimension <= 4 the dual
description is recovered from the generators by facet enumeration; above
that the caller must supply it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import ConeValidationError, InputError, NotInteriorPoint

TOL_MEMBERSHIP = 1e-9

# Facet enumeration is combinatorial in the generator count; above this
# ambient dimension the dual description must be user-supplied.
FACET_ENUM_MAX_DIM = 4


def _as_matrix(vectors, ambient_dim, what):
    arr = np.atleast_2d(np.asarray(vectors, dtype=float))
    if arr.ndim != 2 or arr.shape[1] != ambient_dim:
        raise InputError(f"{what}: expected vectors of length {ambient_dim}, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InputError(f"{what}: empty list")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{what}: non-finite entries")
    return arr


def _dedupe_unit_rows(rows, tol):
    kept = []
    for r in rows:
        if not any(np.linalg.norm(r - k) <= tol for k in kept):
            kept.append(r)
    return np.array(kept)


def _enumerate_facet_normals(generators, tol):
    """Outward facet normals of -C (unit extreme rays of C*) by subset enumeration.

    Every facet of a solid pointed polyhedral cone is spanned by m-1 linearly
    independent generators, so scanning all (m-1)-subsets finds all facets.
    A normal is kept in an orientation only if the whole generator list is on
    its nonnegative side; keeping both orientations when both are valid is
    what lets the solidity check below catch flat cones.
    """
    m = generators.shape[1]
    candidates = []
    for subset in itertools.combinations(range(generators.shape[0]), m - 1):
        rows = generators[list(subset)]
        # nullspace of the subset; facet normals have a 1-dim nullspace
        _, s, vt = np.linalg.svd(rows.reshape(len(subset), m), full_matrices=True)
        rank = int(np.sum(s > max(s[0], 1.0) * 1e-12)) if s.size else 0
        if rank != m - 1:
            continue
        normal = vt[-1]
        normal = normal / np.linalg.norm(normal)
        prods = generators @ normal
        if np.all(prods >= -tol):
            candidates.append(normal)
        if np.all(-prods >= -tol):
            candidates.append(-normal)
    if not candidates:
        raise ConeValidationError("facet enumeration found no valid facet normals")
    return _dedupe_unit_rows(candidates, 1e-9)


def _is_pointed(generators):
    """LP feasibility: the cone contains a line iff some nonzero nonnegative
    combination of generators is the negative of another one."""
    n, m = generators.shape
    a_eq = np.hstack([generators.T, generators.T])      # G lam + G mu = 0
    a_eq = np.vstack([a_eq, np.concatenate([np.ones(n), np.zeros(n)])])  # sum lam = 1
    b_eq = np.concatenate([np.zeros(m), [1.0]])
    res = linprog(np.zeros(2 * n), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return not res.success


@dataclass(frozen=True)
class OrderingCone:
    """Closed convex pointed solid polyhedral cone with a chosen interior point.

    Attributes:
        ambient_dim: dimension m of the image space.
        generators: (n, m) array; conic hull is the cone.
        dual_generators: (f, m) array of unit outward facet normals of -C.
        k0: unit-scale interior direction used to build the dual base.
        tol: membership tolerance; ties resolve toward non-strict membership.
    """

    ambient_dim: int
    generators: np.ndarray
    dual_generators: np.ndarray = field(default=None)
    k0: np.ndarray = field(default=None)
    tol: float = TOL_MEMBERSHIP

    def __post_init__(self):
        m = int(self.ambient_dim)
        if m < 1:
            raise InputError("ambient_dim must be >= 1")
        gens = _as_matrix(self.generators, m, "generators")
        norms = np.linalg.norm(gens, axis=1)
        if np.any(norms <= self.tol):
            raise InputError("generators must be nonzero")

        if not _is_pointed(gens):
            raise ConeValidationError("cone is not pointed (contains a line)")

        if self.dual_generators is None:
            if m > FACET_ENUM_MAX_DIM:
                raise InputError(
                    f"dual generators must be supplied for ambient_dim > {FACET_ENUM_MAX_DIM}"
                )
            duals = _enumerate_facet_normals(gens, self.tol)
        else:
            duals = _as_matrix(self.dual_generators, m, "dual_generators")
            dnorms = np.linalg.norm(duals, axis=1)
            if np.any(dnorms <= self.tol):
                raise InputError("dual_generators must be nonzero")
            duals = duals / dnorms[:, None]
            if np.any(gens @ duals.T < -1e-7):
                raise ConeValidationError("supplied dual generators are not valid for the generators")

        if self.k0 is None:
            unit = gens / norms[:, None]
            s = unit.sum(axis=0)
            sn = np.linalg.norm(s)
            if sn <= self.tol:
                raise ConeValidationError("generator sum vanished; cone cannot be solid")
            k0 = s / sn
        else:
            k0 = np.asarray(self.k0, dtype=float).reshape(-1)
            if k0.shape != (m,):
                raise InputError(f"k0 must have length {m}")

        if np.any(duals @ k0 <= self.tol):
            raise NotInteriorPoint(
                "k0 is not strictly interior (cone may not be solid, or k0 badly chosen)"
            )

        for name, arr in (("generators", gens), ("dual_generators", duals), ("k0", k0)):
            arr = np.ascontiguousarray(arr)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "ambient_dim", m)

    # -- membership -----------------------------------------------------

    def contains(self, y, strict=False):
        """Cone membership of a single vector, resolved via facet margins."""
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.shape != (self.ambient_dim,):
            raise InputError(f"expected vector of length {self.ambient_dim}")
        prods = self.dual_generators @ y
        if strict:
            return bool(np.all(prods > self.tol))
        return bool(np.all(prods >= -self.tol))

    def margins(self, points):
        """(n,) array of min-facet margins; >= -tol means membership."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.ambient_dim:
            raise InputError(f"expected points of length {self.ambient_dim}")
        return (pts @ self.dual_generators.T).min(axis=1)

    def contains_batch(self, points, strict=False):
        mg = self.margins(points)
        return mg > self.tol if strict else mg >= -self.tol

    # -- dual objects ----------------------------------------------------

    def dual_cone(self):
        """The dual cone, generated by this cone's facet normals.

        Self-inverse up to generator scaling: the dual's dual generators are
        this cone's generators, normalized.
        """
        gens = self.generators / np.linalg.norm(self.generators, axis=1)[:, None]
        return OrderingCone(
            ambient_dim=self.ambient_dim,
            generators=np.array(self.dual_generators),
            dual_generators=gens,
            tol=self.tol,
        )

    def base_polytope(self, k0=None):
        """Vertices of {xi in C* : <xi, k0> = 1}, the compact dual base.

        Vertices are the dual generators rescaled onto the slice; raises
        NotInteriorPoint when k0 fails strict interiority.
        """
        k0 = self.k0 if k0 is None else np.asarray(k0, dtype=float).reshape(-1)
        if k0.shape != (self.ambient_dim,):
            raise InputError(f"k0 must have length {self.ambient_dim}")
        denom = self.dual_generators @ k0
        if np.any(denom <= self.tol):
            raise NotInteriorPoint("base polytope needs <g, k0> > 0 for every facet normal")
        return self.dual_generators / denom[:, None]

    def sample_dual_sphere(self, n, seed=0):
        """Unit vectors in C* intersected with the unit sphere.

        Always contains every normalized dual generator (so the result has
        max(n, #dual generators) rows). The remaining budget is stratified:
        half walks each generator pair's arc on an even grid, the rest
        covers the relative interior with scrambled low-discrepancy
        half-normal weights. A support functional maximized on a proper
        face of C* picks up a linear penalty the moment a sample leaves
        that face, so the arcs need their own dense coverage; interior
        maxima are flat to first order and tolerate coarser spacing.
        """
        if n < 1:
            raise InputError("n must be >= 1")
        gens = self.dual_generators
        f = gens.shape[0]
        rows = [g for g in gens]
        pairs = list(itertools.combinations(range(f), 2))
        if pairs and n - len(rows) > 0:
            per = (n - len(rows)) // (2 * len(pairs))
            t = (np.arange(per) + 0.5)[:, None] / per if per else None
            for a, b in pairs:
                if not per:
                    break
                combos = t * gens[a] + (1.0 - t) * gens[b]
                norms = np.linalg.norm(combos, axis=1)
                ok = norms > self.tol
                rows.extend(combos[ok] / norms[ok, None])
        if len(rows) < n:
            want = n - len(rows)
            u = qmc.Sobol(d=f, scramble=True, seed=seed).random_base2(
                max(3, int(np.ceil(np.log2(2 * want)))))
            lam = ndtri(0.5 + 0.5 * np.clip(u, 1e-12, 1.0 - 1e-12))
            combos = lam @ gens
            norms = np.linalg.norm(combos, axis=1)
            ok = norms > self.tol
            rows.extend((combos[ok] / norms[ok, None])[:want])
        rng = np.random.default_rng(seed)
        while len(rows) < n:  # degenerate-geometry fallback
            lam = np.abs(rng.standard_normal((n - len(rows), f)))
            combos = lam @ gens
            norms = np.linalg.norm(combos, axis=1)
            ok = norms > self.tol
            rows.extend(combos[ok] / norms[ok, None])
        return np.array(rows[:max(n, f)])

    def interior_direction_battery(self):
        """Strictly interior unit directions: k0 plus each generator mixed
        into the normalized generator sum (0.9/0.1), deduplicated."""
        unit = self.generators / np.linalg.norm(self.generators, axis=1)[:, None]
        s = unit.sum(axis=0)
        s = s / np.linalg.norm(s)
        mixed = 0.9 * s[None, :] + 0.1 * unit
        mixed = mixed / np.linalg.norm(mixed, axis=1)[:, None]
        rows = _dedupe_unit_rows(list(np.vstack([self.k0[None, :], mixed])), 1e-9)
        return rows


def orthant(m, tol=TOL_MEMBERSHIP):
    """The nonnegative orthant of R^m (self-dual; k0 defaults to the diagonal)."""
    eye = np.eye(m)
    return OrderingCone(ambient_dim=m, generators=eye, dual_generators=eye, tol=tol)
