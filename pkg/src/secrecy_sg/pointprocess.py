"""Homogeneous Poisson point processes on a disk and their nearest-neighbour
geometry."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, Voronoi, cKDTree

__all__ = [
    "DiskWindow",
    "PointSet",
    "sample_ppp",
    "nearest_distance",
    "nearest_distances",
    "half_nn_distance",
    "window_radius_for",
    "estimate_origin_cell_area",
    "origin_cell_area",
]

# brute force below this many points, k-d tree above
BRUTE_FORCE_LIMIT = 1024


@dataclass(frozen=True)
class DiskWindow:
    """Disk of the given radius centred at the origin."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"window radius must be positive, got {self.radius}")

    @property
    def area(self):
        return math.pi * self.radius**2


@dataclass(frozen=True, eq=False)
class PointSet:
    """A point pattern observed inside a disk window.

    ``points`` is an ``(n, 2)`` read-only float array.
    """

    points: np.ndarray
    density: float
    window: DiskWindow

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1, 2)
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        if not self.density > 0:
            raise ValueError(f"density must be positive, got {self.density}")
        if len(pts) and np.max(np.hypot(pts[:, 0], pts[:, 1])) > self.window.radius * (1 + 1e-12):
            raise ValueError("all points must lie inside the window")

    @classmethod
    def _trusted(cls, points, density, window):
        # skips validation for points generated inside the window
        obj = object.__new__(cls)
        points.flags.writeable = False
        object.__setattr__(obj, "points", points)
        object.__setattr__(obj, "density", density)
        object.__setattr__(obj, "window", window)
        return obj

    def __len__(self):
        return len(self.points)

    @property
    def norms(self):
        return np.hypot(self.points[:, 0], self.points[:, 1])


def uniform_in_disk(radius, n, rng):
    """``n`` i.i.d. uniform points on the disk of the given radius."""
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def sample_ppp(density, window, rng):
    """Sample a homogeneous PPP of ``density`` restricted to ``window``.

    The count is Poisson with mean ``density * area``; given the count the
    points are i.i.d. uniform on the disk.
    """
    if not density > 0:
        raise ValueError(f"density must be positive, got {density}")
    n = rng.poisson(density * window.area)
    return PointSet._trusted(uniform_in_disk(window.radius, n, rng), density, window)


def nearest_distances(queries, points, return_index=False):
    """Distance from each query point to its nearest point in ``points``.

    Returns ``inf`` (and index ``-1``) for every query when ``points`` is
    empty.
    """
    queries = np.asarray(queries, dtype=float).reshape(-1, 2)
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        dist = np.full(len(queries), np.inf)
        idx = np.full(len(queries), -1)
    elif len(points) < BRUTE_FORCE_LIMIT and len(queries) * len(points) < 4_000_000:
        d2 = (queries[:, None, 0] - points[None, :, 0]) ** 2 + (queries[:, None, 1] - points[None, :, 1]) ** 2
        idx = np.argmin(d2, axis=1)
        dist = np.sqrt(d2[np.arange(len(queries)), idx])
    else:
        dist, idx = cKDTree(points).query(queries)
    if return_index:
        return dist, idx
    return dist


def nearest_distance(origin_point, point_set):
    """Distance from ``origin_point`` to the closest point of ``point_set``,
    or ``None`` if the set is empty."""
    if len(point_set) == 0:
        return None
    return float(nearest_distances(origin_point, point_set.points)[0])


def half_nn_distance(point_set, index):
    """Half the distance from point ``index`` to its nearest other point.

    This is the radius of the largest disk around the point that stays in
    its own Voronoi cell. Returns ``None`` for a singleton set.
    """
    n = len(point_set)
    if not -n <= index < n:
        raise IndexError(f"point index {index} out of range for {n} points")
    if n == 1:
        return None
    pts = point_set.points
    others = np.delete(pts, index % n, axis=0)
    return 0.5 * float(nearest_distances(pts[index], others)[0])


def window_radius_for(epsilon, density):
    """Radius ``r`` with ``exp(-pi * density * r**2) == epsilon``.

    A PPP of this density has a point inside the disk of radius ``r`` except
    with probability ``epsilon``.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not density > 0:
        raise ValueError(f"density must be positive, got {density}")
    return math.sqrt(-math.log(epsilon) / (math.pi * density))


def estimate_origin_cell_area(eves, probe_window, n_probes, rng, chunk=20_000):
    """Hit-or-miss estimate of the area of the Voronoi cell of the origin in
    ``eves`` plus the origin.

    A probe ``y`` is inside the cell iff ``|y| <= |y - e|`` for every point
    ``e``. The probe window must contain the cell, and the point set must be
    observed on at least twice the probe radius so that every point that can
    compete with the origin for a probe is known.

    Probes are drawn before looking at ``eves``, so two calls with equal
    streams use identical probes.
    """
    if n_probes < 1:
        raise ValueError("n_probes must be at least 1")
    if len(eves) and eves.window.radius < 2 * probe_window.radius:
        raise ValueError(
            "point set window must be at least twice the probe radius "
            f"({eves.window.radius} < 2 * {probe_window.radius})"
        )
    probes = uniform_in_disk(probe_window.radius, n_probes, rng)
    if len(eves) == 0:
        return probe_window.area
    # only points within 2 * probe radius can beat the origin for any probe
    norms = eves.norms
    pts = eves.points[norms <= 2 * probe_window.radius]
    if len(pts) == 0:
        return probe_window.area
    # y is in the cell iff y.e <= |e|^2 / 2 for every e; the points nearest the
    # origin reject most probes cheaply
    order = np.argsort(np.hypot(pts[:, 0], pts[:, 1]))
    near, rest = pts[order[:16]], pts[order[16:]]
    hits = 0
    for start in range(0, n_probes, chunk):
        block = probes[start:start + chunk]
        inside = np.all(block @ near.T <= 0.5 * np.einsum("ij,ij->i", near, near), axis=1)
        block = block[inside]
        if len(rest) and len(block):
            inside = np.all(block @ rest.T <= 0.5 * np.einsum("ij,ij->i", rest, rest), axis=1)
        hits += int(np.count_nonzero(inside))
    return hits / n_probes * probe_window.area


def origin_cell_area(eves):
    """Exact area of the Voronoi cell of the origin in ``eves`` plus the
    origin.

    A point ``e`` can cut the cell at ``y`` only if ``|e| <= 2 |y|``, so the
    cell is certified by the observed pattern when every vertex lies within
    half the window radius. Returns ``None`` when it is not (including the
    case of too few points to bound the cell).
    """
    limit = 0.5 * eves.window.radius
    pts = eves.points[eves.norms <= eves.window.radius]
    if len(pts) < 3:
        return None
    vor = Voronoi(np.vstack([[0.0, 0.0], pts]))
    region = vor.regions[vor.point_region[0]]
    if not region or -1 in region:
        return None
    verts = vor.vertices[region]
    if np.max(np.hypot(verts[:, 0], verts[:, 1])) > limit:
        return None
    # the cell is convex, so its hull area is its area
    return float(ConvexHull(verts).volume)
