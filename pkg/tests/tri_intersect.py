"""Brute-force detection of intersecting non-adjacent triangle pairs.

Axis-aligned bounding boxes cull the all-pairs set first (an exact-
preserving filter), then surviving pairs run a vectorized Moller-style
interval test: each triangle must straddle the other's plane, and the
projections onto the intersection line of the two planes must overlap.
Pairs sharing a vertex are skipped; coplanar pairs are treated as
non-intersecting, which is adequate for the general-position meshes used
in the tests.
"""

import numpy as np

_EPS = 1e-12


def _plane_side_intervals(tri_a, tri_b):
    """Interval on the planes' common line covered by tri_a, or None rows.

    Implements the interval computation of the Moller test for an array of
    pairs. ``tri_a``/``tri_b`` have shape (m, 3, 3).
    """
    n_b = np.cross(tri_b[:, 1] - tri_b[:, 0], tri_b[:, 2] - tri_b[:, 0])
    d = np.einsum("mij,mj->mi", tri_a - tri_b[:, 0][:, None, :], n_b)
    d = np.where(np.abs(d) < _EPS, 0.0, d)
    return d, n_b


def _interval_on_line(tri, dist, line_dir):
    """Projection interval of a straddling triangle onto the common line."""
    m = len(tri)
    proj = np.einsum("mij,mj->mi", tri, line_dir)
    lo = np.full(m, np.inf)
    hi = np.full(m, -np.inf)
    # the two edges crossing the plane contribute the interval endpoints
    for i in range(3):
        for j in range(3):
            if i >= j:
                continue
            di, dj = dist[:, i], dist[:, j]
            crossing = (di * dj < 0.0) | ((di == 0.0) ^ (dj == 0.0))
            denom = np.where(di - dj == 0.0, 1.0, di - dj)
            t = np.where(crossing, di / denom, 0.0)
            point = proj[:, i] + t * (proj[:, j] - proj[:, i])
            lo = np.where(crossing, np.minimum(lo, point), lo)
            hi = np.where(crossing, np.maximum(hi, point), hi)
    on_line = dist == 0.0
    for i in range(3):
        sel = on_line[:, i]
        lo = np.where(sel, np.minimum(lo, proj[:, i]), lo)
        hi = np.where(sel, np.maximum(hi, proj[:, i]), hi)
    return lo, hi


def _pairs_intersect(tri_a, tri_b):
    """Boolean mask over pair arrays of shape (m, 3, 3)."""
    d_a, n_b = _plane_side_intervals(tri_a, tri_b)
    d_b, n_a = _plane_side_intervals(tri_b, tri_a)
    straddle_a = ~((d_a > 0).all(axis=1) | (d_a < 0).all(axis=1))
    straddle_b = ~((d_b > 0).all(axis=1) | (d_b < 0).all(axis=1))
    candidate = straddle_a & straddle_b
    # coplanar pairs (degenerate line direction) are ignored
    line = np.cross(n_a, n_b)
    line_len = np.linalg.norm(line, axis=1)
    scale = np.linalg.norm(n_a, axis=1) * np.linalg.norm(n_b, axis=1)
    candidate &= line_len > 1e-9 * np.where(scale == 0.0, 1.0, scale)
    out = np.zeros(len(tri_a), dtype=bool)
    if not candidate.any():
        return out
    idx = np.where(candidate)[0]
    line_dir = line[idx] / line_len[idx][:, None]
    lo_a, hi_a = _interval_on_line(tri_a[idx], d_a[idx], line_dir)
    lo_b, hi_b = _interval_on_line(tri_b[idx], d_b[idx], line_dir)
    gap = 1e-12
    out[idx] = (np.minimum(hi_a, hi_b) - np.maximum(lo_a, lo_b)) > gap
    return out


def intersecting_pairs(vertices, faces):
    """All pairs (i, j) of non-adjacent triangles that intersect.

    ``vertices`` is (n, 3) float, ``faces`` (m, 3) int. Every unordered
    pair of triangles is considered; bounding boxes merely skip pairs that
    cannot intersect.
    """
    verts = np.asarray(vertices, dtype=float)
    faces = np.asarray(faces, dtype=np.int64)
    tris = verts[faces]
    box_lo = tris.min(axis=1)
    box_hi = tris.max(axis=1)
    m = len(faces)
    overlap = np.ones((m, m), dtype=bool)
    for axis in range(3):
        overlap &= box_lo[:, axis][:, None] <= box_hi[:, axis][None, :]
        overlap &= box_lo[:, axis][None, :] <= box_hi[:, axis][:, None]
    ii, jj = np.where(np.triu(overlap, k=1))
    if len(ii) == 0:
        return []
    # drop pairs sharing a vertex
    fa = faces[ii]
    fb = faces[jj]
    shares = (fa[:, :, None] == fb[:, None, :]).any(axis=(1, 2))
    ii, jj = ii[~shares], jj[~shares]
    if len(ii) == 0:
        return []
    mask = _pairs_intersect(tris[ii], tris[jj])
    return list(zip(ii[mask].tolist(), jj[mask].tolist()))
