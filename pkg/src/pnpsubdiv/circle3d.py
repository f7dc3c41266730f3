"""The 3D circle average of two point-normal pairs.

The construction reduces the 3D case to the planar one. Both normals are
orthogonal to ``z = z_dir(n0, n1)``, so the second pair is projected along
``z`` into the plane through ``p0`` with normal ``z``, averaged there with
:func:`~pnpsubdiv.geom.circle_avg_2d` semantics, and the resulting point is
then offset along ``z`` by the weighted plane distance. Sweeping the weight
traces a helix whose projection onto the working plane is the planar
auxiliary arc.

Also provided are the straight-chord quantities used as analytic oracles:
:func:`chord_point` (the affine average, which is where the averaged point
ends up in the limits of parallel normals or of a chord parallel /
antiparallel to ``z``) and :func:`deviation_from_chord` (the closed-form
distance between the averaged point and the chord point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AntipodalNormalsError, ParallelNormalsError
from .geom import (
    Plane,
    Pnp,
    _angle,
    _avg_in_plane,
    _cross,
    _dot,
    _norm,
    _slerp,
    get_tolerances,
    z_dir,
)

__all__ = [
    "AvgContext",
    "circle_avg_3d",
    "chord_point",
    "deviation_from_chord",
    "helix_trace",
]


@dataclass(frozen=True)
class AvgContext:
    """Derived quantities of an averaging configuration.

    ``z`` is the common normal of the two parallel working planes through
    ``p0`` and ``p1``; ``hbar`` is the (nonnegative) distance between those
    planes; ``pi0`` is the plane through ``p0``; ``theta`` is the angle
    between the normals and ``phi`` the angle between ``n0 x n1`` and the
    chord ``p0 -> p1``.
    """

    z: np.ndarray
    hbar: float
    pi0: Plane
    theta: float
    phi: float

    @classmethod
    def of(cls, P0: Pnp, P1: Pnp) -> "AvgContext":
        n0 = (P0.normal[0], P0.normal[1], P0.normal[2])
        n1 = (P1.normal[0], P1.normal[1], P1.normal[2])
        theta = _angle(n0, n1)
        if theta >= math.pi - get_tolerances().antipodal:
            raise AntipodalNormalsError("averaging context undefined for antipodal normals")
        z = z_dir(P0.normal, P1.normal)
        chord = (
            P1.point[0] - P0.point[0],
            P1.point[1] - P0.point[1],
            P1.point[2] - P0.point[2],
        )
        zt = (z[0], z[1], z[2])
        hbar = abs(_dot(chord, zt))
        phi = _angle(_cross(n0, n1), chord) if _norm(chord) > 0.0 else 0.0
        return cls(z=z, hbar=hbar, pi0=Plane(P0.point, z), theta=theta, phi=phi)


def circle_avg_3d(P0: Pnp, P1: Pnp, w: float) -> Pnp:
    """Circle average of two 3D point-normal pairs with weight ``w``.

    For weight 0 or 1 the corresponding input is returned exactly. For
    (near-)parallel normals the point is the affine average; this is the
    continuity limit of the construction. Otherwise the pair ``P1`` is
    projected along ``z_dir(n0, n1)`` into the working plane through ``p0``,
    averaged in-plane, and the point is shifted back by ``w`` times the
    signed plane offset, so weight 1 lands exactly on the plane through
    ``p1``. The returned normal is the geodesic average and lies in the
    working plane. Any real ``w`` is accepted.

    Raises :class:`AntipodalNormalsError` when the normals are opposite.
    """
    tol = get_tolerances()
    n0 = (P0.normal[0], P0.normal[1], P0.normal[2])
    n1 = (P1.normal[0], P1.normal[1], P1.normal[2])
    theta = _angle(n0, n1)
    if theta >= math.pi - tol.antipodal:
        raise AntipodalNormalsError("circle average undefined for antipodal normals")
    if w == 0.0:
        return P0
    if w == 1.0:
        return P1
    p0 = (P0.point[0], P0.point[1], P0.point[2])
    p1 = (P1.point[0], P1.point[1], P1.point[2])
    if theta < tol.theta_linear:
        # z is numerically meaningless; take the straight-chord limit
        pt = (
            (1.0 - w) * p0[0] + w * p1[0],
            (1.0 - w) * p0[1] + w * p1[1],
            (1.0 - w) * p0[2] + w * p1[2],
        )
        return Pnp(pt, _slerp(n0, n1, w, theta))
    c = _cross(n0, n1)
    cn = _norm(c)
    zt = (c[0] / cn, c[1] / cn, c[2] / cn)
    h = _dot((p1[0] - p0[0], p1[1] - p0[1], p1[2] - p0[2]), zt)
    p1s = (p1[0] - h * zt[0], p1[1] - h * zt[1], p1[2] - h * zt[2])
    pt, nm = _avg_in_plane(p0, n0, p1s, n1, w, zt, theta)
    wh = w * h
    return Pnp((pt[0] + wh * zt[0], pt[1] + wh * zt[1], pt[2] + wh * zt[2]), nm)


def chord_point(p0, p1, w: float) -> np.ndarray:
    """Affine average ``(1 - w) p0 + w p1``.

    This is the intersection of the segment ``[p0, p1]`` with the plane at
    offset fraction ``w`` between the two working planes, and the limit of
    the averaged point as the normals align.
    """
    a = np.asarray(p0, dtype=float)
    b = np.asarray(p1, dtype=float)
    return (1.0 - w) * a + w * b


def deviation_from_chord(P0: Pnp, P1: Pnp, w: float) -> float:
    """Closed-form distance between the averaged point and the chord point.

    With ``g = |p1 - p0| sin(phi)`` the in-plane chord length, the squared
    distance follows from the cosine rule in the triangle spanned by the
    projected start point, the averaged point and the chord point::

        g^2 * [ (w - R)^2 + 4 w R sin^2(theta (1 - w) / 4) ],
        R = sin(theta w / 2) / sin(theta / 2)

    which matches ``|circle_avg_3d(P0, P1, w).point - chord_point(...)|`` to
    rounding. Raises :class:`ParallelNormalsError` for ``theta = 0`` where
    the ratio ``R`` exists only as a limit, and
    :class:`AntipodalNormalsError` for opposite normals.
    """
    n0 = (P0.normal[0], P0.normal[1], P0.normal[2])
    n1 = (P1.normal[0], P1.normal[1], P1.normal[2])
    if _angle(n0, n1) < get_tolerances().theta_linear:
        raise ParallelNormalsError("deviation is defined only as a limit for parallel normals")
    ctx = AvgContext.of(P0, P1)
    theta = ctx.theta
    chord = P1.point - P0.point
    g = math.sqrt(float(chord @ chord)) * math.sin(ctx.phi)
    r = math.sin(0.5 * w * theta) / math.sin(0.5 * theta)
    ssq = math.sin(0.25 * theta * (1.0 - w))
    dev2 = (w - r) ** 2 + 4.0 * w * r * ssq * ssq
    return g * math.sqrt(max(dev2, 0.0))


def helix_trace(P0: Pnp, P1: Pnp, samples: int) -> np.ndarray:
    """Points of the average at equally spaced weights from 0 to 1.

    Returns an array of shape ``(samples, 3)``; the first and last rows are
    exactly ``p0`` and ``p1``. In a generic configuration the points lie on
    a helix around ``z_dir(n0, n1)`` whose projection onto the working plane
    is the planar auxiliary arc.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    out = np.empty((samples, 3))
    last = samples - 1
    for i in range(samples):
        out[i] = circle_avg_3d(P0, P1, i / last).point
    return out
