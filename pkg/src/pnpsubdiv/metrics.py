"""Discrete smoothness estimates for refined meshes.

Per-edge dihedral angles proxy the deviation from tangent-plane continuity;
the per-vertex angle-deficit curvature and its local spread proxy the
deviation from curvature continuity. Reported scalars:

* ``psi_deg``   largest dihedral angle, in degrees;
* ``zeta_star`` largest local curvature spread (max - min of the curvature
  over a vertex and its one-ring);
* ``xi_deg``    mean angle between the normals stored on a mesh and its
  naive normals, in degrees (meaningful for meshes produced by a modified
  scheme, where stored normals come from the averaging).

Angles are radians internally; only the report converts to degrees. All
functions are pure over an immutable mesh.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateFaceError, MissingNormalsError, ZeroAreaError
from .geom import get_tolerances
from .mesh import Mesh, naive_normals

__all__ = [
    "MetricsReport",
    "dihedral_angles",
    "curvature",
    "zeta",
    "psi_zeta_star",
    "normal_deviation",
    "measure",
    "curvature_colors",
]


def _unit_rows(vecs, context):
    norms = np.linalg.norm(vecs, axis=1)
    if (norms <= get_tolerances().coincident).any():
        raise DegenerateFaceError(f"zero-area face while computing {context}")
    return vecs / norms[:, None]


def _row_angles(a, b):
    cross = np.cross(a, b)
    return np.arctan2(np.linalg.norm(cross, axis=1), np.einsum("ij,ij->i", a, b))


def dihedral_angles(mesh: Mesh) -> np.ndarray:
    """Per-edge dihedral estimate in radians, aligned with ``mesh.edges``.

    Triangle meshes: the angle between the two incident face normals. Quad
    meshes: connect the edge midpoint to the midpoints of the opposite edges
    of both incident faces, cross each of those directions with the edge
    direction, and take the angle between the two results.
    """
    verts = mesh.vertices
    faces = mesh.faces
    edges = mesh.edges
    if mesh.arity == 3:
        fnorm = _unit_rows(
            np.cross(
                verts[faces[:, 1]] - verts[faces[:, 0]],
                verts[faces[:, 2]] - verts[faces[:, 0]],
            ),
            "dihedral angles",
        )
        return _row_angles(fnorm[mesh.edge_faces[:, 0]], fnorm[mesh.edge_faces[:, 1]])

    edge_dir = verts[edges[:, 1]] - verts[edges[:, 0]]
    mid = 0.5 * (verts[edges[:, 0]] + verts[edges[:, 1]])
    side_normals = []
    for side in (0, 1):
        opp_mid = np.empty_like(mid)
        for eid, fi in enumerate(mesh.edge_faces[:, side]):
            face = [int(v) for v in faces[fi]]
            u, v = int(edges[eid, 0]), int(edges[eid, 1])
            for j in range(4):
                if {face[j], face[(j + 1) % 4]} == {u, v}:
                    o1, o2 = face[(j + 2) % 4], face[(j + 3) % 4]
                    break
            opp_mid[eid] = 0.5 * (verts[o1] + verts[o2])
        # each face sees the edge along its own orientation, so the two
        # constructed normals agree (angle 0) across a flat edge
        oriented = edge_dir if side == 0 else -edge_dir
        side_normals.append(_unit_rows(np.cross(opp_mid - mid, oriented), "dihedral angles"))
    return _row_angles(side_normals[0], side_normals[1])


def curvature(mesh: Mesh) -> np.ndarray:
    """Angle-deficit curvature per vertex: ``(2 pi - sum gamma_i) / A``.

    ``A`` is the barycentric cell area ``(1/6) sum |p v_i| |p v_{i+1}|
    sin gamma_i`` over the ordered wedges at the vertex.
    """
    verts = mesh.vertices
    out = np.empty(mesh.vertex_count)
    for p in range(mesh.vertex_count):
        ring, _ = mesh.ring(p)
        e = verts[ring] - verts[p]
        e_next = np.roll(e, -1, axis=0)
        cross_norms = np.linalg.norm(np.cross(e, e_next), axis=1)
        gammas = np.arctan2(cross_norms, np.einsum("ij,ij->i", e, e_next))
        area = cross_norms.sum() / 6.0
        if area <= 1e-15 * get_tolerances().scale ** 2:
            raise ZeroAreaError(f"vanishing cell area at vertex {p}")
        out[p] = (2.0 * math.pi - gammas.sum()) / area
    return out


def zeta(mesh: Mesh, curvatures: Optional[np.ndarray] = None) -> np.ndarray:
    """Local curvature spread per vertex: max - min over the vertex + ring."""
    k = curvature(mesh) if curvatures is None else curvatures
    out = np.empty(mesh.vertex_count)
    for p in range(mesh.vertex_count):
        ring, _ = mesh.ring(p)
        values = k[np.append(ring, p)]
        out[p] = values.max() - values.min()
    return out


def psi_zeta_star(mesh: Mesh) -> tuple[float, float]:
    """Mesh maxima: (largest dihedral angle in degrees, largest zeta)."""
    psi = math.degrees(float(dihedral_angles(mesh).max()))
    return psi, float(zeta(mesh).max())


def normal_deviation(mesh: Mesh) -> float:
    """Mean angle in degrees between stored normals and naive normals."""
    if mesh.normals is None:
        raise MissingNormalsError("mesh carries no normals to compare against")
    angles = _row_angles(mesh.normals, naive_normals(mesh))
    return math.degrees(float(angles.mean()))


@dataclass(frozen=True)
class MetricsReport:
    """All smoothness estimates of one mesh."""

    edge_dihedral: np.ndarray    # radians, aligned with mesh.edges
    vertex_curvature: np.ndarray
    vertex_zeta: np.ndarray
    psi_deg: float
    zeta_star: float
    xi_deg: Optional[float] = None

    def to_dict(self, include_arrays: bool = False) -> dict:
        out = {
            "psi_deg": self.psi_deg,
            "zeta_star": self.zeta_star,
            "xi_deg": self.xi_deg,
        }
        if include_arrays:
            out["edge_dihedral_deg"] = [math.degrees(a) for a in self.edge_dihedral]
            out["vertex_curvature"] = list(self.vertex_curvature)
            out["vertex_zeta"] = list(self.vertex_zeta)
        return out

    def to_json(self, include_arrays: bool = False) -> str:
        return json.dumps(self.to_dict(include_arrays), indent=2) + "\n"


def measure(mesh: Mesh, xi: bool = False) -> MetricsReport:
    """Compute the full report; ``xi`` needs stored normals on the mesh."""
    dihedral = dihedral_angles(mesh)
    k = curvature(mesh)
    z = zeta(mesh, k)
    return MetricsReport(
        edge_dihedral=dihedral,
        vertex_curvature=k,
        vertex_zeta=z,
        psi_deg=math.degrees(float(dihedral.max())),
        zeta_star=float(z.max()),
        xi_deg=normal_deviation(mesh) if xi else None,
    )


# ---------------------------------------------------------------------------
# curvature colorization
# ---------------------------------------------------------------------------

_NEUTRAL = (128, 255, 128)


def curvature_colors(curvatures, lo: float, hi: float) -> np.ndarray:
    """Map curvature values onto a signed color ramp as ``(n, 3)`` uint8.

    Positive values run yellow to red over ``(0, hi]``, negative values cyan
    to blue over ``[lo, 0)``, clamped outside. The range must straddle zero.
    Values within ``1e-9 * max(|lo|, hi)`` of zero get the neutral mid color
    so that flat regions read as flat.
    """
    if not (lo < 0.0 < hi):
        raise ValueError(f"range must straddle zero, got [{lo}, {hi}]")
    k = np.asarray(curvatures, dtype=float)
    out = np.empty((len(k), 3), dtype=np.uint8)
    band = 1e-9 * max(abs(lo), hi)
    for i, value in enumerate(k):
        if abs(value) <= band:
            out[i] = _NEUTRAL
        elif value > 0.0:
            t = min(value / hi, 1.0)
            out[i] = (255, round(255 * (1.0 - t)), 0)
        else:
            t = min(value / lo, 1.0)
            out[i] = (0, round(255 * (1.0 - t)), 255)
    return out
