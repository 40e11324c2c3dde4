"""Uniform Cartesian meshes on the unit interval/square with oriented faces.

Elements are indexed in C order (2D: e = ix * n + iy).  Each face stores the
owner element (the lower-indexed incident element), the neighbor (-1 on a
physical boundary), the axis it is normal to, and the sign of the owner's
outward normal along that axis.  Topology is immutable after construction
and shared read-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class FaceKind(IntEnum):
    INTERIOR_SUBSONIC = 0
    INTERIOR_SUPERSONIC = 1
    BOUNDARY_INFLOW = 2
    BOUNDARY_OUTFLOW = 3
    BOUNDARY_INFLOW_SUPERSONIC = 4
    BOUNDARY_OUTFLOW_SUPERSONIC = 5


INTERIOR_KINDS = (FaceKind.INTERIOR_SUBSONIC, FaceKind.INTERIOR_SUPERSONIC)


@dataclass(frozen=True)
class FaceClass:
    kind: FaceKind
    wn: float  # w . n using the owner-side normal


@dataclass(frozen=True)
class Face:
    """Per-face view assembled from the topology arrays."""

    index: int
    axis: int
    owner: int
    neighbor: int        # -1 on a physical boundary
    sign: float          # owner outward normal component along `axis`
    owner_side: int      # 0: face on owner's low-z side, 1: high side
    neighbor_side: int
    dim: int

    @property
    def is_boundary(self) -> bool:
        return self.neighbor < 0

    @property
    def normal(self) -> np.ndarray:
        n = np.zeros(self.dim)
        n[self.axis] = self.sign
        return n


@dataclass(frozen=True)
class MeshTopology:
    dim: int
    n: int
    h: float
    periodic: bool
    n_elements: int
    face_axis: np.ndarray
    face_owner: np.ndarray
    face_neighbor: np.ndarray
    face_sign: np.ndarray
    face_owner_side: np.ndarray
    face_neighbor_side: np.ndarray
    element_centers: np.ndarray  # (n_elements, dim)

    @property
    def n_faces(self) -> int:
        return len(self.face_axis)

    def face(self, i: int) -> Face:
        return Face(
            index=i,
            axis=int(self.face_axis[i]),
            owner=int(self.face_owner[i]),
            neighbor=int(self.face_neighbor[i]),
            sign=float(self.face_sign[i]),
            owner_side=int(self.face_owner_side[i]),
            neighbor_side=int(self.face_neighbor_side[i]),
            dim=self.dim,
        )


def build_mesh(dim: int, n: int, boundary_mode: str = "periodic") -> MeshTopology:
    """Uniform mesh of the unit interval (dim=1) or unit square (dim=2)."""
    if dim not in (1, 2):
        raise ValueError("dim must be 1 or 2")
    if n < 2:
        raise ValueError("need at least 2 elements per direction")
    if boundary_mode not in ("periodic", "physical"):
        raise ValueError(f"unknown boundary_mode {boundary_mode!r}")
    periodic = boundary_mode == "periodic"
    h = 1.0 / n
    n_elements = n ** dim

    axis_l, owner_l, neighbor_l, sign_l, oside_l, nside_l = [], [], [], [], [], []

    def elem(ix, iy=0):
        return ix * n + iy if dim == 2 else ix

    def add_face(axis, left, right):
        """Face between `left` (low side) and `right` (high side); right=-1 or
        left=-1 marks a physical boundary face owned by the other element."""
        if left >= 0 and right >= 0:
            if left <= right:
                axis_l.append(axis); owner_l.append(left); neighbor_l.append(right)
                sign_l.append(1.0); oside_l.append(1); nside_l.append(0)
            else:  # wrap face: the lower-indexed element sits on the high side
                axis_l.append(axis); owner_l.append(right); neighbor_l.append(left)
                sign_l.append(-1.0); oside_l.append(0); nside_l.append(1)
        elif right < 0:  # boundary on the high side of `left`
            axis_l.append(axis); owner_l.append(left); neighbor_l.append(-1)
            sign_l.append(1.0); oside_l.append(1); nside_l.append(1)
        else:            # boundary on the low side of `right`
            axis_l.append(axis); owner_l.append(right); neighbor_l.append(-1)
            sign_l.append(-1.0); oside_l.append(0); nside_l.append(0)

    lines = range(n) if dim == 2 else [0]
    for other in lines:
        for axis in range(dim):
            def cell(i):
                if dim == 1:
                    return elem(i)
                return elem(i, other) if axis == 0 else elem(other, i)
            if periodic:
                for i in range(n):
                    add_face(axis, cell(i), cell((i + 1) % n))
            else:
                add_face(axis, -1, cell(0))
                for i in range(n - 1):
                    add_face(axis, cell(i), cell(i + 1))
                add_face(axis, cell(n - 1), -1)

    centers_1d = (np.arange(n) + 0.5) * h
    if dim == 1:
        element_centers = centers_1d[:, None]
    else:
        cx, cy = np.meshgrid(centers_1d, centers_1d, indexing="ij")
        element_centers = np.stack([cx.ravel(), cy.ravel()], axis=1)

    return MeshTopology(
        dim=dim, n=n, h=h, periodic=periodic, n_elements=n_elements,
        face_axis=np.array(axis_l, dtype=int),
        face_owner=np.array(owner_l, dtype=int),
        face_neighbor=np.array(neighbor_l, dtype=int),
        face_sign=np.array(sign_l, dtype=float),
        face_owner_side=np.array(oside_l, dtype=int),
        face_neighbor_side=np.array(nside_l, dtype=int),
        element_centers=element_centers,
    )


def classify_wn(wn: float, c: float, interior: bool) -> FaceKind:
    """Flow-regime classification of a single face from its signed w.n.

    |w.n| = c counts as subsonic (the subsonic closures remain valid at
    equality); w.n = 0 on a physical boundary counts as outflow, whose
    closure stays well defined there.
    """
    if c <= 0:
        raise ValueError("wave speed c must be positive")
    if interior:
        return FaceKind.INTERIOR_SUPERSONIC if abs(wn) > c else FaceKind.INTERIOR_SUBSONIC
    if wn < -c:
        return FaceKind.BOUNDARY_INFLOW_SUPERSONIC
    if wn < 0:
        return FaceKind.BOUNDARY_INFLOW
    if wn <= c:
        return FaceKind.BOUNDARY_OUTFLOW
    return FaceKind.BOUNDARY_OUTFLOW_SUPERSONIC


def classify_face(face: Face, w, c: float) -> FaceClass:
    """Classify one face for background velocity w and wave speed c."""
    w = np.atleast_1d(np.asarray(w, dtype=float))
    wn = float(w[face.axis] * face.sign)
    return FaceClass(kind=classify_wn(wn, c, not face.is_boundary), wn=wn)


def classify_mesh(mesh: MeshTopology, w, c: float):
    """Vectorized classification; returns (kinds, wn) arrays over all faces."""
    w = np.atleast_1d(np.asarray(w, dtype=float))
    wn = w[mesh.face_axis] * mesh.face_sign
    interior = mesh.face_neighbor >= 0
    kinds = np.array(
        [classify_wn(float(x), c, bool(i)) for x, i in zip(wn, interior)],
        dtype=int,
    )
    return kinds, wn
