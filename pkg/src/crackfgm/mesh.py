"""Structured QUAD-8 meshes of rectangular and skew plates with a centre crack.

Node layout is a doubled lattice ``(i, j)``, ``0 <= i <= 2 nx``,
``0 <= j <= 2 ny``, with element centres (both indices odd) removed.
Elements list corners counter-clockwise, then mid-sides::

    4---7---3
    |       |
    8       6
    |       |
    1---5---2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict

import numpy as np


class MeshError(ValueError):
    """Requested mesh cannot be built (bad counts or misaligned crack)."""


@dataclass(frozen=True)
class PlateGeometry:
    """Plate planform and thickness.

    ``psi`` is the skew angle in radians: the planform is a parallelogram
    with sides ``a`` (along x) and ``b`` (leaning by ``psi`` from the y axis).
    The crack is centred and parallel to the edges of length ``a``;
    ``crack_ratio`` is ``c / a``.
    """

    a: float = 1.0
    b: float = 1.0
    h: float = 0.1
    psi: float = 0.0
    crack_ratio: float = 0.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.h > 0):
            raise MeshError("plate dimensions must be positive")
        if not 0.0 <= self.psi < math.pi / 2:
            raise MeshError(f"skew angle must lie in [0, pi/2), got {self.psi}")
        if not 0.0 <= self.crack_ratio < 1.0:
            raise MeshError(f"crack ratio must lie in [0, 1), got {self.crack_ratio}")

    def map(self, X, Y):
        """Rectangle coordinates ``(X, Y)`` onto the skew planform."""
        return X + Y * math.sin(self.psi), Y * math.cos(self.psi) + 0.0 * X

    @property
    def area(self) -> float:
        return self.a * self.b * math.cos(self.psi)


@dataclass
class Mesh:
    """QUAD-8 mesh.

    Attributes
    ----------
    nodes : ndarray, shape (N, 2)
    elements : ndarray of int, shape (E, 8)
    lattice : ndarray of int, shape (N, 2)
        Doubled-lattice index ``(i, j)`` of every node; crack duplicates keep
        the index of their twin.
    crack_pairs : ndarray of int, shape (P, 2)
        ``(original, duplicate)`` node pairs along the crack faces.
    edge_tags : dict
        ``X0, XA, Y0, YB`` -> sorted node indices on that edge.
    skew_nodes : ndarray of int
        Nodes on the oblique edges (empty for rectangular plates).
    """

    nodes: np.ndarray
    elements: np.ndarray
    lattice: np.ndarray
    nx: int
    ny: int
    crack_pairs: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=int))
    edge_tags: Dict[str, np.ndarray] = field(default_factory=dict)
    skew_nodes: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def element_coords(self) -> np.ndarray:
        """Nodal coordinates per element, shape (E, 8, 2)."""
        return self.nodes[self.elements]

    def dump(self, path) -> None:
        """Write ``id x y`` node lines followed by ``id n1 .. n8`` element lines."""
        with open(path, "w") as fh:
            fh.write(f"# nodes {self.n_nodes}\n")
            for k, (x, y) in enumerate(self.nodes):
                fh.write(f"{k} {x:.12g} {y:.12g}\n")
            fh.write(f"# elements {self.n_elements}\n")
            for k, conn in enumerate(self.elements):
                fh.write(f"{k} " + " ".join(str(int(c)) for c in conn) + "\n")


def node_count(nx: int, ny: int) -> int:
    return (2 * nx + 1) * (2 * ny + 1) - nx * ny


def compatible_divisions(crack_ratio: float, target: int) -> int:
    """Smallest element count ``>= target`` whose edges hit both crack tips.

    The tips sit at lattice index ``nx (1 -+ c/a)``, which must be an even
    integer; uncracked plates only need an even count.
    """
    n = max(2, int(target) + (int(target) % 2))
    for cand in range(n, n + 2000, 2):
        if crack_ratio == 0.0:
            return cand
        tip = cand * (1.0 - crack_ratio)
        k = round(tip)
        if abs(tip - k) < 1e-9 and k % 2 == 0:
            return cand
    raise MeshError(f"no element count aligns with crack ratio {crack_ratio}")


def generate_mesh(geometry: PlateGeometry, nx: int, ny: int) -> Mesh:
    """Structured ``nx x ny`` QUAD-8 mesh of the (possibly skew) planform."""
    if nx < 1 or ny < 1:
        raise MeshError("element counts must be positive")
    if geometry.crack_ratio > 0 and (nx % 2 or ny % 2):
        raise MeshError("cracked plates need even element counts in both directions")

    ii, jj = np.meshgrid(np.arange(2 * nx + 1), np.arange(2 * ny + 1), indexing="xy")
    ii, jj = ii.ravel(), jj.ravel()
    keep = ~((ii % 2 == 1) & (jj % 2 == 1))
    ii, jj = ii[keep], jj[keep]
    index = -np.ones((2 * nx + 1, 2 * ny + 1), dtype=int)
    index[ii, jj] = np.arange(len(ii))

    X = ii * geometry.a / (2 * nx)
    Y = jj * geometry.b / (2 * ny)
    x, y = geometry.map(X, Y)
    nodes = np.column_stack([x, y])

    elements = np.empty((nx * ny, 8), dtype=int)
    k = 0
    for ey in range(ny):
        for ex in range(nx):
            i0, j0 = 2 * ex, 2 * ey
            elements[k] = [
                index[i0, j0],
                index[i0 + 2, j0],
                index[i0 + 2, j0 + 2],
                index[i0, j0 + 2],
                index[i0 + 1, j0],
                index[i0 + 2, j0 + 1],
                index[i0 + 1, j0 + 2],
                index[i0, j0 + 1],
            ]
            k += 1
    return Mesh(nodes=nodes, elements=elements, lattice=np.column_stack([ii, jj]), nx=nx, ny=ny)


def split_crack(mesh: Mesh, geometry: PlateGeometry) -> Mesh:
    """Duplicate the interior crack-line nodes for the elements above the crack.

    The crack runs along lattice row ``j = ny`` (``y = b/2``) between the
    two tips, which stay shared.
    """
    c = geometry.crack_ratio
    if c == 0.0:
        return mesh
    nx, ny = mesh.nx, mesh.ny
    if ny % 2:
        raise MeshError("crack line y = b/2 is not an element edge (odd ny)")
    tip = nx * (1.0 - c)
    i_lo = round(tip)
    if abs(tip - i_lo) > 1e-9 or i_lo % 2:
        raise MeshError(f"crack tips do not coincide with element corners for nx = {nx}, c/a = {c}")
    i_hi = 2 * nx - i_lo
    j_c = ny

    ii, jj = mesh.lattice[:, 0], mesh.lattice[:, 1]
    on_crack = np.flatnonzero((jj == j_c) & (ii > i_lo) & (ii < i_hi))
    on_crack = on_crack[np.argsort(ii[on_crack])]
    new_ids = mesh.n_nodes + np.arange(len(on_crack))
    remap = np.arange(mesh.n_nodes)
    remap[on_crack] = new_ids

    elements = mesh.elements.copy()
    upper = np.arange(mesh.n_elements) // nx >= ny // 2
    elements[upper] = remap[elements[upper]]

    return replace(
        mesh,
        nodes=np.vstack([mesh.nodes, mesh.nodes[on_crack]]),
        lattice=np.vstack([mesh.lattice, mesh.lattice[on_crack]]),
        elements=elements,
        crack_pairs=np.column_stack([on_crack, new_ids]),
    )


def tag_boundaries(mesh: Mesh, geometry: PlateGeometry) -> Mesh:
    """Tag edge nodes by lattice position; list oblique-edge nodes when skewed."""
    ii, jj = mesh.lattice[:, 0], mesh.lattice[:, 1]
    tags = {
        "X0": np.flatnonzero(ii == 0),
        "XA": np.flatnonzero(ii == 2 * mesh.nx),
        "Y0": np.flatnonzero(jj == 0),
        "YB": np.flatnonzero(jj == 2 * mesh.ny),
    }
    if geometry.psi > 0:
        skew = np.union1d(tags["X0"], tags["XA"])
    else:
        skew = np.zeros(0, dtype=int)
    return replace(mesh, edge_tags=tags, skew_nodes=skew)


def build_mesh(geometry: PlateGeometry, nx: int, ny: int) -> Mesh:
    """Generate, split and tag in one go."""
    mesh = generate_mesh(geometry, nx, ny)
    mesh = split_crack(mesh, geometry)
    return tag_boundaries(mesh, geometry)
