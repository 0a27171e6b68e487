"""Global assembly, skew/boundary treatment, thermal prestress and eigensolution."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .element import (
    EDOF,
    NDOF,
    GaussPointState,
    element_geometric_stiffness,
    element_mass,
    element_stiffness,
    element_thermal_load,
    inplane_resultants,
)
from .material import T_REF, FgmSpec
from .mesh import Mesh
from .section import SectionProperties

DENSE_LIMIT = 2500
SCHEMES = ("ceramic", "metal_h", "metal_a2h")


class SolverError(RuntimeError):
    """Singular or over-constrained system."""


class ThermalBucklingError(SolverError):
    """Thermal prestress exceeds the critical level (negative eigenvalue)."""

    def __init__(self, eigenvalue: float):
        super().__init__(f"thermal buckling: K + KG is indefinite (lowest eigenvalue {eigenvalue:.6g})")
        self.eigenvalue = eigenvalue


@dataclass
class GlobalSystem:
    """Assembled global matrices.

    ``T`` maps transformed (local-frame) dofs to global dofs,
    ``d = T d'``; it is the identity until a skew transform is applied.
    ``K``, ``M``, ``KG`` and ``f`` are always expressed in the transformed
    frame.
    """

    K: sp.csr_matrix
    M: sp.csr_matrix
    KG: sp.csr_matrix
    f: np.ndarray
    T: sp.csr_matrix
    fixed: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))

    @property
    def ndof(self) -> int:
        return self.K.shape[0]

    @property
    def free(self) -> np.ndarray:
        mask = np.ones(self.ndof, dtype=bool)
        mask[self.fixed] = False
        return np.flatnonzero(mask)

    def expand(self, reduced: np.ndarray) -> np.ndarray:
        """Lift free-dof vectors (n_free, ...) to full global-frame vectors."""
        full = np.zeros((self.ndof,) + reduced.shape[1:])
        full[self.free] = reduced
        return self.T @ full


@dataclass
class ModalResult:
    """Natural frequencies and mode shapes.

    ``vectors`` are mass-orthonormal global-frame mode vectors (columns);
    ``modes`` are the same vectors scaled so that max |w| = 1.
    """

    omegas: np.ndarray
    eigenvalues: np.ndarray
    vectors: np.ndarray
    Omega: dict = field(default_factory=dict)

    @property
    def modes(self) -> np.ndarray:
        w = self.vectors[2::NDOF]
        idx = np.argmax(np.abs(w), axis=0)
        peak = w[idx, np.arange(w.shape[1])]
        peak = np.where(peak == 0, 1.0, peak)
        return self.vectors / peak


def element_dofs(mesh: Mesh) -> np.ndarray:
    return (NDOF * mesh.elements[:, :, None] + np.arange(NDOF)).reshape(mesh.n_elements, EDOF)


def _scatter(mesh: Mesh, Ke: np.ndarray) -> sp.csr_matrix:
    dofs = element_dofs(mesh)
    if dofs.max() >= NDOF * mesh.n_nodes or dofs.min() < 0:
        raise SolverError("element dof index out of range")
    rows = np.repeat(dofs, EDOF, axis=1).ravel()
    cols = np.tile(dofs, (1, EDOF)).ravel()
    n = NDOF * mesh.n_nodes
    # coo -> csr sums duplicates in a fixed order: bitwise reproducible.
    return sp.coo_matrix((Ke.ravel(), (rows, cols)), shape=(n, n)).tocsr()


def _scatter_vector(mesh: Mesh, fe: np.ndarray) -> np.ndarray:
    f = np.zeros(NDOF * mesh.n_nodes)
    np.add.at(f, element_dofs(mesh).ravel(), fe.ravel())
    return f


def assemble(mesh: Mesh, section: SectionProperties) -> GlobalSystem:
    """Assemble stiffness, consistent mass and thermal load."""
    coords = mesh.element_coords()
    K = _scatter(mesh, element_stiffness(section, coords))
    M = _scatter(mesh, element_mass(section, coords))
    f = _scatter_vector(mesh, element_thermal_load(section, coords))
    n = K.shape[0]
    return GlobalSystem(K=K, M=M, KG=sp.csr_matrix((n, n)), f=f, T=sp.identity(n, format="csr"))


def assemble_geometric(mesh: Mesh, section: SectionProperties, prestress: GaussPointState) -> sp.csr_matrix:
    return _scatter(mesh, element_geometric_stiffness(prestress, section, mesh.element_coords()))


def nodal_transform(psi: float) -> np.ndarray:
    """5x5 rotation taking local edge dofs to global dofs."""
    c, s = math.cos(psi), math.sin(psi)
    L = np.eye(NDOF)
    L[np.ix_([0, 1], [0, 1])] = [[c, s], [-s, c]]
    L[np.ix_([3, 4], [3, 4])] = [[c, s], [-s, c]]
    return L


def skew_transform_matrix(n_nodes: int, nodes, psi: float) -> sp.csr_matrix:
    blocks = [np.eye(NDOF)] * n_nodes
    L = nodal_transform(psi)
    for k in nodes:
        blocks[k] = L
    return sp.block_diag(blocks, format="csr")


def apply_skew_transform(system: GlobalSystem, mesh: Mesh, psi: float) -> GlobalSystem:
    """Rotate the dofs of oblique-edge nodes into the edge frame."""
    if psi == 0.0 or len(mesh.skew_nodes) == 0:
        return system
    T = skew_transform_matrix(mesh.n_nodes, mesh.skew_nodes, psi)
    Tt = T.T.tocsr()
    return replace(
        system,
        K=(Tt @ system.K @ T).tocsr(),
        M=(Tt @ system.M @ T).tocsr(),
        KG=(Tt @ system.KG @ T).tocsr(),
        f=Tt @ system.f,
        T=(system.T @ T).tocsr(),
    )


def constrained_dofs(mesh: Mesh, bc: str) -> np.ndarray:
    """Constrained dofs for ``SSSS``, ``CCCC`` or ``FREE`` edges."""
    bc = bc.upper()
    if bc == "FREE":
        return np.zeros(0, dtype=int)
    if bc == "SSSS":
        x_edge, y_edge = (0, 2, 4), (1, 2, 3)
    elif bc == "CCCC":
        x_edge = y_edge = (0, 1, 2, 3, 4)
    else:
        raise SolverError(f"unknown boundary condition {bc!r}")
    fixed = []
    for tag, local in (("X0", x_edge), ("XA", x_edge), ("Y0", y_edge), ("YB", y_edge)):
        nodes = mesh.edge_tags[tag]
        fixed.append((NDOF * nodes[:, None] + np.array(local)).ravel())
    return np.unique(np.concatenate(fixed))


def apply_bcs(system: GlobalSystem, mesh: Mesh, bc: str) -> GlobalSystem:
    fixed = constrained_dofs(mesh, bc)
    if len(fixed) >= system.ndof:
        raise SolverError("every dof is constrained")
    return replace(system, fixed=fixed)


def _reduce(A, free):
    return A[free][:, free]


def solve_prestress(system: GlobalSystem, mesh: Mesh, section: SectionProperties) -> GaussPointState:
    """Static thermal solve and in-plane resultants at every Gauss point."""
    free = system.free
    f = system.f[free]
    coords = mesh.element_coords()
    if not np.any(f):
        delta = np.zeros(system.ndof)
    else:
        Kff = _reduce(system.K, free).tocsc()
        try:
            lu = spla.splu(Kff)
        except RuntimeError as exc:
            raise SolverError("stiffness matrix is singular; add constraints") from exc
        pivots = np.abs(lu.U.diagonal())
        # Rigid-body freedom shows up as round-off-sized pivots.
        if pivots.min() < 1e-12 * pivots.max():
            raise SolverError("stiffness matrix is singular; add constraints")
        x = lu.solve(f)
        resid = np.linalg.norm(Kff @ x - f)
        if not np.all(np.isfinite(x)) or resid > 1e-6 * np.linalg.norm(f):
            raise SolverError("stiffness matrix is singular; add constraints")
        delta = system.expand(x)
    ue = delta[element_dofs(mesh)]
    return inplane_resultants(section, coords, ue)


def _inertia_negative(A: sp.spmatrix) -> Optional[int]:
    """Number of negative eigenvalues of symmetric ``A`` via a diagonal-pivot LDU."""
    try:
        lu = spla.splu(
            A.tocsc(),
            permc_spec="MMD_AT_PLUS_A",
            diag_pivot_thresh=0.0,
            options={"SymmetricMode": True},
        )
    except RuntimeError:
        return None
    if not np.array_equal(lu.perm_r, lu.perm_c):
        return None
    return int(np.sum(lu.U.diagonal() < 0))


def solve_modes(system: GlobalSystem, n_modes: int = 10, tol: float = 1e-8) -> ModalResult:
    """Lowest eigenpairs of ``(K + KG) phi = omega^2 M phi`` on the free dofs."""
    free = system.free
    n = len(free)
    if n == 0:
        raise SolverError("no free dofs")
    k = min(n_modes, n)
    Kt = _reduce(system.K + system.KG, free)
    Mf = _reduce(system.M, free)

    if n <= DENSE_LIMIT:
        lam, vec = scipy.linalg.eigh(Kt.toarray(), Mf.toarray(), subset_by_index=[0, k - 1])
    else:
        v0 = np.ones(n) / math.sqrt(n)
        lam, vec = spla.eigsh(Kt.tocsc(), k=k, M=Mf.tocsc(), sigma=0.0, which="LM", v0=v0, tol=1e-14)
        # Shift-invert returns the eigenvalues nearest zero, which can miss
        # strongly negative ones; the LDL inertia catches those.
        if _inertia_negative(Kt):
            raise ThermalBucklingError(float(min(np.min(lam), 0.0)))
        order = np.argsort(lam)
        lam, vec = lam[order], vec[:, order]
        # ARPACK returns M-orthonormal vectors up to its tolerance; tidy up.
        vec = vec / np.sqrt(np.einsum("ik,ik->k", vec, Mf @ vec))

    scale = max(abs(lam[-1]), 1e-300)
    if lam[0] < -tol * scale:
        raise ThermalBucklingError(float(lam[0]))
    lam = np.where(lam < 0, 0.0, lam)
    # Fix sign so the largest |w| component is positive: reproducible output.
    full = system.expand(vec)
    w = full[2::NDOF]
    idx = np.argmax(np.abs(w), axis=0)
    sign = np.sign(w[idx, np.arange(w.shape[1])])
    sign = np.where(sign == 0, 1.0, sign)
    full = full * sign
    return ModalResult(omegas=np.sqrt(lam), eigenvalues=lam, vectors=full)


def reference_scales(fgm: FgmSpec, a: float, h: float, ceramic_modulus: str = "base", T_ref: float = T_REF) -> dict:
    """Multipliers converting omega (rad/s) to each nondimensional scheme.

    Metal-based schemes use the metal modulus at ``T_ref``.  The ceramic
    scheme's bending rigidity uses the tabulated base modulus ``P0`` when
    ``ceramic_modulus="base"`` (the convention of the reference parametric
    tables) or the modulus at ``T_ref`` when ``ceramic_modulus="T_ref"``.
    """
    c, m = fgm.ceramic, fgm.metal
    nu = fgm.constant_nu if fgm.constant_nu is not None else c.nu
    if ceramic_modulus == "base":
        Ec = c.E_coeffs.P0
    elif ceramic_modulus == "T_ref":
        Ec = c.E(T_ref)
    else:
        raise ValueError(f"unknown ceramic reference {ceramic_modulus!r}")
    Em = m.E(T_ref)
    D = Ec * h**3 / (12.0 * (1.0 - nu**2))
    return {
        "ceramic": a**2 * math.sqrt(c.rho * h / D),
        "metal_h": h * math.sqrt(m.rho / Em),
        "metal_a2h": a**2 / h * math.sqrt(m.rho * (1.0 - nu**2) / Em),
    }


def nondimensionalize(omega, scheme: str, fgm: FgmSpec, a: float, h: float, ceramic_modulus: str = "base"):
    """Nondimensional frequency under ``scheme`` (one of :data:`SCHEMES`)."""
    if scheme not in SCHEMES:
        raise ValueError(f"unknown nondimensional scheme {scheme!r}")
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise ValueError("frequencies must be non-negative")
    return omega * reference_scales(fgm, a, h, ceramic_modulus)[scheme]
