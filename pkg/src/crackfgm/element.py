"""Eight-node serendipity Mindlin plate element.

Five dofs per node in the order ``(u0, v0, w0, theta_x, theta_y)`` with
``u = u0 + z theta_x`` and ``v = v0 + z theta_y``.  Transverse shear and the
in-plane shear channel (gamma_xy, including its membrane-bending coupling) are
integrated with 2x2 Gauss points; everything else with 3x3.

All functions accept a single element (coords of shape (8, 2)) or a batch
(shape (E, 8, 2)) and return matching leading dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .section import SectionProperties

NDOF = 5
NEN = 8
EDOF = NDOF * NEN

# Natural coordinates of the nodes, corners first.
XI_NODES = np.array([-1, 1, 1, -1, 0, 1, 0, -1], dtype=float)
ETA_NODES = np.array([-1, -1, 1, 1, -1, 0, 1, 0], dtype=float)


class ElementError(ValueError):
    """Distorted or inverted element geometry."""


def gauss_rule(order: int):
    """Tensor-product Gauss rule: points (n, 2) and weights (n,)."""
    x, w = np.polynomial.legendre.leggauss(order)
    xi, eta = np.meshgrid(x, x, indexing="ij")
    wt = np.outer(w, w)
    return np.column_stack([xi.ravel(), eta.ravel()]), wt.ravel()


FULL = gauss_rule(3)
REDUCED = gauss_rule(2)


def shape_functions(xi, eta):
    """Serendipity shape functions and their natural derivatives.

    Returns
    -------
    N : ndarray, shape (8,)
    dN : ndarray, shape (2, 8)
        Rows are d/dxi and d/deta.
    """
    xs, es = XI_NODES, ETA_NODES
    N = np.empty(8)
    dN = np.empty((2, 8))

    c = slice(0, 4)
    N[c] = 0.25 * (1 + xs[c] * xi) * (1 + es[c] * eta) * (xs[c] * xi + es[c] * eta - 1)
    dN[0, c] = 0.25 * xs[c] * (1 + es[c] * eta) * (2 * xs[c] * xi + es[c] * eta)
    dN[1, c] = 0.25 * es[c] * (1 + xs[c] * xi) * (xs[c] * xi + 2 * es[c] * eta)

    for k in (4, 6):  # mid-sides on eta = -1, +1
        N[k] = 0.5 * (1 - xi**2) * (1 + es[k] * eta)
        dN[0, k] = -xi * (1 + es[k] * eta)
        dN[1, k] = 0.5 * es[k] * (1 - xi**2)
    for k in (5, 7):  # mid-sides on xi = +1, -1
        N[k] = 0.5 * (1 + xs[k] * xi) * (1 - eta**2)
        dN[0, k] = 0.5 * xs[k] * (1 - eta**2)
        dN[1, k] = -eta * (1 + xs[k] * xi)
    return N, dN


def _tabulate(rule):
    pts, wts = rule
    Ns, dNs = zip(*(shape_functions(x, e) for x, e in pts))
    return np.array(Ns), np.array(dNs), wts


_FULL_TAB = _tabulate(FULL)
_RED_TAB = _tabulate(REDUCED)


@dataclass
class QuadratureData:
    """Shape data mapped onto a batch of elements at one Gauss rule."""

    N: np.ndarray  # (G, 8)
    dNdx: np.ndarray  # (E, G, 2, 8) physical derivatives
    detJ: np.ndarray  # (E, G)
    weight: np.ndarray  # (G,)
    points: np.ndarray  # (E, G, 2) physical coordinates

    @property
    def wdet(self) -> np.ndarray:
        return self.detJ * self.weight


def map_element(coords, rule=FULL) -> QuadratureData:
    coords = np.asarray(coords, dtype=float)
    if coords.ndim == 2:
        coords = coords[None]
    N, dN, wts = _FULL_TAB if rule is FULL else (_RED_TAB if rule is REDUCED else _tabulate(rule))
    J = np.einsum("gan,enb->egab", dN, coords)
    detJ = J[..., 0, 0] * J[..., 1, 1] - J[..., 0, 1] * J[..., 1, 0]
    if np.any(detJ <= 0):
        raise ElementError("non-positive Jacobian determinant")
    Jinv = np.empty_like(J)
    Jinv[..., 0, 0] = J[..., 1, 1] / detJ
    Jinv[..., 1, 1] = J[..., 0, 0] / detJ
    Jinv[..., 0, 1] = -J[..., 0, 1] / detJ
    Jinv[..., 1, 0] = -J[..., 1, 0] / detJ
    dNdx = np.einsum("egab,gbn->egan", Jinv, dN)
    points = np.einsum("gn,enk->egk", N, coords)
    return QuadratureData(N=N, dNdx=dNdx, detJ=detJ, weight=wts, points=points)


def membrane_B(q: QuadratureData) -> np.ndarray:
    """Strain-displacement operator for (u,x, v,y, u,y + v,x); (E, G, 3, 40)."""
    return _inplane_B(q, 0)


def bending_B(q: QuadratureData) -> np.ndarray:
    """Curvature operator for (tx,x, ty,y, tx,y + ty,x); (E, G, 3, 40)."""
    return _inplane_B(q, 3)


def _inplane_B(q, first):
    E, G = q.detJ.shape
    B = np.zeros((E, G, 3, EDOF))
    dx, dy = q.dNdx[:, :, 0, :], q.dNdx[:, :, 1, :]
    B[:, :, 0, first::NDOF] = dx
    B[:, :, 1, first + 1 :: NDOF] = dy
    B[:, :, 2, first::NDOF] = dy
    B[:, :, 2, first + 1 :: NDOF] = dx
    return B


def shear_B(q: QuadratureData) -> np.ndarray:
    """Transverse shear operator for (tx + w,x, ty + w,y); (E, G, 2, 40)."""
    E, G = q.detJ.shape
    B = np.zeros((E, G, 2, EDOF))
    B[:, :, 0, 2::NDOF] = q.dNdx[:, :, 0, :]
    B[:, :, 1, 2::NDOF] = q.dNdx[:, :, 1, :]
    B[:, :, 0, 3::NDOF] = q.N[None]
    B[:, :, 1, 4::NDOF] = q.N[None]
    return B


def _quad_form(Bl, C, Br, wdet):
    return np.einsum("eg,egia,ij,egjb->eab", wdet, Bl, C, Br)


def _squeeze(arr, single):
    return arr[0] if single else arr


def _is_single(coords):
    return np.asarray(coords).ndim == 2


def _symmetrize(K, name):
    skew = np.max(np.abs(K - np.swapaxes(K, -1, -2)))
    scale = np.max(np.abs(K))
    if scale > 0 and skew > 1e-9 * scale:
        raise ElementError(f"{name} asymmetry {skew / scale:.2e} exceeds tolerance")
    return 0.5 * (K + np.swapaxes(K, -1, -2))


def element_stiffness(section: SectionProperties, coords) -> np.ndarray:
    """Selectively integrated stiffness matrix (40 x 40 per element)."""
    single = _is_single(coords)
    # Split the in-plane constitutive data into the normal-strain block and
    # the shear channel; isotropic sections have no normal/shear coupling.
    normal = np.zeros((3, 3))
    normal[:2, :2] = 1.0
    shear = np.zeros((3, 3))
    shear[2, 2] = 1.0

    f = map_element(coords, FULL)
    Bp, Bb = membrane_B(f), bending_B(f)
    K = _quad_form(Bp, section.A * normal, Bp, f.wdet)
    K += _quad_form(Bp, section.B * normal, Bb, f.wdet)
    K += _quad_form(Bb, section.B * normal, Bp, f.wdet)
    K += _quad_form(Bb, section.D, Bb, f.wdet)

    r = map_element(coords, REDUCED)
    Bp, Bb, Bs = membrane_B(r), bending_B(r), shear_B(r)
    K += _quad_form(Bp, section.A * shear, Bp, r.wdet)
    K += _quad_form(Bp, section.B * shear, Bb, r.wdet)
    K += _quad_form(Bb, section.B * shear, Bp, r.wdet)
    K += _quad_form(Bs, section.Es, Bs, r.wdet)
    return _squeeze(_symmetrize(K, "stiffness"), single)


def element_mass(section: SectionProperties, coords) -> np.ndarray:
    """Consistent mass: ``p`` on translations, ``I`` on rotations."""
    single = _is_single(coords)
    f = map_element(coords, FULL)
    NN = np.einsum("eg,ga,gb->eab", f.wdet, f.N, f.N)
    E = NN.shape[0]
    M = np.zeros((E, EDOF, EDOF))
    for d, coef in enumerate((section.p, section.p, section.p, section.I, section.I)):
        M[:, d::NDOF, d::NDOF] = coef * NN
    return _squeeze(M, single)


@dataclass
class GaussPointState:
    """In-plane prestress resultants at the 3x3 Gauss points of each element.

    ``resultants[e, g] = (Nxx, Nyy, Nxy)`` in N/m.
    """

    points: np.ndarray  # (E, 9, 2)
    weights: np.ndarray  # (E, 9) weight * detJ
    resultants: np.ndarray  # (E, 9, 3)


def element_geometric_stiffness(gauss_states, section: SectionProperties, coords) -> np.ndarray:
    """Geometric stiffness from in-plane prestress.

    ``gauss_states`` is a :class:`GaussPointState` or an array of resultants
    shaped (E, 9, 3) / (9, 3).  Rotation-gradient blocks carry an extra
    ``h^2 / 12``.
    """
    single = _is_single(coords)
    N = gauss_states.resultants if isinstance(gauss_states, GaussPointState) else np.asarray(gauss_states)
    if N.ndim == 2:
        N = N[None]
    f = map_element(coords, FULL)
    S = np.empty(N.shape[:2] + (2, 2))
    S[..., 0, 0] = N[..., 0]
    S[..., 1, 1] = N[..., 1]
    S[..., 0, 1] = S[..., 1, 0] = N[..., 2]
    GG = np.einsum("eg,egan,egab,egbm->enm", f.wdet, f.dNdx, S, f.dNdx)
    E = GG.shape[0]
    KG = np.zeros((E, EDOF, EDOF))
    KG[:, 2::NDOF, 2::NDOF] = GG
    rot = section.h**2 / 12.0
    KG[:, 3::NDOF, 3::NDOF] = rot * GG
    KG[:, 4::NDOF, 4::NDOF] = rot * GG
    return _squeeze(_symmetrize(KG, "geometric stiffness"), single)


def element_thermal_load(section: SectionProperties, coords) -> np.ndarray:
    """Equivalent nodal load of the thermal force and moment resultants."""
    single = _is_single(coords)
    f = map_element(coords, FULL)
    Bp, Bb = membrane_B(f), bending_B(f)
    fe = np.einsum("eg,egia,i->ea", f.wdet, Bp, section.NT)
    fe += np.einsum("eg,egia,i->ea", f.wdet, Bb, section.MT)
    return _squeeze(fe, single)


def inplane_resultants(section: SectionProperties, coords, ue) -> GaussPointState:
    """``N = A eps_p + B kappa - NT`` at the 3x3 Gauss points.

    ``ue`` holds element displacement vectors, shape (E, 40).
    """
    f = map_element(coords, FULL)
    Bp, Bb = membrane_B(f), bending_B(f)
    ue = np.asarray(ue)
    if ue.ndim == 1:
        ue = ue[None]
    eps = np.einsum("egia,ea->egi", Bp, ue)
    kap = np.einsum("egia,ea->egi", Bb, ue)
    N = eps @ section.A.T + kap @ section.B.T - section.NT
    return GaussPointState(points=f.points, weights=f.wdet, resultants=N)
