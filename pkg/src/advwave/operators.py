"""Semidiscrete DG operator: volume terms, face-flux gathering, element solves.

The evolving unknown is a pair of modal coefficient arrays, one row per
element.  A single factorized reference-element system serves every element
(uniform spacing).  The operator is applied in two phases: all face flux
states are computed from the read-only state, then every element is updated
independently; both phases are vectorized over elements/faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import fluxes
from .basis import ReferenceElement
from .fluxes import FluxParams, Trace
from .mesh import FaceKind, MeshTopology, classify_mesh


@dataclass
class ModalState:
    """Per-element Legendre coefficients of u and v at time t.

    u has shape (n_elements, (q+1)^dim), v has shape (n_elements, (s+1)^dim).
    """

    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    def copy(self) -> "ModalState":
        return ModalState(self.u.copy(), self.v.copy(), self.t)


@dataclass(frozen=True)
class ElementSolvers:
    """Factorized per-element systems, shared by all elements.

    u_system stacks the gradient-stiffness rows for the non-constant test
    functions with the mean-value row in the constant slot; it is square
    and nonsingular.  v_mass_inv is the inverse of the (diagonal) v mass
    matrix including the element Jacobian.
    """

    u_system: np.ndarray
    u_lu: tuple
    v_mass_diag: np.ndarray
    v_mass_inv: np.ndarray
    stiffness: np.ndarray   # c^2 * grad-grad bilinear form on the element
    mean_row: np.ndarray


def build_element_solvers(ref: ReferenceElement, h: float, c: float) -> ElementSolvers:
    dim = ref.dim
    jac = (h / 2.0) ** dim
    dscale = 2.0 / h
    stiffness = c * c * jac * dscale * dscale * ref.stiff_u
    mean_row = jac * ref.mean_row
    u_system = stiffness.copy()
    u_system[0, :] = mean_row
    v_mass_diag = jac * np.diag(ref.mass_v)
    return ElementSolvers(
        u_system=u_system,
        u_lu=lu_factor(u_system),
        v_mass_diag=v_mass_diag,
        v_mass_inv=1.0 / v_mass_diag,
        stiffness=stiffness,
        mean_row=mean_row,
    )


@dataclass(frozen=True)
class _FaceGroup:
    kind: FaceKind
    axis: int
    owner: np.ndarray
    neighbor: np.ndarray        # -1 entries for boundary groups
    sign: np.ndarray
    owner_side: np.ndarray      # global side index 2*axis + lo/hi
    neighbor_side: np.ndarray


class Discretization:
    """Everything needed to apply the semidiscrete operator repeatedly.

    forcing, if given, is a callable f(x, t) for the v equation, with x of
    shape (..., dim).
    """

    def __init__(self, mesh: MeshTopology, ref: ReferenceElement,
                 params: FluxParams, w, c: float, forcing=None):
        if ref.dim != mesh.dim:
            raise ValueError("mesh and reference element dimensions differ")
        self.mesh = mesh
        self.ref = ref
        self.params = params
        self.w = np.atleast_1d(np.asarray(w, dtype=float))
        self.c = float(c)
        self.forcing = forcing

        dim, h = mesh.dim, mesh.h
        self.jac_vol = (h / 2.0) ** dim
        self.jac_face = (h / 2.0) ** (dim - 1)
        self.dscale = 2.0 / h

        self.solvers = build_element_solvers(ref, h, c)

        # volume matrices (applied to coefficient rows from the right)
        wq = ref.vol_weights
        c2 = self.c * self.c
        self.adv_v = self.jac_vol * self.dscale * sum(
            self.w[d] * ref.vol_vals_v.T @ (wq[:, None] * ref.vol_grads_v[d])
            for d in range(dim)
        )
        self.stiff_vu = c2 * self.jac_vol * self.dscale ** 2 * sum(
            ref.vol_grads_v[d].T @ (wq[:, None] * ref.vol_grads_u[d])
            for d in range(dim)
        )
        # modal advective derivative w . grad in the u space
        self.adv_modal_u = self.dscale * sum(
            self.w[d] * ref.deriv_u[d] for d in range(dim)
        )

        self.quad_points = (
            mesh.element_centers[:, None, :] + (h / 2.0) * ref.vol_nodes[None, :, :]
        )

        self.face_kinds, self.face_wn = classify_mesh(mesh, self.w, self.c)
        self._groups = self._build_face_groups()

    def _build_face_groups(self) -> list[_FaceGroup]:
        m = self.mesh
        groups = []
        for kind in FaceKind:
            for axis in range(m.dim):
                sel = np.nonzero((self.face_kinds == kind) & (m.face_axis == axis))[0]
                if len(sel) == 0:
                    continue
                groups.append(_FaceGroup(
                    kind=FaceKind(kind),
                    axis=axis,
                    owner=m.face_owner[sel],
                    neighbor=m.face_neighbor[sel],
                    sign=m.face_sign[sel],
                    owner_side=2 * axis + m.face_owner_side[sel],
                    neighbor_side=2 * axis + m.face_neighbor_side[sel],
                ))
        return groups

    # --- traces and fluxes ------------------------------------------------

    def side_traces(self, u: np.ndarray, v: np.ndarray):
        """v and grad u of every element at every local side's face points.

        Returns (vtr, gtr) with shapes (2*dim, n_el, nfq) and
        (2*dim, n_el, nfq, dim); gradients are in physical coordinates.
        """
        ref = self.ref
        vtr = np.einsum("sfj,ej->sef", ref.face_vals_v, v)
        gtr = self.dscale * np.einsum("sdfj,ej->sefd", ref.face_grads_u, u)
        return vtr, gtr

    def _group_traces(self, g: _FaceGroup, vtr, gtr):
        dim = self.mesh.dim
        e_axis = np.zeros(dim)
        e_axis[g.axis] = 1.0
        n1 = g.sign[:, None, None] * e_axis
        t1 = Trace(v=vtr[g.owner_side, g.owner],
                   grad_u=gtr[g.owner_side, g.owner], n=n1)
        t2 = None
        if g.kind in (FaceKind.INTERIOR_SUBSONIC, FaceKind.INTERIOR_SUPERSONIC):
            t2 = Trace(v=vtr[g.neighbor_side, g.neighbor],
                       grad_u=gtr[g.neighbor_side, g.neighbor], n=-n1)
        return t1, t2

    def face_flux_states(self, u: np.ndarray, v: np.ndarray):
        """Phase 1: flux states for every element side.

        Each interior face's state is computed once and scattered to both
        incident sides, so the conservation pairing is exact by
        construction.  Returns (vstar, gstar, vtr, gtr) shaped like the
        side-trace arrays.
        """
        n_el, dim = self.mesh.n_elements, self.mesh.dim
        nfq = self.ref.face_weights.shape[0]
        vtr, gtr = self.side_traces(u, v)
        vstar = np.zeros((2 * dim, n_el, nfq))
        gstar = np.zeros((2 * dim, n_el, nfq, dim))
        for g in self._groups:
            t1, t2 = self._group_traces(g, vtr, gtr)
            state = fluxes.compute_flux(g.kind, t1, t2, self.params, self.w, self.c)
            vstar[g.owner_side, g.owner] = state.v_star
            gstar[g.owner_side, g.owner] = state.grad_u_star
            if t2 is not None:
                vstar[g.neighbor_side, g.neighbor] = state.v_star
                gstar[g.neighbor_side, g.neighbor] = state.grad_u_star
        return vstar, gstar, vtr, gtr

    # --- operator application ----------------------------------------------

    def rhs(self, u: np.ndarray, v: np.ndarray, t: float):
        """Semidiscrete right-hand side (du/dt, dv/dt)."""
        ref, dim = self.ref, self.mesh.dim
        c2 = self.c * self.c
        wf = ref.face_weights

        # w . grad u - v as coefficients in the u space (exact, modal)
        p = u @ self.adv_modal_u.T - v @ ref.embed_v.T

        rhs_v = -(v @ self.adv_v.T) - (u @ self.stiff_vu.T)
        rhs_u = -(p @ self.solvers.stiffness.T)

        vstar, gstar, vtr, gtr = self.face_flux_states(u, v)

        for side in range(2 * dim):
            axis, hi = divmod(side, 2)
            sign_out = 1.0 if hi else -1.0
            wn_out = sign_out * self.w[axis]
            dv_star = vstar[side] - vtr[side]
            gn_star_out = sign_out * gstar[side][..., axis]
            # v equation: c^2 phi grad u* . n - (v* - v) phi w . n
            av = wf * (c2 * gn_star_out - dv_star * wn_out)
            rhs_v += self.jac_face * (av @ ref.face_vals_v[side])
            # u equation: c^2 (v* - v) dphi/dn - c^2 grad phi . (grad u* - grad u) w . n
            rhs_u += (self.jac_face * sign_out * self.dscale
                      * ((wf * c2 * dv_star) @ ref.face_grads_u[side, axis]))
            for d in range(dim):
                diff = gstar[side][..., d] - gtr[side][..., d]
                rhs_u -= (self.jac_face * c2 * wn_out * self.dscale
                          * ((wf * diff) @ ref.face_grads_u[side, d]))

        if self.forcing is not None:
            f = self.forcing(self.quad_points, t)
            rhs_v += self.jac_vol * ((f * ref.vol_weights) @ ref.vol_vals_v)

        # mean constraint replaces the constant-test row
        rhs_u[:, 0] = -self.jac_vol * 2.0 ** dim * p[:, 0]

        # check_finite off: the time integrator checks the state after each
        # step and reports instabilities with the step index
        du = lu_solve(self.solvers.u_lu, rhs_u.T, check_finite=False).T
        dv = rhs_v * self.solvers.v_mass_inv
        return du, dv

    def boundary_energy_rate(self, u: np.ndarray, v: np.ndarray) -> float:
        """Sum of the closed-form face energy rates over all face groups."""
        vtr, gtr = self.side_traces(u, v)
        wf = self.ref.face_weights
        total = 0.0
        for g in self._groups:
            t1, t2 = self._group_traces(g, vtr, gtr)
            density = fluxes.energy_rate_density(g.kind, t1, t2, self.params, self.w, self.c)
            total += self.jac_face * float(np.sum(density @ wf))
        return total


def apply_dg_operator(state: ModalState, disc: Discretization) -> ModalState:
    """Apply the semidiscrete operator; returns the state derivative."""
    du, dv = disc.rhs(state.u, state.v, state.t)
    return ModalState(u=du, v=dv, t=state.t)


def trace_extract(state: ModalState, disc: Discretization, element: int, side: int) -> Trace:
    """Trace of (v, grad u) of one element at one local side's face points.

    side = 2*axis + (0 for the low-coordinate face, 1 for the high one).
    """
    ref, dim = disc.ref, disc.mesh.dim
    axis, hi = divmod(side, 2)
    n = np.zeros(dim)
    n[axis] = 1.0 if hi else -1.0
    v = ref.face_vals_v[side] @ state.v[element]
    g = disc.dscale * np.einsum("dfj,j->fd", ref.face_grads_u[side], state.u[element])
    return Trace(v=v, grad_u=g, n=np.broadcast_to(n, g.shape).copy())
