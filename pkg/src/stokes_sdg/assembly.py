"""Assembly of the staggered DG saddle-point system.

Unknown ordering: dual-edge gradient traces q, interior-edge velocities u,
cell pressures p, one Lagrange multiplier mu for the pressure mean.  The
gradient equation is scaled by the viscosity so no 1/nu entry appears:

    [ M   -nu*B0^T   0     0  ] [q ]   [ nu*Bg^T ug ]
    [ B0   0         D0^T  0  ] [u ] = [ F(f)       ]
    [ 0    D0        0     a  ] [p ]   [ -Dg ug     ]
    [ 0    0         a^T   0  ] [mu]   [ 0          ]

where B carries the dual-edge coupling -sum_e |e| q_e . [v], D the interior
primal-edge coupling -sum_e |e| (v.n)[q] extended with boundary-flux columns
(Dg) used for Dirichlet lifting, and a is the cell-area vector.  The
pressure coupling in the momentum rows is assembled as D0^T (the discrete
adjoint), never from cell divergences of the reconstruction.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .hdivrec import rt_coefficients
from .mesh import StaggeredMesh
from .quadrature import map_to_triangles, triangle_rule
from .spaces import VelocityField, interp_velocity

__all__ = [
    "AssemblyError", "SaddleSystem",
    "assemble_Bh", "assemble_bh", "assemble_mass", "assemble_rhs",
    "assemble_system", "RTTable",
]

_RHS_DEGREE = 8


class AssemblyError(RuntimeError):
    pass


def assemble_Bh(stag: StaggeredMesh) -> sp.csr_matrix:
    """Matrix of B_h(omega, v) over all primal-edge dofs (rows) and dual-edge
    dofs (columns): B_h = -sum_{dual e} |e| q_e . (v_first - v_second)."""
    s = stag
    first = s.tri_base[s.dual_tris[:, 0]]
    second = s.tri_base[s.dual_tris[:, 1]]
    d = np.arange(s.n_duals)
    rows = np.concatenate([2 * first, 2 * first + 1, 2 * second, 2 * second + 1])
    cols = np.concatenate([2 * d, 2 * d + 1, 2 * d, 2 * d + 1])
    vals = np.concatenate([-s.dual_len, -s.dual_len, s.dual_len, s.dual_len])
    return sp.csr_matrix(
        (vals, (rows, cols)), shape=(2 * s.n_edges, 2 * s.n_duals)
    )


def assemble_bh(stag: StaggeredMesh) -> sp.csr_matrix:
    """Matrix of b_h(v, q) over cells (rows) and all primal-edge dofs
    (columns); boundary columns carry the natural -|e| v.n_out flux so the
    same matrix provides the Dirichlet lifting of the divergence rows."""
    s = stag
    rows, cols, vals = [], [], []
    e = np.arange(s.n_edges)
    c1 = s.edge_cells[:, 0]
    w = s.edge_len[:, None] * s.edge_normal
    rows.append(c1)
    rows.append(c1)
    cols.append(2 * e)
    cols.append(2 * e + 1)
    vals.append(-w[:, 0])
    vals.append(-w[:, 1])
    inter = s.interior_edges
    c2 = s.edge_cells[inter, 1]
    rows.append(c2)
    rows.append(c2)
    cols.append(2 * inter)
    cols.append(2 * inter + 1)
    vals.append(w[inter, 0])
    vals.append(w[inter, 1])
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(s.n_cells, 2 * s.n_edges),
    )


def assemble_mass(stag: StaggeredMesh) -> sp.csr_matrix:
    """Gradient-space mass matrix: per sub-triangle, (omega, psi)_tau through the tensor
    recovery from the two dual-edge traces; block-diagonal per cell, SPD."""
    s = stag
    n1 = s.dual_normal[s.tri_dual[:, 0]]
    n2 = s.dual_normal[s.tri_dual[:, 1]]
    c = np.einsum("tc,tc->t", n1, n2)
    det = 1.0 - c * c
    if np.any(det <= 1e-12):
        t = int(np.argmin(det))
        raise AssemblyError(
            f"sub-triangle {t}: dual-edge normals nearly parallel "
            f"(gram determinant {det[t]:.3e})"
        )
    fac = s.tri_area / det
    s11 = fac
    s12 = -c * fac
    e1, e2 = s.tri_dual[:, 0], s.tri_dual[:, 1]
    rows, cols, vals = [], [], []
    for comp in (0, 1):
        rows += [2 * e1 + comp, 2 * e2 + comp, 2 * e1 + comp, 2 * e2 + comp]
        cols += [2 * e1 + comp, 2 * e2 + comp, 2 * e2 + comp, 2 * e1 + comp]
        vals += [s11, s11, s12, s12]
    mat = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(2 * s.n_duals, 2 * s.n_duals),
    )
    mat.sum_duplicates()
    return mat


class RTTable:
    """Packed reconstruction coefficients for every cell of a mesh (feeds the
    evaluation kernels)."""

    def __init__(self, stag: StaggeredMesh):
        s = stag
        self.stag = s
        nloc = s.cell_ptr[-1]
        self.c0 = np.empty(nloc)
        self.cmat_flat = np.empty(int(np.sum(s.cell_sizes ** 2)))
        self.cmat_ptr = np.concatenate([[0], np.cumsum(s.cell_sizes ** 2)])
        for ci in range(s.n_cells):
            lo, hi = s.cell_ptr[ci], s.cell_ptr[ci + 1]
            c0, cmat = rt_coefficients(s.celen[lo:hi], s.tri_area[lo:hi])
            self.c0[lo:hi] = c0
            self.cmat_flat[self.cmat_ptr[ci]:self.cmat_ptr[ci + 1]] = cmat.ravel()


def load_moments(stag: StaggeredMesh, f, rt: RTTable | None = None,
                 degree: int = _RHS_DEGREE) -> np.ndarray:
    """int_T f . phi_i for every (cell, local edge), packed like loc_edge."""
    if rt is None:
        rt = RTTable(stag)
    s = stag
    rule = triangle_rule(degree)
    pts, w = map_to_triangles(rule, s.tri_verts)
    npc = rule.points.shape[0]
    flat = pts.reshape(-1, 2)
    fw = np.asarray(f(flat)) * w.reshape(-1, 1)
    return _kernels.cell_moments(
        s.cell_ptr, s.cvert, s.cnorm, s.xstar,
        rt.c0, rt.cmat_ptr, rt.cmat_flat, flat, fw, npc,
    )


def assemble_rhs(stag: StaggeredMesh, f, method: str,
                 rt: RTTable | None = None) -> np.ndarray:
    """Momentum right-hand side over all primal-edge dofs.

    sdg1 tests against the flux reconstruction: entry for edge e picks up
    (int_T f . phi_i) n_out from each adjacent cell.  sdg2 tests against the
    piecewise-constant velocity itself: entry = int_{D(e)} f.
    """
    s = stag
    rhs = np.zeros((s.n_edges, 2))
    if method == "sdg1":
        mom = load_moments(stag, f, rt)
        contrib = mom[:, None] * s.cnorm
        np.add.at(rhs, s.loc_edge, contrib)
    elif method == "sdg2":
        rule = triangle_rule(_RHS_DEGREE)
        pts, w = map_to_triangles(rule, s.tri_verts)
        fvals = np.asarray(f(pts.reshape(-1, 2))).reshape(*w.shape, 2)
        per_tri = np.einsum("tqc,tq->tc", fvals, w)
        np.add.at(rhs, s.tri_base, per_tri)
    else:
        raise ValueError(f"unknown method {method!r}; expected 'sdg1' or 'sdg2'")
    return rhs.ravel()


def _dof_split(n_edges, interior):
    idx = np.arange(n_edges)
    i2 = np.stack([2 * idx, 2 * idx + 1], axis=1).ravel()
    mask = np.repeat(interior, 2)
    return i2[mask], i2[~mask]


@dataclass
class SaddleSystem:
    """Assembled sparse saddle-point system plus the data to interpret it."""

    stag: StaggeredMesh
    nu: float
    method: str
    M: sp.csr_matrix
    B0: sp.csr_matrix
    Bg: sp.csr_matrix
    D0: sp.csr_matrix
    Dg: sp.csr_matrix
    F: np.ndarray          # momentum rhs restricted to interior dofs
    ug: np.ndarray         # boundary dof values (Dirichlet averages)
    _matrix: sp.csr_matrix | None = field(default=None, repr=False)

    @property
    def n_q(self) -> int:
        return self.M.shape[0]

    @property
    def n_u(self) -> int:
        return self.B0.shape[0]

    @property
    def n_p(self) -> int:
        return self.stag.n_cells

    @property
    def size(self) -> int:
        return self.n_q + self.n_u + self.n_p + 1

    def matrix(self) -> sp.csr_matrix:
        if self._matrix is None:
            area = sp.csr_matrix(self.stag.cell_area[:, None])
            self._matrix = sp.bmat(
                [
                    [self.M, -self.nu * self.B0.T, None, None],
                    [self.B0, None, self.D0.T, None],
                    [None, self.D0, None, area],
                    [None, None, area.T, None],
                ],
                format="csr",
            )
        return self._matrix

    def rhs(self) -> np.ndarray:
        out = np.zeros(self.size)
        nq, nu = self.n_q, self.n_u
        out[:nq] = self.nu * (self.Bg.T @ self.ug)
        out[nq:nq + nu] = self.F
        out[nq + nu:nq + nu + self.n_p] = -(self.Dg @ self.ug)
        return out


def assemble_system(stag: StaggeredMesh, case, method: str, nu: float,
                    rt: RTTable | None = None) -> SaddleSystem:
    """Build the full system for a manufactured case (f and Dirichlet data)."""
    s = stag
    bfull = assemble_Bh(s)
    dfull = assemble_bh(s)
    mass = assemble_mass(s)
    idof, gdof = _dof_split(s.n_edges, s.edge_interior)
    ug_field: VelocityField = interp_velocity(s, case.u)
    ug = ug_field.values.ravel()[gdof]
    fvec = assemble_rhs(s, lambda x: case.f(x, nu), method, rt)
    return SaddleSystem(
        stag=s, nu=nu, method=method,
        M=mass,
        B0=bfull[idof].tocsr(),
        Bg=bfull[gdof].tocsr(),
        D0=dfull[:, idof].tocsr(),
        Dg=dfull[:, gdof].tocsr(),
        F=fvec[idof],
        ug=ug,
    )
