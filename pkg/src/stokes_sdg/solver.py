"""Sparse direct solution of the saddle-point system with residual checks."""

from dataclasses import dataclass

import numpy as np
import scipy.sparse.linalg as spla

from .assembly import SaddleSystem
from .spaces import GradientField, PressureField, VelocityField

__all__ = ["SolverError", "FieldSolution", "solve"]

_RESIDUAL_TOL = 1e-10


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class FieldSolution:
    omega: GradientField
    u: VelocityField
    p: PressureField
    multiplier: float
    residual: float


def solve(system: SaddleSystem, residual_tol: float = _RESIDUAL_TOL) -> FieldSolution:
    """LU-factorize and solve; raises on singular factors or poor residuals."""
    mat = system.matrix().tocsc()
    rhs = system.rhs()
    try:
        lu = spla.splu(mat)
    except RuntimeError as exc:  # SuperLU reports the failing pivot
        raise SolverError(f"sparse factorization failed: {exc}") from exc
    x = lu.solve(rhs)
    if not np.all(np.isfinite(x)):
        raise SolverError("factorization produced non-finite solution entries")
    scale = np.linalg.norm(rhs)
    residual = np.linalg.norm(mat @ x - rhs) / (scale if scale > 0.0 else 1.0)
    if residual > residual_tol:
        raise SolverError(
            f"solve residual {residual:.3e} exceeds tolerance {residual_tol:.1e}"
        )

    s = system.stag
    nq, nu = system.n_q, system.n_u
    omega = GradientField(s, x[:nq].reshape(-1, 2))
    uvals = np.zeros((s.n_edges, 2))
    uvals[s.interior_edges] = x[nq:nq + nu].reshape(-1, 2)
    gdofs = system.ug.reshape(-1, 2)
    uvals[s.boundary_edges] = gdofs
    u = VelocityField(s, uvals)
    p = PressureField(s, x[nq + nu:nq + nu + system.n_p])
    return FieldSolution(
        omega=omega, u=u, p=p,
        multiplier=float(x[-1]),
        residual=float(residual),
    )
