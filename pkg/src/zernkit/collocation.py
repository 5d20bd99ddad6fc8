"""Collocation matrices, conditioning, interpolation solves, Lebesgue constants.

Matrix orientation is fixed throughout: entry (i, j) is basis function i
evaluated at node j (rows are basis functions, columns are nodes).  The
interpolation system therefore solves with the transpose, which is the
Vandermonde-conventional orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, NodeCountError, NonFiniteError, SingularMatrixError

__all__ = [
    "CollocationMatrix",
    "ConditionReport",
    "InterpolationResult",
    "CONDITION_CSV_HEADER",
    "assemble",
    "condition_number",
    "solve_interpolation",
    "lebesgue_constant",
    "format_kappa",
]

CONDITION_CSV_HEADER = "n,scheme,basis,domain,kappa2,sigma_max,sigma_min"


@dataclass(frozen=True)
class CollocationMatrix:
    """Dense square matrix of basis evaluations at nodes, with provenance.

    ``metadata`` carries the node set's free-form provenance (seed, source
    file, transfer chain).
    """

    entries: np.ndarray
    order: int
    scheme: str
    basis: str
    domain: str
    metadata: str = ""

    @property
    def size(self):
        return self.entries.shape[0]


@dataclass(frozen=True)
class ConditionReport:
    """2-norm conditioning of a collocation matrix.

    kappa2 = sigma_max / sigma_min, reported as inf when sigma_min is zero
    (a singular matrix is a first-class result here, not an exception, so
    perturbation sweeps can tabulate it).
    """

    order: int
    scheme: str
    basis: str
    domain: str
    kappa2: float
    sigma_max: float
    sigma_min: float

    def csv_row(self):
        return (
            f"{self.order},{self.scheme},{self.basis},{self.domain},"
            f"{format_kappa(self.kappa2)},{self.sigma_max:.6e},{self.sigma_min:.6e}"
        )


@dataclass(frozen=True)
class InterpolationResult:
    coefficients: np.ndarray
    residual: float  # max-norm of m.T @ c - values


def format_kappa(kappa):
    """Fixed-point with 4 decimals below 1e4, scientific above, 'inf' if singular."""
    if math.isinf(kappa):
        return "inf"
    if kappa >= 1e4:
        return f"{kappa:.4e}"
    return f"{kappa:.4f}"


def assemble(basis, nodes):
    """Collocation matrix of ``basis`` at ``nodes``: row i is basis
    function i at all nodes, in node order.

    Raises DomainError if any node lies outside the basis domain and
    NonFiniteError if an evaluation produces NaN or infinity.
    """
    if len(nodes) != basis.size:
        raise NodeCountError(
            f"basis of size {basis.size} needs {basis.size} nodes, got {len(nodes)}"
        )
    if not np.all(basis.contains_xy(nodes.x, nodes.y)):
        raise DomainError(
            f"node set ({nodes.scheme}, n={nodes.order}) has points outside "
            f"the {basis.domain} domain"
        )
    entries = np.empty((basis.size, len(nodes)))
    for j in range(basis.size):
        entries[j] = basis.node_values(j, nodes)
    if not np.all(np.isfinite(entries)):
        raise NonFiniteError("collocation matrix has non-finite entries")
    entries.setflags(write=False)
    return CollocationMatrix(
        entries=entries,
        order=nodes.order,
        scheme=str(nodes.scheme),
        basis=basis.family,
        domain=basis.domain,
        metadata=nodes.metadata,
    )


def condition_number(matrix):
    """ConditionReport from a full singular value decomposition."""
    entries = matrix.entries
    if not np.all(np.isfinite(entries)):
        raise NonFiniteError("matrix has non-finite entries")
    sigma = np.linalg.svd(entries, compute_uv=False)
    s_max = float(sigma[0])
    s_min = float(sigma[-1])
    kappa = s_max / s_min if s_min > 0.0 else math.inf
    return ConditionReport(
        order=matrix.order,
        scheme=matrix.scheme,
        basis=matrix.basis,
        domain=matrix.domain,
        kappa2=kappa,
        sigma_max=s_max,
        sigma_min=s_min,
    )


def solve_interpolation(matrix, values):
    """Coefficients c with matrix.T @ c = values, plus the max-norm residual.

    Uses the singular value decomposition; a matrix singular to working
    precision (sigma_min <= N eps sigma_max) raises SingularMatrixError
    carrying sigma_min.
    """
    values = np.asarray(values, dtype=float)
    a = matrix.entries.T
    if values.shape != (a.shape[0],):
        raise ValueError(f"values must have length {a.shape[0]}")
    u, sigma, vt = np.linalg.svd(a)
    eps = np.finfo(float).eps
    if sigma[-1] <= a.shape[0] * eps * sigma[0]:
        raise SingularMatrixError(
            f"collocation matrix ({matrix.scheme}, {matrix.basis}, "
            f"n={matrix.order}) is singular to working precision",
            sigma_min=float(sigma[-1]),
        )
    coeffs = vt.T @ ((u.T @ values) / sigma)
    residual = float(np.max(np.abs(a @ coeffs - values)))
    return InterpolationResult(coefficients=coeffs, residual=residual)


def lebesgue_constant(nodes, basis, grid_shape=(200, 512)):
    """Grid approximation (a lower bound) of the Lebesgue constant.

    Maximizes the sum of absolute Lagrange functions over a polar tensor
    grid of grid_shape = (radial, angular) points mapped onto the basis
    domain through the basis map (identity for the disk).
    """
    n_r, n_t = grid_shape
    r = (np.arange(n_r) + 1.0) / n_r
    t = 2.0 * np.pi * np.arange(n_t) / n_t
    rho = np.repeat(r, n_t)
    ang = np.tile(t, n_r)
    matrix = assemble(basis, nodes)
    try:
        lu, piv = scipy.linalg.lu_factor(matrix.entries)
    except scipy.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if np.any(np.diag(lu) == 0.0):
        raise SingularMatrixError("collocation matrix is exactly singular")
    if basis.map is None:
        grid_rho, grid_theta = rho, ang
        grid_vals = np.empty((basis.size, rho.size))
        for j in range(basis.size):
            grid_vals[j] = basis.eval_polar(j, grid_rho, grid_theta)
    else:
        x, y = (rho * np.cos(ang), rho * np.sin(ang))
        fx, fy = basis.map.forward_xy(x, y)
        grid_vals = np.empty((basis.size, rho.size))
        for j in range(basis.size):
            grid_vals[j] = basis.eval_xy(j, fx, fy, check=False)
    lagrange = scipy.linalg.lu_solve((lu, piv), grid_vals)
    return float(np.max(np.sum(np.abs(lagrange), axis=0)))
