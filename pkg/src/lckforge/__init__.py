"""Exact twisted cohomology and l.c.k deformation obstructions on invariant coframe models."""
from .scalars import GaussianRational, Matrix, gr, kernel_basis, rank, rref, solve_linear
from .exterior import Form, basis_of, conjugate, is_real, project_bidegree, wedge
from .model import Model, ModelError, canonical_twist, catalog, differential, twisted_differential, validate
from .hodge import hodge_star, laplacian, metric, twisted_adjoint
from .cohomology import bott_chern_11, class_verdict, dolbeault_dim, hopf_bc_dim, twisted_betti
from .deformation import EndoSeries, FrameEndomorphism, endo_action, solve_lck_series

__version__ = "0.1.0"

__all__ = [
    "GaussianRational",
    "Matrix",
    "gr",
    "kernel_basis",
    "rank",
    "rref",
    "solve_linear",
    "Form",
    "basis_of",
    "conjugate",
    "is_real",
    "project_bidegree",
    "wedge",
    "Model",
    "ModelError",
    "canonical_twist",
    "catalog",
    "differential",
    "twisted_differential",
    "validate",
    "hodge_star",
    "laplacian",
    "metric",
    "twisted_adjoint",
    "bott_chern_11",
    "class_verdict",
    "dolbeault_dim",
    "hopf_bc_dim",
    "twisted_betti",
    "EndoSeries",
    "FrameEndomorphism",
    "endo_action",
    "solve_lck_series",
]
