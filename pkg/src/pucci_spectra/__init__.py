"""Eigenvalues, monotone finite-difference solvers and symmetry diagnostics
for the extremal Pucci operators on radial and planar domains."""

__version__ = "0.1.0"

from ._kernels import backend
from .pucci import (EllipticityPair, pucci_minus, pucci_plus,
                    pucci_sup_oracle, sym_eigenvalues)
from .radial import (EigenResult, RadialDomain, RadialProfile,
                     principal_eigenvalue_radial, radial_nodal_eigenvalue,
                     radial_operator_value, shoot)
from .grid2d import (DomainSpec, Grid2D, ScalarField, StencilConfig,
                     build_grid, const_field, discrete_pucci,
                     field_from_function, nodal_candidate_refine,
                     principal_eigenvalue_grid, solve_dirichlet)
from .semilinear import (NonlinearitySpec, linearized_potential,
                         solve_semilinear_grid, solve_semilinear_radial)
from .symmetry import (DirectionSet, FssReport, NodalReport,
                       angular_derivative, detect_fss, gamma2_family_estimate,
                       mu2_family_estimate, nodal_analysis, reflect_field,
                       reflection_gap, subsolution_residual)
