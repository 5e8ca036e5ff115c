"""2D wide-stencil discretization of the extremal operators."""

from .domains import DomainSpec
from .eigen import nodal_candidate_refine, principal_eigenvalue_grid
from .grid import (Grid2D, ScalarField, StencilConfig, build_grid,
                   const_field, field_from_function, field_from_snapshot,
                   load_snapshot, sample_radial_profile, save_field)
from .operators import (directional_second_differences, discrete_pucci,
                        operator_residual, solve_dirichlet)
