"""Layer potentials on the compactified half-space.

Evaluation of (modified) single/double layer potentials and boundary layer
operators for the Laplacian, the index-set calculus predicting their
asymptotic expansions, and a verification harness for the jump relations,
logarithm criteria and normalization constants.
"""

from ._backend import active_backend, get_impl
from .boundary_data import (BoundaryData, get_data, load_from_tables,
                            make_example_f, make_example_g,
                            make_homogeneous_poly, make_smooth_decay)
from .errors import (CoincidentPoints, HalfpotError, IllConditionedFit,
                     IntegrabilityViolation, JumpFailure, NonIntegrable,
                     ToleranceNotMet)
from .index_calculus import (ExponentMatrix, FaceLattice, IndexFamily,
                             IndexPair, IndexSet, alpha, canonicalize,
                             extended_union, index_intersection, index_shift,
                             index_sum, index_union, integer_index_set,
                             k_min, layer_potential_index_family,
                             left_projection_matrix, pullback_family,
                             pushforward_family, real_part,
                             right_projection_matrix)
from .kernels import (CutoffSpec, HalfSpacePoint, KernelSpec, boundary_single,
                      double_layer, fundamental_solution, modified_double,
                      modified_single, multipole_term, single_layer)
from .potentials import (PotentialField, apply_boundary,
                         apply_boundary_double, apply_layer,
                         apply_normal_derivative_single, make_field,
                         solve_dirichlet, solve_neumann, write_grid_csv)
from .quadrature import (IntegrationResult, QuadratureSpec, integrate_plane,
                         integrate_plane_singular, integrate_sphere)
from .special_fn import (gamma_fn, gegenbauer, gegenbauer_array,
                         gegenbauer_derivative, sphere_volume)

__version__ = "0.1.0"
