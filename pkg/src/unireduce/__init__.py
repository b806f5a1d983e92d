"""Common eigenvectors of finite unitary matrix groups from approximate fixed points."""

from .certificate import EigenvectorCertificate
from .decompose import (
    BlockDecomposition,
    ComponentSelection,
    character_blocks,
    commutant_basis,
    eigenspace_intersection_oracle,
    monomial_eigenvector,
    monomial_flatten,
    monomial_spread_check,
    orbit_decomposition,
    reduce_blocks,
    select_component,
    truncate_eigenvector,
)
from .errors import *  # noqa: F401,F403
from .fixedpoint import (
    CommutatorCheck,
    DefectReport,
    LambdaMap,
    average_certificate,
    average_fixed_point,
    commutator_defect_check,
    defect,
    eigen_identity_gap,
    lambda_map,
    reducibility_threshold,
    rho_eigenvector,
    rho_threshold,
    weak_defects,
)
from .group import (
    CommutatorWitness,
    FiniteUnitaryGroup,
    MatrixSet,
    MonomialStructure,
    class_sum_norm,
    close_group,
    commutator,
    conjugate_group,
    derived_elements,
    find_scalar_commutator,
    group_from_elements,
    is_commutator_group,
    is_transitive,
    monomial_structure,
    orbits,
    subgroup,
    weight_kernel,
    weight_product_hom,
)
from .numerics import (
    DEFAULT_TOL,
    Tolerance,
    certify_unitary,
    gram_schmidt,
    polar_project,
    random_unit_vector,
    random_unitary,
    unit_vector,
)
from .phase import (
    PhaseApproximation,
    RootOfUnity,
    adjacent_root_distance,
    approx_scalar,
    arc_chord_bounds,
    nearest_root,
    obtuse_shrink,
    phase_sum_bound,
    rearrangement_bound,
)

__version__ = "0.1.0"
