"""derlab: derivations on block-operator algebras of finite Hilbert modules.

The model: a commutative scalar algebra of functions on a finite point
space, a module with one finite-dimensional fiber per point, and its
algebra of blockwise operators.  On top of that sit solvers and
certifiers for derivations (all of which turn out inner), local
derivations, and two-local derivations, plus the trace functional and
ideal machinery those certifications rest on.
"""

from .calgebra import (
    AlgebraElement,
    PointSpace,
    constant,
    invert,
    is_positive,
    product,
    star,
    sup_norm,
    unit,
    zero,
)
from .dersolve import (
    ConcreteAlgebra,
    LinearMapOnAlgebra,
    alinearity_defect,
    blockwise_transpose_map,
    derivation_defect,
    extract_implementer,
    inner_map,
    jordan_constraint_matrix,
    jordan_nullspace,
    left_regular,
    leibniz_constraint_matrix,
    leibniz_nullspace,
    load_map,
    right_regular,
    save_map,
    scalar_commutation_defect,
    structure_constants,
)
from .errors import (
    DegenerateSpecWarning,
    DerlabError,
    DimensionMismatch,
    MissingProbe,
    NotADerivation,
    NotALinear,
    NotInvertible,
    RankAmbiguous,
    SearchBudgetExceeded,
    UnitPairInvalid,
    ZeroOperator,
)
from .hilbmod import (
    Functional,
    ModuleElement,
    ModuleSpec,
    act,
    basis_elements,
    frame,
    inner,
    module_norm,
    riesz,
    unit_pair,
    zero_element,
)
from .linalg import nullspace_basis
from .localtools import (
    IdealBasis,
    IdempotentDecomposition,
    LocalCertification,
    ZeroTriple,
    generalized_derivation_defect,
    ideal_basis,
    idempotent_decomposition,
    idempotent_decomposition_right,
    local_derivation_certify,
    separating_witness,
    zero_product_chain_defect,
    zero_triple_defect,
    zero_triple_sampler,
)
from .opalg import (
    LambdaMatrix,
    Operator,
    RankOneSum,
    adjoint,
    assemble,
    canonical_rank_one_sum,
    center_coefficient,
    centralizer_basis,
    commutator,
    compose,
    fiberwise_trace,
    identity,
    lambda_matrix,
    mult_op,
    op_norm,
    operator_basis,
    operator_from_coords,
    operator_to_coords,
    phi,
    precompose,
    semiprime_witness,
    theta,
    zero_operator,
)
from .twolocal import (
    NegativeControlReport,
    PointMap,
    Probe,
    certify_two_local,
    consequence_check,
    pairwise_implementer,
    probe_points,
    upper_triangular_algebra,
    upper_triangular_negative_control,
)

__version__ = "0.1.0"
