"""urlab: uncertainty relations, quantum Fisher information and their saturating states."""

from .bounds import (
    FisherChain,
    cramer_rao_check,
    fisher_chain,
    incompatibility_margin,
    mandelstam_tamm,
    normalized_qfi_bound,
    qfi_bound,
    robertson,
    schroedinger,
)
from .errors import (
    BoundarySingularity,
    DimensionMismatch,
    NoOrthogonalization,
    TrivialGenerator,
    TruncationError,
    UndefinedBound,
    URLabError,
    ValidationError,
)
from .metrics import (
    ProbabilityCurve,
    born_probs,
    classical_fisher,
    measurement_curve,
    measurement_fisher,
    qfi,
    sld,
    sld_measurement,
)
from .opcore import (
    EIG_TOL,
    HERM_TOL,
    UR_TOL,
    DensityMatrix,
    HermitianObservable,
    ProjectiveMeasurement,
    URReport,
    commutator_mean,
    expectation,
    spectral,
    symmetrized_covariance,
    variance,
)
from .operators import AnsatzBasis, ansatz_basis, collective_spin, collective_spin_full, ladder_pair, quadrature
from .optimizer import (
    SpanOptimum,
    best_in_span,
    choose_nu,
    dicke_quadratic_observable,
    fig1_sweep,
    optimal_observable,
    parallel_outcomes,
)
from .states import (
    GaussianSpec,
    LadderSystem,
    SymmetricState,
    dicke,
    gaussian,
    gibbs,
    product_power,
    spin_squeezed,
)
from .symmetry import (
    ReducedSymmetricState,
    negativity_two_qubit,
    reduce_symmetric,
    reduced_dicke,
    reduced_squeezed_closed_form,
    split_dicke,
)

__version__ = "0.1.0"
