"""Numerical toolkit for fully anisotropic elliptic Dirichlet problems
with Orlicz-type growth: Young-function calculus, measure-average and
conjugate constructions, sharp embedding profiles, rearrangements and
quasinorms, closed-form symmetrized radial solutions, a finite-
difference minimizer, and a catalog of worked example families.
"""

from .anisotropic import (
    AnisotropicYoungFunction,
    CustomPhi,
    LinearCombinationPhi,
    RadialPhi,
    SplitPhi,
    dilation_constants,
    phi_circ,
    phi_diamond,
    radial_extent,
    sublevel_measure,
    theta,
    unit_ball_volume,
    vector_conjugate_grid,
)
from .catalog import (
    EXAMPLE_IDS,
    ExampleRecord,
    expected_regularity,
    make_record,
    verify_asymptotics,
)
from .embedding import (
    DichotomyError,
    EmbeddingProfile,
    classify_integral,
    hat_phi_circ,
    modify_near_zero,
    near_zero_diverges,
    sobolev_conjugate,
)
from .grid import (
    GridField,
    OperatorSpec,
    PPotential,
    SolveError,
    SplitPPotential,
    approximable_sequence,
    assumption_audit,
    cell_gradients,
    point_mass_field,
    solve,
)
from .radial import (
    RadialSolution,
    calibrate_c1,
    calibrate_kappa2,
    gradient_l1_bound,
    level_set_bound_grad,
    level_set_bound_u,
    linf_bound,
    solve_radial,
    truncation_energy_check,
)
from .rearrangement import (
    RearrangedFunction,
    boundedness_criterion,
    data_admissibility,
    improper_integral,
    lorentz_quasinorm,
    luxemburg_norm,
    marcinkiewicz_quasinorm,
    maximal_rearrangement,
    orlicz_lorentz_norm,
    rearrange,
)
from .young import (
    ExpMinusLinearYoung,
    ExpMinusOneYoung,
    ExpPowerYoung,
    InverseRangeError,
    LegendreConjugate,
    LinearSplicedYoung,
    MonotoneFunction,
    NotConvexError,
    PowerLogYoung,
    PowerYoung,
    SampledYoungFunction,
    ScalarYoungFunction,
    YoungFunctionError,
    check_growth_condition,
    parse_scalar_function,
    psi_of,
    theta_diamond,
)

__version__ = "0.1.0"
