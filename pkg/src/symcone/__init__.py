"""Online linear optimization over trace-one slices of symmetric cones.

The package is organized as:

* :mod:`symcone.algebra` -- Euclidean Jordan algebra kernel (cone structures,
  spectral decomposition, spectral function maps, cone order, samplers);
* :mod:`symcone.entropy` -- spectral negative entropy, Bregman divergence,
  and the trace-one Bregman projection;
* :mod:`symcone.learners` -- multiplicative-weights, regularized-leader and
  mirror-descent updates, the unit-ball learner, gradient-descent baseline,
  doubling schedule, and regret accounting;
* :mod:`symcone.games` -- the l2-l1 margin game with instance generation and
  equilibrium certificates;
* :mod:`symcone.harness` -- seeded batch experiments and CSV/JSON emission,
  driven by the ``symcone`` command-line tool.
"""

from .algebra import (
    AlgebraElement,
    Block,
    ConeDomainError,
    ConeStructure,
    SpectralDecomposition,
    StructureMismatchError,
    cone_leq,
    direct_sum,
    eigenvalues,
    element,
    element_from_json,
    element_to_json,
    exp_element,
    identity,
    in_cone,
    in_interior,
    inner,
    isometric_coordinates,
    jordan_product,
    ln_element,
    lowner,
    max_eigenvalue,
    min_eigenvalue,
    norm,
    orthant,
    psd,
    random_bounded_loss,
    random_trace_one,
    soc,
    spectral_decompose,
    square,
    structure_from_json,
    structure_to_json,
    trace,
    zero,
)
from .entropy import (
    BregmanEval,
    EntropyEval,
    bregman,
    bregman_eval,
    bregman_project_trace_one,
    entropy,
    entropy_gradient,
    entropy_gradient_inverse,
    soc2_level_curves,
    three_point_gap,
)
from .games import (
    SvmGameTrace,
    SvmInstance,
    generate_svm_instance,
    margin,
    nash_epsilon,
    required_horizon,
    svm_game_run,
)
from .learners import (
    BallState,
    Doubling,
    Fixed,
    LearnerState,
    LossBoundWarning,
    RegretLedger,
    ball_iterate,
    doubling_schedule,
    ftrl_intermediate,
    ftrl_iterate,
    init_ball_learner,
    init_learner,
    log_trace_exp,
    ogd_ball_step,
    omd_intermediate,
    omd_step,
    regret_update,
    scmwu_ball_step,
    scmwu_iterate,
    scmwu_step,
    theoretical_bound,
    unnormalized_weight,
)

__version__ = "0.1.0"
