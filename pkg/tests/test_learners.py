import math

import numpy as np
import pytest
import scipy.linalg

from symcone import algebra
from symcone.algebra import (
    element,
    identity,
    inner,
    jordan_product,
    min_eigenvalue,
    norm,
    orthant,
    random_bounded_loss,
    random_trace_one,
    soc,
    spectral_decompose,
    trace,
    zero,
)
from symcone.entropy import bregman
from symcone.learners import (
    DOUBLING_CONSTANT,
    Doubling,
    Fixed,
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

from conftest import STRUCTURES, assert_elements_close, rng


def _run_fixed(structure, losses, eta):
    state = init_learner(structure, Fixed(eta))
    iterates = [state.iterate]
    for m in losses:
        state = scmwu_step(state, m)
        iterates.append(state.iterate)
    return iterates


# ---------------------------------------------------------------------------
# Multiplicative-weights steps
# ---------------------------------------------------------------------------


def test_initial_iterate_is_uniform(structure):
    state = init_learner(structure, Fixed(1.0))
    assert_elements_close(state.iterate, identity(structure) / structure.rank, 1e-12)


def test_orthant_single_step_worked_example():
    o = orthant(2)
    state = init_learner(o, Fixed(1.0))
    state = scmwu_step(state, element(o, [np.array([1.0, 0.0])]))
    expected = np.array([math.exp(-1.0), 1.0]) / (math.exp(-1.0) + 1.0)
    assert np.allclose(state.iterate.blocks[0], expected, atol=1e-12)


def test_iterate_invariants(structure):
    g = rng(40)
    state = init_learner(structure, Fixed(0.7))
    for _ in range(30):
        state = scmwu_step(state, random_bounded_loss(structure, g))
        assert trace(state.iterate) == pytest.approx(1.0, abs=1e-10)
        assert min_eigenvalue(state.iterate) > 0.0
        assert_elements_close(
            state.iterate, scmwu_iterate(state.cumulative_loss, 0.7), 1e-9
        )


def test_shift_invariance_of_iterates(structure):
    import warnings

    g = rng(41)
    losses = [random_bounded_loss(structure, g) for _ in range(15)]
    e = identity(structure)
    shifted = [m + 0.37 * e for m in losses]  # deliberately escapes [-e, e]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LossBoundWarning)
        runs = zip(_run_fixed(structure, losses, 0.5), _run_fixed(structure, shifted, 0.5))
        for a, b in runs:
            assert norm(a - b) <= 1e-10


def test_out_of_bound_loss_warns_but_updates(structure):
    state = init_learner(structure, Fixed(1.0))
    big = 3.0 * identity(structure)
    with pytest.warns(LossBoundWarning):
        new = scmwu_step(state, big)
    assert new.step == 1


def test_structure_mismatch_rejected():
    state = init_learner(orthant(2), Fixed(1.0))
    with pytest.raises(algebra.StructureMismatchError):
        scmwu_step(state, identity(orthant(3)))


# ---------------------------------------------------------------------------
# Equivalence of the three schemes
# ---------------------------------------------------------------------------


def test_ftrl_intermediate_zero_loss(structure):
    y = ftrl_intermediate(zero(structure), 1.0)
    assert_elements_close(y, identity(structure) / math.e, 1e-12)


def test_ftrl_iterate_zero_loss(structure):
    assert_elements_close(
        ftrl_iterate(zero(structure), 0.5), identity(structure) / structure.rank, 1e-12
    )


def test_omd_fixed_points(structure):
    g = rng(42)
    p = random_trace_one(structure, g)
    p = 0.9 * p + 0.1 * identity(structure) / structure.rank
    assert_elements_close(omd_step(p, zero(structure), 1.0), p, 1e-10)
    assert_elements_close(omd_step(p, 0.8 * identity(structure), 1.0), p, 1e-10)


def test_omd_single_step_worked_example():
    o = orthant(2)
    p = element(o, [np.array([0.5, 0.5])])
    m = element(o, [np.array([1.0, 0.0])])
    expected = np.array([math.exp(-1.0), 1.0]) / (math.exp(-1.0) + 1.0)
    assert np.allclose(omd_step(p, m, 1.0).blocks[0], expected, atol=1e-12)


@pytest.mark.parametrize("eta", [0.1, 1.0])
def test_three_schemes_coincide(structure, eta):
    g = rng(43)
    state = init_learner(structure, Fixed(eta))
    p_omd = identity(structure) / structure.rank
    cum = zero(structure)
    for _ in range(40):
        m = random_bounded_loss(structure, g)
        state = scmwu_step(state, m)
        cum = cum + m
        p_omd = omd_step(p_omd, m, eta)
        p_ftrl = ftrl_iterate(cum, eta)
        assert norm(state.iterate - p_ftrl) <= 1e-9
        assert norm(state.iterate - p_omd) <= 1e-9


def test_ftrl_matches_simplex_grid_search():
    # Small brute-force oracle; the acceptance suite runs the full T=10 version.
    o = orthant(3)
    g = rng(44)
    eta = 0.5
    cum = zero(o)
    for _ in range(5):
        cum = cum + random_bounded_loss(o, g)
    closed = ftrl_iterate(cum, eta)

    step = 1e-3
    i = np.arange(1, 1000)
    a, b = np.meshgrid(i, i, indexing="ij")
    keep = (a + b) < 1000
    xa, xb = a[keep] * step, b[keep] * step
    xc = 1.0 - xa - xb
    mv = cum.blocks[0]
    objective = (
        xa * np.log(xa)
        + xb * np.log(xb)
        + xc * np.log(xc)
        + eta * (mv[0] * xa + mv[1] * xb + mv[2] * xc)
    )
    best = int(np.argmin(objective))
    argmin = np.array([xa[best], xb[best], xc[best]])
    assert np.max(np.abs(argmin - closed.blocks[0])) <= 1e-2


# ---------------------------------------------------------------------------
# Regret bounds along trajectories
# ---------------------------------------------------------------------------


def test_per_step_mirror_bound(structure):
    # One-step inequality linking consecutive intermediates, for any
    # trace-one comparator.
    g = rng(45)
    eta = 0.5
    r = structure.rank
    p = identity(structure) / r
    y = identity(structure) / r
    comparators = [random_trace_one(structure, g) for _ in range(5)]
    for _ in range(25):
        m = random_bounded_loss(structure, g)
        y_next = omd_intermediate(p, m, eta)
        m2 = jordan_product(m, m)
        for u in comparators:
            lhs = inner(p - u, eta * m)
            rhs = bregman(u, y) - bregman(u, y_next) + eta**2 * inner(m2, p)
            assert lhs <= rhs + 1e-8
        p = omd_step(p, m, eta)
        y = y_next


@pytest.mark.parametrize("eta", [0.25, 1.0])
def test_cumulative_regret_bound(structure, eta):
    g = rng(46)
    r = structure.rank
    state = init_learner(structure, Fixed(eta))
    quad = 0.0
    algo = 0.0
    losses = []
    plays = []
    for _ in range(60):
        m = random_bounded_loss(structure, g)
        plays.append(state.iterate)
        losses.append(m)
        algo += inner(m, state.iterate)
        quad += inner(jordan_product(m, m), state.iterate)
        state = scmwu_step(state, m)
    bound = eta * quad + math.log(r) / eta
    for u in [random_trace_one(structure, g) for _ in range(10)]:
        comparator = sum((inner(m, u) for m in losses), 0.0)
        assert algo - comparator <= bound + 1e-6


def test_regret_ledger_basics(structure):
    g = rng(47)
    ledger = RegretLedger(structure)
    state = init_learner(structure, Fixed(0.5))

    m = random_bounded_loss(structure, g)
    regret_update(ledger, m, state.iterate)
    assert ledger.regret == pytest.approx(
        inner(m, identity(structure) / structure.rank) - min_eigenvalue(m), abs=1e-12
    )

    for _ in range(20):
        state = scmwu_step(state, m)
        regret_update(ledger, m, state.iterate)
    assert ledger.regret == pytest.approx(ledger.recomputed_regret(), abs=1e-9)


def test_regret_zero_on_zero_losses(structure):
    ledger = RegretLedger(structure)
    state = init_learner(structure, Fixed(1.0))
    for _ in range(10):
        regret_update(ledger, zero(structure), state.iterate)
        state = scmwu_step(state, zero(structure))
        assert ledger.regret == 0.0


def test_constant_idempotent_loss_respects_optimized_bound(structure):
    # The closed-form ceiling applies at the horizon the stepsize was tuned
    # for, so sweep a grid of horizons.
    g = rng(48)
    dec = spectral_decompose(random_bounded_loss(structure, g))
    q = dec.frame[0]
    for horizon in (1, 2, 4, 8, 16, 32, 64, 128, 256):
        eta = math.sqrt(math.log(structure.rank) / horizon)
        state = init_learner(structure, Fixed(eta))
        ledger = RegretLedger(structure)
        for _ in range(horizon):
            regret_update(ledger, q, state.iterate)
            state = scmwu_step(state, q)
        assert ledger.regret <= theoretical_bound(horizon, structure.rank, "optimized") + 1e-9


# ---------------------------------------------------------------------------
# Schedules and bounds
# ---------------------------------------------------------------------------


def test_doubling_schedule_examples():
    r = 7
    assert doubling_schedule(1, r) == (0, pytest.approx(math.sqrt(math.log(r))))
    assert doubling_schedule(3, r) == (1, pytest.approx(math.sqrt(math.log(r) / 2)))
    assert doubling_schedule(8, r) == (3, pytest.approx(math.sqrt(math.log(r) / 8)))
    etas = [doubling_schedule(2**i, r)[1] for i in range(10)]
    assert all(b < a for a, b in zip(etas, etas[1:]))


def test_doubling_schedule_validation():
    with pytest.raises(ValueError):
        doubling_schedule(0, 4)
    with pytest.raises(ValueError):
        doubling_schedule(3, 1)


def test_theoretical_bound_closed_forms():
    assert theoretical_bound(100, 5, "optimized") == pytest.approx(2.0 * math.sqrt(100 * math.log(5)))
    assert theoretical_bound(100, 5, "doubling") == pytest.approx(
        DOUBLING_CONSTANT * math.sqrt(100 * math.log(5))
    )
    assert DOUBLING_CONSTANT == pytest.approx(6.8284, abs=1e-4)
    assert theoretical_bound(50, 2, "optimized") == pytest.approx(2.0 * math.sqrt(50 * math.log(2)))
    with pytest.raises(ValueError):
        theoretical_bound(10, 5, "fancy")


def test_doubling_policy_restarts_epochs(structure):
    g = rng(49)
    state = init_learner(structure, Doubling())
    uniform = identity(structure) / structure.rank
    for t in range(1, 40):
        state = scmwu_step(state, random_bounded_loss(structure, g))
        play_time = state.step + 1
        if play_time & (play_time - 1) == 0:
            assert norm(state.cumulative_loss) == 0.0
            assert_elements_close(state.iterate, uniform, 1e-12)
        else:
            epoch = play_time.bit_length() - 1
            assert state.epoch == epoch
            assert state.eta == pytest.approx(math.sqrt(math.log(structure.rank) / 2**epoch))


# ---------------------------------------------------------------------------
# Potential function
# ---------------------------------------------------------------------------


def test_unnormalized_weight_initialization(structure):
    w = unnormalized_weight(zero(structure), 1.0)
    assert_elements_close(w, identity(structure), 1e-12)
    assert trace(w) == pytest.approx(structure.rank)


def test_unnormalized_weight_matches_iterate(structure):
    g = rng(50)
    cum = zero(structure)
    for _ in range(10):
        cum = cum + random_bounded_loss(structure, g)
    w = unnormalized_weight(cum, 0.5)
    assert_elements_close(w / trace(w), scmwu_iterate(cum, 0.5), 1e-10)


def test_potential_step_and_endpoint_bounds(structure):
    g = rng(51)
    eta = 0.5
    horizon = 16
    for _ in range(8):
        losses = [random_bounded_loss(structure, g) for _ in range(horizon)]
        cum = zero(structure)
        for t, m in enumerate(losses):
            w_t = unnormalized_weight(cum, eta)
            p_t = w_t / trace(w_t)
            cum = cum + m
            w_next = unnormalized_weight(cum, eta)
            factor = math.exp(
                -eta * inner(m, p_t) + eta**2 * inner(jordan_product(m, m), p_t)
            )
            assert trace(w_next) <= trace(w_t) * factor + 1e-9
        assert trace(unnormalized_weight(cum, eta)) >= math.exp(
            -eta * min_eigenvalue(cum)
        ) - 1e-9


def test_log_trace_exp_stability(structure):
    g = rng(52)
    x = random_bounded_loss(structure, g)
    big = 500.0 * x
    lams = algebra.eigenvalues(big)
    expected = float(lams.max() + np.log(np.sum(np.exp(lams - lams.max()))))
    assert log_trace_exp(big) == pytest.approx(expected, abs=1e-9)


# ---------------------------------------------------------------------------
# Specializations
# ---------------------------------------------------------------------------


def test_orthant_specializes_to_scalar_mwu():
    o = STRUCTURES["orthant5"]
    g = rng(53)
    eta = 0.3
    state = init_learner(o, Fixed(eta))
    cum = np.zeros(5)
    for _ in range(50):
        m = random_bounded_loss(o, g)
        state = scmwu_step(state, m)
        cum += m.blocks[0]
        scalar = np.exp(-eta * cum)
        scalar /= scalar.sum()
        assert np.max(np.abs(state.iterate.blocks[0] - scalar)) <= 1e-12


def test_psd_specializes_to_matrix_exponential():
    s = STRUCTURES["psd3"]
    g = rng(54)
    eta = 0.4
    state = init_learner(s, Fixed(eta))
    cum = np.zeros((3, 3))
    for _ in range(30):
        m = random_bounded_loss(s, g)
        state = scmwu_step(state, m)
        cum += m.blocks[0]
        dense = scipy.linalg.expm(-eta * cum)
        dense /= np.trace(dense)
        assert np.max(np.abs(state.iterate.blocks[0] - dense)) <= 1e-8


# ---------------------------------------------------------------------------
# Ball learner
# ---------------------------------------------------------------------------


def _nexp_unsimplified(x: np.ndarray) -> np.ndarray:
    # Direct transcription of the normalized exponential map, as an oracle
    # for the tanh closed form.
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        return np.zeros_like(x)
    wp = math.exp(nrm) / (math.exp(nrm) + math.exp(-nrm))
    wm = math.exp(-nrm) / (math.exp(nrm) + math.exp(-nrm))
    return wp * (x / (2 * nrm)) + wm * (-x / (2 * nrm))


def test_ball_iterate_matches_unsimplified_map():
    g = rng(55)
    for _ in range(50):
        cum = g.normal(size=4) * g.uniform(0.0, 5.0)
        eta = float(g.uniform(0.05, 1.0))
        assert np.allclose(
            ball_iterate(cum, eta), 2.0 * _nexp_unsimplified(-eta * cum), atol=1e-12
        )


def test_ball_single_step_and_center():
    state = init_ball_learner(3, Fixed(1.0))
    assert np.array_equal(state.iterate, np.zeros(3))
    u = np.array([1.0, 0.0, 0.0])
    state = scmwu_ball_step(state, u)
    assert np.allclose(state.iterate, -math.tanh(1.0) * u, atol=1e-12)
    assert np.linalg.norm(state.iterate) < 1.0


def test_ball_norm_warning():
    state = init_ball_learner(2, Fixed(1.0))
    with pytest.warns(LossBoundWarning):
        scmwu_ball_step(state, np.array([2.0, 0.0]))


def test_ball_lifted_soc_correspondence():
    d = 6
    g = rng(56)
    s = soc(d)
    eta = 0.35
    ball = init_ball_learner(d, Fixed(eta))
    cone = init_learner(s, Fixed(eta))
    for _ in range(100):
        m = g.normal(size=d)
        m /= max(np.linalg.norm(m), 1.0) * g.uniform(1.0, 2.0)
        ball = scmwu_ball_step(ball, m)
        cone = scmwu_step(cone, element(s, [np.concatenate([m, [0.0]])]))
        lifted = np.concatenate([ball.iterate / 2.0, [0.5]])
        assert np.max(np.abs(cone.iterate.blocks[0] - lifted)) <= 1e-10


def test_ball_regret_bound():
    d = 4
    g = rng(57)
    horizon = 100
    eta = math.sqrt(math.log(2.0) / horizon)
    state = init_ball_learner(d, Fixed(eta))
    losses = []
    quad = 0.0
    algo = 0.0
    for _ in range(horizon):
        m = g.normal(size=d)
        m /= np.linalg.norm(m) * float(g.uniform(1.0, 3.0))
        losses.append(m)
        algo += float(m @ state.iterate)
        quad += float(m @ m)
        state = scmwu_ball_step(state, m)
    total = np.sum(losses, axis=0)
    bound = eta * quad + math.log(2.0) / eta
    comparators = [u / np.linalg.norm(u) * g.uniform(0, 1) for u in g.normal(size=(20, d))]
    comparators.append(-total / np.linalg.norm(total))
    for u in comparators:
        assert algo - float(total @ u) <= bound + 1e-6


def test_ball_doubling_restarts():
    g = rng(58)
    state = init_ball_learner(3, Doubling())
    for _ in range(33):
        m = g.normal(size=3)
        m /= max(np.linalg.norm(m), 1.0)
        state = scmwu_ball_step(state, m)
        play_time = state.step + 1
        if play_time & (play_time - 1) == 0:
            assert np.array_equal(state.iterate, np.zeros(3))
        else:
            assert state.eta == pytest.approx(
                math.sqrt(math.log(2.0) / 2 ** (play_time.bit_length() - 1))
            )


# ---------------------------------------------------------------------------
# Gradient-descent baseline
# ---------------------------------------------------------------------------


def test_ogd_examples():
    assert np.array_equal(ogd_ball_step(np.zeros(3), np.zeros(3), 1.0), np.zeros(3))
    u = np.array([0.0, 1.0, 0.0])
    assert np.allclose(ogd_ball_step(np.zeros(3), 2.0 * u, 1.0), -u, atol=1e-15)
    assert np.allclose(ogd_ball_step(np.zeros(3), u, 0.1), -0.1 * u, atol=1e-15)


def test_ogd_stays_in_ball():
    g = rng(59)
    b = np.zeros(5)
    for _ in range(200):
        b = ogd_ball_step(b, g.normal(size=5), 0.5)
        assert np.linalg.norm(b) <= 1.0 + 1e-12
