"""Online learners over trace-one cone slices and the unit ball.

The central update keeps a normalized spectral exponential of the negative
cumulative loss; it coincides with follow-the-regularized-leader and online
mirror descent under the entropic regularizer, and both decoupled forms are
exposed for cross-checking. A tanh-based specialization handles online linear
optimization over the Euclidean unit ball, with projected gradient descent as
a baseline. Learner states are immutable snapshots; every step returns a new
state.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    ConeStructure,
    _check_same_structure,
    eigenvalues,
    exp_element,
    identity,
    inner,
    ln_element,
    max_eigenvalue,
    min_eigenvalue,
    trace,
    zero,
)
from .entropy import bregman_project_trace_one

__all__ = [
    "Fixed",
    "Doubling",
    "LearnerState",
    "BallState",
    "RegretLedger",
    "LossBoundWarning",
    "init_learner",
    "scmwu_iterate",
    "scmwu_step",
    "ftrl_intermediate",
    "ftrl_iterate",
    "omd_intermediate",
    "omd_step",
    "init_ball_learner",
    "ball_iterate",
    "scmwu_ball_step",
    "ogd_ball_step",
    "doubling_schedule",
    "theoretical_bound",
    "regret_update",
    "unnormalized_weight",
    "log_trace_exp",
]

DOUBLING_CONSTANT = 2.0 * math.sqrt(2.0) / (math.sqrt(2.0) - 1.0)


class LossBoundWarning(UserWarning):
    """A loss fell outside [-e, e]; the update is defined but guarantees lapse."""


@dataclass(frozen=True)
class Fixed:
    """Constant stepsize policy."""

    eta: float

    def __post_init__(self) -> None:
        if self.eta <= 0.0:
            raise ValueError("stepsize must be positive")


@dataclass(frozen=True)
class Doubling:
    """Horizon-free policy: epochs of length 2^i, each restarted with the
    stepsize optimized for that epoch length."""


StepsizePolicy = Fixed | Doubling


def doubling_schedule(t: int, r: int) -> tuple[int, float]:
    """Epoch index and stepsize in force at time step t for rank r.

    Epoch i covers steps 2^i .. 2^(i+1)-1 and uses eta_i = sqrt(ln(r) / 2^i),
    which is strictly decreasing across epochs.
    """
    if t < 1:
        raise ValueError("time steps are 1-based")
    if r < 2:
        raise ValueError("rank must be at least 2")
    epoch = t.bit_length() - 1
    return epoch, math.sqrt(math.log(r) / 2.0**epoch)


def theoretical_bound(t: int, r: int, mode: str) -> float:
    """Closed-form regret ceiling at time t for a rank-r structure.

    ``mode="optimized"`` gives 2 sqrt(t ln r) (stepsize tuned to the horizon);
    ``mode="doubling"`` gives (2 sqrt(2) / (sqrt(2) - 1)) sqrt(t ln r). Ball
    learners correspond to r = 2.
    """
    if t < 1:
        raise ValueError("time steps are 1-based")
    if mode == "optimized":
        return 2.0 * math.sqrt(t * math.log(r))
    if mode == "doubling":
        return DOUBLING_CONSTANT * math.sqrt(t * math.log(r))
    raise ValueError(f"unknown bound mode {mode!r}")


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


# ---------------------------------------------------------------------------
# Cone learner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LearnerState:
    """Snapshot of a cone learner.

    ``step`` counts consumed losses; ``iterate`` is the strategy for time
    step+1. Under the doubling policy ``cumulative_loss`` holds only the
    current epoch's losses, matching the per-epoch restarts.
    """

    structure: ConeStructure
    cumulative_loss: AlgebraElement
    iterate: AlgebraElement
    step: int
    policy: StepsizePolicy

    @property
    def eta(self) -> float:
        """Stepsize that produced the current iterate."""
        if isinstance(self.policy, Fixed):
            return self.policy.eta
        return doubling_schedule(self.step + 1, self.structure.rank)[1]

    @property
    def epoch(self) -> int:
        if isinstance(self.policy, Fixed):
            return 0
        return doubling_schedule(self.step + 1, self.structure.rank)[0]


def init_learner(structure: ConeStructure, policy: StepsizePolicy) -> LearnerState:
    """Fresh learner: empty loss sum, uniform iterate e/r."""
    return LearnerState(
        structure=structure,
        cumulative_loss=zero(structure),
        iterate=identity(structure) / structure.rank,
        step=0,
        policy=policy,
    )


def scmwu_iterate(cumulative_loss: AlgebraElement, eta: float) -> AlgebraElement:
    """Normalized spectral exponential exp(-eta L) / tr(exp(-eta L)).

    Computed with a max-eigenvalue shift before exponentiation, which is exact
    for the normalized value and prevents overflow for large eta*L.
    """
    z = (-eta) * cumulative_loss
    shift = max_eigenvalue(z)
    w = exp_element(z - shift * identity(z.structure))
    return w / trace(w)


def _check_loss_bounds(m: AlgebraElement) -> None:
    if min_eigenvalue(m) < -1.0 - 1e-9 or max_eigenvalue(m) > 1.0 + 1e-9:
        warnings.warn(
            "loss has eigenvalues outside [-1, 1]; regret guarantees do not apply",
            LossBoundWarning,
            stacklevel=3,
        )


def scmwu_step(state: LearnerState, m: AlgebraElement) -> LearnerState:
    """Consume one loss and return the new state.

    Losses outside [-e, e] (tolerance 1e-9) trigger a :class:`LossBoundWarning`
    but are still applied. Under the doubling policy, the loss accumulator is
    restarted whenever the next play time opens a new epoch.
    """
    _check_same_structure(state.cumulative_loss, m)
    _check_loss_bounds(m)
    new_step = state.step + 1
    play_time = new_step + 1
    if isinstance(state.policy, Doubling) and _is_power_of_two(play_time):
        cum = zero(state.structure)
        iterate = identity(state.structure) / state.structure.rank
    else:
        cum = state.cumulative_loss + m
        if isinstance(state.policy, Fixed):
            eta = state.policy.eta
        else:
            eta = doubling_schedule(play_time, state.structure.rank)[1]
        iterate = scmwu_iterate(cum, eta)
    return LearnerState(state.structure, cum, iterate, new_step, state.policy)


def ftrl_intermediate(cumulative_loss: AlgebraElement, eta: float) -> AlgebraElement:
    """Unconstrained regularized-leader minimizer exp(-eta L - e)."""
    if eta <= 0.0:
        raise ValueError("stepsize must be positive")
    e = identity(cumulative_loss.structure)
    return exp_element((-eta) * cumulative_loss - e)


def ftrl_iterate(cumulative_loss: AlgebraElement, eta: float) -> AlgebraElement:
    """Regularized leader over the trace-one slice, via decoupling.

    Takes the unconstrained minimizer and Bregman-projects it onto the slice;
    the result coincides with :func:`scmwu_iterate` up to rounding (the latter
    is the overflow-guarded route).
    """
    return bregman_project_trace_one(ftrl_intermediate(cumulative_loss, eta))


def omd_intermediate(p: AlgebraElement, m: AlgebraElement, eta: float) -> AlgebraElement:
    """Unconstrained mirror step exp(ln p - eta m); requires interior p."""
    return exp_element(ln_element(p) - eta * m)


def omd_step(p: AlgebraElement, m: AlgebraElement, eta: float) -> AlgebraElement:
    """One mirror-descent step on the trace-one slice.

    Initialized at the entropy minimizer e/r, the iteration reproduces the
    multiplicative-weights trajectory exactly.
    """
    y = omd_intermediate(p, m, eta)
    return y / trace(y)


# ---------------------------------------------------------------------------
# Ball learner
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BallState:
    """Snapshot of the unit-ball learner; the iterate stays strictly inside."""

    dim: int
    cumulative_loss: np.ndarray
    iterate: np.ndarray
    step: int
    policy: StepsizePolicy

    @property
    def eta(self) -> float:
        if isinstance(self.policy, Fixed):
            return self.policy.eta
        return doubling_schedule(self.step + 1, 2)[1]

    @property
    def epoch(self) -> int:
        if isinstance(self.policy, Fixed):
            return 0
        return doubling_schedule(self.step + 1, 2)[0]


def init_ball_learner(dim: int, policy: StepsizePolicy) -> BallState:
    return BallState(dim, np.zeros(dim), np.zeros(dim), 0, policy)


def ball_iterate(cumulative_loss: np.ndarray, eta: float) -> np.ndarray:
    """tanh(eta ||L||) times the unit vector against the cumulative loss.

    This is the closed form of twice the normalized exponential map evaluated
    at -eta L; the tanh form avoids cancellation for small ||L||, and the
    zero-loss limit is the ball center.
    """
    nrm = float(np.linalg.norm(cumulative_loss))
    if nrm == 0.0:
        return np.zeros_like(cumulative_loss)
    return math.tanh(eta * nrm) * (-cumulative_loss / nrm)


def scmwu_ball_step(state: BallState, m: np.ndarray) -> BallState:
    """Consume one loss vector (||m|| <= 1 expected) and return the new state."""
    m = np.asarray(m, dtype=float)
    if m.shape != (state.dim,):
        raise ValueError(f"loss must have shape ({state.dim},)")
    if float(np.linalg.norm(m)) > 1.0 + 1e-9:
        warnings.warn(
            "loss vector has norm above 1; regret guarantees do not apply",
            LossBoundWarning,
            stacklevel=2,
        )
    new_step = state.step + 1
    play_time = new_step + 1
    if isinstance(state.policy, Doubling) and _is_power_of_two(play_time):
        cum = np.zeros(state.dim)
        iterate = np.zeros(state.dim)
    else:
        cum = state.cumulative_loss + m
        eta = state.policy.eta if isinstance(state.policy, Fixed) else doubling_schedule(play_time, 2)[1]
        iterate = ball_iterate(cum, eta)
    cum.setflags(write=False)
    iterate.setflags(write=False)
    return BallState(state.dim, cum, iterate, new_step, state.policy)


def ogd_ball_step(b: np.ndarray, m: np.ndarray, eta: float) -> np.ndarray:
    """Projected gradient step on the unit ball: project b - eta m back inside."""
    v = np.asarray(b, dtype=float) - eta * np.asarray(m, dtype=float)
    nrm = float(np.linalg.norm(v))
    return v if nrm <= 1.0 else v / nrm


# ---------------------------------------------------------------------------
# Regret accounting
# ---------------------------------------------------------------------------


class RegretLedger:
    """Running regret account for one cone-learner trajectory.

    Tracks the per-step losses <m_t, p_t>, their running sum, and the loss of
    the best fixed trace-one action in hindsight (the minimum eigenvalue of
    the loss sum). The regret is recomputable from the stored lists.
    """

    def __init__(self, structure: ConeStructure) -> None:
        self.structure = structure
        self.inst_losses: list[float] = []
        self.loss_sum = zero(structure)
        self.algorithm_loss = 0.0
        self.best_in_hindsight = 0.0

    @property
    def step(self) -> int:
        return len(self.inst_losses)

    @property
    def regret(self) -> float:
        return self.algorithm_loss - self.best_in_hindsight

    def update(self, m: AlgebraElement, p: AlgebraElement) -> None:
        v = inner(m, p)
        self.inst_losses.append(v)
        self.algorithm_loss += v
        self.loss_sum = self.loss_sum + m
        self.best_in_hindsight = min_eigenvalue(self.loss_sum)

    def recomputed_regret(self) -> float:
        return float(np.sum(self.inst_losses)) - min_eigenvalue(self.loss_sum)

    def theoretical_bound(self, mode: str) -> float:
        return theoretical_bound(max(self.step, 1), self.structure.rank, mode)


def regret_update(ledger: RegretLedger, m: AlgebraElement, p: AlgebraElement) -> RegretLedger:
    """Record one (loss, play) pair on the ledger and return it."""
    ledger.update(m, p)
    return ledger


# ---------------------------------------------------------------------------
# Potential-function probes
# ---------------------------------------------------------------------------


def unnormalized_weight(cumulative_loss: AlgebraElement, eta: float) -> AlgebraElement:
    """Unnormalized weight exp(-eta L); its normalization is the learner iterate.

    Computed through a max-eigenvalue shift with the scalar factor restored
    afterwards, so moderate eta*L stays overflow-free. Use
    :func:`log_trace_exp` for potential bookkeeping at larger scales.
    """
    if eta <= 0.0:
        raise ValueError("stepsize must be positive")
    z = (-eta) * cumulative_loss
    shift = max_eigenvalue(z)
    w = exp_element(z - shift * identity(z.structure))
    return math.exp(shift) * w


def log_trace_exp(x: AlgebraElement) -> float:
    """log tr(exp(x)), evaluated stably over the spectrum."""
    lams = eigenvalues(x)
    c = float(lams.max())
    return c + math.log(float(np.sum(np.exp(lams - c))))
