"""The l2-l1 margin game: simplex-weights player versus ball player.

A zero-sum game on an n x d data matrix A whose rows lie in the unit ball:
the ball player picks a classifier direction x, the simplex player a
distribution p over data points, and the payoff is p^T A x. The game value is
the maximum attainable margin; running multiplicative weights for p against
the tanh-based ball learner for x drives the time-averaged strategies to an
approximate equilibrium.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SvmInstance",
    "SvmGameTrace",
    "generate_svm_instance",
    "margin",
    "svm_game_run",
    "required_horizon",
    "nash_epsilon",
]


@dataclass(frozen=True)
class SvmInstance:
    """Separable point cloud with all labels folded to +1.

    Every row of ``points`` has Euclidean norm at most 1 and satisfies
    points @ direction >= generated_margin. The generated margin is the
    attained minimum of points @ direction, not the nominal target.
    """

    points: np.ndarray
    direction: np.ndarray
    generated_margin: float

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]


def generate_svm_instance(
    n: int, d: int, margin: float, rng: np.random.Generator
) -> SvmInstance:
    """Sample a separable instance with margin at least ``margin``.

    The separating direction is uniform on the sphere. The cloud mixes an
    easy bulk (about 95% of the points, margins in [0.95, 1] with moderate
    perpendicular spread) with a set of margin-pinning points sitting just
    above the target margin with a small perpendicular radius, so the
    maximum attainable margin stays close to the generated one. All rows lie
    in the unit ball.
    """
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must lie strictly between 0 and 1")
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    w = rng.standard_normal(d)
    w /= np.linalg.norm(w)
    n_pin = min(n, max(2 * d, int(round(0.05 * n))))
    n_bulk = n - n_pin

    def perp_directions(count: int) -> np.ndarray:
        if d == 1 or count == 0:
            return np.zeros((count, d))
        y = rng.standard_normal((count, d))
        y -= np.outer(y @ w, w)
        return y / np.linalg.norm(y, axis=1, keepdims=True)

    u_pin = margin + min(0.01, 1.0 - margin) * rng.uniform(0.0, 1.0, n_pin)
    s_pin = np.minimum(0.10, np.sqrt(1.0 - u_pin**2)) * rng.uniform(0.0, 1.0, n_pin)
    pins = u_pin[:, None] * w + s_pin[:, None] * perp_directions(n_pin)

    lo = max(0.95, margin)
    u_bulk = rng.uniform(lo, 1.0, n_bulk)
    s_bulk = 0.3 * np.sqrt(1.0 - u_bulk**2) * rng.uniform(0.0, 1.0, n_bulk)
    bulk = u_bulk[:, None] * w + s_bulk[:, None] * perp_directions(n_bulk)

    a = np.vstack([pins, bulk])
    rng.shuffle(a)
    a.setflags(write=False)
    w.setflags(write=False)
    return SvmInstance(a, w, float(np.min(a @ w)))


def margin(a: np.ndarray, x: np.ndarray) -> float:
    """Worst-case row response min_i (A x)_i, the classifier's margin."""
    return float(np.min(a @ x))


def required_horizon(eps: float, n: int) -> int:
    """Smallest horizon guaranteeing an eps-approximate equilibrium.

    Ceiling of 4 (sqrt(ln n) + sqrt(2 ln 2))^2 / eps^2.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if n < 2:
        raise ValueError("need at least two data points")
    return math.ceil(4.0 * (math.sqrt(math.log(n)) + math.sqrt(2.0 * math.log(2.0))) ** 2 / eps**2)


def nash_epsilon(t: int, n: int) -> float:
    """Equilibrium gap guaranteed after t steps: (2/sqrt(t))(sqrt(ln n) + sqrt(ln 2))."""
    return 2.0 / math.sqrt(t) * (math.sqrt(math.log(n)) + math.sqrt(math.log(2.0)))


@dataclass(frozen=True)
class SvmGameTrace:
    """Per-step record of one game run plus equilibrium metrics.

    ``utilities[t-1]`` is p_t^T A x_t. ``ball_value`` is the closed-form best
    response value max_x p_bar^T A x = ||A^T p_bar||; ``simplex_value`` is
    min_p p^T A x_bar, the row minimum of A x_bar. Their difference is the
    equilibrium gap certificate.
    """

    instance: SvmInstance
    horizon: int
    eta_simplex: float
    eta_ball: float
    utilities: np.ndarray
    running_margin: np.ndarray
    running_gap: np.ndarray
    p_bar: np.ndarray
    x_bar: np.ndarray
    attained_margin: float
    ball_value: float
    simplex_value: float
    nash_gap: float
    p_history: np.ndarray | None = None
    x_history: np.ndarray | None = None


def svm_game_run(
    instance: SvmInstance,
    horizon: int,
    stepsize_mode: str = "optimized-fixed",
    record_strategies: bool = False,
) -> SvmGameTrace:
    """Play the margin game for ``horizon`` steps with horizon-tuned stepsizes.

    The simplex player runs multiplicative weights with eta = sqrt(ln n / T)
    on losses A x_t; the ball player runs the tanh update with
    eta = sqrt(ln 2 / T) on losses -A^T p_t. Loss bounds (sup-norm 1 for the
    simplex player, Euclidean norm 1 for the ball player) are asserted on
    every step.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    if stepsize_mode != "optimized-fixed":
        raise ValueError(f"unknown stepsize mode {stepsize_mode!r}")
    a = instance.points
    n, d = a.shape
    eta_p = math.sqrt(math.log(n) / horizon)
    eta_b = math.sqrt(math.log(2.0) / horizon)

    p = np.full(n, 1.0 / n)
    b = np.zeros(d)
    cum_simplex = np.zeros(n)  # sum of A x_t
    cum_ball = np.zeros(d)  # sum of -A^T p_t
    p_sum = np.zeros(n)
    x_sum = np.zeros(d)

    utilities = np.empty(horizon)
    running_margin = np.empty(horizon)
    running_gap = np.empty(horizon)
    p_hist = np.empty((horizon, n)) if record_strategies else None
    x_hist = np.empty((horizon, d)) if record_strategies else None

    for t in range(horizon):
        loss_p = a @ b
        loss_b = -(a.T @ p)
        assert np.max(np.abs(loss_p)) <= 1.0 + 1e-9
        assert np.linalg.norm(loss_b) <= 1.0 + 1e-9

        utilities[t] = p @ loss_p
        p_sum += p
        x_sum += b
        if record_strategies:
            p_hist[t] = p
            x_hist[t] = b

        x_bar_t = x_sum / (t + 1)
        p_bar_t = p_sum / (t + 1)
        running_margin[t] = margin(a, x_bar_t)
        running_gap[t] = float(np.linalg.norm(a.T @ p_bar_t)) - running_margin[t]

        cum_simplex += loss_p
        cum_ball += loss_b
        z = -eta_p * cum_simplex
        z -= z.max()
        w = np.exp(z)
        p = w / w.sum()
        nrm = float(np.linalg.norm(cum_ball))
        b = np.zeros(d) if nrm == 0.0 else math.tanh(eta_b * nrm) * (-cum_ball / nrm)

    p_bar = p_sum / horizon
    x_bar = x_sum / horizon
    attained = margin(a, x_bar)
    ball_value = float(np.linalg.norm(a.T @ p_bar))
    simplex_value = float(np.min(a @ x_bar))
    for arr in (utilities, running_margin, running_gap, p_bar, x_bar):
        arr.setflags(write=False)
    return SvmGameTrace(
        instance=instance,
        horizon=horizon,
        eta_simplex=eta_p,
        eta_ball=eta_b,
        utilities=utilities,
        running_margin=running_margin,
        running_gap=running_gap,
        p_bar=p_bar,
        x_bar=x_bar,
        attained_margin=attained,
        ball_value=ball_value,
        simplex_value=simplex_value,
        nash_gap=ball_value - simplex_value,
        p_history=p_hist,
        x_history=x_hist,
    )
