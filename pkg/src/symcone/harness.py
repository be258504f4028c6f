"""Experiment drivers: seeded loss generation, batch runs, CSV/JSON emission.

Runs are configured by :class:`ExperimentConfig` (one JSON document per run,
seed mandatory) and write deterministic outputs: identical config and seed
reproduce byte-identical files. CSV files are comma-separated with a header
row, '.' decimals, LF line endings, and doubles printed with 17 significant
digits so downstream tools can round-trip them losslessly.

The regret drivers use batched per-block spectral kernels so that the
100-instance, 10^4-step experiments finish in seconds; the batched results
agree with the step-by-step learner API to rounding (see the test suite).
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import algebra, games, learners
from .algebra import Block, ConeStructure, direct_sum, orthant, psd, soc
from .entropy import soc2_level_curves

__all__ = [
    "InvariantViolation",
    "ExperimentConfig",
    "PRESET_STRUCTURES",
    "instance_rng",
    "sample_ball_losses",
    "simulate_cone_regret",
    "simulate_ball_regret",
    "simulate_ogd_regret",
    "run_regret_cone",
    "run_regret_ball",
    "run_compare_ogd",
    "run_level_curves",
    "run_svm_game",
    "run_selftest",
]


class InvariantViolation(AssertionError):
    """A runtime invariant (regret bound, ledger consistency) failed."""


# Cone presets used by the regret experiments: a ladder of second-order
# blocks, orthant and PSD blocks paired with one, and a five-block direct sum
# of rank 12.
PRESET_STRUCTURES: dict[str, ConeStructure] = {
    "soc-ladder": direct_sum(soc(2), soc(3), soc(4), soc(5), soc(6)),
    "orthant5-soc5": direct_sum(orthant(5), soc(5)),
    "psd3-soc5": direct_sum(psd(3), soc(5)),
    "mixed-rank12": direct_sum(orthant(3), psd(2), psd(3), soc(2), soc(3)),
}


@dataclass
class ExperimentConfig:
    """One experiment run; fully JSON-serializable.

    ``kind`` selects the driver: regret_cone | regret_ball | compare_ogd |
    svm_game | level_curves. ``structure`` is either a preset name or a JSON
    block list for the cone experiments; ``dim``/``dims`` and
    ``horizons`` parameterize the ball and game experiments.
    """

    kind: str
    seed: int
    out_dir: str
    horizon: int = 1000
    instances: int = 100
    structure: str | list | None = None
    dim: int = 10
    dims: list[int] | None = None
    horizons: list[int] | None = None
    n_points: int = 1000
    margin: float = 0.1
    loss_scale: float = 1.0
    stepsize_mode: str = "doubling"
    resolution: int = 101
    reference: tuple[float, float, float] = (0.21, 0.28, 0.5)
    traces: str = "first"

    def to_json(self) -> dict:
        return dataclasses.asdict(self)

    @staticmethod
    def from_json(data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(ExperimentConfig)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        if "kind" not in data or "seed" not in data or "out_dir" not in data:
            raise ValueError("config requires kind, seed, and out_dir")
        cfg = ExperimentConfig(**data)
        if isinstance(cfg.reference, list):
            cfg.reference = tuple(cfg.reference)
        return cfg

    def validate_loss_scale(self) -> None:
        if not 0.0 <= self.loss_scale <= 1.0:
            raise ValueError("loss_scale must lie in [0, 1] to keep losses bounded")

    def resolve_structure(self) -> ConeStructure:
        if self.structure is None:
            raise ValueError("cone experiments need a structure or preset name")
        if isinstance(self.structure, str):
            try:
                return PRESET_STRUCTURES[self.structure]
            except KeyError:
                raise ValueError(
                    f"unknown preset {self.structure!r}; available: {sorted(PRESET_STRUCTURES)}"
                ) from None
        return algebra.structure_from_json(self.structure)


def instance_rng(seed: int, index: int) -> np.random.Generator:
    """PCG64 stream for one instance, derived from (seed, index)."""
    return np.random.default_rng(np.random.SeedSequence(entropy=(int(seed), int(index))))


def sample_ball_losses(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Loss vectors drawn uniformly from the unit ball, shape (count, dim)."""
    g = rng.standard_normal((count, dim))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    radius = rng.uniform(0.0, 1.0, size=count) ** (1.0 / dim)
    return g * radius[:, None]


# ---------------------------------------------------------------------------
# Batched per-block spectral kernels
# ---------------------------------------------------------------------------


def _block_min_max(blk: Block, arr: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if blk.kind == "orthant":
        return arr.min(axis=1), arr.max(axis=1)
    if blk.kind == "soc":
        nrm = np.linalg.norm(arr[:, :-1], axis=1)
        s = arr[:, -1]
        return s - nrm, s + nrm
    w = np.linalg.eigvalsh(arr)
    return w[:, 0], w[:, -1]


def _block_exp(blk: Block, arr: np.ndarray, shift: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise spectral exp of arr with eigenvalue shift; returns (values, traces)."""
    if blk.kind == "orthant":
        w = np.exp(arr - shift[:, None])
        return w, w.sum(axis=1)
    if blk.kind == "soc":
        x, s = arr[:, :-1], arr[:, -1]
        nrm = np.linalg.norm(x, axis=1)
        wp = np.exp(s + nrm - shift)
        wm = np.exp(s - nrm - shift)
        coef = np.divide(0.5 * (wp - wm), nrm, out=np.zeros_like(nrm), where=nrm > 0.0)
        out = np.concatenate([coef[:, None] * x, (0.5 * (wp + wm))[:, None]], axis=1)
        return out, wp + wm
    w, q = np.linalg.eigh(arr)
    ew = np.exp(w - shift[:, None])
    out = np.einsum("tij,tj,tkj->tik", q, ew, q)
    return out, ew.sum(axis=1)


def _block_inner(blk: Block, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if blk.kind == "orthant":
        return np.sum(a * b, axis=1)
    if blk.kind == "soc":
        return 2.0 * np.sum(a * b, axis=1)
    return np.sum(a * b, axis=(1, 2))


def _batched_iterates_and_losses(
    structure: ConeStructure,
    losses: list[np.ndarray],
    prefixes: list[np.ndarray],
    etas: np.ndarray,
) -> np.ndarray:
    """Instantaneous losses <m_t, p_t> with p_t = exp(-eta_t * prefix_t), normalized.

    ``prefixes`` holds, per block, the loss sum seen by the learner before
    step t; ``etas`` the stepsize in force at step t.
    """
    blocks = structure.blocks
    scaled = []
    for pre in prefixes:
        a = (-etas).reshape((-1,) + (1,) * (pre.ndim - 1))
        scaled.append(a * pre)
    shift = None
    for blk, z in zip(blocks, scaled):
        _, mx = _block_min_max(blk, z)
        shift = mx if shift is None else np.maximum(shift, mx)
    total_trace = None
    inst = None
    for blk, z, m in zip(blocks, scaled, losses):
        w, tr = _block_exp(blk, z, shift)
        total_trace = tr if total_trace is None else total_trace + tr
        contrib = _block_inner(blk, m, w)
        inst = contrib if inst is None else inst + contrib
    return inst / total_trace


def _epoch_arrays(horizon: int, rank: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-step (epoch, eta, epoch_start) under the doubling schedule."""
    t = np.arange(1, horizon + 1)
    epoch = np.frexp(t.astype(float))[1] - 1
    eta = np.sqrt(math.log(rank) / np.exp2(epoch))
    start = np.exp2(epoch).astype(int)
    return epoch, eta, start


def simulate_cone_regret(
    structure: ConeStructure,
    losses: list[np.ndarray],
    stepsize_mode: str = "doubling",
) -> dict[str, np.ndarray]:
    """Trajectory columns for one cone loss sequence.

    Returns arrays t, epoch, eta, inst_loss, cum_loss, best_hindsight, regret,
    bound_optimized, bound_doubling. ``stepsize_mode`` is "doubling" (per-epoch
    restarts) or "optimized" (fixed stepsize tuned to the horizon).
    """
    horizon = losses[0].shape[0]
    rank = structure.rank
    t = np.arange(1, horizon + 1)

    sums = [np.concatenate([np.zeros((1,) + m.shape[1:]), np.cumsum(m, axis=0)]) for m in losses]

    if stepsize_mode == "doubling":
        epoch, eta, start = _epoch_arrays(horizon, rank)
        prefixes = [g[t - 1] - g[start - 1] for g in sums]
    elif stepsize_mode == "optimized":
        epoch = np.zeros(horizon, dtype=int)
        eta = np.full(horizon, math.sqrt(math.log(rank) / horizon))
        prefixes = [g[t - 1] for g in sums]
    else:
        raise ValueError(f"unknown stepsize mode {stepsize_mode!r}")

    inst = _batched_iterates_and_losses(structure, losses, prefixes, eta)
    cum = np.cumsum(inst)

    best = None
    for blk, g in zip(structure.blocks, sums):
        mn, _ = _block_min_max(blk, g[1:])
        best = mn if best is None else np.minimum(best, mn)

    log_r = math.log(rank)
    return {
        "t": t,
        "epoch": epoch,
        "eta": eta,
        "inst_loss": inst,
        "cum_loss": cum,
        "best_hindsight": best,
        "regret": cum - best,
        "bound_optimized": 2.0 * np.sqrt(t * log_r),
        "bound_doubling": learners.DOUBLING_CONSTANT * np.sqrt(t * log_r),
    }


def simulate_ball_regret(
    losses: np.ndarray, stepsize_mode: str = "doubling"
) -> dict[str, np.ndarray]:
    """Trajectory columns for one unit-ball loss sequence (rank-2 bounds)."""
    horizon, _ = losses.shape
    t = np.arange(1, horizon + 1)
    g = np.concatenate([np.zeros((1, losses.shape[1])), np.cumsum(losses, axis=0)])

    if stepsize_mode == "doubling":
        epoch, eta, start = _epoch_arrays(horizon, 2)
        prefix = g[t - 1] - g[start - 1]
    elif stepsize_mode == "optimized":
        epoch = np.zeros(horizon, dtype=int)
        eta = np.full(horizon, math.sqrt(math.log(2.0) / horizon))
        prefix = g[t - 1]
    else:
        raise ValueError(f"unknown stepsize mode {stepsize_mode!r}")

    nrm = np.linalg.norm(prefix, axis=1)
    scale = np.divide(np.tanh(eta * nrm), nrm, out=np.zeros_like(nrm), where=nrm > 0.0)
    iterates = -scale[:, None] * prefix
    inst = np.sum(losses * iterates, axis=1)
    cum = np.cumsum(inst)
    best = -np.linalg.norm(g[1:], axis=1)

    log2 = math.log(2.0)
    return {
        "t": t,
        "epoch": epoch,
        "eta": eta,
        "inst_loss": inst,
        "cum_loss": cum,
        "best_hindsight": best,
        "regret": cum - best,
        "bound_optimized": 2.0 * np.sqrt(t * log2),
        "bound_doubling": learners.DOUBLING_CONSTANT * np.sqrt(t * log2),
    }


def simulate_ogd_regret(losses: np.ndarray, eta: float) -> dict[str, np.ndarray]:
    """Projected-gradient trajectory on the same comparator as the ball learner."""
    horizon, dim = losses.shape
    t = np.arange(1, horizon + 1)
    b = np.zeros(dim)
    inst = np.empty(horizon)
    for i in range(horizon):
        inst[i] = losses[i] @ b
        b = learners.ogd_ball_step(b, losses[i], eta)
    cum = np.cumsum(inst)
    best = -np.linalg.norm(np.cumsum(losses, axis=0), axis=1)
    return {"t": t, "inst_loss": inst, "cum_loss": cum, "best_hindsight": best, "regret": cum - best}


# ---------------------------------------------------------------------------
# File emission
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return ""
    return format(v, ".17g")


def _write_csv(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    rows = len(columns[0])
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(rows):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _prepare_out_dir(config: ExperimentConfig) -> str:
    out = config.out_dir
    os.makedirs(out, exist_ok=True)
    _write_json(os.path.join(out, "run_config.json"), config.to_json())
    return out


_TRAJECTORY_COLUMNS = [
    "t",
    "epoch",
    "eta",
    "inst_loss",
    "cum_loss",
    "best_hindsight",
    "regret",
    "bound_optimized",
    "bound_doubling",
]


def _check_regret_columns(cols: dict[str, np.ndarray], bound_key: str, label: str) -> None:
    recomputed = np.cumsum(cols["inst_loss"]) - cols["best_hindsight"]
    if not np.allclose(recomputed, cols["regret"], rtol=0.0, atol=1e-9):
        raise InvariantViolation(f"{label}: regret column is not recomputable from the ledger")
    excess = cols["regret"] - cols[bound_key]
    if np.any(excess > 1e-9):
        worst = int(np.argmax(excess))
        raise InvariantViolation(
            f"{label}: regret {cols['regret'][worst]:.6g} exceeds bound "
            f"{cols[bound_key][worst]:.6g} at t={worst + 1}"
        )


def run_regret_cone(config: ExperimentConfig) -> list[str]:
    """Doubling-trick regret experiment over a cone preset or explicit structure.

    Writes one trajectory CSV per instance plus ``aggregate.csv`` with the
    pointwise maximum regret across instances and the doubling bound. Raises
    :class:`InvariantViolation` if any regret value exceeds the bound.
    """
    config.validate_loss_scale()
    structure = config.resolve_structure()
    out = _prepare_out_dir(config)
    bound_key = "bound_doubling" if config.stepsize_mode == "doubling" else "bound_optimized"
    written = []
    max_regret = None
    for i in range(config.instances):
        rng = instance_rng(config.seed, i)
        losses = algebra.random_bounded_loss_batch(structure, config.horizon, rng)
        losses = [config.loss_scale * m for m in losses]
        cols = simulate_cone_regret(structure, losses, config.stepsize_mode)
        _check_regret_columns(cols, bound_key, f"instance {i}")
        path = os.path.join(out, f"instance_{i:03d}.csv")
        _write_csv(path, _TRAJECTORY_COLUMNS, [cols[k] for k in _TRAJECTORY_COLUMNS])
        written.append(path)
        max_regret = cols["regret"] if max_regret is None else np.maximum(max_regret, cols["regret"])
        bound = cols[bound_key]
        t = cols["t"]
    agg = os.path.join(out, "aggregate.csv")
    _write_csv(agg, ["t", "max_regret_over_instances", "bound"], [t, max_regret, bound])
    written.append(agg)
    return written


def run_regret_ball(config: ExperimentConfig) -> list[str]:
    """Doubling-trick regret experiment on the unit ball of dimension ``dim``."""
    config.validate_loss_scale()
    out = _prepare_out_dir(config)
    bound_key = "bound_doubling" if config.stepsize_mode == "doubling" else "bound_optimized"
    written = []
    max_regret = None
    for i in range(config.instances):
        rng = instance_rng(config.seed, i)
        losses = config.loss_scale * sample_ball_losses(config.dim, config.horizon, rng)
        assert np.all(np.linalg.norm(losses, axis=1) <= 1.0 + 1e-12)
        cols = simulate_ball_regret(losses, config.stepsize_mode)
        _check_regret_columns(cols, bound_key, f"instance {i}")
        path = os.path.join(out, f"instance_{i:03d}.csv")
        _write_csv(path, _TRAJECTORY_COLUMNS, [cols[k] for k in _TRAJECTORY_COLUMNS])
        written.append(path)
        max_regret = cols["regret"] if max_regret is None else np.maximum(max_regret, cols["regret"])
        bound = cols[bound_key]
        t = cols["t"]
    agg = os.path.join(out, "aggregate.csv")
    _write_csv(agg, ["t", "max_regret_over_instances", "bound"], [t, max_regret, bound])
    written.append(agg)
    return written


def run_compare_ogd(config: ExperimentConfig) -> list[str]:
    """Ball learner versus projected gradient descent on identical loss streams.

    Both use fixed stepsizes tuned to the horizon: sqrt(ln 2 / T) for the ball
    learner and 1/sqrt(T) for gradient descent.
    """
    config.validate_loss_scale()
    out = _prepare_out_dir(config)
    written = []
    for i in range(config.instances):
        rng = instance_rng(config.seed, i)
        losses = config.loss_scale * sample_ball_losses(config.dim, config.horizon, rng)
        ball = simulate_ball_regret(losses, "optimized")
        ogd = simulate_ogd_regret(losses, 1.0 / math.sqrt(config.horizon))
        path = os.path.join(out, f"compare_{i:03d}.csv")
        _write_csv(
            path,
            ["t", "regret_scmwu_ball", "regret_ogd"],
            [ball["t"], ball["regret"], ogd["regret"]],
        )
        written.append(path)
    return written


def run_level_curves(config: ExperimentConfig) -> list[str]:
    """Entropy and divergence samples over the trace-one slice of soc(2).

    Emits ``level_curves.csv`` with columns (u1, u2, phi, bregman); points on
    or outside the slice boundary carry empty values.
    """
    u1, u2, phi, breg = soc2_level_curves(config.resolution, config.reference)
    out = _prepare_out_dir(config)
    path = os.path.join(out, "level_curves.csv")
    _write_csv(
        path,
        ["u1", "u2", "phi", "bregman"],
        [u1.ravel(), u2.ravel(), phi.ravel(), breg.ravel()],
    )
    return [path]


def _sandwich_check(trace: games.SvmGameTrace, n: int) -> None:
    t = trace.horizon
    mean_utility = float(np.mean(trace.utilities))
    up = trace.simplex_value + 2.0 * math.sqrt(math.log(n) / t)
    low = trace.ball_value - 2.0 * math.sqrt(math.log(2.0) / t)
    if not (low <= mean_utility + 1e-9 and mean_utility <= up + 1e-9):
        raise InvariantViolation("game run violates the averaged-utility sandwich")


def run_svm_game(config: ExperimentConfig) -> list[str]:
    """Batch margin-game experiments over a (dims x horizons) grid.

    Per cell, plays ``instances`` seeded games and records the ratio of the
    attained margin to the generated margin and the additive error between
    them. Emits ``summary.json`` plus, per cell, a trace CSV of
    (t, utility, margin_of_running_xbar, nash_gap_upper) and a game JSON with
    the point cloud and both directions (instance 0, or all instances when
    ``traces`` is "all").
    """
    out = _prepare_out_dir(config)
    dims = config.dims if config.dims is not None else [config.dim]
    horizons = config.horizons if config.horizons is not None else [config.horizon]
    written = []
    cells = []
    for d in dims:
        for horizon in horizons:
            ratios = np.empty(config.instances)
            errors = np.empty(config.instances)
            for i in range(config.instances):
                rng = instance_rng(config.seed, i)
                inst = games.generate_svm_instance(config.n_points, d, config.margin, rng)
                trace = games.svm_game_run(inst, horizon)
                _sandwich_check(trace, inst.n)
                ratios[i] = trace.attained_margin / inst.generated_margin
                errors[i] = inst.generated_margin - trace.attained_margin
                if config.traces == "all" or (config.traces == "first" and i == 0):
                    stem = f"d{d}_T{horizon}_i{i:03d}"
                    trace_path = os.path.join(out, f"trace_{stem}.csv")
                    _write_csv(
                        trace_path,
                        ["t", "utility", "margin_of_running_xbar", "nash_gap_upper"],
                        [
                            np.arange(1, horizon + 1),
                            trace.utilities,
                            trace.running_margin,
                            trace.running_gap,
                        ],
                    )
                    game_path = os.path.join(out, f"game_{stem}.json")
                    _write_json(
                        game_path,
                        {
                            "d": d,
                            "T": horizon,
                            "points": inst.points.tolist(),
                            "generating_direction": inst.direction.tolist(),
                            "learned_direction": trace.x_bar.tolist(),
                            "generated_margin": inst.generated_margin,
                            "attained_margin": trace.attained_margin,
                            "nash_gap": trace.nash_gap,
                        },
                    )
                    written.extend([trace_path, game_path])
            cells.append(
                {
                    "d": d,
                    "T": horizon,
                    "mean_ratio": float(np.mean(ratios)),
                    "worst_ratio": float(np.min(ratios)),
                    "mean_eps": float(np.mean(errors)),
                    "worst_eps": float(np.max(errors)),
                }
            )
    summary = os.path.join(out, "summary.json")
    _write_json(
        summary,
        {
            "cells": cells,
            "seeds": {"base": config.seed, "instances": config.instances},
            "n_points": config.n_points,
            "margin": config.margin,
        },
    )
    written.append(summary)
    return written


# ---------------------------------------------------------------------------
# Self test
# ---------------------------------------------------------------------------


def run_selftest(seed: int = 0, verbose: bool = True) -> None:
    """Fast invariant sweep; raises :class:`InvariantViolation` on any failure.

    Covers frame axioms, exp/ln inversion, the scalar-shift identity, the
    trace-exponential product inequality, scheme equivalence, the ball/cone
    correspondence, regret-vs-bound on short runs, and the game sandwich.
    """
    rng = np.random.default_rng(seed)
    checks: list[tuple[str, bool]] = []

    def record(name: str, ok: bool) -> None:
        checks.append((name, ok))
        if verbose:
            print(f"  {'PASS' if ok else 'FAIL'}  {name}")

    structure = PRESET_STRUCTURES["mixed-rank12"]
    e = algebra.identity(structure)

    ok = True
    for _ in range(25):
        x = algebra.random_bounded_loss(structure, rng)
        dec = algebra.spectral_decompose(x)
        recon = algebra.zero(structure)
        for lam, q in zip(dec.eigenvalues, dec.frame):
            recon = recon + float(lam) * q
            ok &= abs(algebra.trace(q) - 1.0) < 1e-9
            ok &= algebra.norm(algebra.jordan_product(q, q) - q) < 1e-9
        ok &= algebra.norm(recon - x) < 1e-9 * max(1.0, algebra.norm(x))
    record("spectral frame axioms and reconstruction", ok)

    ok = True
    for _ in range(25):
        x = algebra.random_bounded_loss(structure, rng)
        ok &= algebra.norm(algebra.ln_element(algebra.exp_element(x)) - x) < 1e-9
        c = float(rng.uniform(-2.0, 2.0))
        lhs = algebra.exp_element(c * e + x)
        rhs = math.exp(c) * algebra.exp_element(x)
        ok &= algebra.norm(lhs - rhs) < 1e-9 * max(1.0, algebra.norm(rhs))
    record("exp/ln inversion and shift identity", ok)

    ok = True
    for _ in range(25):
        x = algebra.random_bounded_loss(structure, rng)
        y = algebra.random_bounded_loss(structure, rng)
        lhs = algebra.trace(algebra.exp_element(x + y))
        rhs = algebra.inner(algebra.exp_element(x), algebra.exp_element(y))
        ok &= lhs <= rhs + 1e-9
    record("trace-exponential product inequality", ok)

    ok = True
    for struct in (orthant(4), soc(3)):
        state = learners.init_learner(struct, learners.Fixed(0.5))
        p_omd = algebra.identity(struct) / struct.rank
        cum = algebra.zero(struct)
        for _ in range(20):
            m = algebra.random_bounded_loss(struct, rng)
            state = learners.scmwu_step(state, m)
            cum = cum + m
            p_omd = learners.omd_step(p_omd, m, 0.5)
            ok &= algebra.norm(state.iterate - learners.ftrl_iterate(cum, 0.5)) < 1e-9
            ok &= algebra.norm(state.iterate - p_omd) < 1e-9
    record("three-scheme equivalence", ok)

    dim = 4
    struct = soc(dim)
    ball = learners.init_ball_learner(dim, learners.Fixed(0.3))
    cone = learners.init_learner(struct, learners.Fixed(0.3))
    ok = True
    for _ in range(30):
        m = sample_ball_losses(dim, 1, rng)[0]
        ball = learners.scmwu_ball_step(ball, m)
        cone = learners.scmwu_step(cone, algebra.element(struct, [np.concatenate([m, [0.0]])]))
        lifted = np.concatenate([ball.iterate / 2.0, [0.5]])
        ok &= float(np.max(np.abs(cone.iterate.blocks[0] - lifted))) < 1e-10
    record("ball/cone lifted correspondence", ok)

    ok = True
    for preset in ("orthant5-soc5", "mixed-rank12"):
        struct = PRESET_STRUCTURES[preset]
        losses = algebra.random_bounded_loss_batch(struct, 256, rng)
        cols = simulate_cone_regret(struct, losses, "doubling")
        ok &= bool(np.all(cols["regret"] <= cols["bound_doubling"] + 1e-9))
    losses = sample_ball_losses(3, 256, rng)
    cols = simulate_ball_regret(losses, "doubling")
    ok &= bool(np.all(cols["regret"] <= cols["bound_doubling"] + 1e-9))
    record("regret below the doubling bound (short runs)", ok)

    inst = games.generate_svm_instance(200, 3, 0.1, rng)
    trace = games.svm_game_run(inst, 64)
    try:
        _sandwich_check(trace, inst.n)
        ok = trace.simplex_value <= trace.ball_value + 1e-12
    except InvariantViolation:
        ok = False
    record("game sandwich and gap ordering", ok)

    failures = [name for name, ok in checks if not ok]
    if failures:
        raise InvariantViolation(f"selftest failures: {failures}")
