"""Negative entropy, Bregman divergence, and the trace-one Bregman projection.

The regularizer is the spectral negative entropy tr(x o ln x) = sum_i
lambda_i ln(lambda_i), defined on the cone interior. On pure orthant
structures its Bregman divergence is the unnormalized KL divergence; on pure
PSD structures it is the unnormalized quantum relative entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    INTERIOR_RTOL,
    AlgebraElement,
    ConeDomainError,
    _check_same_structure,
    eigenvalues,
    exp_element,
    identity,
    inner,
    ln_element,
    norm,
    trace,
)

__all__ = [
    "EntropyEval",
    "BregmanEval",
    "entropy",
    "entropy_with_gradient",
    "entropy_gradient",
    "entropy_gradient_inverse",
    "bregman",
    "bregman_eval",
    "bregman_project_trace_one",
    "three_point_gap",
    "soc2_level_curves",
]


@dataclass(frozen=True)
class EntropyEval:
    """Entropy value in nats, with the gradient attached when requested."""

    value: float
    gradient: AlgebraElement | None = None


@dataclass(frozen=True)
class BregmanEval:
    """Divergence value in nats; tiny negative float noise is clamped to 0."""

    value: float


def _require_interior(x: AlgebraElement, lams: np.ndarray) -> None:
    lam_min = float(lams.min())
    if lam_min <= INTERIOR_RTOL * max(1.0, norm(x)):
        raise ConeDomainError(
            f"entropy requires an interior point; min eigenvalue {lam_min:.3e}"
        )


def entropy(x: AlgebraElement) -> float:
    """Negative entropy sum_i lambda_i ln(lambda_i) of an interior point."""
    lams = eigenvalues(x)
    _require_interior(x, lams)
    return float(np.sum(lams * np.log(lams)))


def entropy_gradient(x: AlgebraElement) -> AlgebraElement:
    """Gradient of the entropy, ln x + e; norm blows up toward the boundary."""
    return ln_element(x) + identity(x.structure)


def entropy_gradient_inverse(g: AlgebraElement) -> AlgebraElement:
    """Inverse gradient map exp(g - e); lands in the cone interior for any g."""
    return exp_element(g - identity(g.structure))


def entropy_with_gradient(x: AlgebraElement, with_gradient: bool = False) -> EntropyEval:
    value = entropy(x)
    return EntropyEval(value, entropy_gradient(x) if with_gradient else None)


def bregman(x: AlgebraElement, y: AlgebraElement) -> float:
    """Bregman divergence tr(x o ln x - x o ln y + y - x) of interior points.

    Agrees with the first-order form Phi(x) - Phi(y) - <grad Phi(y), x - y>
    and is zero exactly when x equals y.
    """
    _check_same_structure(x, y)
    return entropy(x) - inner(x, ln_element(y)) + trace(y) - trace(x)


def bregman_eval(x: AlgebraElement, y: AlgebraElement) -> BregmanEval:
    """Reporting wrapper: values in [-1e-9, 0) are floating noise, shown as 0."""
    v = bregman(x, y)
    if -1e-9 <= v < 0.0:
        v = 0.0
    return BregmanEval(v)


def bregman_project_trace_one(y: AlgebraElement) -> AlgebraElement:
    """Divergence-minimizing point of the trace-one slice: y / tr(y)."""
    lams = eigenvalues(y)
    _require_interior(y, lams)
    return y / trace(y)


def three_point_gap(x: AlgebraElement, y: AlgebraElement, z: AlgebraElement) -> float:
    """Residual of the three-point identity; zero up to rounding on any interior triple.

    Returns <z - y, ln y - ln x> - (H(z, x) - H(z, y) - H(y, x)).
    """
    lhs = inner(z - y, ln_element(y) - ln_element(x))
    rhs = bregman(z, x) - bregman(z, y) - bregman(y, x)
    return lhs - rhs


# ---------------------------------------------------------------------------
# Level curves on the trace-one slice of the second-order cone in R^3
# ---------------------------------------------------------------------------


def soc2_level_curves(
    resolution: int,
    reference: tuple[float, float, float] = (0.21, 0.28, 0.5),
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Entropy and divergence samples over the trace-one slice of soc(2).

    The slice {(u, 1/2) : ||u|| <= 1/2} is parameterized by u in the half-unit
    disk. Returns (U1, U2, PHI, BREG) grids of shape (resolution, resolution)
    spanning [-0.5, 0.5]^2; points on or outside the slice boundary hold NaN.
    The divergence is taken with respect to ``reference`` = (y1, y2, 0.5).
    """
    if resolution < 10:
        raise ValueError("grid resolution must be at least 10")
    ref = np.asarray(reference, dtype=float)
    if ref.shape != (3,) or ref[2] != 0.5:
        raise ValueError("reference must be a trace-one slice point (y1, y2, 0.5)")
    ref_nrm = float(np.linalg.norm(ref[:2]))
    if ref_nrm >= 0.5:
        raise ConeDomainError("reference point must lie in the slice interior")

    ticks = np.linspace(-0.5, 0.5, resolution)
    u1, u2 = np.meshgrid(ticks, ticks, indexing="ij")
    nrm = np.hypot(u1, u2)
    inside = nrm < 0.5 * (1.0 - 1e-12)

    lam_p = 0.5 + nrm
    lam_m = 0.5 - nrm
    with np.errstate(all="ignore"):
        phi = np.where(inside, lam_p * np.log(lam_p) + lam_m * np.log(lam_m), np.nan)

        # H(x, y) on trace-one points reduces to Phi(x) - <x, ln y>; the inner
        # product expands through the two reference eigendirections.
        ref_lp, ref_lm = 0.5 + ref_nrm, 0.5 - ref_nrm
        log_p, log_m = np.log(ref_lp), np.log(ref_lm)
        if ref_nrm == 0.0:
            ln_vec = np.zeros(2)
        else:
            ln_vec = (0.5 * (log_p - log_m) / ref_nrm) * ref[:2]
        ln_s = 0.5 * (log_p + log_m)
        cross = 2.0 * (u1 * ln_vec[0] + u2 * ln_vec[1] + 0.5 * ln_s)
        breg = np.where(inside, phi - cross, np.nan)

    return u1, u2, phi, breg
