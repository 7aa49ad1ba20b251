"""Contraction coefficients and the threshold solvers they feed.

theta(delta) is the TV distance between the noise law and its translate;
eta_tv(A) is its sup over shifts |delta| <= 2A.  The KL contraction
coefficient is never computed exactly: every consumer substitutes the TV
upper bound, which is sound for all the bounds built on top.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import DMCKernel, NoiseModel
from .errors import DomainError, NoSolutionError

_BISECT_TOL = 1e-9


@dataclass(frozen=True)
class ThresholdReport:
    """Solved threshold plus the evidence: bracket and residual check."""

    value: float
    iterations: int
    bracket: tuple[float, float]
    satisfied_at_value: bool = True


def theta_shift(noise: NoiseModel, delta: float) -> float:
    """theta(delta) = d_TV(P_Z, P_{Z+delta})."""
    return noise.theta(delta)


_UNIMODAL = ("gaussian", "uniform", "laplace")


def eta_tv_amplitude(noise: NoiseModel, A: float) -> float:
    """sup of theta(delta) over |delta| <= 2A.

    Unimodal families have monotone theta, so the sup sits at the endpoint;
    grid noise gets a 512-point scan plus golden-section refinement.
    """
    if A < 0:
        raise DomainError("A must be nonnegative")
    if A == 0:
        return 0.0
    if noise.kind in _UNIMODAL:
        return noise.theta(2.0 * A)
    deltas = np.linspace(0.0, 2.0 * A, 512)
    vals = np.array([noise.theta(d) for d in deltas])
    i = int(np.argmax(vals))
    lo = deltas[max(i - 1, 0)]
    hi = deltas[min(i + 1, len(deltas) - 1)]
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    while hi - lo > 1e-8 * max(1.0, A):
        d1 = hi - phi * (hi - lo)
        d2 = lo + phi * (hi - lo)
        if noise.theta(d1) < noise.theta(d2):
            lo = d1
        else:
            hi = d2
    return max(float(vals[i]), noise.theta(0.5 * (lo + hi)))


def eta_tv_complement(noise: NoiseModel, A: float) -> float:
    """1 - eta_tv(A), computed without cancellation.

    For large amplitudes eta_tv is within a few ulps of 1 and the difference
    underflows in `1 - eta_tv_amplitude(...)`; the closed-form families admit
    a direct expression for the complement.
    """
    if A < 0:
        raise DomainError("A must be nonnegative")
    if A == 0:
        return 1.0
    if noise.kind == "gaussian":
        from .core_prob import q_function
        return 2.0 * q_function(A / noise.params[0])
    if noise.kind == "uniform":
        a, b = noise.params
        return max(1.0 - 2.0 * A / (b - a), 0.0)
    if noise.kind == "laplace":
        return math.exp(-A / noise.params[0])
    return 1.0 - eta_tv_amplitude(noise, A)


def dobrushin_dmc(K: DMCKernel) -> float:
    """Dobrushin coefficient: max TV distance between kernel rows."""
    m = K.matrix
    best = 0.0
    for i in range(m.shape[0]):
        diff = 0.5 * np.abs(m[i] - m[i + 1:]).sum(axis=1)
        if diff.size:
            best = max(best, float(diff.max()))
    return best


def _bisect_threshold(cond, lo: float, hi: float, tol: float = _BISECT_TOL):
    """Smallest x in [lo, hi] with cond(x) True; cond must be monotone."""
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if cond(mid):
            hi = mid
        else:
            lo = mid
        it += 1
    return hi, it, (lo, hi)


def alpha_star(noise: NoiseModel, search_max: float = 1e6) -> ThresholdReport:
    """Smallest alpha > 0 with eta_tv(1/(2 alpha)) <= 1/3."""
    target = 1.0 / 3.0

    def ok(alpha):
        return eta_tv_amplitude(noise, 1.0 / (2.0 * alpha)) <= target

    if not ok(search_max):
        raise NoSolutionError(
            "eta_tv stays above 1/3 over the whole search range; "
            "the noise does not contract at any amplitude")
    lo = 1.0 / search_max
    if ok(lo):
        # already below the target at tiny alpha; shrink further to find the inf
        while lo > 1e-12 and ok(lo / 2.0):
            lo /= 2.0
    value, it, bracket = _bisect_threshold(ok, lo, search_max)
    return ThresholdReport(value, it, bracket, ok(value))


def a2_star(noise: NoiseModel, t: float, gamma: float, p: float) -> ThresholdReport:
    """Smallest A with 18 gamma A^-p log(A^p) <= t above the amplitude floor.

    Floor: A^p >= max{e, 2 gamma, alpha* e^3 / gamma}.
    """
    if t <= 0:
        raise DomainError("t must be positive")
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    if p < 1:
        raise DomainError("p must be >= 1")
    astar = alpha_star(noise).value
    floor_ap = max(math.e, 2.0 * gamma, astar * math.e ** 3 / gamma)
    floor_a = floor_ap ** (1.0 / p)

    def cond(A):
        ap = A ** p
        return 18.0 * gamma * math.log(ap) / ap <= t

    if cond(floor_a):
        return ThresholdReport(floor_a, 0, (floor_a, floor_a), True)
    hi = floor_a
    while not cond(hi):
        hi *= 2.0
        if hi > 1e12:
            raise NoSolutionError("a2_star search exceeded range")
    value, it, bracket = _bisect_threshold(cond, floor_a, hi)
    return ThresholdReport(value, it, bracket, cond(value))


def a1_star(gamma: float, p: float, grid_step: float, entropy: float) -> ThresholdReport:
    """Smallest A with A^-p log A^p <= H/(6 gamma) above the grid floor.

    Floor: A^p >= max{e, 2 gamma, e^3 / (gamma Delta)}.
    """
    if entropy <= 0:
        raise DomainError("entropy must be positive")
    if grid_step <= 0:
        raise DomainError("grid_step must be positive")
    if gamma <= 0:
        raise DomainError("gamma must be positive")
    floor_ap = max(math.e, 2.0 * gamma, math.e ** 3 / (gamma * grid_step))
    floor_a = floor_ap ** (1.0 / p)
    target = entropy / (6.0 * gamma)

    def cond(A):
        ap = A ** p
        return math.log(ap) / ap <= target

    if cond(floor_a):
        return ThresholdReport(floor_a, 0, (floor_a, floor_a), True)
    hi = floor_a
    while not cond(hi):
        hi *= 2.0
        if hi > 1e12:
            raise NoSolutionError("a1_star search exceeded range")
    value, it, bracket = _bisect_threshold(cond, floor_a, hi)
    return ThresholdReport(value, it, bracket, cond(value))
