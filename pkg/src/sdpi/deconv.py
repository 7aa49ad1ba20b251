"""Deconvolution bounds: Esseen smoothing, the spectral-window lemma, the
KS-from-TV theorem and the no-zero-CF corollary.

All bounds here upper-bound a pre-convolution distance (KS between P and Q)
in terms of a post-convolution one (TV between P*P_Z and Q*P_Z).  The noise
enters only through its density bound m1 and a characteristic-function decay
profile (g, h, g1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channels import NoiseModel
from .core_prob import DiscretePMF, Distribution, GridDensity, char_fn
from .errors import DomainError, ProfileFailureError

# constant of the spectral-window lemma, from the two-term proof chain:
# 2 h(T)/T with h = sqrt(T), plus sqrt(8 pi delta) / (sqrt(T) sqrt(delta))
C_WINDOW = 2.0 + math.sqrt(8.0 * math.pi)


@dataclass(frozen=True)
class CfProfile:
    """Characteristic-function decay profile of a noise law.

    Outside an exceptional frequency set of measure at most h(T), the CF
    modulus stays above g(T) on [-T, T]; g1 inverts the decay.
    """

    kind: str
    g_of_T: Callable[[float], float]
    h_of_T: Callable[[float], float]
    g1_of_u: Callable[[float], float]


def _cf_abs(P: Distribution, omegas: np.ndarray, chunk: int = 512) -> np.ndarray:
    out = np.empty(len(omegas))
    for i in range(0, len(omegas), chunk):
        out[i:i + chunk] = np.abs(char_fn(P, omegas[i:i + chunk]))
    return out


def _cf_vals(P: Distribution, omegas: np.ndarray, chunk: int = 512) -> np.ndarray:
    out = np.empty(len(omegas), dtype=complex)
    for i in range(0, len(omegas), chunk):
        out[i:i + chunk] = char_fn(P, omegas[i:i + chunk])
    return out


def _abs_moment1(P: Distribution) -> float:
    return P.abs_moment(1.0)


# ---------------------------------------------------------------------------
# Esseen smoothing inequality
# ---------------------------------------------------------------------------

def esseen_bound(P: Distribution, Q: Distribution, m2: float, T: float) -> float:
    """KS bound (1/pi) int_{-T}^{T} |phi_P - phi_Q| / |w| dw + 24 m2 / (pi T).

    Q must have a density bounded by m2.  The removable singularity at 0 is
    handled through |phi_P - phi_Q| <= |w| (E|X_P| + E|X_Q|).
    """
    if T <= 0:
        raise DomainError("T must be positive")
    step = min(1e-3, T / 4096.0)
    n = int(math.ceil(T / step))
    if n % 2 == 1:
        n += 1
    omegas = np.linspace(0.0, T, n + 1)
    diff = np.abs(_cf_vals(P, omegas[1:]) - _cf_vals(Q, omegas[1:]))
    integrand = np.empty(n + 1)
    integrand[1:] = diff / omegas[1:]
    # limit at 0 from the first-moment Lipschitz bound
    integrand[0] = min(abs(P.mean() - Q.mean()),
                       _abs_moment1(P) + _abs_moment1(Q))
    h = T / n
    simpson = h / 3.0 * (integrand[0] + integrand[-1]
                         + 4.0 * integrand[1:-1:2].sum() + 2.0 * integrand[2:-1:2].sum())
    return 2.0 * simpson / math.pi + 24.0 * m2 / (math.pi * T)


# ---------------------------------------------------------------------------
# decay profiles
# ---------------------------------------------------------------------------

def _numeric_g1(noise: NoiseModel):
    """Numeric profile for grid noise: largest dyadic T with the measure of
    {|phi_Z| <= sqrt(u), |w| <= T} at most sqrt(T)."""
    step = 1e-2
    t_candidates = [2.0 ** k for k in range(-6, 8)]
    omegas = np.arange(0.0, t_candidates[-1] + step, step)
    cf = _cf_abs(noise.grid_density, omegas, chunk=2048)

    def g1(u: float) -> float:
        if not 0.0 < u <= 1.0:
            raise DomainError("u must lie in (0, 1]")
        root_u = math.sqrt(u)
        below = cf <= root_u
        cum = np.concatenate([[0], np.cumsum(below)])
        best = None
        failed_T = None
        for T in t_candidates:
            k = int(T / step)
            measure = 2.0 * step * cum[min(k, len(cum) - 1)]
            if measure <= math.sqrt(T):
                best = T
            elif best is not None:
                failed_T = T
                break
        if best is None:
            raise ProfileFailureError(f"no admissible T for u = {u}")
        if failed_T is not None and u < 1e-6:
            # distinguish a hard CF zero-interval from a mere threshold issue
            k = int(failed_T / step)
            hard_zero = 2.0 * step * np.count_nonzero(cf[:k + 1] <= 1e-10)
            if hard_zero > math.sqrt(failed_T):
                raise ProfileFailureError(
                    "characteristic function vanishes on an interval; "
                    "no deconvolution inequality is possible")
        return best

    return g1


def g1_profile(noise: NoiseModel) -> CfProfile:
    """Decay profile (g, h, g1) of the noise characteristic function."""
    if noise.kind == "gaussian":
        s, = noise.params

        def g1(u):
            if not 0.0 < u <= 1.0:
                raise DomainError("u must lie in (0, 1]")
            return math.sqrt(-math.log(u)) / s if u < 1.0 else 0.0

        return CfProfile("gaussian",
                         lambda T: math.exp(-0.5 * (s * T) ** 2),
                         lambda T: 0.0,
                         g1)
    if noise.kind == "uniform":
        a, b = noise.params
        w = b - a
        if w < 1.0 - 1e-12:
            raise ProfileFailureError(
                "closed-form uniform profile certified only for width >= 1")

        def g1(u):
            if not 0.0 < u <= 1.0:
                raise DomainError("u must lie in (0, 1]")
            return u ** (-1.0 / 3.0) / w

        return CfProfile("uniform",
                         lambda T: (w * T) ** -1.5 if T > 0 else 1.0,
                         lambda T: math.sqrt(T),
                         g1)
    if noise.kind == "laplace":
        b, = noise.params

        def g1(u):
            if not 0.0 < u <= 1.0:
                raise DomainError("u must lie in (0, 1]")
            return math.sqrt(max(u ** -0.5 - 1.0, 0.0)) / b

        return CfProfile("laplace",
                         lambda T: 1.0 / (1.0 + (b * T) ** 2),
                         lambda T: 0.0,
                         g1)
    g1 = _numeric_g1(noise)
    return CfProfile("grid",
                     lambda T: None,  # no closed-form floor for grid noise
                     lambda T: math.sqrt(T),
                     g1)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def deconv_v_bound(noise: NoiseModel, d_tv: float) -> tuple[float, float]:
    """Window-difference bound: for T = g1(m1 d_tv), the expectation of
    v(T X - x0) differs between P and Q by at most (2 + sqrt(8 pi))/sqrt(T)."""
    if not 0.0 < d_tv <= 1.0:
        raise DomainError("d_tv must lie in (0, 1]")
    profile = g1_profile(noise)
    u = min(noise.m1 * d_tv, 1.0)
    T = profile.g1_of_u(u)
    return T, C_WINDOW / math.sqrt(T)


def ks_from_tv_bound(noise: NoiseModel, m2: float, first_moments: tuple[float, float],
                     profile: CfProfile, T: float, d_tv: float,
                     w1: float | None = None) -> float:
    """KS bound from a post-convolution TV distance, given a (g, h) profile.

    T h(T)/pi + (24 m2 + 2 (E_P|X| + E_Q|X|)) / (pi T)
      + (2T)^{3/2} / (sqrt(pi) g(T)) sqrt(m1 d_tv).

    Passing w1 = W_1(P*P_Z, Q*P_Z) switches the last term to the refined
    2 T w1 / (pi g(T)) form, valid when second moments are finite.
    """
    if T <= 0:
        raise DomainError("T must be positive")
    if not 0.0 <= d_tv <= 1.0:
        raise DomainError("d_tv must lie in [0, 1]")
    mp, mq = first_moments
    term1 = T * profile.h_of_T(T) / math.pi
    term2 = (24.0 * m2 + 2.0 * (mp + mq)) / (math.pi * T)
    g = profile.g_of_T(T)
    if g is None or g <= 0:
        raise ProfileFailureError("profile has no positive CF floor at this T")
    if w1 is None:
        term3 = (2.0 * T) ** 1.5 / (math.sqrt(math.pi) * g) * math.sqrt(noise.m1 * d_tv)
    else:
        term3 = 2.0 * T * w1 / (math.pi * g)
    return term1 + term2 + term3


def _cf_envelope(noise: NoiseModel, t_hi: float, step: float = 5e-5):
    """Running minimum of |phi_Z| on [0, t_hi], sampled at `step`."""
    omegas = np.arange(0.0, t_hi + step, step)
    if noise.kind in ("gaussian", "uniform", "laplace"):
        cf = np.asarray(noise.abs_cf(omegas))
    else:
        cf = _cf_abs(noise.grid_density, omegas, chunk=4096)
    return omegas, np.minimum.accumulate(cf)


def ks_deconv_solve(noise: NoiseModel, d_tv: float, m2: float,
                    first_moments: tuple[float, float]) -> float:
    """KS bound 2 C0 / T where T solves g(T)^2 = d_tv T^5, g = inf |phi_Z|.

    Gaussian noise takes the fast path T = sqrt(log(1/d_tv)/2).  For other
    noise the running-minimum CF envelope is used; the solved T always lies
    before any CF zero, so no zero enters the working frequency range.
    """
    if not 0.0 < d_tv < 1.0:
        raise DomainError("d_tv must lie in (0, 1)")
    mp, mq = first_moments
    c0 = max(24.0 * m2 + 2.0 * (mp + mq), math.sqrt(8.0 * noise.m1 * math.pi)) / math.pi
    if noise.kind == "gaussian":
        s, = noise.params
        T = math.sqrt(math.log(1.0 / d_tv) / 2.0) / s
        return 2.0 * c0 / T
    t_hi = 2.0
    while True:
        omegas, env = _cf_envelope(noise, t_hi)
        f = env ** 2 - d_tv * omegas ** 5
        if f[-1] < 0:
            break
        t_hi *= 2.0
        if t_hi > 1e5:
            raise ProfileFailureError("no root found: CF decays too slowly")
    idx = int(np.argmax(f < 0))
    if idx == 0:
        raise DomainError("d_tv too large: no positive root")
    # g is (numerically) constant across one sample step; solve exactly there
    g0 = env[idx - 1]
    if g0 <= 1e-300:
        raise ProfileFailureError("characteristic function has a zero before the root")
    T = (g0 * g0 / d_tv) ** 0.2
    T = min(max(T, omegas[idx - 1]), omegas[idx])
    return 2.0 * c0 / T


def deconv_root_residual(noise: NoiseModel, d_tv: float) -> tuple[float, float]:
    """The solved T and the residual |g(T)^2 - d_tv T^5| (diagnostic)."""
    t_hi = 2.0
    while True:
        omegas, env = _cf_envelope(noise, t_hi)
        f = env ** 2 - d_tv * omegas ** 5
        if f[-1] < 0:
            break
        t_hi *= 2.0
    idx = int(np.argmax(f < 0))
    g0 = env[idx - 1]
    T = (g0 * g0 / d_tv) ** 0.2
    T = min(max(T, omegas[idx - 1]), omegas[idx])
    return T, abs(g0 * g0 - d_tv * T ** 5)
