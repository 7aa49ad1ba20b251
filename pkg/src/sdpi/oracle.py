"""Independent brute-force ground truth.

Nothing here shares a code path with the closed forms it validates beyond
the primitives in core_prob: mutual informations are recomputed from scratch
(lattice entropies, Monte Carlo, direct quadrature) so that agreement is
evidence, not circularity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.special import logsumexp

from .channels import DMCKernel, NoiseModel
from .core_prob import DiscretePMF
from .errors import BudgetError, DomainError

_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(127)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


# ---------------------------------------------------------------------------
# exhaustive coupling search on the simplex lattice
# ---------------------------------------------------------------------------

def _comp4_tables(n: int) -> list[np.ndarray]:
    """comp4[r]: all compositions of r into 4 nonnegative parts."""
    tables = []
    for r in range(n + 1):
        rows = []
        for c1 in range(r + 1):
            for c2 in range(r - c1 + 1):
                for c3 in range(r - c1 - c2 + 1):
                    rows.append((c1, c2, c3, r - c1 - c2 - c3))
        tables.append(np.array(rows, dtype=np.int32))
    return tables


def _iter_compositions(n: int, cells: int, comp4):
    """Yield batches (2-d int arrays) of compositions of n into `cells` parts."""
    if cells == 4:
        yield comp4[n]
        return
    head = np.zeros(cells - 4, dtype=np.int32)

    def rec(pos: int, remaining: int):
        if pos == cells - 4:
            tail = comp4[remaining]
            batch = np.empty((len(tail), cells), dtype=np.int32)
            batch[:, :cells - 4] = head
            batch[:, cells - 4:] = tail
            yield batch
            return
        for c in range(remaining + 1):
            head[pos] = c
            yield from rec(pos + 1, remaining - c)

    yield from rec(0, n)


def _xlogx_table(n: int) -> np.ndarray:
    k = np.arange(n + 1, dtype=float)
    t = np.zeros(n + 1)
    t[1:] = (k[1:] / n) * np.log(k[1:] / n)
    return t


def _xlogx(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    m = a > 0
    out[m] = a[m] * np.log(a[m])
    return out


_ENVELOPE_CACHE: dict = {}


def _bruteforce_envelope(K: DMCKernel, w_size: int, resolution: int,
                         max_points: float):
    """Staircase: bin_width, running max of I_WY over bins of I_WX, and the
    per-bin argmax couplings (used as warm starts for the polish step)."""
    key = (K.matrix.tobytes(), K.matrix.shape, w_size, resolution)
    if key in _ENVELOPE_CACHE:
        return _ENVELOPE_CACHE[key]
    nx, ny = K.matrix.shape
    cells = w_size * nx
    n = resolution
    total = comb(n + cells - 1, cells - 1)
    if total > max_points:
        raise BudgetError(f"{total} lattice points exceed the budget {max_points:g}")
    comp4 = _comp4_tables(n)
    xlx = _xlogx_table(n)
    bin_w = 1e-4
    n_bins = int(math.log(min(nx, w_size) + 1) / bin_w) + 2
    bin_vals = np.full(n_bins, -np.inf)
    bin_rows = np.zeros((n_bins, cells))
    Km = K.matrix
    for batch in _iter_compositions(n, cells, comp4):
        c = batch.reshape(len(batch), w_size, nx)
        h_wx = xlx[c].sum(axis=(1, 2))
        h_w = xlx[c.sum(axis=2)].sum(axis=1)
        h_x = xlx[c.sum(axis=1)].sum(axis=1)
        i_wx = np.maximum(h_wx - h_w - h_x, 0.0)
        q = c / n
        p_wy = q @ Km
        i_wy = _xlogx(p_wy).sum(axis=(1, 2)) - h_w \
            - _xlogx(p_wy.sum(axis=1)).sum(axis=1)
        i_wy = np.maximum(i_wy, 0.0)
        # bin by the ceiling so bin b only holds samples with I_WX <= b*bin_w
        bins = np.ceil(i_wx / bin_w - 1e-12).astype(np.int64)
        bins = np.clip(bins, 0, n_bins - 1)
        np.maximum.at(bin_vals, bins, i_wy)
        hit = i_wy >= bin_vals[bins]
        bin_rows[bins[hit]] = q.reshape(len(q), cells)[hit]
    stair = np.maximum.accumulate(bin_vals)
    _ENVELOPE_CACHE[key] = (bin_w, stair, bin_vals, bin_rows)
    return _ENVELOPE_CACHE[key]


def _joint_mi_pair(q: np.ndarray, Km: np.ndarray, w_size: int) -> tuple[float, float]:
    """(I(W;X), I(W;Y)) for a joint pmf q over W x X, Y = X through Km."""
    j = np.clip(q, 0.0, None).reshape(w_size, Km.shape[0])
    j = j / j.sum()
    pw, px = j.sum(axis=1), j.sum(axis=0)
    i_wx = _xlogx(j).sum() - _xlogx(pw).sum() - _xlogx(px).sum()
    jy = j @ Km
    i_wy = _xlogx(jy).sum() - _xlogx(pw).sum() - _xlogx(jy.sum(axis=0)).sum()
    return max(float(i_wx), 0.0), max(float(i_wy), 0.0)


def _polish_coupling(q0: np.ndarray, Km: np.ndarray, w_size: int,
                     t: float) -> float:
    """Local continuous refinement of the best lattice coupling.

    Runs SLSQP on max I(W;Y) s.t. I(W;X) <= t from the lattice argmax, then
    re-evaluates the polished point exactly and enforces the constraint (by
    mixing toward the product of its marginals if needed), so the returned
    value is still a certified achievable point.
    """
    from scipy.optimize import minimize
    cells = q0.size
    start = 0.98 * q0 + 0.02 / cells

    def neg_iwy(q):
        return -_joint_mi_pair(q, Km, w_size)[1]

    def slack(q):
        return t - _joint_mi_pair(q, Km, w_size)[0]

    res = minimize(neg_iwy, start, method="SLSQP",
                   bounds=[(0.0, 1.0)] * cells,
                   constraints=[{"type": "eq", "fun": lambda q: q.sum() - 1.0},
                                {"type": "ineq", "fun": slack}],
                   options={"maxiter": 200, "ftol": 1e-12})
    q = np.clip(res.x, 0.0, None)
    if q.sum() <= 0:
        return 0.0
    q = q / q.sum()
    prod = np.outer(q.reshape(w_size, -1).sum(axis=1),
                    q.reshape(w_size, -1).sum(axis=0)).ravel()
    lam_lo, lam_hi = 0.0, 1.0
    if _joint_mi_pair(q, Km, w_size)[0] > t:
        for _ in range(60):  # mix toward independence until feasible
            lam = 0.5 * (lam_lo + lam_hi)
            if _joint_mi_pair((1 - lam) * q + lam * prod, Km, w_size)[0] > t:
                lam_lo = lam
            else:
                lam_hi = lam
        q = (1 - lam_hi) * q + lam_hi * prod
    i_wx, i_wy = _joint_mi_pair(q, Km, w_size)
    return i_wy if i_wx <= t + 1e-15 else 0.0


def fi_bruteforce_dmc(K: DMCKernel, t: float, w_size: int = 3,
                      resolution: int = 60, max_points: float = 3e7) -> float:
    """Exhaustive lattice search: max I(W;Y) over couplings with I(W;X) <= t.

    The coupling simplex is discretized on the (k/n) lattice; the result is
    a certified lower bound on F_I(t) at the stated resolution.
    """
    if t < 0:
        raise DomainError("t must be nonnegative")
    nx = K.matrix.shape[0]
    if nx > 3:
        raise BudgetError("brute force restricted to |X| <= 3")
    if w_size > nx + 1:
        raise DomainError("w_size must be at most |X| + 1")
    if resolution < 10:
        raise DomainError("resolution must be >= 10")
    bin_w, stair, bin_vals, bin_rows = _bruteforce_envelope(
        K, w_size, resolution, max_points)
    b = int(math.floor(t / bin_w + 1e-12))
    b = min(b, len(stair) - 1)
    val = float(max(stair[b], 0.0))
    if t > 0 and np.isfinite(stair[b]):
        best = int(np.argmax(bin_vals[:b + 1]))
        polished = _polish_coupling(bin_rows[best].copy(), K.matrix, w_size, t)
        val = max(val, polished)
    return val


# ---------------------------------------------------------------------------
# Monte Carlo mutual information
# ---------------------------------------------------------------------------

def _sample_noise(noise: NoiseModel, n: int, rng) -> np.ndarray:
    if noise.kind == "gaussian":
        return noise.params[0] * rng.standard_normal(n)
    if noise.kind == "uniform":
        a, b = noise.params
        return rng.uniform(a, b, n)
    if noise.kind == "laplace":
        return rng.laplace(0.0, noise.params[0], n)
    g = noise.grid_density
    c = g.cdf_values()
    c = c / c[-1]
    c = np.maximum.accumulate(c + 1e-15 * np.arange(len(c)))
    return np.interp(rng.uniform(0.0, 1.0, n), c, g.grid)


def mc_mutual_info(input: DiscretePMF, noise: NoiseModel, gamma: float,
                   n_samples: int = 10 ** 6, seed: int = 0) -> tuple[float, float]:
    """MI estimate by density-ratio averaging; returns (estimate, 3-sigma)."""
    if n_samples < 10 ** 5:
        raise DomainError("need at least 1e5 samples")
    rng = np.random.default_rng(seed)
    atoms, weights = input.atoms, input.weights
    mu = math.sqrt(gamma) * atoms
    idx = rng.choice(len(atoms), size=n_samples, p=weights)
    z = _sample_noise(noise, n_samples, rng)
    y = mu[idx] + z
    chunk = 200_000
    vals = np.empty(n_samples)
    logw = np.log(np.maximum(weights, 1e-300))
    for i in range(0, n_samples, chunk):
        yc = y[i:i + chunk]
        if noise.kind == "gaussian":
            s = noise.params[0]
            le = logw[None, :] - 0.5 * ((yc[:, None] - mu[None, :]) / s) ** 2
            log_py = logsumexp(le, axis=1)
            log_cond = -0.5 * ((yc - mu[idx[i:i + chunk]]) / s) ** 2
        else:
            dens = np.stack([np.asarray(noise.density(yc - m)) for m in mu], axis=1)
            log_py = np.log(np.maximum((dens * weights[None, :]).sum(axis=1), 1e-300))
            cond = dens[np.arange(len(yc)), idx[i:i + chunk]]
            log_cond = np.log(np.maximum(cond, 1e-300))
            vals[i:i + chunk] = log_cond - log_py
            continue
        vals[i:i + chunk] = log_cond - log_py
    est = float(vals.mean())
    ci = 3.0 * float(vals.std(ddof=1)) / math.sqrt(n_samples)
    return est, ci


# ---------------------------------------------------------------------------
# random coupling sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepResult:
    samples: np.ndarray  # columns: I_WX, I_WY
    seed: int
    violation_count: int
    tolerance: float
    violations: tuple = field(default_factory=tuple)


def _mi_discrete_joint(pw: np.ndarray, rows: np.ndarray) -> float:
    joint = pw[:, None] * rows
    px = joint.sum(axis=0)
    val = _xlogx(joint).sum() - _xlogx(pw).sum() - _xlogx(px).sum()
    return max(float(val), 0.0)


def _mi_wy_gaussian(mu: np.ndarray, pw: np.ndarray, rows: np.ndarray) -> float:
    """I(W;Y), Y = mixture of unit Gaussians at mu, mixed per row of rows."""
    y = mu[:, None] + math.sqrt(2.0) * _GH_NODES[None, :]          # (k, j)
    E = -0.5 * (y[:, :, None] - mu[None, None, :]) ** 2            # (k, j, l)
    px = pw @ rows
    log_py = logsumexp(E + np.log(np.maximum(px, 1e-300)), axis=2)
    ghw = _GH_WEIGHTS / math.sqrt(math.pi)
    total = 0.0
    for w in range(len(pw)):
        if pw[w] <= 0:
            continue
        log_pw = logsumexp(E + np.log(np.maximum(rows[w], 1e-300)), axis=2)
        inner = ((log_pw - log_py) * ghw[None, :]).sum(axis=1)     # per atom k
        total += pw[w] * float(rows[w] @ inner)
    return max(total, 0.0)


def _uniform_mixture_entropy(mu: np.ndarray, v: np.ndarray, a: float, b: float) -> float:
    width = b - a
    edges = np.unique(np.concatenate([mu + a, mu + b]))
    h = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid = 0.5 * (lo + hi)
        dens = v[(mid >= mu + a) & (mid <= mu + b)].sum() / width
        if dens > 0:
            h -= (hi - lo) * dens * math.log(dens)
    return h


def _mi_wy_uniform(mu: np.ndarray, pw: np.ndarray, rows: np.ndarray,
                   a: float, b: float) -> float:
    px = pw @ rows
    h_y = _uniform_mixture_entropy(mu, px, a, b)
    h_cond = sum(pw[w] * _uniform_mixture_entropy(mu, rows[w], a, b)
                 for w in range(len(pw)) if pw[w] > 0)
    return max(h_y - h_cond, 0.0)


def sdpi_pair_sampler(noise: NoiseModel, gamma: float, p: float,
                      n_couplings: int, seed: int = 0,
                      diag_bound=None, horiz_bound=None,
                      tolerance: float = 3e-4, eps_max: float = 1e-3,
                      horiz_tolerance: float = 1e-6,
                      capacity: float | None = None,
                      w_max: int = 4, atoms_max: int = 6) -> SweepResult:
    """Random couplings with E|X|^p = gamma budget met with equality.

    Computes (I(W;X), I(W;Y)) per coupling and counts violations against the
    supplied diagonal bound curve (t -> g_d(t)) and, when `capacity` is set,
    the horizontal curve (eps -> minimal I(W;X); may return None when the
    bound is not applicable at that eps).
    """
    rng = np.random.default_rng(seed)
    samples = np.empty((n_couplings, 2))
    violations = []
    for i in range(n_couplings):
        nw = int(rng.integers(2, w_max + 1))
        k = int(rng.integers(2, atoms_max + 1))
        atoms = np.sort(rng.standard_normal(k))
        while np.any(np.diff(atoms) < 1e-6):
            atoms = np.sort(rng.standard_normal(k))
        pw = rng.dirichlet(np.ones(nw))
        rows = rng.dirichlet(np.ones(k), size=nw)
        px = pw @ rows
        moment = float(px @ np.abs(atoms) ** p)
        i_wx = _mi_discrete_joint(pw, rows)
        if noise.kind == "gaussian":
            # AWGN convention: E|X|^p = 1 budget, channel applies sqrt(gamma)
            atoms = atoms * (1.0 / moment) ** (1.0 / p)
            mu = math.sqrt(gamma) * atoms / noise.params[0]
            i_wy = _mi_wy_gaussian(mu, pw, rows)
        elif noise.kind == "uniform":
            # general-noise convention: Y = X + Z with E|X|^p = gamma
            atoms = atoms * (gamma / moment) ** (1.0 / p)
            i_wy = _mi_wy_uniform(atoms, pw, rows, *noise.params)
        else:
            raise DomainError("sampler supports gaussian and uniform noise")
        samples[i] = (i_wx, i_wy)
        if diag_bound is not None and i_wx > 0:
            gd = diag_bound(i_wx)
            if i_wy > i_wx - gd + tolerance:
                violations.append(("diag", i, i_wx, i_wy))
        if horiz_bound is not None and capacity is not None:
            eps = capacity - i_wy
            if 0 < eps <= eps_max:
                t_min = horiz_bound(eps)
                if t_min is not None and i_wx < t_min - horiz_tolerance:
                    violations.append(("horiz", i, i_wx, i_wy))
    return SweepResult(samples, seed, len(violations), tolerance, tuple(violations))
