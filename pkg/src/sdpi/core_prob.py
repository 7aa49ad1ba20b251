"""Foundational probability objects, special functions and distances.

Everything here is a pure function of immutable inputs.  Distributions come
in two flavors: finitely supported (`DiscretePMF`) and density-on-a-grid
(`GridDensity`).  All information quantities use natural logarithms.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError, ShapeError, TruncationWarning

LOG2 = math.log(2.0)

_ATOM_MATCH_TOL = 1e-9
_WEIGHT_SUM_TOL = 1e-12
_GRID_INTEGRAL_TOL = 1e-8


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscretePMF:
    """Finitely supported real-valued distribution (sorted atoms + weights)."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if atoms.ndim != 1 or weights.ndim != 1 or atoms.size != weights.size:
            raise ShapeError("atoms and weights must be 1-d arrays of equal length")
        if atoms.size == 0:
            raise DomainError("empty support")
        if np.any(np.diff(atoms) <= 0):
            raise DomainError("atoms must be strictly increasing")
        if np.any(weights < 0):
            raise DomainError("weights must be nonnegative")
        if abs(weights.sum() - 1.0) > _WEIGHT_SUM_TOL:
            raise DomainError(f"weights sum to {weights.sum()!r}, not 1")
        atoms.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "weights", weights)

    @staticmethod
    def from_pairs(pairs) -> "DiscretePMF":
        """Build from unsorted (atom, weight) pairs, merging duplicates."""
        pairs = sorted(pairs)
        atoms, weights = [], []
        for a, w in pairs:
            if atoms and abs(a - atoms[-1]) <= _ATOM_MATCH_TOL:
                weights[-1] += w
            else:
                atoms.append(a)
                weights.append(w)
        return DiscretePMF(np.array(atoms), np.array(weights))

    @staticmethod
    def point_mass(a: float) -> "DiscretePMF":
        return DiscretePMF(np.array([a]), np.array([1.0]))

    def mean(self) -> float:
        return float(self.weights @ self.atoms)

    def var(self) -> float:
        m = self.mean()
        return float(self.weights @ (self.atoms - m) ** 2)

    def abs_moment(self, p: float) -> float:
        return float(self.weights @ np.abs(self.atoms) ** p)

    def cdf(self, x) -> np.ndarray:
        """Right-continuous CDF evaluated at x (scalar or array)."""
        x = np.asarray(x, dtype=float)
        cum = np.cumsum(self.weights)
        idx = np.searchsorted(self.atoms, x, side="right")
        out = np.where(idx > 0, cum[np.minimum(idx, len(cum)) - 1], 0.0)
        return out if out.ndim else float(out)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("atom,weight\n")
        for a, w in zip(self.atoms, self.weights):
            buf.write(f"{float(a)!r},{float(w)!r}\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "DiscretePMF":
        rows = [ln for ln in text.strip().splitlines() if ln and not ln.startswith("#")]
        if rows and rows[0].strip().lower() == "atom,weight":
            rows = rows[1:]
        pairs = [tuple(map(float, ln.split(","))) for ln in rows]
        return DiscretePMF.from_pairs(pairs)


@dataclass(frozen=True)
class GridDensity:
    """Density sampled on a uniform grid; trapezoid integral is 1."""

    x_min: float
    x_max: float
    step: float
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if self.step <= 0:
            raise DomainError("step must be positive")
        n_cells = (self.x_max - self.x_min) / self.step
        if abs(n_cells - round(n_cells)) > 1e-9:
            raise DomainError("grid span is not a whole number of cells")
        if values.ndim != 1 or values.size != round(n_cells) + 1:
            raise ShapeError("values length does not match the grid")
        if np.any(values < 0):
            raise DomainError("density values must be nonnegative")
        integral = float(np.trapezoid(values, dx=self.step))
        if abs(integral - 1.0) > _GRID_INTEGRAL_TOL:
            raise DomainError(f"trapezoid integral is {integral!r}, not 1")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @staticmethod
    def from_function(f, x_min: float, x_max: float, step: float,
                      renormalize: bool = True) -> "GridDensity":
        n = int(round((x_max - x_min) / step))
        x = x_min + step * np.arange(n + 1)
        v = np.maximum(np.asarray(f(x), dtype=float), 0.0)
        if renormalize:
            z = np.trapezoid(v, dx=step)
            if z <= 0:
                raise DomainError("function integrates to zero on the grid")
            v = v / z
        return GridDensity(x_min, x_min + n * step, step, v)

    @property
    def grid(self) -> np.ndarray:
        n = int(round((self.x_max - self.x_min) / self.step))
        return self.x_min + self.step * np.arange(n + 1)

    def cdf_values(self) -> np.ndarray:
        """Trapezoid cumulative integral at the grid nodes (starts at 0)."""
        v = self.values
        inc = 0.5 * (v[:-1] + v[1:]) * self.step
        return np.concatenate([[0.0], np.cumsum(inc)])

    def cdf(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        c = self.cdf_values()
        out = np.interp(x, self.grid, c, left=0.0, right=c[-1])
        return out if out.ndim else float(out)

    def mean(self) -> float:
        return float(np.trapezoid(self.grid * self.values, dx=self.step))

    def var(self) -> float:
        m = self.mean()
        return float(np.trapezoid((self.grid - m) ** 2 * self.values, dx=self.step))

    def abs_moment(self, p: float) -> float:
        return float(np.trapezoid(np.abs(self.grid) ** p * self.values, dx=self.step))

    def max_density(self) -> float:
        return float(self.values.max())

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,value\n")
        for x, v in zip(self.grid, self.values):
            buf.write(f"{float(x)!r},{float(v)!r}\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "GridDensity":
        rows = [ln for ln in text.strip().splitlines() if ln and not ln.startswith("#")]
        if rows and rows[0].strip().lower() == "x,value":
            rows = rows[1:]
        data = np.array([[float(c) for c in ln.split(",")] for ln in rows])
        x, v = data[:, 0], data[:, 1]
        steps = np.diff(x)
        step = float(np.median(steps))
        if np.any(np.abs(steps - step) > 1e-9 * max(1.0, abs(step))):
            raise ShapeError("grid nodes are not uniformly spaced")
        return GridDensity(float(x[0]), float(x[-1]), step, v)


Distribution = DiscretePMF | GridDensity


@dataclass(frozen=True)
class Ccurve:
    """A sampled curve: strictly increasing arguments with finite values."""

    points: tuple
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ts = np.array([p[0] for p in self.points], dtype=float)
        vs = np.array([p[1] for p in self.points], dtype=float)
        if len(ts) and np.any(np.diff(ts) <= 0):
            raise DomainError("curve arguments must be strictly increasing")
        if not np.all(np.isfinite(vs)):
            raise DomainError("curve values must be finite")
        object.__setattr__(self, "points", tuple((float(t), float(v)) for t, v in self.points))

    @property
    def arguments(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


@dataclass(frozen=True)
class BoundReport:
    """Universal output record: curve points, constants used, provenance notes."""

    name: str
    points: tuple
    constants: dict = field(default_factory=dict)
    notes: tuple = ()


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def binary_entropy(p: float) -> float:
    """Binary entropy h_b(p) in nats, with the 0*log(1/0)=0 convention."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * math.log(p) - (1.0 - p) * math.log1p(-p))


def binary_entropy_inv(h: float) -> float:
    """Inverse of h_b restricted to [0, 1/2], by bisection to 1e-12."""
    if not 0.0 <= h <= LOG2 + 1e-15:
        raise DomainError(f"h={h} outside [0, log 2]")
    h = min(h, LOG2)
    if h == 0.0:
        return 0.0
    lo, hi = 0.0, 0.5
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        if binary_entropy(mid) < h:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def q_function(x) -> float | np.ndarray:
    """Gaussian complementary CDF Q(x) = P[N(0,1) > x]."""
    x = np.asarray(x, dtype=float)
    out = 0.5 * special.erfc(x / math.sqrt(2.0))
    return out if out.ndim else float(out)


def q_inverse(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise DomainError(f"p={p} outside (0, 1)")
    return float(math.sqrt(2.0) * special.erfcinv(2.0 * p))


def max_entropy_integer(mean_abs: float) -> float:
    """Entropy cap for integer-valued variables with E|U| <= mean_abs."""
    if mean_abs < 0:
        raise DomainError("mean_abs must be nonnegative")
    m = mean_abs
    return (m + 1.0) * binary_entropy(1.0 / (m + 1.0)) + LOG2


def v_window(x) -> float | np.ndarray:
    """The spectral window v(x) = 2(1-cos x)/x^2, with v(0)=1 by the series."""
    x = np.asarray(x, dtype=float)
    # 2(1-cos x)/x^2 loses ~8 digits to cancellation below x ~ 1e-2; the
    # three-term series is exact to <1e-16 relative there
    small = np.abs(x) < 1e-2
    xs = np.where(small, 1.0, x)
    out = np.where(small,
                   1.0 - x * x / 12.0 + x ** 4 / 360.0,
                   2.0 * (1.0 - np.cos(xs)) / (xs * xs))
    return out if out.ndim else float(out)


def v_hat(omega) -> float | np.ndarray:
    """Fourier transform of v_window: a triangle 2*pi*(1-|w|)^+."""
    omega = np.asarray(omega, dtype=float)
    out = 2.0 * math.pi * np.maximum(1.0 - np.abs(omega), 0.0)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# distances and divergences
# ---------------------------------------------------------------------------

def _xlogx(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    mask = v > 0
    out[mask] = v[mask] * np.log(v[mask])
    return out


def _align_atoms(P: DiscretePMF, Q: DiscretePMF):
    """Union support with weights; atoms matched within tolerance."""
    merged = {}
    for a in np.concatenate([P.atoms, Q.atoms]):
        key = round(a / _ATOM_MATCH_TOL)
        # collapse near-duplicates onto one representative
        for k in (key - 1, key, key + 1):
            if k in merged:
                key = k
                break
        merged.setdefault(key, a)
    keys = sorted(merged, key=lambda k: merged[k])
    atoms = np.array([merged[k] for k in keys])

    def project(D):
        w = np.zeros(len(atoms))
        idx = np.searchsorted(atoms, D.atoms)
        idx = np.clip(idx, 0, len(atoms) - 1)
        for j, (a, wt) in enumerate(zip(D.atoms, D.weights)):
            i = idx[j]
            if i > 0 and abs(atoms[i - 1] - a) < abs(atoms[i] - a):
                i -= 1
            if abs(atoms[i] - a) > 10 * _ATOM_MATCH_TOL:
                raise ShapeError("atom alignment failed")
            w[i] += wt
        return w

    return atoms, project(P), project(Q)


def _require_same_grid(P: GridDensity, Q: GridDensity):
    if (abs(P.x_min - Q.x_min) > 1e-9 or abs(P.x_max - Q.x_max) > 1e-9
            or abs(P.step - Q.step) > 1e-12):
        raise ShapeError("grid densities are not aligned")


def kl_divergence(P: Distribution, Q: Distribution) -> float:
    """D(P || Q) in nats; +inf when P has mass where Q vanishes."""
    if isinstance(P, DiscretePMF) and isinstance(Q, DiscretePMF):
        _, p, q = _align_atoms(P, Q)
        if np.any((p > 0) & (q <= 0)):
            return math.inf
        mask = p > 0
        d = float(np.sum(p[mask] * np.log(p[mask] / q[mask])))
    elif isinstance(P, GridDensity) and isinstance(Q, GridDensity):
        _require_same_grid(P, Q)
        p, q = P.values, Q.values
        # trapezoid weights
        w = np.full_like(p, P.step)
        w[0] = w[-1] = 0.5 * P.step
        if np.any((p > 1e-15) & (q <= 1e-300)):
            return math.inf
        mask = p > 0
        d = float(np.sum(w[mask] * p[mask] * np.log(p[mask] / np.maximum(q[mask], 1e-300))))
    else:
        raise ShapeError("kl_divergence requires same-kind inputs")
    # quadrature can produce a tiny negative for P ~= Q
    return max(d, 0.0) if d > -1e-10 else d


def tv_distance(P: Distribution, Q: Distribution) -> float:
    """Total variation: half the L1 distance of weights / densities."""
    if isinstance(P, DiscretePMF) and isinstance(Q, DiscretePMF):
        _, p, q = _align_atoms(P, Q)
        return float(0.5 * np.abs(p - q).sum())
    if isinstance(P, GridDensity) and isinstance(Q, GridDensity):
        _require_same_grid(P, Q)
        return float(0.5 * np.trapezoid(np.abs(P.values - Q.values), dx=P.step))
    raise ShapeError("tv_distance requires same-kind inputs")


def _cdf_eval_points(P: Distribution, Q: Distribution) -> np.ndarray:
    pts = []
    for D in (P, Q):
        if isinstance(D, DiscretePMF):
            pts.append(D.atoms)
            pts.append(D.atoms - 1e-12 * np.maximum(1.0, np.abs(D.atoms)))
        else:
            pts.append(D.grid)
    return np.unique(np.concatenate(pts))


def ks_distance(P: Distribution, Q: Distribution) -> float:
    """Kolmogorov-Smirnov distance: sup-norm of the CDF difference.

    Evaluated at all grid nodes, atoms and their left limits, so jumps of
    atomic CDFs are captured on both sides.
    """
    x = _cdf_eval_points(P, Q)
    return float(np.max(np.abs(np.asarray(P.cdf(x)) - np.asarray(Q.cdf(x)))))


def levy_concentration(P: Distribution, delta: float) -> float:
    """Levy concentration: sup over centers x of P[x - delta, x + delta]."""
    if delta < 0:
        raise DomainError("delta must be nonnegative")
    if isinstance(P, DiscretePMF):
        # the sup is attained with the window's left edge at an atom
        hi = np.searchsorted(P.atoms, P.atoms + 2.0 * delta + _ATOM_MATCH_TOL, side="left")
        cum = np.concatenate([[0.0], np.cumsum(P.weights)])
        lo = np.arange(len(P.atoms))
        return float(np.max(cum[hi] - cum[lo]))
    c = P.cdf_values()
    x = P.grid
    mass = np.interp(x + delta, x, c, left=0.0, right=c[-1]) \
        - np.interp(x - delta, x, c, left=0.0, right=c[-1])
    return float(np.max(mass))


def char_fn(P: Distribution, omega) -> complex | np.ndarray:
    """Characteristic function E[exp(i w X)] by atom sum or trapezoid."""
    omega = np.asarray(omega, dtype=float)
    w = omega.reshape(-1, 1)
    if isinstance(P, DiscretePMF):
        out = (P.weights * np.exp(1j * w * P.atoms)).sum(axis=1)
    else:
        x = P.grid
        tw = np.full_like(P.values, P.step)
        tw[0] = tw[-1] = 0.5 * P.step
        out = ((P.values * tw) * np.exp(1j * w * x)).sum(axis=1)
    return out.reshape(omega.shape) if omega.ndim else complex(out[0])


def wasserstein(P: Distribution, Q: Distribution, order: int = 1) -> float:
    """W_1 or W_2 via the scalar quantile coupling."""
    if order not in (1, 2):
        raise DomainError("order must be 1 or 2")
    n = 200_001
    u = (np.arange(n) + 0.5) / n

    def quantiles(D):
        if isinstance(D, DiscretePMF):
            cum = np.cumsum(D.weights)
            idx = np.minimum(np.searchsorted(cum, u, side="left"), len(D.atoms) - 1)
            return D.atoms[idx]
        c = D.cdf_values()
        c = c / c[-1]
        # make strictly increasing for interp
        c = np.maximum.accumulate(c + 1e-15 * np.arange(len(c)))
        return np.interp(u, c, D.grid)

    d = np.abs(quantiles(P) - quantiles(Q))
    if order == 1:
        return float(d.mean())
    return float(math.sqrt((d * d).mean()))


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------

def convolve(P: Distribution, Z: GridDensity, max_span: float | None = None) -> GridDensity:
    """Density of X + Z on the enlarged grid, renormalized to integrate to 1.

    Atomic P: direct sum of shifted noise densities; off-grid atoms are split
    linearly between the two neighboring offsets (mass- and mean-preserving).
    Grid P: full discrete convolution (equal steps required).

    With max_span the output is clipped to [-max_span, max_span]; mass beyond
    1e-6 lost to clipping raises a TruncationWarning carrying the amount.
    """
    step = Z.step
    if isinstance(P, DiscretePMF):
        a_min, a_max = float(P.atoms[0]), float(P.atoms[-1])
        x_min = math.floor((a_min + Z.x_min) / step) * step
        n = int(math.ceil((a_max + Z.x_max - x_min) / step)) + 1
        vals = np.zeros(n + 1)
        nz = len(Z.values)
        for a, wt in zip(P.atoms, P.weights):
            off = (a + Z.x_min - x_min) / step
            i0 = int(math.floor(off))
            frac = off - i0
            vals[i0:i0 + nz] += wt * (1.0 - frac) * Z.values
            vals[i0 + 1:i0 + 1 + nz] += wt * frac * Z.values
        out_min = x_min
    else:
        if abs(P.step - step) > 1e-12:
            raise ShapeError("noise grid step must match the input grid step")
        vals = np.convolve(P.values, Z.values) * step
        out_min = P.x_min + Z.x_min
        n = len(vals) - 1

    grid = out_min + step * np.arange(n + 1)
    if max_span is not None:
        keep = np.abs(grid) <= max_span + 1e-12
        total = np.trapezoid(vals, dx=step)
        lost = total - np.trapezoid(vals[keep], dx=step)
        if lost > 1e-6:
            warnings.warn(TruncationWarning(float(lost)))
        grid, vals = grid[keep], vals[keep]
        out_min = float(grid[0])

    z = np.trapezoid(vals, dx=step)
    return GridDensity(out_min, float(grid[-1]), step, vals / z)


def gaussian_grid(mu: float = 0.0, sigma: float = 1.0, span_sd: float = 10.0,
                  step: float = 0.01) -> GridDensity:
    """Gaussian density truncated at +- span_sd standard deviations."""
    lo = mu - span_sd * sigma
    hi = mu + span_sd * sigma
    lo = math.floor(lo / step) * step
    hi = math.ceil(hi / step) * step
    return GridDensity.from_function(
        lambda x: np.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi)),
        lo, hi, step)
