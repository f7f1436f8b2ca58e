"""Kernel models, vaccination cost and effective reproduction number.

A strategy ``eta`` is a float array with one entry per class (or grid cell)
holding the proportion of NON-vaccinated people, so values lie in [0, 1].
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .quadrature import integrate
from .spectral import ORACLE_MAX_DIM, power_iteration

CONVEX = "ConvexRegime"
CONCAVE = "ConcaveRegime"
INDETERMINATE = "Indeterminate"


class ModelError(ValueError):
    """A model or population violates one of its invariants."""


class ShapeError(ValueError):
    pass


class UnsupportedStrategyShape(ValueError):
    pass


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Population:
    """Class sizes mu_i > 0 summing to one; ``grid`` marks cells on [0, 1)."""

    weights: np.ndarray
    grid: bool = False

    def __post_init__(self):
        w = _frozen(self.weights)
        if w.ndim != 1 or w.size == 0:
            raise ModelError("population weights must be a non-empty 1-d array")
        if not np.all(w > 0):
            raise ModelError("population weights must be positive")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ModelError(f"population weights must sum to 1 (got {w.sum():.16g})")
        object.__setattr__(self, "weights", w)

    @property
    def n(self):
        return self.weights.size

    @classmethod
    def uniform(cls, n):
        return cls(np.full(n, 1.0 / n))

    @classmethod
    def on_grid(cls, m):
        return cls(np.full(m, 1.0 / m), grid=True)

    @classmethod
    def dyadic(cls, min_mass=1e-14):
        """mu_i = 2^-i for every class of mass >= min_mass.

        The tail mass is folded into the last class, which therefore
        carries the same mass as its predecessor; all weights stay exact
        powers of two.
        """
        n = int(math.floor(-math.log2(min_mass)))
        w = 2.0 ** -np.arange(1, n + 1)
        w[-1] *= 2.0
        return cls(w)

    @property
    def edges(self):
        """Cumulative mass at cell boundaries, from 0 to 1."""
        e = np.concatenate([[0.0], np.cumsum(self.weights)])
        e[-1] = 1.0
        return e

    @property
    def centers(self):
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])


def as_strategy(eta, n):
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (n,):
        raise ShapeError(f"strategy has shape {eta.shape}, expected ({n},)")
    if np.any(eta < -1e-12) or np.any(eta > 1 + 1e-12) or not np.all(np.isfinite(eta)):
        raise ValueError("strategy values must lie in [0, 1]")
    return np.clip(eta, 0.0, 1.0)


def cost(pop, eta):
    """Vaccinated fraction C = 1 - sum(eta * mu)."""
    if isinstance(pop, Model):
        pop = pop.population
    eta = as_strategy(eta, pop.n)
    w = pop.weights
    if np.all(w == w[0]):
        # equal classes: exact for 0/1 strategies, e.g. 6 of 12 classes gives 1/2
        return float(np.clip(math.fsum(1.0 - eta) / pop.n, 0.0, 1.0))
    return float(np.clip(math.fsum((1.0 - eta) * w), 0.0, 1.0))


def interval_strategy(pop, lo, hi):
    """Indicator of the mass interval [lo, hi) in class order.

    Boundary cells get their fractional overlap so the cost is exactly
    1 - (hi - lo).
    """
    e = pop.edges
    overlap = np.clip(np.minimum(e[1:], hi) - np.maximum(e[:-1], lo), 0.0, None)
    return np.clip(overlap / pop.weights, 0.0, 1.0)


def top_eigenvalue_2x2(a11, a12, a21, a22):
    """Largest eigenvalue of a 2x2 matrix with real spectrum (vectorized)."""
    half_tr = 0.5 * (a11 + a22)
    disc = (0.5 * (a11 - a22)) ** 2 + a12 * a21
    return np.maximum(half_tr + np.sqrt(np.maximum(disc, 0.0)), 0.0)


class Model:
    """Common interface: population plus a kernel k(i, j) on classes."""

    tag = "model"

    def __init__(self, population):
        self.population = population

    @property
    def n(self):
        return self.population.n

    @property
    def weights(self):
        return self.population.weights

    def check(self, eta):
        return as_strategy(eta, self.n)

    def effective_R(self, eta):
        raise NotImplementedError

    def effective_R_batch(self, etas):
        return np.array([self.effective_R(e) for e in np.atleast_2d(etas)])

    def kernel_matrix(self):
        raise NotImplementedError

    def degree(self, eta, i=None):
        """Effective degree sum_j k(i, j) eta_j mu_j (all classes when i is None)."""
        eta = self.check(eta)
        d = self.kernel_matrix() @ (eta * self.weights)
        return d if i is None else float(d[i])

    @property
    def R0(self):
        return self.effective_R(np.ones(self.n))

    @property
    def symmetric(self):
        k = self.kernel_matrix()
        return bool(np.allclose(k, k.T, rtol=0, atol=1e-12 * max(1.0, np.abs(k).max())))


class DenseNextGen(Model):
    """Metapopulation model given by its next-generation matrix K_ij = k(i,j) mu_j."""

    tag = "dense"

    def __init__(self, K, population=None, tag=None):
        K = _frozen(K)
        if K.ndim != 2 or K.shape[0] != K.shape[1]:
            raise ModelError("next-generation matrix must be square")
        if np.any(K < 0):
            raise ModelError("next-generation matrix entries must be nonnegative")
        if population is None:
            population = Population.uniform(K.shape[0])
        if population.n != K.shape[0]:
            raise ModelError("population size does not match the matrix")
        super().__init__(population)
        self.K = K
        if tag is not None:
            self.tag = tag

    def matrix(self, eta):
        return self.K * self.check(eta)[None, :]

    def effective_R(self, eta):
        return power_iteration(self.matrix(eta)).radius

    def effective_R_batch(self, etas):
        etas = np.atleast_2d(etas)
        if self.n > ORACLE_MAX_DIM:
            return super().effective_R_batch(etas)
        lam = np.linalg.eigvals(self.K[None, :, :] * etas[:, None, :])
        return np.abs(lam).max(axis=1)

    def kernel_matrix(self):
        return self.K / self.weights[None, :]

    def degree(self, eta, i=None):
        d = self.K @ self.check(eta)
        return d if i is None else float(d[i])


class GridKernel(DenseNextGen):
    """Kernel sampled at cell centers: K_ij = k(x_i, x_j) mu_j."""

    tag = "grid"

    def __init__(self, values, population, tag=None):
        values = np.asarray(values, dtype=float)
        if values.shape != (population.n, population.n):
            raise ModelError("kernel values do not match the population size")
        if np.any(values < 0):
            raise ModelError("kernel values must be nonnegative")
        super().__init__(values * population.weights[None, :], population, tag)
        self.values = _frozen(values)

    @classmethod
    def from_function(cls, k, m, tag=None):
        pop = Population.on_grid(m)
        x = pop.centers
        return cls(k(x[:, None], x[None, :]), pop, tag)

    def kernel_matrix(self):
        return self.values


class StaircaseProfile:
    """Increasing piecewise linear alpha built on a mirrored mesh of [0, 1].

    ``x`` holds x_0 = 1/2 < x_1 < ... < x_N = 1. The full mesh adds
    x_{-n} = 1 - x_n. On [x_k, x_{k+1}) alpha is 2x - 1 for even k and
    x - 1 + (x_k + x_{k+1})/2 for odd k, so alpha equals 2x - 1 at every
    interval midpoint and jumps up at the mesh points.
    """

    def __init__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size < 3:
            raise ModelError("staircase mesh needs at least x_0, x_1, x_2")
        if abs(x[0] - 0.5) > 1e-12 or abs(x[-1] - 1.0) > 1e-12:
            raise ModelError("staircase mesh must start at 1/2 and end at 1")
        p = np.diff(x)
        if np.any(p <= 0):
            raise ModelError("staircase mesh must be increasing")
        if np.any(np.diff(p) >= 0):
            raise ModelError("staircase gaps p_n must be decreasing")
        x = x.copy()
        x[0], x[-1] = 0.5, 1.0
        self.x = _frozen(x)
        self.N = x.size - 1
        self.mesh = _frozen(np.concatenate([1.0 - x[:0:-1], x]))
        self.index = np.arange(-self.N, self.N)          # k of [x_k, x_{k+1})
        lo, hi = self.mesh[:-1], self.mesh[1:]
        odd = self.index % 2 == 1
        self.slope = np.where(odd, 1.0, 2.0)
        self.shift = np.where(odd, -1.0 + 0.5 * (lo + hi), -1.0)
        # cumulative integrals of alpha and alpha^2 at the mesh points
        ia = self._prim1(hi) - self._prim1(lo)
        ia2 = self._prim2(hi) - self._prim2(lo)
        self._cum1 = np.concatenate([[0.0], np.cumsum(ia)])
        self._cum2 = np.concatenate([[0.0], np.cumsum(ia2)])

    def _locate(self, t):
        k = np.searchsorted(self.mesh, t, side="right") - 1
        return np.clip(k, 0, self.index.size - 1)

    def _prim1(self, t, k=None):
        s, q = (self.slope, self.shift) if k is None else (self.slope[k], self.shift[k])
        return 0.5 * s * t * t + q * t

    def _prim2(self, t, k=None):
        s, q = (self.slope, self.shift) if k is None else (self.slope[k], self.shift[k])
        return (s * t + q) ** 3 / (3.0 * s)

    def alpha(self, t):
        k = self._locate(np.asarray(t, dtype=float))
        return self.slope[k] * t + self.shift[k]

    def int_alpha(self, t):
        """Integral of alpha over [0, t)."""
        t = np.asarray(t, dtype=float)
        k = self._locate(t)
        lo = self.mesh[k]
        return self._cum1[k] + self._prim1(t, k) - self._prim1(lo, k)

    def int_alpha2(self, t):
        """Integral of alpha^2 over [0, t)."""
        t = np.asarray(t, dtype=float)
        k = self._locate(t)
        lo = self.mesh[k]
        return self._cum2[k] + self._prim2(t, k) - self._prim2(lo, k)


class RankTwo(Model):
    """Regular rank-2 kernel k = R0 + sign * alpha(x) alpha(y)."""

    tag = "rank2"

    def __init__(self, r0, sign, alpha, population, profile=None):
        alpha = _frozen(alpha)
        if r0 <= 0:
            raise ModelError("R0 must be positive")
        if sign not in (1, -1):
            raise ModelError("sign must be +1 or -1")
        if alpha.shape != (population.n,):
            raise ModelError("alpha does not match the population size")
        if abs(alpha @ population.weights) > 1e-10:
            raise ModelError("alpha must have zero mean: sum(alpha * mu) = 0")
        if np.max(alpha ** 2) > r0 * (1 + 1e-12):
            raise ModelError("alpha^2 must not exceed R0")
        super().__init__(population)
        self.r0 = float(r0)
        self.sign = int(sign)
        self.alpha = alpha
        self.profile = profile

    def moments(self, etas):
        em = np.atleast_2d(etas) * self.weights
        return em.sum(axis=1), em @ self.alpha, em @ self.alpha ** 2

    def effective_R_batch(self, etas):
        s0, s1, s2 = self.moments(etas)
        # T(u + v alpha) = R0 (u s0 + v s1) + sign alpha (u s1 + v s2)
        return top_eigenvalue_2x2(self.r0 * s0, self.r0 * s1,
                                  self.sign * s1, self.sign * s2)

    def effective_R(self, eta):
        return float(self.effective_R_batch(self.check(eta))[0])

    def kernel_matrix(self):
        return self.r0 + self.sign * np.outer(self.alpha, self.alpha)

    def degree(self, eta, i=None):
        s0, s1, _ = self.moments(self.check(eta))
        d = self.r0 * s0[0] + self.sign * self.alpha * s1[0]
        return d if i is None else float(d[i])

    def to_grid(self):
        return GridKernel(self.kernel_matrix(), self.population, tag="rank2-grid")


def sphere_constant(d):
    """c_d such that c_d * (1 - t^2)^((d-3)/2) dt is a probability on [-1, 1]."""
    return math.exp(math.lgamma(d / 2) - math.lgamma((d - 1) / 2)) / math.sqrt(math.pi)


class SphereAffine(Model):
    """Kernel a + b <x, y> on the sphere S^{d-1}, restricted to zonal strategies.

    Classes are ``cells`` equal slices of the polar angle theta in [0, pi],
    ordered from the pole z0 (t = cos theta = 1) to the antipode. Cell
    masses and the first two moments of t are integrated exactly.
    """

    tag = "sphere"

    def __init__(self, a, b, d, cells=1024):
        if d < 2 or int(d) != d:
            raise ModelError("dimension d must be an integer >= 2")
        if not (b != 0 and a >= abs(b)):
            raise ModelError("sphere-affine model needs a >= |b| > 0")
        self.a, self.b, self.d = float(a), float(b), int(d)
        theta = np.linspace(0.0, math.pi, cells + 1)
        nodes, wts = np.polynomial.legendre.leggauss(8)
        lo, hi = theta[:-1, None], theta[1:, None]
        th = 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes
        w = 0.5 * (hi - lo) * wts * np.sin(th) ** (self.d - 2) * sphere_constant(self.d)
        t = np.cos(th)
        m0 = w.sum(axis=1)
        total = m0.sum()
        self.theta_edges = _frozen(theta)
        self.m1 = _frozen((w * t).sum(axis=1) / total)
        self.m2 = _frozen((w * t * t).sum(axis=1) / total)
        super().__init__(Population(m0 / total))
        self.tbar = _frozen(self.m1 / self.weights)

    def check(self, eta):
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (self.n,):
            raise UnsupportedStrategyShape(
                "unsupported-strategy-shape: sphere strategies must be zonal "
                f"arrays over the {self.n} polar cells, got shape {eta.shape}")
        return as_strategy(eta, self.n)

    def moments(self, etas):
        etas = np.atleast_2d(etas)
        return etas @ self.weights, etas @ self.m1, etas @ self.m2

    def effective_R_batch(self, etas):
        s0, s1, s2 = self.moments(etas)
        return top_eigenvalue_2x2(self.a * s0, self.a * s1, self.b * s1, self.b * s2)

    def effective_R(self, eta):
        return float(self.effective_R_batch(self.check(eta))[0])

    def kernel_matrix(self):
        return self.a + self.b * np.outer(self.tbar, self.tbar)

    def degree(self, eta, i=None):
        s0, s1, _ = self.moments(self.check(eta))
        d = self.a * s0[0] + self.b * self.tbar * s1[0]
        return d if i is None else float(d[i])


def _square_plus(theta):
    return (math.pi - theta) ** 2


def _square_minus(theta):
    return math.pi ** 2 - (math.pi - theta) ** 2


CIRCLE_PROFILES = {
    "square_plus": _square_plus,
    "square_minus": _square_minus,
    "one_plus_cos": lambda theta: 1.0 + np.cos(theta),
    "constant": lambda theta: np.ones_like(theta),
}


def circle_profile(f):
    """Resolve a tag, callable or sample array into (callable, breakpoints)."""
    if isinstance(f, str):
        if f not in CIRCLE_PROFILES:
            raise ModelError(f"unknown circle profile {f!r}; known: {sorted(CIRCLE_PROFILES)}")
        return CIRCLE_PROFILES[f], None
    if callable(f):
        return f, None
    samples = np.asarray(f, dtype=float)
    if samples.ndim != 1 or samples.size < 2:
        raise ModelError("circle profile samples must be a 1-d array of length >= 2")
    grid = np.linspace(0.0, math.pi, samples.size)
    return (lambda theta: np.interp(theta, grid, samples)), grid


class CircleConvolution(GridKernel):
    """Kernel f(d(x, y)) on the unit circle, d the geodesic distance in [0, pi]."""

    tag = "circle"

    def __init__(self, f, cells=256, name=None):
        self.f, self.breakpoints = circle_profile(f)
        self.name = name if name is not None else (f if isinstance(f, str) else "custom")
        pop = Population.on_grid(cells)
        theta = 2 * math.pi * pop.centers
        gap = np.abs(theta[:, None] - theta[None, :])
        dist = np.minimum(gap, 2 * math.pi - gap)
        values = np.asarray(self.f(dist), dtype=float)
        if np.any(values < 0):
            raise ModelError("circle profile f must be nonnegative")
        super().__init__(values, pop)


@dataclass(frozen=True)
class SpectrumReport:
    """Operator eigenvalues (value, multiplicity), largest first."""

    eigenvalues: tuple
    classification: str
    by_degree: np.ndarray = field(default=None, repr=False)
    multiplicities: np.ndarray = field(default=None, repr=False)


def classify_convexity(report, tol=1e-9):
    values = report.eigenvalues if isinstance(report, SpectrumReport) else report
    flat = sorted((v for v, mult in values for _ in range(int(mult))), reverse=True)
    if not flat or flat[0] <= 0:
        raise ValueError("spectrum must have a positive leading eigenvalue")
    if flat[-1] >= -tol:
        return CONVEX
    if len(flat) == 1 or flat[1] <= tol:
        return CONCAVE
    return INDETERMINATE


def _report(by_degree, mults, tol):
    order = np.argsort(-by_degree, kind="stable")
    pairs = tuple((float(by_degree[i]), int(mults[i])) for i in order)
    return SpectrumReport(pairs, classify_convexity(pairs, tol),
                          _frozen(by_degree), np.asarray(mults))


def fourier_coefficients(f, n_max, tol=1e-10):
    """a_0 = (1/pi) int f and a_n = (2/pi) int f(theta) cos(n theta) over [0, pi]."""
    if isinstance(f, CircleConvolution):
        func, bps = f.f, f.breakpoints
    else:
        func, bps = circle_profile(f)
    n = np.arange(n_max + 1)[:, None]

    def integrand(theta):
        vals = np.asarray(func(theta), dtype=float) * np.ones_like(theta)
        if np.any(vals < -1e-12):
            raise ValueError("circle profile f must be nonnegative on [0, pi]")
        return vals * np.cos(n * theta)

    coef = integrate(integrand, 0.0, math.pi, tol=tol, breakpoints=bps) * (2 / math.pi)
    coef[0] *= 0.5
    return coef


def fourier_eigenvalues(f, n_max, tol=1e-9):
    """Spectrum of the circle convolution operator: a_0 once, a_n / 2 twice."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    a = fourier_coefficients(f, n_max)
    lam = a.copy()
    lam[1:] *= 0.5
    mults = np.full(n_max + 1, 2)
    mults[0] = 1
    return _report(lam, mults, tol)


def gegenbauer_normalized(n_max, d, t):
    """Rows G_n(t) / G_n(1), n = 0..n_max, Gegenbauer parameter (d - 2)/2."""
    t = np.asarray(t, dtype=float)
    out = np.empty((n_max + 1,) + t.shape)
    out[0] = 1.0
    if n_max == 0:
        return out
    if d == 2:
        theta = np.arccos(np.clip(t, -1.0, 1.0))
        for n in range(1, n_max + 1):
            out[n] = np.cos(n * theta)
        return out
    lam = 0.5 * (d - 2)
    c_prev, c = np.ones_like(t), 2 * lam * t
    one_prev, one = 1.0, 2 * lam
    out[1] = c / one
    for n in range(2, n_max + 1):
        c_prev, c = c, (2 * (n + lam - 1) * t * c - (n + 2 * lam - 2) * c_prev) / n
        one_prev, one = one, (2 * (n + lam - 1) * one - (n + 2 * lam - 2) * one_prev) / n
        out[n] = c / one
    return out


def sphere_multiplicity(n, d):
    if n == 0:
        return 1
    return round((2 * n + d - 2) / (n + d - 2) * math.comb(n + d - 2, n))


def gegenbauer_eigenvalues(p, d, n_max, tol=1e-9):
    """Funk-Hecke eigenvalues of the dot-product kernel p(<x, y>) on S^{d-1}.

    The integral over t in [-1, 1] is taken in theta = arccos t, which
    removes the endpoint singularity of the weight for d = 2.
    """
    if d < 2 or int(d) != d:
        raise ValueError("d must be an integer >= 2")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    d = int(d)
    if not callable(p):
        samples = np.asarray(p, dtype=float)
        grid = np.linspace(-1.0, 1.0, samples.size)
        p = lambda t: np.interp(t, grid, samples)
    cd = sphere_constant(d)

    def integrand(theta):
        t = np.cos(theta)
        vals = np.asarray(p(t), dtype=float) * np.ones_like(t)
        return cd * vals * np.sin(theta) ** (d - 2) * gegenbauer_normalized(n_max, d, t)

    lam = integrate(integrand, 0.0, math.pi)
    mults = np.array([sphere_multiplicity(n, d) for n in range(n_max + 1)])
    return _report(lam, mults, tol)


def operator_spectrum(model, tol=1e-9):
    """Eigenvalues of the integral operator of a symmetric discrete kernel."""
    if not model.symmetric:
        raise ValueError("operator spectrum requires a symmetric kernel")
    r = np.sqrt(model.weights)
    lam = np.linalg.eigvalsh(r[:, None] * model.kernel_matrix() * r[None, :])
    return _report(lam, np.ones(lam.size, dtype=int), tol)


def degrees_at_one(model):
    """In-degrees (row sums) and out-degrees (column sums) of the kernel."""
    k = model.kernel_matrix()
    mu = model.weights
    return k @ mu, mu @ k


def is_regular(model, tol=1e-9):
    ins, outs = degrees_at_one(model)
    spread = max(np.ptp(ins), np.ptp(outs), abs(ins[0] - outs[0]))
    return bool(spread <= tol)


def variational_value(model, eta):
    """Quadratic form sum h_i eta_i mu_i k_ij h_j eta_j mu_j at the Perron vector.

    h is scaled so that sum h^2 eta mu = 1. Returns (form, R_e).
    """
    eta = model.check(eta)
    k = model.kernel_matrix()
    em = eta * model.weights
    res = power_iteration(k * em[None, :])
    if res.perron_vector is None:
        return 0.0, 0.0
    h = res.perron_vector
    norm = h * h @ em
    if norm == 0:
        return 0.0, res.radius
    h = h / math.sqrt(norm)
    g = h * em
    return float(g @ k @ g), res.radius


def build_asym_circle(N):
    if N < 2:
        raise ModelError("asymmetric circle needs N >= 2")
    # class j infects class j + 1
    return DenseNextGen(np.roll(np.eye(N), 1, axis=0), Population.uniform(N), "asym_circle")


def build_sym_circle(N):
    if N < 3:
        raise ModelError("symmetric circle needs N >= 3")
    K = np.roll(np.eye(N), 1, axis=0) + np.roll(np.eye(N), -1, axis=0)
    return DenseNextGen(K, Population.uniform(N), "sym_circle")


def build_assortative(a, b, weights):
    """k(i, j) = a if i == j else b, on class sizes ``weights``."""
    if a < 0 or b < 0:
        raise ModelError("assortative kernel needs a, b >= 0")
    pop = weights if isinstance(weights, Population) else Population(weights)
    k = np.full((pop.n, pop.n), float(b))
    np.fill_diagonal(k, a)
    model = DenseNextGen(k * pop.weights[None, :], pop, "assortative")
    model.a, model.b = float(a), float(b)
    return model


def build_rank2(r0, sign, alpha, grid):
    """Rank-2 kernel on ``grid`` cells; alpha may be a callable of the cell center."""
    pop = Population.on_grid(grid) if isinstance(grid, (int, np.integer)) else grid
    if callable(alpha):
        alpha = alpha(pop.centers)
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (pop.n,):
        raise ModelError("alpha does not match the grid")
    alpha = alpha - alpha @ pop.weights
    return RankTwo(r0, sign, alpha, pop)


def build_sphere_affine(a, b, d, cells=1024):
    return SphereAffine(a, b, d, cells)


def build_circle_convolution(f, cells=256):
    return CircleConvolution(f, cells)


def log_mesh(N=11):
    """x_n = log_{N+1}((N + 1)(n + 1)) / 2 for n = 0..N; N = 11 gives base 12."""
    n = np.arange(N + 1)
    return 0.5 * np.log((N + 1.0) * (n + 1)) / math.log(N + 1.0)


def build_staircase_rank2(x, grid=4096):
    """Rank-2 kernel 1 - alpha(x) alpha(y) with the staircase alpha."""
    profile = StaircaseProfile(x)
    pop = Population.on_grid(grid)
    alpha = profile.alpha(pop.centers)
    alpha = alpha - alpha @ pop.weights
    return RankTwo(1.0, -1, alpha, pop, profile=profile)
