"""Closed-form optimal vaccination strategies and frontier values.

Also hosts the majorization tests behind the assortative results and the
sign-change analysis of the left/right interval strategies for rank-2
kernels.
"""

from dataclasses import dataclass
from typing import Callable
import math

import numpy as np

from . import models
from .models import (CONCAVE, CONVEX, Population, RankTwo, build_assortative,
                     build_sphere_affine, build_sym_circle, interval_strategy,
                     sphere_constant)
from .quadrature import integrate
from .spectral import nilpotency_radius, power_iteration

PARETO = "pareto"
ANTI = "anti"


class DegenerateModelError(ValueError):
    pass


@dataclass(frozen=True)
class FrontierFormula:
    """One side of a frontier: cost -> optimal value and an optimal strategy."""

    model_tag: str
    side: str
    evaluate: Callable
    strategy_at: Callable
    c_star: float
    c_upper_star: float
    winner_at: Callable | None = None

    def values(self, costs):
        return np.array([self.evaluate(float(c)) for c in costs])


def _check_cost(c):
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"cost must lie in [0, 1], got {c}")
    return float(c)


# -- circles -----------------------------------------------------------------

def asym_circle_frontier(N):
    """Pareto: all vaccine to one class; anti-Pareto: uniform."""
    if N < 2:
        raise ValueError("N must be >= 2")

    def best(c):
        return max(0.0, 1.0 - N * _check_cost(c)) ** (1.0 / N)

    def best_strategy(c):
        c = _check_cost(c)
        eta = np.ones(N)
        if c <= 1.0 / N:
            eta[0] = 1.0 - N * c
        else:
            # class 0 fully vaccinated, the rest reduced evenly
            eta[0] = 0.0
            eta[1:] = N * (1.0 - c) / (N - 1)
        return eta

    pareto = FrontierFormula("asym_circle", PARETO, best, best_strategy, 1.0 / N, 0.0)
    anti = FrontierFormula("asym_circle", ANTI, lambda c: 1.0 - _check_cost(c),
                           lambda c: np.full(N, 1.0 - _check_cost(c)), 1.0 / N, 0.0)
    return pareto, anti


def sym_circle_cstar(N):
    """Minimal cost stopping the epidemic on the symmetric circle.

    Vaccinating every other class (the first one included) leaves a matrix
    whose square vanishes.
    """
    if N < 3:
        raise ValueError("N must be >= 3")
    eta = (np.arange(1, N + 1) % 2 == 0).astype(float)
    if nilpotency_radius(build_sym_circle(N).matrix(eta)) != 0.0:
        raise ArithmeticError("alternating strategy is not nilpotent")
    return math.ceil(N / 2) / N, eta


def one_in_j_strategy(N, j, c):
    """Spread the vaccine evenly over classes 0, j, 2j, ...; overflow goes uniformly to the rest."""
    c = _check_cost(c)
    target = np.arange(N) % j == 0
    doses = c * N
    eta = np.ones(N)
    k = target.sum()
    if doses <= k:
        eta[target] = 1.0 - doses / k
    else:
        eta[target] = 0.0
        eta[~target] = 1.0 - (doses - k) / (N - k)
    return np.clip(eta, 0.0, 1.0)


# -- horizontal / vertical strategies ----------------------------------------

def horizontal_strategy(pop, c):
    """Cap every effective class size eta_i mu_i at a common level alpha.

    alpha solves sum min(alpha, mu_i) = 1 - c; the map is piecewise linear
    so the root is found exactly from the sorted sizes.
    """
    c = _check_cost(c)
    mu = pop.weights
    target = 1.0 - c
    if target >= 1.0:
        return np.ones(mu.size)
    if target <= 0.0:
        return np.zeros(mu.size)
    u = np.sort(mu)
    below = np.concatenate([[0.0], np.cumsum(u)[:-1]])
    n = u.size
    level = below + (n - np.arange(n)) * u          # sum min(u_k, mu_i)
    k = int(np.searchsorted(level, target))
    alpha = (target - below[k]) / (n - k)
    return np.minimum(alpha, mu) / mu


def vertical_strategy(pop, c):
    """Vaccinate whole classes from the smallest upward, one fractional class.

    Classes are ranked by non-increasing size (ties keep index order), and
    the unvaccinated mass 1 - c fills them in that order.
    """
    c = _check_cost(c)
    mu = pop.weights
    order = np.argsort(-mu, kind="stable")
    sizes = mu[order]
    before = np.concatenate([[0.0], np.cumsum(sizes)[:-1]])
    xi = np.clip(1.0 - c - before, 0.0, sizes)
    eta = np.empty(mu.size)
    eta[order] = xi / sizes
    return np.clip(eta, 0.0, 1.0)


# -- majorization --------------------------------------------------------------

@dataclass(frozen=True)
class MajorizationVerdict:
    majorized: bool
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.majorized


def _prepare(xi, chi):
    xi = np.asarray(xi, dtype=float)
    chi = np.asarray(chi, dtype=float)
    if xi.shape != chi.shape or xi.ndim != 1:
        raise ValueError("majorization needs two 1-d arrays of equal length")
    if abs(xi.sum() - chi.sum()) > 1e-10:
        return None
    return xi, chi


def majorizes(xi, chi, tol=1e-12):
    """Test xi < chi (xi is majorized by chi) with descending partial sums.

    The witness on failure is the number k of leading terms whose sum
    breaks the inequality.
    """
    pair = _prepare(xi, chi)
    if pair is None:
        return MajorizationVerdict(False, None, "incomparable-sums")
    xi, chi = pair
    a = np.cumsum(np.sort(xi)[::-1])
    b = np.cumsum(np.sort(chi)[::-1])
    slack = tol * max(1.0, np.abs(b).max())
    bad = np.flatnonzero(a[:-1] > b[:-1] + slack)
    if bad.size:
        return MajorizationVerdict(False, int(bad[0]) + 1, "partial-sum")
    return MajorizationVerdict(True)


def majorizes_hlp(xi, chi, tol=1e-12):
    """Same relation through sum (xi_i - t)_+ <= sum (chi_i - t)_+ for all t.

    Both sides are piecewise linear in t with kinks at the entries, so the
    entries are the only thresholds to check. The witness is a failing t.
    """
    pair = _prepare(xi, chi)
    if pair is None:
        return MajorizationVerdict(False, None, "incomparable-sums")
    xi, chi = pair
    ts = np.unique(np.concatenate([xi, chi]))
    lhs = np.clip(xi[None, :] - ts[:, None], 0, None).sum(axis=1)
    rhs = np.clip(chi[None, :] - ts[:, None], 0, None).sum(axis=1)
    slack = tol * max(1.0, chi.sum())
    bad = np.flatnonzero(lhs > rhs + slack)
    if bad.size:
        return MajorizationVerdict(False, float(ts[bad[0]]), "threshold")
    return MajorizationVerdict(True)


def theta(xi, a, b):
    """Spectral radius of (b * ones + (a - b) * I) Diag(xi)."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0):
        raise ValueError("xi must be nonnegative")
    m = np.full((xi.size, xi.size), float(b))
    np.fill_diagonal(m, a)
    return power_iteration(m * xi[None, :]).radius


def assortative_frontier(a, b, pop):
    """Horizontal/vertical optimal paths for k(i,j) = a 1{i=j} + b 1{i!=j}."""
    if a == 0 and b == 0:
        raise DegenerateModelError("degenerate-model: a = b = 0 has no transmission")
    if a < 0 or b < 0:
        raise ValueError("a and b must be nonnegative")
    if not isinstance(pop, Population):
        pop = Population(pop)
    model = build_assortative(a, b, pop)
    mu1 = float(pop.weights.max())

    def path(kind):
        func = horizontal_strategy if kind == "h" else vertical_strategy
        return (lambda c: func(pop, c)), (lambda c: model.effective_R(func(pop, c)))

    (h_at, h_val), (v_at, v_val) = path("h"), path("v")
    c_star = 1.0 - mu1 if a == 0 else 1.0
    c_upper = 1.0 - mu1 if b == 0 else 0.0
    if a >= b:
        pareto = FrontierFormula("assortative", PARETO, h_val, h_at, c_star, c_upper)
        anti = FrontierFormula("assortative", ANTI, v_val, v_at, c_star, c_upper)
    else:
        pareto = FrontierFormula("assortative", PARETO, v_val, v_at, c_star, c_upper)
        anti = FrontierFormula("assortative", ANTI, h_val, h_at, c_star, c_upper)
    return pareto, anti


# -- rank-2 kernels --------------------------------------------------------------

def rank2_from_moments(s0, s1, s2, r0=1.0, sign=1):
    """R_e of R0 + sign * alpha x alpha from the moments of eta mu.

    s0 = sum eta mu, s1 = sum alpha eta mu, s2 = sum alpha^2 eta mu.
    """
    s0 = np.asarray(s0, dtype=float)
    s1 = np.asarray(s1, dtype=float) / math.sqrt(r0)
    s2 = np.asarray(s2, dtype=float) / r0
    disc = (s0 - sign * s2) ** 2 + 4 * sign * s1 ** 2
    if np.any(disc < -1e-12):
        raise ArithmeticError("negative discriminant in the rank-2 formula")
    out = 0.5 * r0 * (s0 + sign * s2 + np.sqrt(np.maximum(disc, 0.0)))
    return np.maximum(out, 0.0)


def rank2_Re_explicit(model, eta):
    eta = model.check(eta)
    em = eta * model.weights
    return float(rank2_from_moments(em.sum(), em @ model.alpha, em @ model.alpha ** 2,
                                    model.r0, model.sign))


def rank2_candidates(model, c):
    """Uniform, left interval [0, 1-c) and right interval [c, 1) strategies of cost c."""
    c = _check_cost(c)
    pop = model.population
    return {
        "uniform": np.full(model.n, 1.0 - c),
        "left": interval_strategy(pop, 0.0, 1.0 - c),
        "right": interval_strategy(pop, c, 1.0),
    }


def rank2_frontier(model, tie_tol=1e-12):
    """Frontiers of a rank-2 kernel: extremes over uniform and the two sides."""
    if not isinstance(model, RankTwo):
        raise TypeError("rank2_frontier needs a RankTwo model")
    if np.any(np.diff(model.alpha) <= 0):
        raise ValueError("alpha must be strictly increasing on the grid")

    def pick(c, side):
        cands = rank2_candidates(model, c)
        vals = {k: rank2_Re_explicit(model, v) for k, v in cands.items()}
        choose = min if side == PARETO else max
        best = choose(vals.values())
        winners = [k for k in ("uniform", "left", "right") if abs(vals[k] - best) <= tie_tol]
        if "left" in winners and "right" in winners and "uniform" not in winners:
            label = "tie"
        else:
            label = winners[0]
        return best, cands[winners[0]], label

    out = []
    for side in (PARETO, ANTI):
        out.append(FrontierFormula(
            model.tag, side,
            evaluate=lambda c, s=side: pick(c, s)[0],
            strategy_at=lambda c, s=side: pick(c, s)[1],
            c_star=1.0, c_upper_star=0.0,
            winner_at=lambda c, s=side: pick(c, s)[2]))
    return tuple(out)


def delta_curve(model, grid=100_000):
    """Samples (t, delta(t)) with delta(t) = R_e(1_[0,t)) - R_e(1_[1-t,1)).

    Uses the exact integrals of the staircase profile when the model has
    one, otherwise grid sums with fractional boundary cells.
    """
    if grid < 1000:
        raise ValueError("grid must be >= 1000")
    t = np.linspace(0.0, 1.0, grid)
    if model.profile is not None:
        prof = model.profile
        i1, i2 = prof.int_alpha, prof.int_alpha2
        tot1, tot2 = float(i1(1.0)), float(i2(1.0))
    else:
        e = model.population.edges
        c1 = np.concatenate([[0.0], np.cumsum(model.alpha * model.weights)])
        c2 = np.concatenate([[0.0], np.cumsum(model.alpha ** 2 * model.weights)])
        i1 = lambda s: np.interp(s, e, c1)
        i2 = lambda s: np.interp(s, e, c2)
        tot1, tot2 = c1[-1], c2[-1]
    left = rank2_from_moments(t, i1(t), i2(t), model.r0, model.sign)
    right = rank2_from_moments(t, tot1 - i1(1.0 - t), tot2 - i2(1.0 - t), model.r0, model.sign)
    delta = left - right
    delta[0] = delta[-1] = 0.0
    return np.column_stack([t, delta])


def _crossings(curve, zero_tol):
    d = np.asarray(curve)[1:-1, 1]
    idx = np.flatnonzero(np.abs(d) > zero_tol)
    s = np.sign(d[idx])
    flip = np.flatnonzero(s[1:] != s[:-1])
    # position of each crossing in grid steps, and whether exact zeros sit between
    return 0.5 * (idx[flip] + idx[flip + 1]), idx


def count_zero_crossings(curve, zero_tol=0.0, merge_steps=2):
    """Number of strict sign changes of the second column, endpoints excluded.

    Samples with |delta| <= zero_tol are skipped; crossings closer than
    ``merge_steps`` grid steps count once.
    """
    pos, _ = _crossings(curve, zero_tol)
    if pos.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(pos) >= merge_steps))


def count_zeros(curve, zero_tol=1e-13, merge_steps=2):
    """Crossings plus touching zeros (local minima of |delta| below zero_tol without a sign change)."""
    d = np.abs(np.asarray(curve)[1:-1, 1])
    crossings = count_zero_crossings(curve, 0.0, merge_steps)
    pos, _ = _crossings(curve, 0.0)
    low = np.flatnonzero((d[1:-1] <= d[:-2]) & (d[1:-1] <= d[2:]) & (d[1:-1] <= zero_tol)) + 1
    touches = [k for k in low if pos.size == 0 or np.min(np.abs(pos - k)) >= merge_steps]
    return crossings + len(touches)


def mesh_signs(model, points=None):
    """Sign of delta at the interior mesh points x_n, -N < n < N, of a staircase model."""
    prof = model.profile
    if prof is None:
        raise ValueError("model has no staircase profile")
    x = prof.mesh[1:-1] if points is None else np.asarray(points)
    s0 = x
    l = rank2_from_moments(s0, prof.int_alpha(x), prof.int_alpha2(x), model.r0, model.sign)
    r = rank2_from_moments(s0, prof.int_alpha(1.0) - prof.int_alpha(1.0 - x),
                           prof.int_alpha2(1.0) - prof.int_alpha2(1.0 - x), model.r0, model.sign)
    return np.sign(l - r)


# -- sphere ----------------------------------------------------------------------

def cap_mass(d, tau):
    """c_d * integral of w_d over [tau, 1], computed in theta."""
    th = math.acos(min(1.0, max(-1.0, tau)))
    if th == 0.0:
        return 0.0
    cd = sphere_constant(d)
    return float(integrate(lambda x: cd * np.sin(x) ** (d - 2), 0.0, th))


def cap_threshold(d, mass, tol=1e-12):
    """tau with cap_mass(d, tau) = mass, by bisection."""
    lo, hi = -1.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if cap_mass(d, mid) > mass:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sphere_affine_frontier(a, b, d, cells=1024):
    """Uniform strategies on one side, polar caps on the other."""
    model = build_sphere_affine(a, b, d, cells)
    pop = model.population

    def caps(c):
        c = _check_cost(c)
        return interval_strategy(pop, 0.0, 1.0 - c), interval_strategy(pop, c, 1.0)

    def cap_side(c, choose):
        north, south = caps(c)
        vn, vs = model.effective_R(north), model.effective_R(south)
        return (vn, north) if choose(vn, vs) == vn else (vs, south)

    uniform = (lambda c: (1.0 - _check_cost(c)) * model.a,
               lambda c: np.full(model.n, 1.0 - _check_cost(c)))
    if b > 0:
        cap = (lambda c: cap_side(c, max)[0], lambda c: cap_side(c, max)[1])
        pareto, anti = uniform, cap
    else:
        cap = (lambda c: cap_side(c, min)[0], lambda c: cap_side(c, min)[1])
        pareto, anti = cap, uniform
    return (FrontierFormula("sphere", PARETO, *pareto, 1.0, 0.0),
            FrontierFormula("sphere", ANTI, *anti, 1.0, 0.0))


# -- dispatch ------------------------------------------------------------------

def uniform_frontier(model, side):
    r0 = model.R0
    return FrontierFormula(model.tag, side, lambda c: (1.0 - _check_cost(c)) * r0,
                           lambda c: np.full(model.n, 1.0 - _check_cost(c)), 1.0, 0.0)


def analytic_frontiers(model):
    """Known closed-form frontier sides for ``model`` as {side: FrontierFormula}."""
    tag = model.tag
    if tag == "asym_circle":
        p, a = asym_circle_frontier(model.n)
    elif tag == "assortative":
        p, a = assortative_frontier(model.a, model.b, model.population)
    elif isinstance(model, RankTwo):
        try:
            p, a = rank2_frontier(model)
        except ValueError:
            return {}
    elif tag == "sphere":
        p, a = sphere_affine_frontier(model.a, model.b, model.d, model.n)
    elif model.symmetric and models.is_regular(model):
        if model.n > 2048:
            return {}
        regime = models.operator_spectrum(model).classification
        if regime == CONVEX:
            return {PARETO: uniform_frontier(model, PARETO)}
        if regime == CONCAVE:
            return {ANTI: uniform_frontier(model, ANTI)}
        return {}
    else:
        return {}
    return {PARETO: p, ANTI: a}
