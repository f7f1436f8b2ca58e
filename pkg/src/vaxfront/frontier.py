"""Numerical Pareto / anti-Pareto frontiers by constrained local search.

For each cost c the search runs several random restarts on the slice
{eta in [0,1]^n : C(eta) = c}. Each restart moves vaccine between pairs of
classes, which keeps the cost fixed, and keeps a move when it improves
R_e. Restarts advance in lockstep so a whole batch of candidates is
evaluated in one call, but each restart draws from its own random stream,
keyed by (seed, cost index, restart), so results do not depend on the
batching or on the number of worker threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import os

import numpy as np

from .analytic import ANTI, PARETO
from .models import cost as strategy_cost

THREADS_ENV = "VAXFRONT_THREADS"
# share of proposals that move all transferable mass, so vertices are reachable
FULL_MOVE_RATE = 0.1


@dataclass(frozen=True)
class ScanConfig:
    cost_grid: tuple
    restarts: int = 32
    local_steps: int = 2000
    step0: float = 0.25
    decay: float = 0.9
    seed: int = 42
    workers: int | None = None

    def __post_init__(self):
        grid = tuple(float(c) for c in np.atleast_1d(self.cost_grid))
        if not grid:
            raise ValueError("cost_grid is empty")
        if any(c < 0 or c > 1 for c in grid):
            raise ValueError("cost_grid must lie in [0, 1]")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("cost_grid must be sorted ascending")
        if self.restarts < 1 or self.local_steps < 0:
            raise ValueError("restarts must be >= 1 and local_steps >= 0")
        if not (self.step0 > 0 and 0 < self.decay < 1):
            raise ValueError("step schedule needs step0 > 0 and 0 < decay < 1")
        object.__setattr__(self, "cost_grid", grid)

    def step(self, k):
        return self.step0 * self.decay ** k


@dataclass(frozen=True)
class FrontierPoint:
    cost: float
    value: float
    strategy: np.ndarray
    side: str
    optimizer_meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GreedyReport:
    monotone: bool
    violations: list


def project_to_cost(pop, eta, c):
    """mu-weighted projection of eta onto {sum eta mu = 1 - c, 0 <= eta <= 1}.

    The minimizer is clip(eta + lam, 0, 1) for a scalar lam, found by
    bisection and then solved exactly on the final active set.
    """
    if not 0.0 <= c <= 1.0:
        raise ValueError("cost must lie in [0, 1]")
    mu = pop.weights
    target = 1.0 - c
    eta = np.clip(np.asarray(eta, dtype=float), 0.0, 1.0)
    if abs(eta @ mu - target) <= 1e-15:
        return eta

    def mass(lam):
        return np.clip(eta + lam, 0.0, 1.0) @ mu

    lo, hi = -1.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mass(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    lam = 0.5 * (lo + hi)
    y = np.clip(eta + lam, 0.0, 1.0)
    free = (y > 0.0) & (y < 1.0)
    if free.any():
        fixed = y[~free] @ mu[~free]
        lam2 = (target - fixed - eta[free] @ mu[free]) / mu[free].sum()
        y2 = np.clip(eta + lam2, 0.0, 1.0)
        if np.array_equal((y2 > 0) & (y2 < 1), free):
            y = y2
    return y


def _rng(seed, cost_index, restart):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(cost_index, restart)))


def _start(rng, n):
    x = rng.random(n) ** np.exp(rng.normal())
    if rng.random() < 0.3:
        x *= rng.random(n) < rng.random()
    return x


def _scan_one(model, side, c, ci, cfg):
    n, mu = model.n, model.weights
    if c <= 0.0 or c >= 1.0 or n == 1:
        eta = project_to_cost(model.population, np.ones(n), c)
        return FrontierPoint(c, model.effective_R(eta), eta, side,
                             {"restarts": 0, "residual": abs(strategy_cost(model.population, eta) - c)})
    R, steps = cfg.restarts, cfg.local_steps
    sgn = 1.0 if side == PARETO else -1.0
    rngs = [_rng(cfg.seed, ci, r) for r in range(R)]
    X = np.array([project_to_cost(model.population, _start(g, n), c) for g in rngs])
    # pre-draw each restart's pair sequence: i receives doses' worth of mass from j
    gi = np.empty((R, steps), dtype=int)
    gj = np.empty((R, steps), dtype=int)
    whole = np.empty((R, steps), dtype=bool)
    for r, g in enumerate(rngs):
        gi[r] = g.integers(0, n, steps)
        gj[r] = (gi[r] + 1 + g.integers(0, n - 1, steps)) % n
        whole[r] = g.random(steps) < FULL_MOVE_RATE
    obj = sgn * model.effective_R_batch(X)
    level = np.zeros(R, dtype=int)
    fails = np.zeros(R, dtype=int)
    patience = max(8, n)
    rows = np.arange(R)
    for k in range(steps):
        i, j = gi[:, k], gj[:, k]
        size = cfg.step0 * cfg.decay ** level * np.minimum(mu[i], mu[j])
        size[whole[:, k]] = np.inf
        m = np.minimum.reduce([size, (1.0 - X[rows, i]) * mu[i], X[rows, j] * mu[j]])
        Y = X.copy()
        Y[rows, i] = np.minimum(1.0, Y[rows, i] + m / mu[i])
        Y[rows, j] = np.maximum(0.0, Y[rows, j] - m / mu[j])
        new = sgn * model.effective_R_batch(Y)
        better = (m > 0) & (new < obj - 1e-15)
        X[better] = Y[better]
        obj[better] = new[better]
        fails = np.where(better, 0, fails + 1)
        stalled = fails >= patience
        level[stalled] += 1
        fails[stalled] = 0
    best = int(np.argmin(obj))
    eta = project_to_cost(model.population, X[best], c)
    value = model.effective_R(eta)
    meta = {"restarts": R, "best_restart": best,
            "residual": abs(strategy_cost(model.population, eta) - c)}
    return FrontierPoint(c, value, eta, side, meta)


def default_workers():
    cap = os.environ.get(THREADS_ENV)
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {cap!r}")
    return n


def scan(model, side, cfg):
    """Best strategy found at each cost of cfg.cost_grid, one FrontierPoint per cost."""
    if side not in (PARETO, ANTI):
        raise ValueError(f"side must be {PARETO!r} or {ANTI!r}")
    jobs = list(enumerate(cfg.cost_grid))
    workers = cfg.workers or default_workers()
    if workers <= 1 or len(jobs) == 1:
        return [_scan_one(model, side, c, ci, cfg) for ci, c in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: _scan_one(model, side, job[1], job[0], cfg), jobs))


def greedy_check(points, tol=1e-6):
    """Is the strategy path monotone (doses only added as the cost grows)?"""
    pts = sorted(points, key=lambda p: p.cost)
    violations = []
    for a, p in enumerate(pts):
        for q in pts[a + 1:]:
            if q.cost > p.cost:
                inc = float(np.max(q.strategy - p.strategy))
                if inc > tol:
                    violations.append((p.cost, q.cost, inc))
    return GreedyReport(not violations, violations)


def monotone_envelope(points, slack=1e-6):
    """Isotonic check of a scanned value curve, without touching the points.

    A Pareto scan at cost c also bounds every larger cost (vaccinate a
    little more), so the running minimum is a valid curve; symmetrically
    the anti-Pareto curve is a running maximum from the right. Returns the
    envelope and the costs where the raw curve increases by more than
    ``slack``.
    """
    pts = sorted(points, key=lambda p: p.cost)
    costs = np.array([p.cost for p in pts])
    raw = np.array([p.value for p in pts])
    if not pts:
        return {"cost": costs, "raw": raw, "envelope": raw, "violations": []}
    if pts[0].side == PARETO:
        env = np.minimum.accumulate(raw)
    else:
        env = np.maximum.accumulate(raw[::-1])[::-1]
    bad = [(float(costs[k + 1]), float(raw[k + 1] - raw[k]))
           for k in range(len(raw) - 1) if raw[k + 1] > raw[k] + slack]
    return {"cost": costs, "raw": raw, "envelope": env, "violations": bad}


def random_strategies(n, samples, rng):
    """Strategies spread over all costs: powered uniforms, some with zeroed classes."""
    x = rng.random((samples, n)) ** np.exp(rng.normal(0.0, 1.0, (samples, 1)))
    sparse = rng.random(samples) < 0.3
    keep = rng.random((samples, n)) < rng.random((samples, 1))
    x[sparse] *= keep[sparse]
    return x


def outcome_cloud(model, samples, seed=42, kind="random"):
    """(cost, R_e) pairs of seeded random strategies; ``kind='uniform'`` samples t * ones."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        etas = rng.random((samples, 1)) * np.ones((1, model.n))
    elif kind == "random":
        etas = random_strategies(model.n, samples, rng)
    else:
        raise ValueError(f"unknown sample kind {kind!r}")
    costs = np.clip((1.0 - etas) @ model.weights, 0.0, 1.0)
    values = np.empty(samples)
    for a in range(0, samples, 256):
        values[a:a + 256] = model.effective_R_batch(etas[a:a + 256])
    return np.column_stack([costs, values])


def envelope_violations(cloud, frontiers, slack=1e-6):
    """Cloud points outside [Pareto(c) - slack, AntiPareto(c) + slack]."""
    bad = []
    for c, v in cloud:
        if PARETO in frontiers and v < frontiers[PARETO].evaluate(float(c)) - slack:
            bad.append((float(c), float(v), PARETO))
        if ANTI in frontiers and v > frontiers[ANTI].evaluate(float(c)) + slack:
            bad.append((float(c), float(v), ANTI))
    return bad


def sym_circle_anti_path(N, c):
    """Scripted anti-Pareto candidate on the symmetric circle.

    Vaccinate class 0 fully, then its neighbour, and so on; once two
    classes remain, split what is left equally between them.
    """
    if not 0.0 <= c <= 1.0:
        raise ValueError("cost must lie in [0, 1]")
    doses = c * N
    eta = np.ones(N)
    full = min(int(np.floor(doses)), N - 2)
    eta[:full] = 0.0
    rest = doses - full
    if full < N - 2:
        eta[full] = 1.0 - rest
    else:
        eta[N - 2:] = 1.0 - rest / 2
    return np.clip(eta, 0.0, 1.0)
