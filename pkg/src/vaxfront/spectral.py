"""Spectral radius of nonnegative square matrices.

Power iteration is the workhorse. Bipartite (period-2) structure is handled
by pairing consecutive iterates, longer cycles by a positive diagonal shift,
and small matrices fall back to a dense eigenvalue oracle.
"""

from dataclasses import dataclass
import math

import numpy as np

ORACLE_MAX_DIM = 64


class NoConvergenceError(ArithmeticError):
    """Power iteration did not settle within the iteration budget."""

    def __init__(self, residual, estimate, iterations):
        super().__init__(
            f"no-convergence: residual {residual:.3e} after {iterations} "
            f"iterations (radius estimate {estimate:.12g})")
        self.residual = residual
        self.estimate = estimate
        self.iterations = iterations


class OracleScaleError(ValueError):
    """The dense oracle was asked to handle a matrix above its size limit."""


@dataclass(frozen=True)
class SpectralResult:
    radius: float
    perron_vector: np.ndarray | None
    iterations: int
    residual: float
    method: str = "power"


def as_matrix(m):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if np.any(m < 0):
        raise ValueError("matrix has negative entries")
    return m


def _is_acyclic(pattern):
    # Kahn's algorithm on the digraph i -> j for pattern[i, j]
    indeg = pattern.sum(axis=0).astype(int)
    stack = list(np.flatnonzero(indeg == 0))
    seen = 0
    while stack:
        i = stack.pop()
        seen += 1
        for j in np.flatnonzero(pattern[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    return seen == pattern.shape[0]


def nilpotency_radius(m):
    """Return 0.0 when ``m`` is nilpotent, else None.

    A nonnegative matrix has no cancellation in its powers, so M^n = 0
    exactly iff the digraph of its support has no cycle. The check is
    exact for integral and float entries alike.
    """
    m = as_matrix(m)
    return 0.0 if _is_acyclic(m > 0) else None


def dense_radius(m):
    """Max eigenvalue modulus from LAPACK, exact 0 for nilpotent inputs."""
    m = as_matrix(m)
    if m.shape[0] > ORACLE_MAX_DIM:
        raise OracleScaleError(
            f"oracle-scale-exceeded: n={m.shape[0]} > {ORACLE_MAX_DIM}")
    if nilpotency_radius(m) == 0.0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(m))))


def _dense_result(m, iterations):
    lam, vecs = np.linalg.eig(m)
    k = int(np.argmax(np.abs(lam) - 1e-12 * np.abs(lam.imag)))
    radius = float(np.max(np.abs(lam)))
    v = np.abs(vecs[:, k].real)
    nv = np.linalg.norm(v)
    if nv == 0:
        return SpectralResult(radius, None, iterations, 0.0, "dense")
    v = v / nv
    res = float(np.linalg.norm(m @ v - radius * v))
    return SpectralResult(radius, v, iterations, res, "dense")


def power_iteration(m, tol=1e-12, max_iter=None):
    """Spectral radius and Perron vector of a nonnegative matrix.

    Returns a SpectralResult whose residual ||Mv - rv|| is at most
    tol * max(1, r), or the nilpotent/zero result with no vector.
    Raises NoConvergenceError when nothing settles and n > 64.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter is None:
        max_iter = 10 * n * math.ceil(math.log(1.0 / tol))
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if not np.any(m):
        return SpectralResult(0.0, None, 0, 0.0, "zero")

    def done(r, v, it, method):
        res = float(np.linalg.norm(m @ v - r * v))
        return SpectralResult(float(r), v, it, res, method)

    v = np.full(n, 1.0 / math.sqrt(n))
    prev = None            # iterate two steps back, paired with its norm
    lams = []
    best_res = np.inf
    stall = 0
    budget = max_iter // 2 if n > 1 else max_iter
    it = 0
    while it < budget:
        it += 1
        w = m @ v
        lam = np.linalg.norm(w)
        if lam == 0.0:
            # M^k 1 = 0 with a positive start vector means M^k = 0
            return SpectralResult(0.0, None, it, 0.0, "nilpotent")
        res = np.linalg.norm(w - lam * v)
        if res <= tol * max(1.0, lam):
            return done(lam, w / lam, it, "power")
        lams.append(lam)
        w = w / lam
        progress = res
        if prev is not None:
            # period-2 pairing: h = s*v_k + M v_k solves (M - s)h = s^2 (v_{k+2} - v_k)
            v_old, lam_old = prev
            s = math.sqrt(lam_old * lams[-1])
            gap = np.linalg.norm(w - v_old)
            progress = min(progress, s * gap)
            if s * gap <= 0.5 * tol * max(1.0, s):
                h = s * v_old + lam_old * v
                h = h / np.linalg.norm(h)
                out = done(s, h, it, "averaged")
                if out.residual <= tol * max(1.0, s):
                    return out
        if progress < 0.5 * best_res:
            best_res = progress
            stall = 0
        else:
            stall += 1
            if stall > 50 + 5 * n:
                break
        prev = (v, lam)
        v = w

    # Shifted iteration: M + sI has a strictly dominant Perron root when
    # M is irreducible, which breaks cycles of any period.
    tail = np.log(lams[-min(len(lams), 4 * n):])
    sigma = float(np.exp(tail.mean())) if len(tail) else 1.0
    while it < max_iter:
        it += 1
        w = m @ v + sigma * v
        nw = np.linalg.norm(w)
        v = w / nw
        r = nw - sigma
        mv = m @ v
        if np.linalg.norm(mv - r * v) <= tol * max(1.0, r):
            return done(r, v, it, "shifted")
        if not np.any(mv):
            return SpectralResult(0.0, None, it, 0.0, "nilpotent")

    if nilpotency_radius(m) == 0.0:
        return SpectralResult(0.0, None, it, 0.0, "nilpotent")
    if n <= ORACLE_MAX_DIM:
        return _dense_result(m, it)
    r = float(np.linalg.norm(m @ v))
    raise NoConvergenceError(float(np.linalg.norm(m @ v - r * v)), r, it)


def spectral_radius(m, tol=1e-12):
    return power_iteration(m, tol=tol).radius
