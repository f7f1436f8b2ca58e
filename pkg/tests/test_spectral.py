import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from vaxfront.models import build_asym_circle, build_sym_circle
from vaxfront.spectral import (NoConvergenceError, OracleScaleError, dense_radius,
                               nilpotency_radius, power_iteration, spectral_radius)


def check_result(m, res, tol=1e-12):
    assert res.radius >= 0
    if res.perron_vector is not None:
        v = res.perron_vector
        assert np.all(v >= -1e-15)
        assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
        assert np.linalg.norm(m @ v - res.radius * v) <= 1e3 * tol * max(1.0, res.radius)


def test_permutation_2x2():
    m = np.array([[0.0, 1.0], [1.0, 0.0]])
    res = power_iteration(m)
    assert res.radius == pytest.approx(1.0, abs=1e-12)
    check_result(m, res)


def test_identity():
    res = power_iteration(np.eye(4))
    assert res.radius == pytest.approx(1.0, abs=1e-14)
    assert nilpotency_radius(np.eye(4)) is None


def test_asym_circle_single_class():
    model = build_asym_circle(5)
    res = power_iteration(model.matrix([0.5, 1, 1, 1, 1]))
    assert res.radius == pytest.approx(0.5 ** 0.2, abs=1e-10)
    assert res.radius == pytest.approx(0.87055, abs=1e-5)


def test_nilpotent_examples():
    assert dense_radius(np.array([[0.0, 1.0], [0.0, 0.0]])) == 0.0
    assert nilpotency_radius(np.triu(np.ones((3, 3)), 1)) == 0.0
    m = build_sym_circle(4).matrix([0, 1, 0, 1])
    assert np.all(m @ m == 0)
    assert nilpotency_radius(m) == 0.0
    assert spectral_radius(m) == 0.0


def test_assortative_block_eigenvalue():
    # b * ones + (a - b) I for a=2, b=1, n=3: top eigenvalue a + (n-1) b
    m = np.full((3, 3), 1.0)
    np.fill_diagonal(m, 2.0)
    assert dense_radius(m) == pytest.approx(4.0, abs=1e-12)
    assert power_iteration(m).radius == pytest.approx(4.0, abs=1e-12)


def test_zero_matrix():
    res = power_iteration(np.zeros((3, 3)))
    assert res.radius == 0.0 and res.perron_vector is None


def test_input_validation():
    with pytest.raises(ValueError):
        power_iteration(np.array([[1.0, -1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        power_iteration(np.ones((2, 3)))
    with pytest.raises(ValueError):
        power_iteration(np.array([[np.nan]]))
    with pytest.raises(OracleScaleError):
        dense_radius(np.ones((65, 65)))


def test_bipartite_and_cycles():
    for n in (2, 3, 7, 12):
        m = np.roll(np.eye(n), 1, axis=0) * 3.0
        assert power_iteration(m).radius == pytest.approx(3.0, rel=1e-12)
    # complete bipartite, period 2
    m = np.zeros((4, 4))
    m[:2, 2:] = 1.0
    m[2:, :2] = 1.0
    assert power_iteration(m).radius == pytest.approx(2.0, rel=1e-12)


def test_large_cycle_reports_no_convergence():
    m = np.roll(np.eye(100), 1, axis=0)
    m[0, 99] = 0.5
    with pytest.raises(NoConvergenceError) as info:
        power_iteration(m, max_iter=2000)
    assert info.value.iterations > 0


def test_oracle_agreement_random(rng):
    for _ in range(100):
        n = int(rng.integers(1, 33))
        m = rng.random((n, n)) + 0.01
        r = power_iteration(m)
        assert abs(r.radius - dense_radius(m)) <= 1e-8 * max(1.0, r.radius)
        check_result(m, r)


def test_sparse_reducible_random(rng):
    for _ in range(50):
        n = int(rng.integers(2, 20))
        m = rng.random((n, n)) * (rng.random((n, n)) < 0.2)
        assert spectral_radius(m) == pytest.approx(dense_radius(m), abs=1e-9)


mats = st.integers(1, 8).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(0, 10, allow_subnormal=False)))


@settings(max_examples=60, deadline=None)
@given(mats, st.floats(0.01, 100))
def test_homogeneity(m, lam):
    r = spectral_radius(m)
    assert spectral_radius(lam * m) == pytest.approx(lam * r, rel=1e-10, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(mats, st.data())
def test_monotone_and_permutation(m, data):
    n = m.shape[0]
    extra = data.draw(arrays(np.float64, (n, n), elements=st.floats(0, 1)))
    assert spectral_radius(m) <= spectral_radius(m + extra) + 1e-10
    perm = np.array(data.draw(st.permutations(range(n))))
    assert spectral_radius(m[np.ix_(perm, perm)]) == pytest.approx(spectral_radius(m),
                                                                  rel=1e-12, abs=1e-12)


def test_default_max_iter_scale():
    m = np.eye(3)
    assert power_iteration(m).iterations <= 10 * 3 * math.ceil(math.log(1e12))
