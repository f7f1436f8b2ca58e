import math

import numpy as np
import pytest

from vaxfront import models as md
from vaxfront.models import (CONCAVE, CONVEX, INDETERMINATE, ModelError, Population,
                             UnsupportedStrategyShape, cost)
from vaxfront.analytic import vertical_strategy


def seeded_models():
    return [md.build_asym_circle(5), md.build_sym_circle(12),
            md.build_assortative(5, 2, Population.dyadic()),
            md.build_rank2(1.0, 1, lambda x: 2 * x - 1, 256),
            md.build_sphere_affine(1.0, 0.5, 3, 256)]


def test_population_validation():
    with pytest.raises(ModelError):
        Population([0.5, 0.6])
    with pytest.raises(ModelError):
        Population([1.0, 0.0])
    pop = Population.dyadic(1e-14)
    assert pop.n == 46 and pop.weights.sum() == 1.0
    assert pop.weights[0] == 0.5 and pop.weights[-1] == pop.weights[-2]


def test_cost_examples():
    pop = Population([0.5, 0.25, 0.25])
    assert cost(pop, np.ones(3)) == 0.0
    assert cost(pop, [1, 0, 1]) == 0.25
    assert cost(pop, vertical_strategy(pop, 0.5)) == 0.5
    # exact on equal classes
    assert cost(Population.uniform(12), np.arange(12) % 2) == 0.5


def test_effective_R_examples():
    for m in seeded_models():
        assert m.effective_R(np.zeros(m.n)) == 0.0
        assert m.effective_R(np.full(m.n, 0.7)) == pytest.approx(0.7 * m.R0, rel=1e-10)
    asym = md.build_asym_circle(3)
    assert asym.effective_R([1 / 8, 1, 1]) == pytest.approx(0.5, abs=1e-12)


def test_rank2_orthogonal_strategies():
    m = md.build_rank2(1.0, -1, lambda x: 2 * x - 1, 512)
    x = m.population.centers
    eta = 0.3 + 0.5 * np.cos(2 * np.pi * x) ** 2      # symmetric about 1/2
    assert abs((eta * m.weights) @ m.alpha) < 1e-12
    assert m.effective_R(eta) == pytest.approx(eta @ m.weights, abs=1e-12)


def test_degree_examples():
    flat = md.build_assortative(1, 1, Population.uniform(4))
    assert np.allclose(flat.degree(np.ones(4)), 1.0)
    m = md.build_assortative(5, 2, Population([0.5, 0.5]))
    assert m.degree(np.ones(2), 0) == pytest.approx(3.5)
    g = md.GridKernel.from_function(lambda x, y: 1 + np.cos(2 * np.pi * (x - y)), 512)
    assert np.max(np.abs(g.degree(np.ones(512)) - 1.0)) < 1e-9


def test_shifted_cosine_degree_is_not_constant():
    # 1 + cos(pi (x - y)) has degree 1 + 2 sin(pi x) / pi on [0, 1)
    g = md.GridKernel.from_function(lambda x, y: 1 + np.cos(np.pi * (x - y)), 512)
    x = g.population.centers
    assert np.allclose(g.degree(np.ones(512)), 1 + 2 * np.sin(np.pi * x) / np.pi, atol=1e-5)


def test_builders():
    assert np.array_equal(md.build_asym_circle(2).K, [[0, 1], [1, 0]])
    bip = md.build_assortative(0, 1, Population([0.5, 0.5]))
    assert np.array_equal(bip.kernel_matrix(), [[0, 1], [1, 0]])
    st = md.build_staircase_rank2(md.log_mesh(11))
    assert st.profile.mesh.size == 23
    x = md.log_mesh(11)
    assert x[0] == 0.5 and x[-1] == pytest.approx(1.0, abs=1e-15)
    assert abs(st.alpha @ st.weights) < 1e-12


def test_model_validation():
    with pytest.raises(ModelError):
        md.RankTwo(1.0, 1, np.array([1.0, 1.0]), Population.uniform(2))
    with pytest.raises(ModelError):
        md.build_rank2(0.5, 1, lambda x: 2 * x - 1, 64)
    with pytest.raises(ModelError):
        md.build_sphere_affine(1.0, 2.0, 2)
    with pytest.raises(ModelError):
        md.DenseNextGen(-np.eye(2))


def test_sphere_rejects_non_zonal_shapes():
    m = md.build_sphere_affine(1.0, 1.0, 3, 64)
    with pytest.raises(UnsupportedStrategyShape, match="unsupported-strategy-shape"):
        m.effective_R(np.ones(65))


def test_regularity_and_R0():
    for m in [md.build_asym_circle(6), md.build_sym_circle(9),
              md.build_sphere_affine(2.0, -1.0, 3, 512),
              md.build_circle_convolution("one_plus_cos", 128),
              md.build_rank2(1.0, -1, lambda x: 2 * x - 1, 256)]:
        rows, cols = md.degrees_at_one(m)
        assert np.ptp(rows) < 1e-9 and np.ptp(cols) < 1e-9
        assert m.R0 == pytest.approx(rows[0], abs=1e-9)


def test_rank2_matches_grid():
    rng = np.random.default_rng(1)
    for m_cells, tol in ((1024, 1e-4), (256, 1e-3)):
        m = md.build_rank2(1.0, -1, lambda x: 2 * x - 1, m_cells)
        grid = m.to_grid()
        for _ in range(5):
            eta = rng.random(m_cells)
            assert m.effective_R(eta) == pytest.approx(grid.effective_R(eta), abs=tol)


def test_variational_identity():
    rng = np.random.default_rng(2)
    m = md.build_circle_convolution("one_plus_cos", 64)
    for _ in range(5):
        form, r = md.variational_value(m, rng.random(64))
        assert form == pytest.approx(r, abs=1e-8)


def test_fourier_examples():
    a = md.fourier_coefficients(lambda t: np.ones_like(t), 5)
    assert a[0] == pytest.approx(1.0, abs=1e-12) and np.allclose(a[1:], 0, atol=1e-12)
    a = md.fourier_coefficients(lambda t: (np.pi - t) ** 2, 10)
    assert a[0] == pytest.approx(np.pi ** 2 / 3, abs=1e-6)
    n = np.arange(1, 11)
    assert np.allclose(a[1:], 4 / n ** 2, atol=1e-6)
    a = md.fourier_coefficients(lambda t: 1 + np.cos(t), 6)
    assert np.allclose(a, [1, 1, 0, 0, 0, 0, 0], atol=1e-10)
    with pytest.raises(ValueError):
        md.fourier_coefficients(lambda t: np.cos(t), 3)


def test_gegenbauer_examples():
    for d in (2, 3, 5):
        rep = md.gegenbauer_eigenvalues(lambda t: 2.0 + 0.7 * t, d, 4)
        lam = rep.by_degree
        assert lam[0] == pytest.approx(2.0, abs=1e-8)
        assert lam[1] == pytest.approx(0.7 / d, abs=1e-8)
        assert np.allclose(lam[2:], 0, atol=1e-8)
        assert np.allclose(md.gegenbauer_eigenvalues(lambda t: np.ones_like(t), d, 3).by_degree,
                           [1, 0, 0, 0], atol=1e-10)
    lam = md.gegenbauer_eigenvalues(lambda t: t ** 2, 3, 3).by_degree
    # closed form: int t^2 dt/2 = 1/3; P_2 coefficient 2/15 > 0
    assert lam[0] == pytest.approx(1 / 3, abs=1e-8)
    assert lam[1] == pytest.approx(0.0, abs=1e-8)
    assert lam[2] == pytest.approx(2 / 15, abs=1e-8)


def test_sphere_multiplicity():
    assert [md.sphere_multiplicity(n, 3) for n in range(4)] == [1, 3, 5, 7]
    assert [md.sphere_multiplicity(n, 2) for n in range(3)] == [1, 2, 2]


def test_classification():
    assert md.operator_spectrum(md.build_assortative(5, 2, Population.uniform(6))).classification == CONVEX
    assert md.operator_spectrum(md.build_assortative(2, 5, Population.uniform(6))).classification == CONCAVE
    f = lambda t: 1.5 + np.cos(t) - 0.3 * np.cos(2 * t)
    assert md.fourier_eigenvalues(f, 6).classification == INDETERMINATE
    rep = md.fourier_eigenvalues("one_plus_cos", 4)
    assert rep.eigenvalues[0] == (pytest.approx(1.0), 1)


def test_interval_strategy_cost_exact():
    pop = Population.on_grid(100)
    for t in (0.123, 0.5, 0.987):
        assert cost(pop, md.interval_strategy(pop, 0.0, t)) == pytest.approx(1 - t, abs=1e-14)
