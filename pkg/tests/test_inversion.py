import numpy as np
import pytest

from spectral_sketch.inversion import (GridSpec, average_distributions,
                                       moment_inverse, moment_residual,
                                       walk_to_laplacian)
from spectral_sketch.moments import MomentVector
from spectral_sketch.spectrum import SpectralDistribution, emd_w1

from oracles import l1_moment_lp

GRID = GridSpec()
X = GRID.points()


def _random_on_grid(rng, atoms, points=X):
    idx = np.sort(rng.choice(points.size, atoms, replace=False))
    return SpectralDistribution(points[idx], rng.dirichlet(np.ones(atoms)))


def _mass_at(d, x):
    hit = np.isclose(d.support, x, atol=1e-12)
    return float(d.masses[hit].sum())


def test_grid_points():
    assert GRID.steps == 200
    assert X.size == 201 and X[0] == -1 and X[-1] == 1 and X[100] == 0
    g = GridSpec(0.0, 1.0, 0.3)
    assert g.steps == 4
    np.testing.assert_allclose(g.points(), [0, 0.3, 0.6, 0.9, 1.0])


@pytest.mark.parametrize("lo, hi, spacing", [(1, 1, 0.1), (0, 1, 0), (0, 1, -1)])
def test_grid_rejects(lo, hi, spacing):
    with pytest.raises(ValueError):
        GridSpec(lo, hi, spacing)


def test_grid_point_limit():
    with pytest.raises(ValueError, match="limit"):
        GridSpec(-1, 1, 1e-4).points()
    assert GridSpec(0, 9999, 1).points().size == 10_000


def test_point_mass_at_zero():
    res = moment_inverse(MomentVector(np.zeros(10)))
    assert _mass_at(res.distribution, 0.0) >= 1 - 1e-6
    assert res.objective <= 1e-8


def test_k2_walk_moments():
    alpha = np.array([0.0, 1.0] * 5)
    res = moment_inverse(MomentVector(alpha))
    assert _mass_at(res.distribution, -1.0) == pytest.approx(0.5, abs=1e-6)
    assert _mass_at(res.distribution, 1.0) == pytest.approx(0.5, abs=1e-6)
    # the independent dense LP finds the same unique optimum
    fun, p = l1_moment_lp(alpha, X)
    assert fun <= 1e-9
    assert p[0] == pytest.approx(0.5, abs=1e-6) and p[-1] == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_perturbed_objective_bound(seed):
    rng = np.random.default_rng(seed)
    truth = _random_on_grid(rng, int(rng.integers(1, 6)))
    L, eta = 10, 10.0 ** -rng.integers(2, 6)
    alpha = truth.moments(L) + eta * rng.choice([-1, 1], L)
    assert moment_inverse(alpha).objective <= L * eta + 1e-12


@pytest.mark.parametrize("seed", range(40))
def test_agrees_with_highs_and_consistent(seed):
    rng = np.random.default_rng(1000 + seed)
    L = int(rng.integers(1, 21))
    truth = _random_on_grid(rng, int(rng.integers(1, 12)))
    alpha = np.clip(truth.moments(L) + rng.normal(0, 0.02, L), -1, 1)
    res = moment_inverse(MomentVector(alpha))
    ref, _ = l1_moment_lp(alpha, X)
    assert res.objective == pytest.approx(ref, abs=1e-8)
    # objective is the attained residual, recomputed independently
    d = res.distribution
    direct = sum(abs(np.dot(d.support ** l, d.masses) - alpha[l - 1])
                 for l in range(1, L + 1))
    assert res.objective == pytest.approx(direct, abs=1e-8)
    assert abs(d.total - 1) <= 1e-9 and d.masses.min() >= 0
    assert np.all(np.isin(np.round(d.support, 9), np.round(X, 9)))
    assert res.objective >= res.dual_bound - 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_no_random_simplex_point_does_better(seed):
    rng = np.random.default_rng(2000 + seed)
    L = 12
    truth = _random_on_grid(rng, 6)
    alpha = np.clip(truth.moments(L) + rng.normal(0, 0.05, L), -1, 1)
    best = moment_inverse(alpha).objective
    for p in rng.dirichlet(np.full(X.size, 0.2), size=100):
        assert best <= moment_residual(X, p, alpha) + 1e-8
    assert best <= moment_residual(truth.support, truth.masses, alpha) + 1e-8


@pytest.mark.parametrize("seed", range(20))
def test_exact_recovery_few_atoms(seed):
    rng = np.random.default_rng(3000 + seed)
    atoms = int(rng.integers(1, 9))
    truth = _random_on_grid(rng, atoms)
    L = int(rng.integers(2 * atoms, max(2 * atoms, 20) + 1))
    res = moment_inverse(truth.moments(L))
    assert res.objective <= 1e-7
    assert emd_w1(res.distribution, truth) <= 0.02


@pytest.mark.parametrize("seed", range(20))
def test_exact_recovery_objective_up_to_twenty_atoms(seed):
    rng = np.random.default_rng(4000 + seed)
    atoms = int(rng.integers(1, 21))
    truth = _random_on_grid(rng, atoms)
    res = moment_inverse(truth.moments(2 * atoms))
    assert res.objective <= 1e-7


@pytest.mark.xfail(strict=True, reason=(
    "power moments of order <= 40 do not pin down 10-20 atoms on a 0.01 grid "
    "to within W1 0.02 in double precision; distinct grid distributions agree "
    "on all moments to ~1e-8, and an independent LP solver lands on the same "
    "kind of far-away optimum"))
def test_exact_recovery_w1_up_to_twenty_atoms():
    rng = np.random.default_rng(5000)
    worst = 0.0
    for _ in range(30):
        atoms = int(rng.integers(1, 21))
        truth = _random_on_grid(rng, atoms)
        res = moment_inverse(truth.moments(2 * atoms))
        worst = max(worst, emd_w1(res.distribution, truth))
    assert worst <= 0.02


def test_average_examples():
    d0 = SpectralDistribution([0.0], [1.0])
    d1 = SpectralDistribution([1.0], [1.0])
    avg = average_distributions([d0, d1])
    np.testing.assert_array_equal(avg.support, [0, 1])
    np.testing.assert_allclose(avg.masses, [0.5, 0.5])
    p = SpectralDistribution([0.1, 0.4, 0.9], [0.2, 0.3, 0.5])
    same = average_distributions([p] * 7)
    np.testing.assert_allclose(same.support, p.support)
    np.testing.assert_allclose(same.masses, p.masses, atol=1e-15)
    with pytest.raises(ValueError):
        average_distributions([])


@pytest.mark.parametrize("seed", range(20))
def test_average_is_closer(seed):
    rng = np.random.default_rng(seed)
    p = _random_on_grid(rng, int(rng.integers(1, 10)))
    q = _random_on_grid(rng, int(rng.integers(1, 10)))
    avg = average_distributions([p, q])
    assert abs(avg.total - 1) <= 1e-12
    assert emd_w1(avg, p) <= emd_w1(q, p) + 1e-12


def test_walk_to_laplacian_examples():
    d = walk_to_laplacian(SpectralDistribution([-1.0, 1.0], [0.5, 0.5]))
    np.testing.assert_array_equal(d.support, [0, 2])
    np.testing.assert_array_equal(d.masses, [0.5, 0.5])
    d = walk_to_laplacian(SpectralDistribution([1.0], [1.0]))
    np.testing.assert_array_equal(d.support, [0])
    with pytest.raises(ValueError):
        walk_to_laplacian(SpectralDistribution([-1.1, 0.0], [0.5, 0.5]))


@pytest.mark.parametrize("seed", range(20))
def test_walk_to_laplacian_isometry(seed):
    rng = np.random.default_rng(seed)
    p = SpectralDistribution.from_points(rng.uniform(-1, 1, 7), rng.dirichlet(np.ones(7)))
    q = SpectralDistribution.from_points(rng.uniform(-1, 1, 4), rng.dirichlet(np.ones(4)))
    assert emd_w1(walk_to_laplacian(p), walk_to_laplacian(q)) == pytest.approx(
        emd_w1(p, q), abs=1e-12)
