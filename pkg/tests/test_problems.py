import math

import numpy as np
import pytest
import scipy.integrate

from specreg import (
    NoiseSpec,
    abel_problem,
    craig_brown,
    cubic_problem,
    gauss_legendre,
    gaussian_noise,
    make_dataset,
    riemann_liouville_quad,
    sample_grid,
)
from specreg.problems import DEFAULT_SEED


class TestCraigBrown:
    def test_wide_variant_values(self):
        p = craig_brown(variant="wide")
        assert p.name == "craig-brown-wide"
        assert p.domain == (0.0, 2.0)
        assert float(p.g(0.0)) == 0.0
        assert float(p.f(0.0)) == pytest.approx(1.6, rel=1e-15)
        assert float(p.g(2.0)) == pytest.approx(
            1.0 - math.exp(-1.6) + 0.04 * math.sin(40.0), rel=1e-14)

    def test_unit_variant_is_the_rescaled_wide_one(self):
        w, u = craig_brown(variant="wide"), craig_brown(variant="unit")
        xs = np.linspace(0.0, 1.0, 17)
        assert np.allclose(u.g(xs), w.g(2.0 * xs), atol=1e-15)
        assert np.allclose(u.f(xs), 2.0 * w.f(2.0 * xs), atol=1e-14)
        assert u.domain == (0.0, 1.0)
        assert u.family.kind == "trig"

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            craig_brown(variant="narrow")


class TestCubic:
    def test_unit_variant_values(self):
        p = cubic_problem()
        assert p.domain == (0.0, 1.0)
        assert float(p.g(0.0)) == 0.0
        assert float(p.g(0.5)) == 0.5
        assert float(p.g(1.0)) == 1.0
        assert float(p.f(0.5)) == 0.0

    def test_legendre_variant_values(self):
        p = cubic_problem("legendre")
        assert p.domain == (-1.0, 1.0)
        assert p.family.kind == "legendre"
        assert float(p.g(-1.0)) == 0.0
        assert float(p.g(1.0)) == 1.0
        assert float(p.f(0.5)) == pytest.approx(0.375, rel=1e-15)


class TestAbel:
    def test_endpoint_values(self):
        p = abel_problem()
        assert float(p.g(-1.0)) == 0.0
        assert float(p.f(-1.0)) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-15)
        assert float(p.g(1.0)) == pytest.approx(
            194.0 / (105.0 * math.sqrt(math.pi)), rel=1e-14)
        assert p.family.mu == 0.5


class TestForwardRelations:
    """g must actually be the integral (plain or fractional) of f."""

    @pytest.mark.parametrize("prob", [craig_brown(), craig_brown(variant="wide"),
                                      cubic_problem(), cubic_problem("legendre")])
    def test_g_integrates_f(self, prob):
        a, b = prob.domain
        nodes, weights = gauss_legendre(400)
        for x in np.linspace(a, b, 23)[1:]:
            t = a + 0.5 * (x - a) * (nodes + 1.0)
            integral = 0.5 * (x - a) * float(weights @ prob.f(t))
            assert integral == pytest.approx(float(prob.g(x)) - float(prob.g(a)),
                                             abs=1e-8)

    def test_abel_g_is_the_half_integral_of_f(self):
        p = abel_problem()
        xs = np.linspace(-0.9, 1.0, 21)
        assert np.max(np.abs(riemann_liouville_quad(p.f, 0.5, -1.0, xs)
                             - p.g(xs))) <= 1e-10

    def test_abel_against_adaptive_quadrature(self):
        p = abel_problem()
        x = 0.7
        val, _ = scipy.integrate.quad(p.f, -1.0, x, weight="alg",
                                      wvar=(0.0, -0.5))
        assert val / math.gamma(0.5) == pytest.approx(float(p.g(x)), rel=1e-10)


class TestSampleGrid:
    def test_right_aligned_default(self):
        xs = sample_grid(4, (0.0, 1.0))
        assert np.allclose(xs, [0.25, 0.5, 0.75, 1.0], atol=1e-15)

    def test_include_left_adds_the_origin(self):
        xs = sample_grid(4, (0.0, 1.0), include_left=True)
        assert xs.shape == (5,)
        assert xs[0] == 0.0 and xs[-1] == 1.0

    def test_general_interval(self):
        xs = sample_grid(10, (-1.0, 1.0))
        assert xs[0] == pytest.approx(-0.8) and xs[-1] == 1.0
        assert np.allclose(np.diff(xs), 0.2, atol=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            sample_grid(0, (0.0, 1.0))
        with pytest.raises(ValueError):
            sample_grid(5, (1.0, 1.0))


class TestGaussianNoise:
    def test_repeated_calls_agree_bitwise(self):
        spec = NoiseSpec(sigma=0.05)
        assert np.array_equal(gaussian_noise(100, spec), gaussian_noise(100, spec))

    def test_prefix_property(self):
        spec = NoiseSpec(sigma=1.0, seed=11)
        assert np.array_equal(gaussian_noise(250, spec)[:50], gaussian_noise(50, spec))

    def test_frozen_head_draws(self, craig_brown_golden):
        got = gaussian_noise(6, NoiseSpec(sigma=1.0, seed=DEFAULT_SEED))
        assert np.array_equal(got, np.array(craig_brown_golden["noise_head"]))

    def test_sigma_scales_linearly(self):
        a = gaussian_noise(64, NoiseSpec(sigma=1.0, seed=3))
        b = gaussian_noise(64, NoiseSpec(sigma=0.25, seed=3))
        assert np.array_equal(b, 0.25 * a)

    def test_sample_moments(self):
        draws = gaussian_noise(100_000, NoiseSpec(sigma=1.0, seed=123))
        assert abs(float(np.mean(draws))) <= 0.02
        assert abs(float(np.var(draws)) - 1.0) <= 0.02

    def test_needs_at_least_one_draw(self):
        with pytest.raises(ValueError):
            gaussian_noise(0, NoiseSpec(sigma=1.0))


class TestNoiseSpec:
    def test_default_seed(self):
        assert NoiseSpec(sigma=0.05).seed == DEFAULT_SEED

    def test_sigma_must_be_positive(self):
        with pytest.raises(ValueError):
            NoiseSpec(sigma=0.0)
        with pytest.raises(ValueError):
            NoiseSpec(sigma=-0.1)


class TestMakeDataset:
    def test_noisy_dataset_records_the_noise_level(self):
        ds = make_dataset(craig_brown(), m=100, noise=NoiseSpec(sigma=0.05))
        assert ds.m == 100
        assert np.all(ds.s == 0.05)
        clean = craig_brown().g(ds.xs)
        assert not np.allclose(ds.g, clean, atol=1e-6)
        assert np.max(np.abs(ds.g - clean)) < 1.0  # perturbation, not garbage

    def test_noiseless_dataset_is_exact(self):
        p = cubic_problem()
        ds = make_dataset(p, m=50, s=1e-6)
        assert np.array_equal(ds.g, p.g(ds.xs))
        assert np.all(ds.s == 1e-6)

    def test_noiseless_dataset_requires_a_stated_s(self):
        with pytest.raises(ValueError, match="positive s"):
            make_dataset(craig_brown(), m=50)
        with pytest.raises(ValueError, match="positive s"):
            make_dataset(craig_brown(), m=50, s=0.0)

    def test_grid_spans_the_problem_domain(self):
        ds = make_dataset(abel_problem(), m=80, s=1.0)
        assert ds.xs[0] == pytest.approx(-1.0 + 2.0 / 80)
        assert ds.xs[-1] == 1.0
