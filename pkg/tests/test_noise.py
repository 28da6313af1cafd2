"""
Closed-form densities, the tangent Gaussian and Said samplers, image noise.
"""
import numpy as np
import pytest
from scipy import integrate, stats

from src.denoise import mse
from src.errors import DomainError, ParameterError, ShapeError
from src.imaging import generate
from src.manifolds import (
    ManifoldImage,
    ManifoldPoint,
    circle,
    euclidean,
    geometry_for,
    hyperbolic2,
    simplex1,
    spd,
    sphere2,
)
from src.noise import (
    NoiseModel,
    NoiseSpec,
    RngState,
    add_noise,
    cholesky_factor,
    h2_radial_pdf,
    haar_orthogonal,
    lognormal_pdf,
    lognormal_pdf_lebesgue,
    said_bound,
    said_log_ratio,
    said_proposal_variance,
    sample_said_eigenvalues,
    sample_said_spd,
    sample_tangent_gaussian,
    simplex_angle,
    simplex_cdf_delta1,
    simplex_pdf_delta1,
    wrap_angle,
    wrapped_gaussian_cdf_s1,
    wrapped_gaussian_pdf_s1,
)
from src.stats import karcher_mean

# -- densities ------------------------------------------------------------------


@pytest.mark.parametrize("sigma", [0.2, 1.0, 2.5])
def test_wrapped_gaussian_integrates_to_one(sigma):
    total, _ = integrate.quad(lambda t: wrapped_gaussian_pdf_s1(t, 0.7, sigma ** 2), -np.pi, np.pi, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_wrapped_gaussian_is_even_and_periodic():
    t = np.linspace(-3.0, 3.0, 13)
    np.testing.assert_allclose(
        wrapped_gaussian_pdf_s1(0.4 + t, 0.4, 0.5), wrapped_gaussian_pdf_s1(0.4 - t, 0.4, 0.5), rtol=1e-10
    )
    np.testing.assert_allclose(
        wrapped_gaussian_pdf_s1(t + 2.0 * np.pi, 0.4, 0.5), wrapped_gaussian_pdf_s1(t, 0.4, 0.5), rtol=1e-12
    )


def test_wrapped_gaussian_cdf_spans_zero_to_one():
    assert wrapped_gaussian_cdf_s1(-np.pi, 0.8) == pytest.approx(0.0, abs=1e-14)
    assert wrapped_gaussian_cdf_s1(np.pi, 0.8) == pytest.approx(1.0, abs=1e-12)
    assert wrapped_gaussian_cdf_s1(0.0, 0.8) == pytest.approx(0.5, abs=1e-12)


def test_narrow_wrapped_gaussian_is_a_normal():
    t = np.linspace(-0.5, 0.5, 11)
    np.testing.assert_allclose(wrapped_gaussian_pdf_s1(t, 0.0, 0.01), stats.norm.pdf(t, scale=0.1), rtol=1e-12)


def test_lognormal_integrates_to_one_against_dx_over_x():
    centre, spread = np.log(1.5), 15.0 * np.sqrt(0.3)
    total, _ = integrate.quad(lambda u: lognormal_pdf(np.exp(u), 1.5, 0.3), centre - spread, centre + spread)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_lognormal_lebesgue_form_matches_scipy():
    x = np.linspace(0.1, 6.0, 30)
    np.testing.assert_allclose(
        lognormal_pdf_lebesgue(x, 1.5, 0.3), stats.lognorm.pdf(x, s=np.sqrt(0.3), scale=1.5), rtol=1e-12
    )


@pytest.mark.parametrize("t_mu, sigma", [(0.6, 0.3), (1.2, 0.8), (2.9, 1.5)])
def test_simplex_density_integrates_to_one(t_mu, sigma):
    total, _ = integrate.quad(lambda t: simplex_pdf_delta1(t, t_mu, sigma ** 2), 0.0, np.pi, limit=200)
    assert total == pytest.approx(1.0, abs=1e-8)
    assert simplex_cdf_delta1(np.pi, t_mu, sigma ** 2) == pytest.approx(1.0, abs=1e-12)
    assert simplex_cdf_delta1(0.0, t_mu, sigma ** 2) == pytest.approx(0.0, abs=1e-14)


def test_simplex_density_sums_both_reflected_branches():
    t, t_mu, s2 = np.array([0.3, 1.7, 2.8]), 1.1, 0.6
    j = np.arange(-10, 11)
    expected = sum(
        np.exp(-(t[:, None] - c + 2.0 * np.pi * j) ** 2 / (2.0 * s2)).sum(axis=-1) for c in (t_mu, -t_mu)
    ) / np.sqrt(2.0 * np.pi * s2)
    np.testing.assert_allclose(simplex_pdf_delta1(t, t_mu, s2), expected, rtol=1e-12)


def test_simplex_angle_parametrisation():
    t = np.array([0.2, 1.0, 3.0])
    x = np.stack([(1.0 + np.cos(t)) / 2.0, (1.0 - np.cos(t)) / 2.0], axis=-1)
    np.testing.assert_allclose(simplex_angle(x), t, atol=1e-12)


@pytest.mark.parametrize("sigma", [0.3, 1.0])
def test_h2_radial_density_integrates_to_one(sigma):
    total, _ = integrate.quad(lambda r: 2.0 * np.pi * h2_radial_pdf(r, sigma) * np.sinh(r), 0.0, np.inf)
    assert total == pytest.approx(1.0, abs=1e-8)


def test_h2_radial_density_is_finite_at_the_origin():
    assert h2_radial_pdf(0.0, 0.5) == pytest.approx(1.0 / (2.0 * np.pi * 0.25))


def test_densities_reject_non_positive_variance():
    with pytest.raises(DomainError):
        wrapped_gaussian_pdf_s1(0.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        lognormal_pdf(1.0, 1.0, -1.0)
    with pytest.raises(DomainError):
        simplex_pdf_delta1(1.0, 1.0, 0.0)
    with pytest.raises(DomainError):
        h2_radial_pdf(1.0, 0.0)
    with pytest.raises(DomainError):
        simplex_pdf_delta1(np.pi, 1.0, 0.5)


def test_wrap_angle_range():
    w = wrap_angle(np.array([np.pi, -np.pi, 7.0, -7.0]))
    assert np.all(w >= -np.pi) and np.all(w < np.pi)


# -- samplers: distributions (slow) ---------------------------------------------


@pytest.mark.slow
def test_circle_samples_follow_the_wrapped_gaussian():
    g = geometry_for(circle())
    x = sample_tangent_gaussian(g, np.array([1.0, 0.0]), np.array([[0.04]]), RngState(11), size=10_000)
    angles = np.arctan2(x[:, 1], x[:, 0])
    assert stats.kstest(angles, lambda d: wrapped_gaussian_cdf_s1(d, 0.04)).statistic < 0.02


@pytest.mark.slow
def test_wide_circle_samples_follow_the_wrapped_gaussian():
    g = geometry_for(circle())
    x = sample_tangent_gaussian(g, np.array([1.0, 0.0]), np.array([[4.0]]), RngState(12), size=10_000)
    angles = np.arctan2(x[:, 1], x[:, 0])
    assert stats.kstest(angles, lambda d: wrapped_gaussian_cdf_s1(d, 4.0)).statistic < 0.02


@pytest.mark.slow
def test_positive_reals_samples_are_log_normal():
    g = geometry_for(spd(1))
    x = sample_tangent_gaussian(g, np.array([2.0]), np.array([[0.09]]), RngState(13), size=10_000)
    assert stats.kstest(x[:, 0], "lognorm", args=(0.3, 0.0, 2.0)).statistic < 0.02


@pytest.mark.slow
def test_simplex_samples_follow_the_folded_density():
    g = geometry_for(simplex1())
    t_mu = 0.6
    mu = np.array([(1.0 + np.cos(t_mu)) / 2.0, (1.0 - np.cos(t_mu)) / 2.0])
    x = sample_tangent_gaussian(g, mu, np.array([[0.64]]), RngState(14), size=10_000)
    t = simplex_angle(x)
    assert stats.kstest(t, lambda s: simplex_cdf_delta1(s, t_mu, 0.64)).statistic < 0.02


@pytest.mark.slow
def test_hyperbolic_radii_are_rayleigh():
    g = geometry_for(hyperbolic2())
    origin = np.array([0.0, 0.0, 1.0])
    x = sample_tangent_gaussian(g, origin, 0.49 * np.eye(2), RngState(15), size=10_000)
    r = g.dist(origin, x)
    assert stats.kstest(r, "rayleigh", args=(0.0, 0.7)).statistic < 0.02


def test_h2_radial_density_is_rayleigh_in_polar_coordinates():
    r = np.linspace(0.05, 3.0, 20)
    np.testing.assert_allclose(
        2.0 * np.pi * h2_radial_pdf(r, 0.7) * np.sinh(r), stats.rayleigh.pdf(r, scale=0.7), rtol=1e-12
    )


@pytest.mark.slow
def test_sphere_sample_mean_is_close_to_the_centre():
    g = geometry_for(sphere2())
    mu = np.array([0.0, 0.6, 0.8])
    sigma = 0.3
    x = sample_tangent_gaussian(g, mu, sigma ** 2 * np.eye(2), RngState(16), size=10_000)
    m = karcher_mean(g, x)
    assert g.dist(mu, m) <= 4.0 * sigma / np.sqrt(10_000)


def _spd2_statistics(samples: np.ndarray):
    g = geometry_for(spd(2))
    m = karcher_mean(g, samples)
    v = g.log(m, samples)
    sigma_hat = np.sqrt(np.mean(np.sum(v ** 2, axis=-1)) / g.dim)
    return m.reshape(2, 2), sigma_hat, v.T @ v / len(v)


@pytest.mark.slow
def test_tangent_model_on_spd2_recovers_its_parameters():
    g = geometry_for(spd(2))
    x = sample_tangent_gaussian(g, np.eye(2).ravel(), 0.25 * np.eye(3), RngState(21), size=10_000)
    m, sigma_hat, cov = _spd2_statistics(x)
    assert np.linalg.norm(m - np.eye(2)) <= 0.03
    assert 0.47 <= sigma_hat <= 0.53
    assert np.all(np.abs(np.diag(cov) - 0.25) <= 0.015)
    assert np.all(np.abs(cov[~np.eye(3, dtype=bool)]) < 0.015)


@pytest.mark.slow
def test_said_model_on_spd2_recovers_its_parameters():
    x = sample_said_spd(np.eye(2).ravel(), 0.25, RngState(22).generator(), size=10_000)
    assert geometry_for(spd(2)).is_valid(x).all()
    m, sigma_hat, _ = _spd2_statistics(x)
    assert np.linalg.norm(m - np.eye(2)) <= 0.03
    assert 0.47 <= sigma_hat <= 0.53


# -- Said sampler ------------------------------------------------------------------


def test_said_bound_constant():
    assert said_bound(2) == pytest.approx(np.exp(0.25) / 2.0)
    assert said_bound(3) == pytest.approx(np.exp(0.75) / 8.0)


@pytest.mark.parametrize("r, sigma", [(2, 0.5), (3, 0.4)])
def test_said_ratio_never_exceeds_the_bound(r, sigma):
    gen = RngState(5).aux()
    rho = np.sqrt(said_proposal_variance(r, sigma ** 2)) * gen.standard_normal((100_000, r))
    assert np.all(said_log_ratio(rho, sigma ** 2) <= np.log(said_bound(r)))


@pytest.mark.parametrize("r, sigma", [(2, 1.0), (2, 1.5), (3, 0.75)])
def test_said_rejects_large_variance(r, sigma):
    with pytest.raises(DomainError):
        sample_said_eigenvalues(r, sigma ** 2)
    with pytest.raises(DomainError):
        sample_said_spd(np.eye(r).ravel(), sigma ** 2)


def test_said_eigenvalues_shape_and_acceptance_rate():
    rho, rate = sample_said_eigenvalues(3, 0.16, RngState(3), size=500)
    assert rho.shape == (500, 3)
    assert 0.0 < rate <= 1.0
    assert np.all(np.isfinite(rho))


def test_haar_matrices_are_orthogonal():
    q = haar_orthogonal(3, RngState(4), size=50)
    np.testing.assert_allclose(q @ np.swapaxes(q, -1, -2), np.broadcast_to(np.eye(3), (50, 3, 3)), atol=1e-12)


def test_said_samples_are_spd_and_reproducible():
    mu = np.array([2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 1.5])
    a = sample_said_spd(mu, 0.1, RngState(9), size=20)
    b = sample_said_spd(mu, 0.1, RngState(9), size=20)
    assert np.array_equal(a, b)
    assert geometry_for(spd(3)).is_valid(a).all()
    assert np.array_equal(sample_said_spd(mu, 0.0, RngState(9)), mu)


# -- tangent sampler and image noise --------------------------------------------------


def test_zero_covariance_returns_the_mean():
    g = geometry_for(sphere2())
    mu = np.array([0.0, 0.0, 1.0])
    assert cholesky_factor(np.zeros((2, 2))) is None
    assert np.array_equal(sample_tangent_gaussian(g, mu, np.zeros((2, 2)), RngState(1)), mu)


def test_covariance_must_match_the_dimension():
    g = geometry_for(sphere2())
    with pytest.raises(ShapeError):
        sample_tangent_gaussian(g, np.array([0.0, 0.0, 1.0]), np.eye(3), RngState(1))
    with pytest.raises(ShapeError):
        cholesky_factor(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_tangent_samples_are_valid_points():
    for descriptor, mu in [
        (simplex1(), np.array([0.5, 0.5])),
        (hyperbolic2(), np.array([0.0, 0.0, 1.0])),
        (spd(3), np.eye(3).ravel()),
    ]:
        g = geometry_for(descriptor)
        x = sample_tangent_gaussian(g, mu, 0.8 * np.eye(g.dim), RngState(2), size=200)
        assert x.shape == (200, descriptor.ambient_len)
        assert g.is_valid(x).all()


def test_add_noise_is_reproducible_and_per_pixel():
    image = ManifoldImage.constant(ManifoldPoint(sphere2(), [0.0, 0.0, 1.0]), (6, 5))
    spec = NoiseSpec(sigma=0.2)
    a = add_noise(image, spec, RngState(7))
    b = add_noise(image, spec, RngState(7))
    c = add_noise(image, spec, RngState(8))
    assert np.array_equal(a.data, b.data)
    assert not np.array_equal(a.data, c.data)
    assert a.valid_mask().all()
    # pixel k draws from stream k, so a crop of a larger image sees the same noise
    wide = ManifoldImage.constant(ManifoldPoint(sphere2(), [0.0, 0.0, 1.0]), (7, 5))
    np.testing.assert_allclose(add_noise(wide, spec, RngState(7)).data[:6], a.data, rtol=0.0, atol=1e-14)


@pytest.mark.parametrize("name, sigma, expected", [
    ("s1-shapes", 0.3, 0.09),
    ("spd3-blocks", 0.125, 6 * 0.125 ** 2),
])
def test_noise_level_matches_sigma_squared_per_dimension(name, sigma, expected):
    clean = generate(name, (64, 64), seed=5)
    noisy = add_noise(clean, NoiseSpec(sigma=sigma), RngState(6))
    assert mse(clean, noisy) == pytest.approx(expected, rel=0.1)


def test_add_noise_at_zero_sigma_copies_the_image():
    image = ManifoldImage(euclidean(2), np.arange(24, dtype=float).reshape(3, 4, 2))
    noisy = add_noise(image, NoiseSpec(sigma=0.0), RngState(1))
    assert np.array_equal(noisy.data, image.data)
    assert noisy.data is not image.data


def test_add_noise_uses_a_full_covariance():
    image = ManifoldImage(euclidean(2), np.zeros((60, 60, 2)))
    cov = np.array([[1.0, 0.8], [0.8, 1.0]])
    noisy = add_noise(image, NoiseSpec(sigma=1.0, covariance=cov), RngState(2))
    sample = noisy.data.reshape(-1, 2)
    np.testing.assert_allclose(np.cov(sample.T), cov, atol=0.08)


def test_said_noise_needs_spd_pixels_and_small_sigma():
    circle_image = ManifoldImage.constant(ManifoldPoint(circle(), [1.0, 0.0]), (4, 4))
    with pytest.raises(ParameterError):
        add_noise(circle_image, NoiseSpec(model=NoiseModel.SAID, sigma=0.1))
    spd_image = ManifoldImage.constant(ManifoldPoint(spd(2), np.eye(2).ravel()), (4, 4))
    with pytest.raises(DomainError):
        add_noise(spd_image, NoiseSpec(model=NoiseModel.SAID, sigma=1.5))
    noisy = add_noise(spd_image, NoiseSpec(model=NoiseModel.SAID, sigma=0.3), RngState(3))
    assert noisy.valid_mask().all()


def test_noise_spec_validation():
    with pytest.raises(ValueError):
        NoiseSpec(sigma=-0.1)
    with pytest.raises(ValueError):
        NoiseSpec(sigma=0.1, covariance=np.ones(3))
    with pytest.raises(ShapeError):
        NoiseSpec(sigma=0.1, covariance=np.eye(3)).check_compatible(sphere2())


def test_rng_streams_are_independent_of_draw_order():
    state = RngState(42)
    first = state.generator(3).standard_normal(4)
    state.generator(1).standard_normal(100)
    assert np.array_equal(state.generator(3).standard_normal(4), first)
    assert not np.array_equal(state.generator(4).standard_normal(4), first)
    with pytest.raises(ParameterError):
        RngState(-1)
