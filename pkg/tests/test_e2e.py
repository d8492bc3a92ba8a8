import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, stats

from conftest import PARAMETER_MATRIX, make_setup
from rfuwoc.channels import (AlphaMuParams, alpha_mu_cdf, alpha_mu_cdf_closed, alpha_mu_sample,
                             egg_pdf, egg_sample)
from rfuwoc.e2e import (RelayConfig, cdf_gamma_eq, cdf_gamma_eq_result,
                        clamp_probability, fixed_gain_constant, gamma_eq,
                        mean_inverse_one_plus_snr, pdf_gamma_eq)
from rfuwoc.errors import ConfigError, ConvergenceError
from rfuwoc.montecarlo import (McConfig, mc_cdf_gamma_eq, mc_mean_inverse_one_plus_snr,
                               stream_generator)


def cdf_by_conditioning(links, relay, gamma):
    """P[g1 g2 / (g2 + C) <= gamma] as a 1-D integral over g2 of the closed-form RF CDF."""
    relay_c = fixed_gain_constant(links.rf, relay)

    def integrand(g2):
        return alpha_mu_cdf_closed(links.rf, gamma * (g2 + relay_c) / g2) * egg_pdf(links.uwoc, g2)

    scale = links.uwoc.mu_r
    pieces = (0, 1e-8 * scale, 1e-3 * scale, 0.1 * scale, scale, 10 * scale, np.inf)
    return sum(integrate.quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-11, limit=400)[0]
               for lo, hi in zip(pieces[:-1], pieces[1:]))


# --- combining rule ----------------------------------------------------------

def test_gamma_eq_examples():
    assert gamma_eq(0.0, 5.0, 2.0) == 0.0
    assert gamma_eq(10.0, 5.0, 2.0) == pytest.approx(50 / 7, rel=1e-15)
    assert gamma_eq(10.0, np.inf, 2.0) == 10.0
    assert gamma_eq(10.0, 1e12, 2.0) == pytest.approx(10.0, rel=1e-10)


@settings(max_examples=200)
@given(st.floats(0, 1e6), st.floats(0, 1e6), st.floats(1e-3, 1e3))
def test_gamma_eq_bounds(g1, g2, c):
    value = gamma_eq(g1, g2, c)
    assert 0 <= value <= g1
    assert value <= g1 * g2 / c * (1 + 1e-12)


# --- fixed-gain constant -------------------------------------------------------

def test_explicit_constant_passes_through():
    rf = AlphaMuParams(1.6, 1.5, 10.0)
    assert fixed_gain_constant(rf, RelayConfig.explicit(3.7)) == 3.7


def test_constant_scales_inversely_with_relay_power():
    rf = AlphaMuParams(1.6, 1.5, 10.0)
    one = fixed_gain_constant(rf, RelayConfig(P2=1.0))
    two = fixed_gain_constant(rf, RelayConfig(P2=2.0))
    assert two == pytest.approx(one / 2, rel=1e-12)
    assert fixed_gain_constant(rf, RelayConfig(P1=5.0)) == pytest.approx(one, rel=1e-12)


@pytest.mark.parametrize("alpha,mu", PARAMETER_MATRIX)
def test_inverse_snr_expectation_against_quadrature(alpha, mu):
    rf = AlphaMuParams(alpha, mu, 10.0)
    # E[1/(1+g)] with g = mean (X/mu)^(1/shape), X ~ Gamma(mu, 1)
    expected, _ = integrate.quad(
        lambda x: stats.gamma.pdf(x, mu) / (1 + rf.mean_snr * (x / mu) ** (2 / alpha)),
        0, np.inf, epsrel=1e-12)
    assert mean_inverse_one_plus_snr(rf) == pytest.approx(expected, rel=1e-9)


def test_constant_against_monte_carlo():
    links, _, relay = make_setup(2.0, 1.0, 10.0, 10.0, 10.0)
    mean, se = mc_mean_inverse_one_plus_snr(links, McConfig(1_000_000, master_seed=1))
    c_mc = 1.0 / mean
    c_se = se / mean ** 2
    assert abs(fixed_gain_constant(links.rf, relay) - c_mc) <= 3 * c_se


def test_invalid_relay_config():
    with pytest.raises(ConfigError):
        RelayConfig.explicit(-1.0)
    with pytest.raises(ConfigError):
        RelayConfig(P2=0.0)


# --- CDF ------------------------------------------------------------------------

@pytest.mark.parametrize("gamma", [0.3, 3.0, 30.0])
def test_cdf_against_conditioning_oracle(fig2_setup, gamma):
    links, _, relay = fig2_setup
    assert cdf_gamma_eq(links, relay, gamma) == pytest.approx(
        cdf_by_conditioning(links, relay, gamma), abs=2e-7)


@pytest.mark.parametrize("r", [1, 2])
@pytest.mark.parametrize("label", ["[4.7, 0]", "[16.5, 0]"])
def test_cdf_oracle_other_presets(r, label):
    links, _, relay = make_setup(2.1, 1.4, 10.0, 0.0, 5.0, label, r=r)
    for gamma in (0.5, 5.0):
        assert cdf_gamma_eq(links, relay, gamma) == pytest.approx(
            cdf_by_conditioning(links, relay, gamma), abs=2e-7)


def test_cdf_against_monte_carlo_at_one(fig2_setup):
    links, _, relay = fig2_setup
    est = mc_cdf_gamma_eq(links, relay, [1.0], McConfig(1_000_000, master_seed=1))[0]
    assert abs(cdf_gamma_eq(links, relay, 1.0) - est.value) <= 3 * est.std_error


def test_cdf_boundaries(fig2_setup):
    links, _, relay = fig2_setup
    assert cdf_gamma_eq(links, relay, 1e-5) <= 1e-5
    assert cdf_gamma_eq(links, relay, 100 * links.rf.mean_snr) >= 1 - 1e-3


@pytest.mark.parametrize("alpha,mu", PARAMETER_MATRIX)
def test_cdf_monotone_bounded_and_dominated(alpha, mu):
    links, _, relay = make_setup(alpha, mu, 15.0, 0.0, 10.0)
    grid = np.geomspace(1e-2, 1e3, 50)
    values = np.array([cdf_gamma_eq(links, relay, g) for g in grid])
    assert np.all((values >= 0) & (values <= 1))
    assert np.all(np.diff(values) >= -1e-7)
    # the end-to-end SNR never exceeds the first-hop SNR
    rf_cdf = np.array([alpha_mu_cdf(links.rf, g) for g in grid])
    assert np.all(values >= rf_cdf - 1e-7)


def test_cdf_reports_terms(fig2_setup):
    links, _, relay = fig2_setup
    res = cdf_gamma_eq_result(links, relay, 2.0)
    assert len(res.terms) == 2
    assert res.value == pytest.approx(1 + sum(res.terms), abs=1e-15)


def test_clamping():
    assert clamp_probability(1 + 1e-9, 1e-7, "x") == 1.0
    assert clamp_probability(-1e-9, 1e-7, "x") == 0.0
    with pytest.raises(ConvergenceError):
        clamp_probability(1.01, 1e-7, "x")


# --- PDF ------------------------------------------------------------------------

@pytest.mark.parametrize("gamma", [0.2, 2.0, 20.0])
def test_pdf_matches_finite_difference(fig2_setup, gamma):
    links, _, relay = fig2_setup
    h = 1e-3 * gamma
    fd = (cdf_gamma_eq(links, relay, gamma + h, rel_tol=1e-10)
          - cdf_gamma_eq(links, relay, gamma - h, rel_tol=1e-10)) / (2 * h)
    assert pdf_gamma_eq(links, relay, gamma) == pytest.approx(fd, rel=1e-4)


def test_pdf_integrates_to_cdf_increment(fig2_setup):
    links, _, relay = fig2_setup
    # Gauss-Legendre panels in log10(gamma), one per decade
    nodes, weights = np.polynomial.legendre.leggauss(16)
    lo_exp, hi_exp = -2, 3
    total = 0.0
    for lo in range(lo_exp, hi_exp):
        u = 0.5 * nodes + lo + 0.5
        g = 10.0 ** u
        f = np.array([pdf_gamma_eq(links, relay, x) for x in g]) * g * math.log(10)
        total += 0.5 * float(np.dot(weights, f))
    increment = (cdf_gamma_eq(links, relay, 10.0 ** hi_exp, rel_tol=1e-10)
                 - cdf_gamma_eq(links, relay, 10.0 ** lo_exp, rel_tol=1e-10))
    assert total == pytest.approx(increment, abs=1e-6)
    assert increment > 0.99


@pytest.mark.slow
def test_pdf_histogram_chi_square(fig2_setup):
    links, _, relay = fig2_setup
    relay_c = fixed_gain_constant(links.rf, relay)
    rng = stream_generator(11, 0)
    n = 1_000_000
    draws = gamma_eq(alpha_mu_sample(links.rf, rng, n), egg_sample(links.uwoc, rng, n), relay_c)
    edges = np.linspace(0.0, 60.0, 51)
    counts, _ = np.histogram(draws, edges)
    nodes, weights = np.polynomial.legendre.leggauss(3)
    expected = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        g = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        expected.append(n * 0.5 * (hi - lo) * sum(w * pdf_gamma_eq(links, relay, x)
                                                   for w, x in zip(weights, g)))
    expected = np.array(expected)
    chi2 = np.sum((counts - expected) ** 2 / expected)
    assert chi2 < stats.chi2.ppf(0.99, df=edges.size - 1)

