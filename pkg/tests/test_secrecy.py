import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from conftest import PARAMETER_MATRIX, make_setup
from rfuwoc.channels import AlphaMuParams, db_to_linear, get_preset
from rfuwoc.e2e import LinkPair, RelayConfig, cdf_gamma_eq
from rfuwoc.errors import DomainError
from rfuwoc.montecarlo import McConfig, mc_secrecy_counts
from rfuwoc.secrecy import (SecrecyConfig, ThresholdBase, pnz_asymptotic_high_eve,
                            pnz_asymptotic_high_main, pnz_exact, pnz_exact_result,
                            sop_asymptotic_high_eve, sop_asymptotic_high_main, sop_lower_bound,
                            sop_lower_bound_result, sop_rayleigh_special)

SC = SecrecyConfig(0.01)


def _with_main(links, db):
    return LinkPair(links.rf.with_mean_snr(db_to_linear(db)), links.uwoc)


def _with_eve(eve, db):
    return eve.with_mean_snr(db_to_linear(db))


def _rel_gap(approx, exact):
    return (approx - exact) / exact


def sop_by_eve_quantiles(links, eve, relay, theta, nodes=32):
    """E[F_eq(theta * g_e)] through the inverse CDF of g_e; uses only the univariate e2e CDF."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    total = 0.0
    for lo, hi in ((0.0, 0.9), (0.9, 0.999), (0.999, 1.0)):
        u = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        ge = eve.mean_snr * (special.gammaincinv(eve.mu, u) / eve.mu) ** (1 / eve.shape)
        total += 0.5 * (hi - lo) * sum(wi * cdf_gamma_eq(links, relay, theta * g)
                                       for wi, g in zip(w, ge))
    return total


# --- threshold ---------------------------------------------------------------------

def test_threshold_bases():
    assert SecrecyConfig(0.0).theta == 1.0
    assert SecrecyConfig(1.0).theta == pytest.approx(math.e)
    assert SecrecyConfig(1.0, ThresholdBase.BINARY).theta == 2.0
    assert SecrecyConfig(0.5, "binary").theta == pytest.approx(math.sqrt(2))
    with pytest.raises(ValueError):
        SecrecyConfig(-0.1)


@settings(max_examples=50)
@given(st.floats(0.0, 20.0))
def test_theta_at_least_one(rate):
    assert SecrecyConfig(rate).theta >= 1.0


# --- exact metrics ------------------------------------------------------------------

@pytest.mark.parametrize("alpha,mu", PARAMETER_MATRIX)
@pytest.mark.parametrize("r", [1, 2])
def test_theta_one_identity(alpha, mu, r):
    links, eve, relay = make_setup(alpha, mu, 15.0, 5.0, 10.0, r=r)
    total = sop_lower_bound(links, eve, relay, SecrecyConfig(0.0)) + pnz_exact(links, eve, relay)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_sop_lower_against_quantile_average(fig2_setup):
    links, eve, relay = fig2_setup
    for rate in (0.01, 0.5):
        sc = SecrecyConfig(rate)
        oracle = sop_by_eve_quantiles(links, eve, relay, sc.theta)
        assert sop_lower_bound(links, eve, relay, sc) == pytest.approx(oracle, abs=2e-6)


def test_pnz_against_quantile_average():
    links, eve, relay = make_setup(2.1, 1.4, 20.0, 0.0, 0.0, "[2.4, 0]")
    oracle = 1.0 - sop_by_eve_quantiles(links, eve, relay, 1.0)
    assert pnz_exact(links, eve, relay) == pytest.approx(oracle, abs=2e-6)


def test_sop_lower_against_monte_carlo(fig2_setup):
    links, eve, relay = fig2_setup
    counts = mc_secrecy_counts(links, eve, relay, SC, McConfig(1_000_000, master_seed=1))
    analytic = sop_lower_bound(links, eve, relay, SC)
    assert abs(analytic - counts["sop_lower"].value) <= 3 * counts["sop_lower"].std_error
    assert analytic <= counts["sop_exact"].value + 3 * counts["sop_exact"].std_error


def test_results_carry_terms(fig2_setup):
    links, eve, relay = fig2_setup
    sop = sop_lower_bound_result(links, eve, relay, SC)
    pnz = pnz_exact_result(links, eve, relay)
    assert len(sop.terms) == len(pnz.terms) == 2
    assert sop.raw == pytest.approx(1 + sum(sop.terms), abs=1e-15)
    assert pnz.raw == pytest.approx(sum(pnz.terms), abs=1e-15)
    assert sop.nodes > 0 and sop.error >= 0


@pytest.mark.parametrize("alpha,mu", PARAMETER_MATRIX)
def test_metrics_in_unit_interval_and_monotone(alpha, mu):
    links, eve, relay = make_setup(alpha, mu, 0.0, 10.0, 10.0)
    sops = [sop_lower_bound(_with_main(links, db), eve, relay, SC) for db in range(0, 41, 8)]
    pnzs = [pnz_exact(_with_main(links, db), eve, relay) for db in range(0, 41, 8)]
    assert all(0.0 <= v <= 1.0 for v in sops + pnzs)
    assert np.all(np.diff(sops) <= 1e-7)
    assert np.all(np.diff(pnzs) >= -1e-7)


def test_sop_increases_with_rate(fig2_setup):
    links, eve, relay = fig2_setup
    values = [sop_lower_bound(links, eve, relay, SecrecyConfig(r)) for r in (0.0, 0.1, 1.0, 3.0)]
    assert np.all(np.diff(values) > 0)


def test_pnz_decays_in_eve_snr():
    links, eve, relay = make_setup(2.1, 1.4, 20.0, 0.0, 20.0)
    values = [pnz_exact(links, _with_eve(eve, db), relay) for db in (0, 10, 20, 30, 40)]
    assert np.all(np.diff(values) < 0)
    assert values[-1] < 0.05


# --- asymptotes -----------------------------------------------------------------------

def _gaps(exact_fn, approx_fn, grid):
    return np.array([abs(_rel_gap(approx_fn(db), exact_fn(db))) for db in grid])


def test_high_main_sop_asymptote_tightens(fig2_setup):
    links, eve, relay = fig2_setup
    gaps = _gaps(lambda db: sop_lower_bound(_with_main(links, db), eve, relay, SC),
                 lambda db: sop_asymptotic_high_main(_with_main(links, db), eve, relay, SC),
                 (30.0, 35.0, 40.0))
    assert gaps[-1] <= 0.05
    assert np.all(np.diff(gaps) < 0)


def test_high_eve_sop_asymptote_tightens():
    links, eve, relay = make_setup(1.6, 1.5, 10.0, 0.0, 10.0)
    gaps = _gaps(lambda db: sop_lower_bound(links, _with_eve(eve, db), relay, SC),
                 lambda db: sop_asymptotic_high_eve(links, _with_eve(eve, db), relay, SC),
                 (30.0, 35.0, 40.0))
    assert gaps[-1] <= 0.05
    assert np.all(np.diff(gaps) < 0)


@pytest.mark.xfail(strict=True, reason="with the shape-root-mean reading of the average SNR the "
                   "high-eve asymptote is 13.5% off at 25 dB for this setup; it reaches 5% "
                   "only near 30 dB")
def test_high_eve_sop_asymptote_at_25_db_fig6_setup():
    links, eve, relay = make_setup(1.6, 1.5, 20.0, 25.0, 20.0)
    exact = sop_lower_bound(links, eve, relay, SC)
    assert abs(_rel_gap(sop_asymptotic_high_eve(links, eve, relay, SC), exact)) <= 0.05


def test_high_eve_sop_asymptote_at_25_db_steeper_fading():
    # a larger alpha makes the eavesdropper tail fall faster, so the single residue dominates sooner
    links, eve, relay = make_setup(3.2, 1.5, 20.0, 25.0, 20.0)
    exact = sop_lower_bound(links, eve, relay, SC)
    assert abs(_rel_gap(sop_asymptotic_high_eve(links, eve, relay, SC), exact)) <= 0.05


def test_high_main_pnz_asymptote_tightens():
    links, eve, relay = make_setup(2.1, 1.4, 0.0, 0.0, 0.0, "[2.4, 0]")
    # PNZ tends to one, so compare the complements where the gap is visible
    gaps = _gaps(lambda db: 1.0 - pnz_exact(_with_main(links, db), eve, relay),
                 lambda db: 1.0 - pnz_asymptotic_high_main(_with_main(links, db), eve, relay),
                 (30.0, 35.0, 40.0))
    assert gaps[-1] <= 0.05
    assert np.all(np.diff(gaps) < 0)


def test_high_eve_pnz_asymptote_tightens():
    links, eve, relay = make_setup(2.1, 1.4, 20.0, 0.0, 20.0)
    grid = (30.0, 40.0, 50.0)
    gaps = _gaps(lambda db: pnz_exact(links, _with_eve(eve, db), relay),
                 lambda db: pnz_asymptotic_high_eve(links, _with_eve(eve, db), relay), grid)
    assert gaps[1] <= 0.05
    assert np.all(np.diff(gaps) < 0)


def test_theta_one_asymptotes_are_complementary(fig2_setup):
    links, eve, relay = fig2_setup
    far = _with_main(links, 45.0)
    total = (sop_asymptotic_high_main(far, eve, relay, SecrecyConfig(0.0))
             + pnz_asymptotic_high_main(far, eve, relay))
    assert total == pytest.approx(1.0, abs=1e-9)


def test_high_eve_sop_tends_to_one(fig2_setup):
    links, eve, relay = fig2_setup
    assert sop_asymptotic_high_eve(links, _with_eve(eve, 80.0), relay, SC) == pytest.approx(1.0, abs=1e-6)


# --- Rayleigh radio legs ----------------------------------------------------------------

def _rayleigh_setup(main_db, eve_db, preset="[2.4, 0.05]"):
    base = get_preset(preset).params
    uwoc = type(base)(base.omega, base.lambda_, base.a, base.b, 1.0, 1, 10.0)
    return (LinkPair(AlphaMuParams.from_db(2.0, 1.0, main_db), uwoc),
            AlphaMuParams.from_db(2.0, 1.0, eve_db), RelayConfig())


@pytest.mark.parametrize("preset", ["[2.4, 0.05]", "[16.5, 0]"])
@pytest.mark.parametrize("rate", [0.01, 0.1, 1.0])
def test_rayleigh_closed_form_matches_reduced_asymptote(preset, rate):
    sc = SecrecyConfig(rate)
    for main_db in (20.0, 30.0, 40.0):
        links, eve, relay = _rayleigh_setup(main_db, 5.0, preset)
        assert sop_rayleigh_special(links, eve, relay, sc) == pytest.approx(
            sop_asymptotic_high_main(links, eve, relay, sc), abs=1e-8)


def test_rayleigh_closed_form_domain():
    links, eve, relay = make_setup(1.6, 1.5, 30.0, 5.0, 10.0)
    with pytest.raises(DomainError, match="alpha"):
        sop_rayleigh_special(links, eve, relay, SC)
