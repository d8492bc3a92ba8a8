import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_setup
from rfuwoc.montecarlo import (McConfig, McEstimate, mc_cdf_gamma_eq, mc_pnz, mc_secrecy_counts,
                               mc_sop_exact, mc_sop_lower, stream_generator)
from rfuwoc.secrecy import SecrecyConfig


@pytest.fixture
def small_setup():
    return make_setup(1.6, 1.5, 15.0, 5.0, 10.0)


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(10)
    with pytest.raises(ValueError):
        McConfig(stream_count=0)
    with pytest.raises(ValueError):
        McConfig(master_seed=-1)


@settings(max_examples=50)
@given(st.integers(0, 10_000), st.integers(1, 10_000))
def test_standard_error_formula(hits, extra):
    trials = hits + extra
    est = McEstimate.from_count(hits, trials)
    p = hits / trials
    assert est.value == p
    assert est.std_error == pytest.approx(math.sqrt(p * (1 - p) / trials), rel=1e-12)
    lo, hi = est.interval(2.0)
    assert hi - lo == pytest.approx(4 * est.std_error)


def test_streams_are_distinct_and_reproducible():
    a = stream_generator(7, 0).random(5)
    assert np.array_equal(a, stream_generator(7, 0).random(5))
    assert not np.array_equal(a, stream_generator(7, 1).random(5))
    assert not np.array_equal(a, stream_generator(8, 0).random(5))


def test_result_independent_of_worker_count(small_setup):
    links, eve, relay = small_setup
    sc = SecrecyConfig(0.1)
    serial = mc_secrecy_counts(links, eve, relay, sc, McConfig(300_000, 3, 6, workers=1))
    threaded = mc_secrecy_counts(links, eve, relay, sc, McConfig(300_000, 3, 6, workers=4))
    assert serial == threaded


def test_stream_count_changes_draws_but_not_statistics(small_setup):
    links, eve, relay = small_setup
    sc = SecrecyConfig(0.1)
    a = mc_sop_lower(links, eve, relay, sc, McConfig(400_000, 3, stream_count=2))
    b = mc_sop_lower(links, eve, relay, sc, McConfig(400_000, 3, stream_count=5))
    assert a.value != b.value
    assert abs(a.value - b.value) <= 4 * math.hypot(a.std_error, b.std_error)


def test_uneven_split_counts_every_trial(small_setup):
    links, eve, relay = small_setup
    est = mc_pnz(links, eve, relay, McConfig(1001, 3, stream_count=4))
    assert est.trials == 1001
    assert est.value * 1001 == pytest.approx(round(est.value * 1001), abs=1e-9)


@pytest.mark.parametrize("rate", [0.0, 0.1, 1.0])
def test_event_containment(small_setup, rate):
    links, eve, relay = small_setup
    counts = mc_secrecy_counts(links, eve, relay, SecrecyConfig(rate), McConfig(200_000, 4))
    assert counts["sop_lower"].value <= counts["sop_exact"].value
    if rate == 0.0:
        assert counts["sop_lower"].value == counts["sop_exact"].value
        assert counts["sop_lower"].value + counts["pnz"].value == pytest.approx(1.0, abs=1e-12)


def test_single_metric_wrappers_agree_with_joint_run(small_setup):
    links, eve, relay = small_setup
    sc, mc = SecrecyConfig(0.1), McConfig(100_000, 9)
    joint = mc_secrecy_counts(links, eve, relay, sc, mc)
    assert mc_sop_exact(links, eve, relay, sc, mc) == joint["sop_exact"]
    assert mc_sop_lower(links, eve, relay, sc, mc) == joint["sop_lower"]


def test_large_threshold_gives_certain_outage(small_setup):
    links, eve, relay = small_setup
    assert mc_sop_exact(links, eve, relay, SecrecyConfig(40.0), McConfig(10_000, 1)).value == 1.0


def test_symmetric_links_give_even_odds():
    # identical alpha-mu statistics on main and eavesdropper with a transparent relay
    links, eve, relay = make_setup(2.0, 1.0, 10.0, 10.0, 80.0)
    est = mc_pnz(links, eve, relay, McConfig(400_000, 2))
    assert abs(est.value - 0.5) <= 4 * est.std_error + 1e-3


def test_empirical_cdf_is_ordered_and_unsorted_grid_is_respected(small_setup):
    links, _, relay = small_setup
    grid = [10.0, 0.1, 1.0]
    est = mc_cdf_gamma_eq(links, relay, grid, McConfig(50_000, 1))
    assert est[1].value <= est[2].value <= est[0].value
    assert [e.trials for e in est] == [50_000] * 3
