"""Built-in invariant checks behind ``rfuwoc selftest``."""

from __future__ import annotations

import math

import numpy as np

from .channels import (AlphaMuParams, alpha_mu_cdf, alpha_mu_cdf_closed, egg_ccdf,
                       egg_ccdf_closed, get_preset)
from .e2e import LinkPair, RelayConfig
from .mellin import (BivariateFoxHSpec, ContourSpec, bivariate_fox_h, choose_bivariate_contours,
                     choose_contour, fox_h, fox_h_spec)
from .montecarlo import McConfig, mc_secrecy_counts
from .secrecy import (SecrecyConfig, pnz_exact, sop_asymptotic_high_main, sop_lower_bound,
                      sop_rayleigh_special)


def _univariate(spec, z, rel_tol):
    if rel_tol is None:
        return fox_h(spec, z).value
    c = choose_contour(spec, z, rel_tol=rel_tol)
    return fox_h(spec, z, ContourSpec(c.sigma, c.half_height, rel_tol, c.max_nodes)).value


def _check_exp_reduction(rel_tol):
    spec = fox_h_spec(1, 0, [], [(0.0, 1.0)])
    zs = np.geomspace(1e-3, 30.0, 20)
    err = max(abs(_univariate(spec, z, rel_tol) - math.exp(-z)) for z in zs)
    return err <= 1e-10, f"max error {err:.2e} (bound 1e-10)"


def _check_power_exp(rel_tol):
    err = 0.0
    for b in (0.5, 1.0, 2.7):
        spec = fox_h_spec(1, 0, [], [(b, 1.0)])
        for z in (0.1, 1.0, 10.0):
            err = max(err, abs(_univariate(spec, z, rel_tol) - z ** b * math.exp(-z)))
    return err <= 1e-9, f"max error {err:.2e} (bound 1e-9)"


def _check_separable(rel_tol):
    k = fox_h_spec(1, 0, [], [(0.0, 1.0)])
    spec = BivariateFoxHSpec(0, (), (), k, k)
    tol = rel_tol or 1e-7
    contours = choose_bivariate_contours(spec, 1.0, 1.0, rel_tol=tol)
    value = bivariate_fox_h(spec, 1.0, 1.0, contours).value
    err = abs(value - math.exp(-2.0))
    return err <= 1e-8, f"error {err:.2e} (bound 1e-8)"


def _check_alpha_mu(rel_tol):
    err = 0.0
    for alpha, mu in ((1.6, 1.5), (2.1, 1.4), (1.5, 0.8), (2.0, 1.0)):
        p = AlphaMuParams(alpha, mu, 10.0)
        for g in (0.1, 1.0, 5.0, 30.0):
            err = max(err, abs(alpha_mu_cdf(p, g, rel_tol=rel_tol) - alpha_mu_cdf_closed(p, g)))
    return err <= 1e-8, f"max error {err:.2e} (bound 1e-8)"


def _check_egg(rel_tol):
    err = 0.0
    for r in (1, 2):
        base = get_preset("[2.4, 0.05]").params.with_mu_r(10.0)
        p = type(base)(base.omega, base.lambda_, base.a, base.b, base.c, r, base.mu_r)
        for g in (0.1, 1.0, 10.0, 50.0):
            err = max(err, abs(egg_ccdf(p, g, rel_tol=rel_tol) - float(egg_ccdf_closed(p, g))))
    return err <= 1e-6, f"max error {err:.2e} (bound 1e-6)"


def _fig2_point():
    rf = AlphaMuParams.from_db(1.6, 1.5, 20.0)
    eve = AlphaMuParams.from_db(1.6, 1.5, 10.0)
    uwoc = get_preset("[2.4, 0.05]").params.with_mu_r(10.0)
    return LinkPair(rf, uwoc), eve, RelayConfig()


def _check_theta_one(rel_tol):
    links, eve, relay = _fig2_point()
    kw = {} if rel_tol is None else {"rel_tol": rel_tol}
    total = sop_lower_bound(links, eve, relay, SecrecyConfig(0.0), **kw) + pnz_exact(
        links, eve, relay, **kw)
    return abs(total - 1.0) <= 1e-6, f"SOP_L + PNZ - 1 = {total - 1.0:.2e} (bound 1e-6)"


def _check_rayleigh(rel_tol):
    rf = AlphaMuParams.from_db(2.0, 1.0, 30.0)
    eve = AlphaMuParams.from_db(2.0, 1.0, 5.0)
    base = get_preset("[2.4, 0.05]").params
    uwoc = type(base)(base.omega, base.lambda_, base.a, base.b, 1.0, 1, 10.0)
    links, relay, sc = LinkPair(rf, uwoc), RelayConfig(), SecrecyConfig(0.1)
    kw = {} if rel_tol is None else {"rel_tol": rel_tol}
    err = abs(sop_rayleigh_special(links, eve, relay, sc)
              - sop_asymptotic_high_main(links, eve, relay, sc, **kw))
    return err <= 1e-8, f"error {err:.2e} (bound 1e-8)"


def _check_mc(rel_tol, trials, seed):
    links, eve, relay = _fig2_point()
    sc = SecrecyConfig(0.01)
    kw = {} if rel_tol is None else {"rel_tol": rel_tol}
    analytic = sop_lower_bound(links, eve, relay, sc, **kw)
    est = mc_secrecy_counts(links, eve, relay, sc, McConfig(trials, seed))["sop_lower"]
    z = (analytic - est.value) / est.std_error
    return abs(z) <= 3.0, f"SOP_L {analytic:.6f} vs MC {est.value:.6f} (z = {z:+.2f}, bound 3)"


def run_checks(*, rel_tol=None, trials=200_000, seed=1):
    checks = [
        ("fox_h_exp_reduction", lambda: _check_exp_reduction(rel_tol)),
        ("fox_h_power_exp_reduction", lambda: _check_power_exp(rel_tol)),
        ("bivariate_separable_product", lambda: _check_separable(rel_tol)),
        ("alpha_mu_cdf_closed_form", lambda: _check_alpha_mu(rel_tol)),
        ("egg_ccdf_closed_form", lambda: _check_egg(rel_tol)),
        ("theta_one_identity", lambda: _check_theta_one(rel_tol)),
        ("rayleigh_closed_form", lambda: _check_rayleigh(rel_tol)),
        ("monte_carlo_smoke", lambda: _check_mc(rel_tol, trials, seed)),
    ]
    results = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed invariant, not a crashed report
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
