"""Secrecy outage and non-zero secrecy capacity of the relayed link.

``SOP_L = Pr[gamma_eq <= theta * gamma_e]`` is the lower bound of the outage
probability, ``PNZ = Pr[gamma_eq > gamma_e]``.  Both are sums of bivariate
H-functions over the two EGG mixture components.  The high-SNR asymptotes
keep one residue of the double integral and reduce to single H-functions.

Every alpha-mu quantity enters through ``shape``, ``rate`` and ``kappa``
(see :mod:`rfuwoc.channels`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy import special

from .channels import AlphaMuParams, EggParams
from .e2e import (LinkPair, MetricResult, RelayConfig, _JOINT, active_branches,
                  clamp_probability, fixed_gain_constant, uwoc_argument, uwoc_kernel,
                  uwoc_weight)
from .errors import ConvergenceError, DomainError
from .mellin import (DEFAULT_BIVARIATE_REL_TOL, DEFAULT_REL_TOL, BivariateFoxHSpec, FoxHSpec,
                     bivariate_fox_h, exp_integral_Ei, exp_integral_En, fox_h)

EveParams = AlphaMuParams


class ThresholdBase(str, Enum):
    NATURAL = "natural"
    BINARY = "binary"


@dataclass(frozen=True)
class SecrecyConfig:
    """Target secrecy rate and the base used to turn it into ``theta``."""

    rate_rs: float = 0.0
    threshold_base: ThresholdBase = ThresholdBase.NATURAL

    def __post_init__(self):
        object.__setattr__(self, "threshold_base", ThresholdBase(self.threshold_base))
        if not (math.isfinite(self.rate_rs) and self.rate_rs >= 0):
            raise ValueError(f"rate_rs must be non-negative, got {self.rate_rs}")

    @property
    def theta(self) -> float:
        base = math.e if self.threshold_base is ThresholdBase.NATURAL else 2.0
        return base ** self.rate_rs


# --------------------------------------------------------------------------
# parameter tables


def rf_eve_kernel(rf: AlphaMuParams, eve: EveParams) -> FoxHSpec:
    """G(mu - 1/shape + t/shape) G(mu_e + (1-t)/shape_e) / G(t) in the t variable."""
    return FoxHSpec.build(
        1, 1, [(1.0 + 1.0 / rf.shape - rf.mu, 1.0 / rf.shape)],
        [((1.0 + eve.shape * eve.mu) / eve.shape, 1.0 / eve.shape), (1.0, 1.0)])


def sop_lower_spec(links: LinkPair, eve: EveParams, branch: str) -> BivariateFoxHSpec:
    return BivariateFoxHSpec(1, _JOINT, (), rf_eve_kernel(links.rf, eve),
                             uwoc_kernel(links.uwoc, branch))


def pnz_spec(links: LinkPair, eve: EveParams, branch: str) -> BivariateFoxHSpec:
    return BivariateFoxHSpec(1, _JOINT, (), uwoc_kernel(links.uwoc, branch),
                             rf_eve_kernel(links.rf, eve))


def high_main_spec(rf: AlphaMuParams, eve: EveParams, uwoc: EggParams, branch: str) -> FoxHSpec:
    if branch == "gg":
        return FoxHSpec.build(
            1, 3, [(1.0, 1.0), (1.0 - uwoc.a, uwoc.r / uwoc.c), (1.0 - rf.mu, 1.0 / rf.shape)],
            [(eve.mu, 1.0 / eve.shape), (0.0, 1.0)])
    return FoxHSpec.build(1, 2, [(1.0, float(uwoc.r)), (1.0 - rf.mu, 1.0 / rf.shape)],
                          [(eve.mu, 1.0 / eve.shape)])


def high_main_argument(uwoc: EggParams, relay_c: float, rf: AlphaMuParams, eve: EveParams,
                       theta: float, branch: str) -> float:
    scale = uwoc.b if branch == "gg" else uwoc.lambda_
    return scale ** uwoc.r * eve.rate * uwoc.mu_r / (relay_c * theta * rf.rate)


def high_eve_spec(eve: EveParams, uwoc: EggParams, branch: str) -> FoxHSpec:
    order = eve.shape * eve.mu
    if branch == "gg":
        return FoxHSpec.build(1, 2, [(1.0, 1.0), (1.0 - uwoc.a, uwoc.r / uwoc.c)], [(order, 1.0)])
    return FoxHSpec.build(1, 2, [(0.0, 1.0), (1.0, float(uwoc.r))], [(order, 1.0)])


def _high_eve_log_coeff(rf: AlphaMuParams, eve: EveParams) -> float:
    """log of shape_e G(mu + shape_e mu_e / shape) / (G(mu) G(mu_e) G(shape_e mu_e + 1))."""
    order = eve.shape * eve.mu
    return (math.log(eve.shape) + special.gammaln(rf.mu + order / rf.shape)
            - special.gammaln(rf.mu) - special.gammaln(eve.mu) - special.gammaln(order + 1.0))


# --------------------------------------------------------------------------
# exact / lower-bound metrics


def _bivariate_sum(links, eve, relay, *, spec_fn, args_fn, coeff_fn, rel_tol):
    relay_c = fixed_gain_constant(links.rf, relay)
    total, err, nodes, terms = 0.0, 0.0, 0, []
    for index, branch in enumerate(active_branches(links.uwoc), start=1):
        z1, z2 = args_fn(relay_c, branch)
        coeff = coeff_fn(branch)
        try:
            res = bivariate_fox_h(spec_fn(links, eve, branch), z1, z2, rel_tol=rel_tol)
        except ConvergenceError as exc:
            raise ConvergenceError(str(exc), axis=exc.axis, term=index) from exc
        terms.append(coeff * res.value)
        total += coeff * res.value
        err += abs(coeff) * res.error
        nodes += res.nodes
    return total, err, nodes, terms


def sop_lower_bound_result(links: LinkPair, eve: EveParams, relay: RelayConfig,
                           sc: SecrecyConfig, *,
                           rel_tol: float = DEFAULT_BIVARIATE_REL_TOL) -> MetricResult:
    rf, uwoc, theta = links.rf, links.uwoc, sc.theta
    total, err, nodes, terms = _bivariate_sum(
        links, eve, relay, spec_fn=sop_lower_spec,
        args_fn=lambda c, br: (eve.rate / (theta * rf.rate), uwoc_argument(uwoc, c, br)),
        coeff_fn=lambda br: theta * rf.kappa * eve.kappa / eve.rate ** 2 * uwoc_weight(uwoc, br),
        rel_tol=rel_tol)
    raw = 1.0 - total
    return MetricResult(clamp_probability(raw, rel_tol, "SOP_L"), raw, err, nodes,
                        [-t for t in terms])


def sop_lower_bound(links, eve, relay, sc, *, rel_tol=DEFAULT_BIVARIATE_REL_TOL) -> float:
    return sop_lower_bound_result(links, eve, relay, sc, rel_tol=rel_tol).value


def pnz_exact_result(links: LinkPair, eve: EveParams, relay: RelayConfig, *,
                     rel_tol: float = DEFAULT_BIVARIATE_REL_TOL) -> MetricResult:
    rf, uwoc = links.rf, links.uwoc
    total, err, nodes, terms = _bivariate_sum(
        links, eve, relay, spec_fn=pnz_spec,
        args_fn=lambda c, br: (uwoc_argument(uwoc, c, br), eve.rate / rf.rate),
        coeff_fn=lambda br: rf.kappa * eve.kappa / eve.rate ** 2 * uwoc_weight(uwoc, br),
        rel_tol=rel_tol)
    return MetricResult(clamp_probability(total, rel_tol, "PNZ"), total, err, nodes, terms)


def pnz_exact(links, eve, relay, *, rel_tol=DEFAULT_BIVARIATE_REL_TOL) -> float:
    return pnz_exact_result(links, eve, relay, rel_tol=rel_tol).value


# --------------------------------------------------------------------------
# asymptotes


def _univariate_terms(branches, evaluate, rel_tol):
    terms, err, nodes = [], 0.0, 0
    for index, branch in enumerate(branches, start=1):
        coeff, spec, z = evaluate(branch)
        try:
            res = fox_h(spec, z, rel_tol=rel_tol)
        except ConvergenceError as exc:
            raise ConvergenceError(str(exc), axis=exc.axis, term=index) from exc
        terms.append(coeff * res.value)
        err += abs(coeff) * res.error
        nodes += res.nodes
    return terms, err, nodes


def _asymptote(raw, err, nodes, terms):
    # An asymptote may leave [0, 1] away from its regime; that is model
    # error, not quadrature noise, so it is always clipped.
    return MetricResult(min(1.0, max(0.0, raw)), raw, err, nodes, terms)


def _high_main_terms(links, eve, relay, theta, rel_tol):
    rf, uwoc = links.rf, links.uwoc
    relay_c = fixed_gain_constant(rf, relay)
    base = rf.kappa * eve.kappa / (rf.rate * eve.rate)

    def evaluate(branch):
        return (base * uwoc_weight(uwoc, branch), high_main_spec(rf, eve, uwoc, branch),
                high_main_argument(uwoc, relay_c, rf, eve, theta, branch))

    return _univariate_terms(active_branches(uwoc), evaluate, rel_tol)


def _high_eve_terms(links, eve, relay, theta, rel_tol):
    rf, uwoc = links.rf, links.uwoc
    relay_c = fixed_gain_constant(rf, relay)
    order = eve.shape * eve.mu
    log_base = _high_eve_log_coeff(rf, eve) + order * math.log(eve.rate / (theta * rf.rate))

    def evaluate(branch):
        scale = uwoc.b if branch == "gg" else uwoc.lambda_
        return (math.exp(log_base) * uwoc_weight(uwoc, branch), high_eve_spec(eve, uwoc, branch),
                scale ** uwoc.r * uwoc.mu_r / relay_c)

    return _univariate_terms(active_branches(uwoc), evaluate, rel_tol)


def sop_asymptotic_high_main_result(links, eve, relay, sc, *,
                                    rel_tol=DEFAULT_REL_TOL) -> MetricResult:
    """Main-link SNR to infinity: one residue in ``t`` leaves a single H-function."""
    terms, err, nodes = _high_main_terms(links, eve, relay, sc.theta, rel_tol)
    return _asymptote(1.0 - sum(terms), err, nodes, [-t for t in terms])


def sop_asymptotic_high_main(links, eve, relay, sc, *, rel_tol=DEFAULT_REL_TOL) -> float:
    return sop_asymptotic_high_main_result(links, eve, relay, sc, rel_tol=rel_tol).value


def sop_asymptotic_high_eve_result(links, eve, relay, sc, *,
                                   rel_tol=DEFAULT_REL_TOL) -> MetricResult:
    """Eavesdropper SNR to infinity: the leading power ``(rate_e / (theta rate))^(shape_e mu_e)``."""
    terms, err, nodes = _high_eve_terms(links, eve, relay, sc.theta, rel_tol)
    return _asymptote(1.0 - sum(terms), err, nodes, [-t for t in terms])


def sop_asymptotic_high_eve(links, eve, relay, sc, *, rel_tol=DEFAULT_REL_TOL) -> float:
    return sop_asymptotic_high_eve_result(links, eve, relay, sc, rel_tol=rel_tol).value


def pnz_asymptotic_high_main_result(links, eve, relay, *, rel_tol=DEFAULT_REL_TOL) -> MetricResult:
    terms, err, nodes = _high_main_terms(links, eve, relay, 1.0, rel_tol)
    return _asymptote(sum(terms), err, nodes, terms)


def pnz_asymptotic_high_main(links, eve, relay, *, rel_tol=DEFAULT_REL_TOL) -> float:
    return pnz_asymptotic_high_main_result(links, eve, relay, rel_tol=rel_tol).value


def pnz_asymptotic_high_eve_result(links, eve, relay, *, rel_tol=DEFAULT_REL_TOL) -> MetricResult:
    """Written with ``kappa kappa_e rate^(-k-1) rate_e^(k-1)``, k = shape_e mu_e."""
    rf, uwoc = links.rf, links.uwoc
    relay_c = fixed_gain_constant(rf, relay)
    order = eve.shape * eve.mu
    log_base = (math.log(rf.kappa * eve.shape * eve.kappa)
                + (-order - 1.0) * math.log(rf.rate) + (order - 1.0) * math.log(eve.rate)
                + special.gammaln(rf.mu + order / rf.shape) - special.gammaln(order + 1.0))

    def evaluate(branch):
        scale = uwoc.b if branch == "gg" else uwoc.lambda_
        return (math.exp(log_base) * uwoc_weight(uwoc, branch), high_eve_spec(eve, uwoc, branch),
                scale ** uwoc.r * uwoc.mu_r / relay_c)

    terms, err, nodes = _univariate_terms(active_branches(uwoc), evaluate, rel_tol)
    return _asymptote(sum(terms), err, nodes, terms)


def pnz_asymptotic_high_eve(links, eve, relay, *, rel_tol=DEFAULT_REL_TOL) -> float:
    return pnz_asymptotic_high_eve_result(links, eve, relay, rel_tol=rel_tol).value


# --------------------------------------------------------------------------
# Rayleigh radio legs with a thermally uniform optical leg


def _require_rayleigh_uniform(links: LinkPair, eve: EveParams):
    rf, uwoc = links.rf, links.uwoc
    checks = {"c": uwoc.c == 1.0, "r": uwoc.r == 1, "alpha": rf.shape == 1.0,
              "alpha_e": eve.shape == 1.0, "mu": rf.mu == 1.0, "mu_e": eve.mu == 1.0}
    bad = [name for name, ok in checks.items() if not ok]
    if bad:
        raise DomainError(
            "closed form needs c=1, r=1, alpha=alpha_e=2 (exponential SNR) and mu=mu_e=1; "
            f"violated: {', '.join(bad)}")


def sop_rayleigh_special(links: LinkPair, eve: EveParams, relay: RelayConfig,
                         sc: SecrecyConfig) -> float:
    """High-main-SNR asymptote in elementary functions (``E_{a+1}`` and ``Ei``)."""
    _require_rayleigh_uniform(links, eve)
    rf, uwoc = links.rf, links.uwoc
    relay_c = fixed_gain_constant(rf, relay)
    k, ke, lam, lam_e = rf.kappa, eve.kappa, rf.rate, eve.rate
    q_b = relay_c * sc.theta * lam / (uwoc.b * lam_e * uwoc.mu_r)
    q_l = relay_c * sc.theta * lam / (uwoc.lambda_ * lam_e * uwoc.mu_r)
    gg = 0.0
    if uwoc.omega < 1:
        # e^q E_{a+1}(q) without overflow: E_n(q) ~ e^{-q}/q for large q
        gg = (-uwoc.a * uwoc.lambda_ * (1.0 - uwoc.omega) * lam_e * uwoc.mu_r
              * _scaled_en(uwoc.a + 1.0, q_b))
    ex = 0.0
    if uwoc.omega > 0:
        ex = -relay_c * sc.theta * lam * uwoc.omega * _scaled_ei_neg(q_l)
    raw = (k * ke / (uwoc.lambda_ * lam * lam_e ** 2 * uwoc.mu_r) * (gg + ex)
           + (lam * lam_e - k * uwoc.omega * ke) / (lam * lam_e))
    return min(1.0, max(0.0, raw))


def _scaled_en(order: float, x: float) -> float:
    """e^x E_order(x)."""
    if x > 700:
        return _en_asymptotic(order, x)
    return math.exp(x) * exp_integral_En(order, x)


def _en_asymptotic(order, x):
    # e^x E_n(x) ~ (1/x) sum_k (-1)^k (n)_k / x^k
    total, term = 0.0, 1.0 / x
    for k in range(30):
        total += term
        term *= -(order + k) / x
    return total


def _scaled_ei_neg(x: float) -> float:
    """e^x Ei(-x) for x > 0."""
    if x > 700:
        return -_en_asymptotic(1.0, x)
    return math.exp(x) * exp_integral_Ei(-x)
