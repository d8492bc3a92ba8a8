"""End-to-end SNR of the fixed-gain amplify-and-forward link.

``gamma_eq = g1 g2 / (g2 + C)``.  Its CDF and PDF are sums of two bivariate
H-functions, one for each component of the EGG mixture; the ``s`` variable
carries the optical hop and ``t`` the radio hop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channels import AlphaMuParams, EggParams
from .errors import ConfigError, ConvergenceError
from .mellin import (DEFAULT_BIVARIATE_REL_TOL, BivariateFoxHSpec, FoxHSpec, JointTerm,
                     bivariate_fox_h, fox_h)


class GainMode(str, Enum):
    EXPLICIT_C = "explicit_C"
    FROM_POWERS = "from_powers"


@dataclass(frozen=True)
class RelayConfig:
    """Either an explicit constant ``C`` or the powers it is derived from.

    In ``from_powers`` mode the squared gain is the statistical average
    ``E[P2 / (P1 |h1|^2 + N1)] = (P2 / N1) E[1 / (1 + g1)]`` and
    ``C = 1 / (G^2 N0)``.  ``P1`` cancels once ``|h1|^2`` is written through
    ``g1``, but is kept so configurations stay self-describing.
    """

    mode: GainMode = GainMode.FROM_POWERS
    C: float | None = None
    P1: float = 1.0
    P2: float = 1.0
    N0: float = 1.0
    N1: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mode", GainMode(self.mode))
        if self.mode is GainMode.EXPLICIT_C:
            if self.C is None or not (math.isfinite(self.C) and self.C > 0):
                raise ConfigError(f"explicit_C mode needs a positive C, got {self.C}")
        else:
            for name in ("P1", "P2", "N0", "N1"):
                value = getattr(self, name)
                if not (math.isfinite(value) and value > 0):
                    raise ConfigError(f"RelayConfig.{name} must be positive, got {value}")

    @classmethod
    def explicit(cls, C: float) -> RelayConfig:
        return cls(GainMode.EXPLICIT_C, C=C)


@dataclass(frozen=True)
class LinkPair:
    rf: AlphaMuParams
    uwoc: EggParams


@dataclass
class MetricResult:
    """A probability-valued metric with the diagnostics behind it."""

    value: float
    raw: float
    error: float
    nodes: int
    terms: list[float] = field(default_factory=list)


def gamma_eq(gamma1, gamma2, relay_c: float):
    """Combine per-hop SNRs; ``relay_c`` is the fixed-gain constant."""
    g1 = np.asarray(gamma1, dtype=float)
    g2 = np.asarray(gamma2, dtype=float)
    with np.errstate(invalid="ignore"):
        out = np.where(np.isinf(g2), g1, g1 * g2 / (g2 + relay_c))
    return out[()] if out.ndim == 0 else out


def inverse_snr_mean_spec(rf: AlphaMuParams) -> FoxHSpec:
    """H^{2,1}_{1,2}[. | (0,1); (0,1), (mu - 1/shape, 1/shape)]; times kappa it is E[1/(1+g1)]."""
    return FoxHSpec.build(2, 1, [(0.0, 1.0)],
                          [(0.0, 1.0), (rf.mu - 1.0 / rf.shape, 1.0 / rf.shape)])


def mean_inverse_one_plus_snr(rf: AlphaMuParams, *, rel_tol: float | None = None) -> float:
    return rf.kappa * fox_h(inverse_snr_mean_spec(rf), rf.rate, rel_tol=rel_tol).value


def fixed_gain_constant(rf: AlphaMuParams, relay: RelayConfig, *,
                        rel_tol: float | None = None) -> float:
    if relay.mode is GainMode.EXPLICIT_C:
        return float(relay.C)
    gain_sq = relay.P2 / relay.N1 * mean_inverse_one_plus_snr(rf, rel_tol=rel_tol)
    return 1.0 / (gain_sq * relay.N0)


# --------------------------------------------------------------------------
# H-function parameter tables


def uwoc_kernel(uwoc: EggParams, branch: str) -> FoxHSpec:
    """Optical-hop kernel: G(-s) G(a - r s / c) or G(1 - s) G(-r s)."""
    if branch == "gg":
        return FoxHSpec.build(2, 0, [], [(0.0, 1.0), (uwoc.a, uwoc.r / uwoc.c)])
    return FoxHSpec.build(2, 0, [], [(1.0, 1.0), (0.0, float(uwoc.r))])


def uwoc_argument(uwoc: EggParams, relay_c: float, branch: str) -> float:
    scale = uwoc.b if branch == "gg" else uwoc.lambda_
    return scale ** (-uwoc.r) * relay_c / uwoc.mu_r


def uwoc_weight(uwoc: EggParams, branch: str) -> float:
    if branch == "gg":
        return (1.0 - uwoc.omega) / math.gamma(uwoc.a)
    return uwoc.r * uwoc.omega


def active_branches(uwoc: EggParams) -> tuple[str, ...]:
    branches = []
    if uwoc.omega < 1:
        branches.append("gg")
    if uwoc.omega > 0:
        branches.append("exp")
    return tuple(branches)


_JOINT = (JointTerm(2.0, 1.0, 1.0),)


def rf_cdf_kernel(rf: AlphaMuParams) -> FoxHSpec:
    return FoxHSpec.build(0, 1, [(1.0 + 1.0 / rf.shape - rf.mu, 1.0 / rf.shape)], [(1.0, 1.0)])


def rf_pdf_kernel(rf: AlphaMuParams) -> FoxHSpec:
    return FoxHSpec.build(0, 1, [(1.0 + 1.0 / rf.shape - rf.mu, 1.0 / rf.shape)], [(2.0, 1.0)])


def cdf_spec(links: LinkPair, branch: str) -> BivariateFoxHSpec:
    return BivariateFoxHSpec(1, _JOINT, (), uwoc_kernel(links.uwoc, branch), rf_cdf_kernel(links.rf))


def pdf_spec(links: LinkPair, branch: str) -> BivariateFoxHSpec:
    return BivariateFoxHSpec(1, _JOINT, (), rf_pdf_kernel(links.rf), uwoc_kernel(links.uwoc, branch))


# --------------------------------------------------------------------------
# evaluation


def clamp_probability(raw: float, rel_tol: float, what: str) -> float:
    """Clip quadrature noise outside [0, 1]; larger excursions are errors."""
    excess = max(-raw, raw - 1.0)
    if excess > 10.0 * rel_tol:
        raise ConvergenceError(f"{what} = {raw:.6g} lies outside [0, 1] beyond tolerance")
    return min(1.0, max(0.0, raw))


def cdf_gamma_eq_result(links: LinkPair, relay: RelayConfig, gamma: float, *,
                        rel_tol: float = DEFAULT_BIVARIATE_REL_TOL) -> MetricResult:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    rf, uwoc = links.rf, links.uwoc
    relay_c = fixed_gain_constant(rf, relay)
    total, err, nodes, terms = 1.0, 0.0, 0, []
    for index, branch in enumerate(active_branches(uwoc), start=1):
        coeff = gamma * rf.kappa * uwoc_weight(uwoc, branch)
        try:
            res = bivariate_fox_h(cdf_spec(links, branch), uwoc_argument(uwoc, relay_c, branch),
                                  1.0 / (gamma * rf.rate), rel_tol=rel_tol)
        except ConvergenceError as exc:
            raise ConvergenceError(str(exc), axis=exc.axis, term=index) from exc
        terms.append(-coeff * res.value)
        total -= coeff * res.value
        err += coeff * res.error
        nodes += res.nodes
    return MetricResult(clamp_probability(total, rel_tol, "CDF"), total, err, nodes, terms)


def cdf_gamma_eq(links: LinkPair, relay: RelayConfig, gamma: float, *,
                 rel_tol: float = DEFAULT_BIVARIATE_REL_TOL) -> float:
    return cdf_gamma_eq_result(links, relay, gamma, rel_tol=rel_tol).value


def pdf_gamma_eq(links: LinkPair, relay: RelayConfig, gamma: float, *,
                 rel_tol: float = DEFAULT_BIVARIATE_REL_TOL) -> float:
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    rf, uwoc = links.rf, links.uwoc
    relay_c = fixed_gain_constant(rf, relay)
    total = 0.0
    for index, branch in enumerate(active_branches(uwoc), start=1):
        coeff = rf.kappa * uwoc_weight(uwoc, branch)
        try:
            res = bivariate_fox_h(pdf_spec(links, branch), 1.0 / (gamma * rf.rate),
                                  uwoc_argument(uwoc, relay_c, branch), rel_tol=rel_tol)
        except ConvergenceError as exc:
            raise ConvergenceError(str(exc), axis=exc.axis, term=index) from exc
        total += coeff * res.value
    return max(0.0, total)
