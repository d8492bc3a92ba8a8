"""Fading laws of the two hops: alpha-mu on the radio leg, EGG on the optical leg.

The alpha-mu SNR density is

    f(g) = alpha mu^mu g^(alpha mu / 2 - 1) / (2 Gamma(mu) mean^(alpha mu / 2))
           * exp(-mu (g / mean)^(alpha / 2))

so ``alpha = 2, mu = 1`` is the exponential law.  Equivalently
``(rate * g)^shape ~ Gamma(mu, 1)`` with ``shape = alpha / 2`` and
``rate = mu^(2/alpha) / mean``; the H-function expressions downstream are
written in terms of ``shape``, ``rate`` and ``kappa = rate / Gamma(mu)``.

The EGG irradiance ``I`` is exponential (scale ``lambda_``) with probability
``omega`` and generalised gamma ``b * X^(1/c), X ~ Gamma(a)`` otherwise; the
electrical SNR is ``mu_r * I^r``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import special

from .errors import ConfigError
from .mellin import FoxHSpec, eval_fox_h


@dataclass(frozen=True)
class AlphaMuParams:
    alpha: float
    mu: float
    mean_snr: float

    def __post_init__(self):
        for name in ("alpha", "mu", "mean_snr"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"AlphaMuParams.{name} must be positive and finite, got {value}")
        if not (math.isfinite(self.rate) and self.rate > 0 and math.isfinite(self.kappa)):
            raise ValueError(f"derived constants overflow for {self}")

    @classmethod
    def from_db(cls, alpha: float, mu: float, mean_snr_db: float) -> AlphaMuParams:
        return cls(alpha, mu, db_to_linear(mean_snr_db))

    @property
    def shape(self) -> float:
        """Exponent of ``rate * g`` in the density's exponential."""
        return self.alpha / 2.0

    @property
    def beta(self) -> float:
        return self.mu ** (2.0 / self.alpha)

    @property
    def rate(self) -> float:
        return self.beta / self.mean_snr

    @property
    def kappa(self) -> float:
        return math.exp(math.log(self.rate) - special.gammaln(self.mu))

    def moment(self, order: float) -> float:
        """E[g^order], finite for ``order > -alpha * mu / 2``."""
        if self.mu + order / self.shape <= 0:
            return math.inf
        return math.exp(special.gammaln(self.mu + order / self.shape)
                        - special.gammaln(self.mu) - order * math.log(self.rate))

    def with_mean_snr(self, mean_snr: float) -> AlphaMuParams:
        return replace(self, mean_snr=mean_snr)


@dataclass(frozen=True)
class EggParams:
    omega: float
    lambda_: float
    a: float
    b: float
    c: float
    r: int = 1
    mu_r: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError(f"omega must lie in [0, 1], got {self.omega}")
        for name in ("lambda_", "a", "b", "c", "mu_r"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"EggParams.{name} must be positive and finite, got {value}")
        if self.r not in (1, 2):
            raise ValueError(f"r must be 1 (heterodyne) or 2 (IM/DD), got {self.r}")

    def with_mu_r(self, mu_r: float) -> EggParams:
        return replace(self, mu_r=mu_r)

    def irradiance_moment(self, order: float) -> float:
        """E[I^order] of the irradiance mixture (order > -min(1, a c))."""
        exp_part = self.lambda_ ** order * math.gamma(1.0 + order)
        gg_part = self.b ** order * math.exp(
            special.gammaln(self.a + order / self.c) - special.gammaln(self.a))
        return self.omega * exp_part + (1.0 - self.omega) * gg_part

    def mean_snr(self) -> float:
        """E[gamma_2] = mu_r E[I^r]; ``mu_r`` itself is a scale, not this mean."""
        return self.mu_r * self.irradiance_moment(self.r)


@dataclass(frozen=True)
class ChannelPreset:
    """Named EGG parameter set; ``params.mu_r`` is a placeholder set per scenario."""

    label: str
    params: EggParams
    provenance: str

    def __post_init__(self):
        if not self.provenance.strip():
            raise ValueError(f"preset {self.label!r} has no provenance")


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


# --------------------------------------------------------------------------
# alpha-mu


def alpha_mu_pdf(p: AlphaMuParams, gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma must be non-negative")
    k = p.shape * p.mu
    with np.errstate(divide="ignore", invalid="ignore"):
        x = p.rate * g
        log_pdf = (math.log(p.shape * p.rate) - special.gammaln(p.mu)
                   + (k - 1.0) * np.log(x) - x ** p.shape)
        out = np.exp(log_pdf)
    if k > 1:
        out = np.where(g == 0, 0.0, out)
    elif k == 1:
        out = np.where(g == 0, p.shape * p.rate / math.gamma(p.mu), out)
    else:
        out = np.where(g == 0, np.inf, out)
    return out[()] if out.ndim == 0 else out


def alpha_mu_cdf_spec(p: AlphaMuParams) -> FoxHSpec:
    """H^{1,1}_{1,2}[. | (1,1); (mu, 1/shape), (0,1)] whose value times kappa/rate is the CDF."""
    return FoxHSpec.build(1, 1, [(1.0, 1.0)], [(p.mu, 1.0 / p.shape), (0.0, 1.0)])


def alpha_mu_cdf(p: AlphaMuParams, gamma: float, *, rel_tol: float | None = None) -> float:
    """CDF through its H-function representation."""
    gamma = float(gamma)
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    if gamma == 0:
        return 0.0
    value = p.kappa / p.rate * eval_fox_h(alpha_mu_cdf_spec(p), gamma * p.rate, rel_tol=rel_tol)
    return min(1.0, max(0.0, value))


def alpha_mu_cdf_closed(p: AlphaMuParams, gamma):
    """Regularised lower incomplete gamma P(mu, (rate g)^shape)."""
    g = np.maximum(np.asarray(gamma, dtype=float), 0.0)
    return special.gammainc(p.mu, (p.rate * g) ** p.shape)


def alpha_mu_sample(p: AlphaMuParams, rng: np.random.Generator, size=None):
    """Draw ``mean * (X / mu)^(2/alpha)`` with ``X ~ Gamma(mu, 1)``."""
    x = rng.standard_gamma(p.mu, size=size)
    return p.mean_snr * (x / p.mu) ** (2.0 / p.alpha)


# --------------------------------------------------------------------------
# EGG


def egg_pdf(p: EggParams, gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g <= 0):
        raise ValueError("gamma must be positive")
    irr = (g / p.mu_r) ** (1.0 / p.r)
    # dI/dg = I / (r g)
    jac = irr / (p.r * g)
    exp_part = np.exp(-irr / p.lambda_) / p.lambda_
    y = irr / p.b
    log_gg = (math.log(p.c) - math.log(p.b) - special.gammaln(p.a)
              + (p.a * p.c - 1.0) * np.log(y) - y ** p.c)
    out = jac * (p.omega * exp_part + (1.0 - p.omega) * np.exp(log_gg))
    return out[()] if out.ndim == 0 else out


def egg_ccdf_specs(p: EggParams) -> tuple[FoxHSpec, FoxHSpec]:
    """H-kernels of the generalised-gamma and exponential CCDF terms."""
    gg = FoxHSpec.build(2, 0, [(1.0, 1.0)], [(0.0, 1.0), (p.a, p.r / p.c)])
    ex = FoxHSpec.build(1, 0, [], [(0.0, float(p.r))])
    return gg, ex


def egg_ccdf(p: EggParams, gamma: float, *, rel_tol: float | None = None) -> float:
    """CCDF through the two H-function terms."""
    gamma = float(gamma)
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    gg, ex = egg_ccdf_specs(p)
    total = 0.0
    if p.omega < 1:
        total += (1.0 - p.omega) / math.gamma(p.a) * eval_fox_h(
            gg, p.b ** (-p.r) * gamma / p.mu_r, rel_tol=rel_tol)
    if p.omega > 0:
        total += p.r * p.omega * eval_fox_h(
            ex, gamma * p.lambda_ ** (-p.r) / p.mu_r, rel_tol=rel_tol)
    return min(1.0, max(0.0, total))


def egg_ccdf_closed(p: EggParams, gamma):
    g = np.asarray(gamma, dtype=float)
    irr = (np.maximum(g, 0.0) / p.mu_r) ** (1.0 / p.r)
    return (p.omega * np.exp(-irr / p.lambda_)
            + (1.0 - p.omega) * special.gammaincc(p.a, (irr / p.b) ** p.c))


def egg_sample_irradiance(p: EggParams, rng: np.random.Generator, size=None):
    pick_exp = rng.random(size) < p.omega
    exp_draw = rng.standard_exponential(size) * p.lambda_
    gg_draw = p.b * rng.standard_gamma(p.a, size) ** (1.0 / p.c)
    return np.where(pick_exp, exp_draw, gg_draw)


def egg_sample(p: EggParams, rng: np.random.Generator, size=None):
    """Draw ``mu_r * I^r`` from the EGG mixture."""
    return p.mu_r * egg_sample_irradiance(p, rng, size) ** p.r


# --------------------------------------------------------------------------
# preset registry


def _preset_from_record(rec: dict) -> ChannelPreset:
    try:
        params = EggParams(omega=float(rec["omega"]), lambda_=float(rec["lambda"]),
                           a=float(rec["a"]), b=float(rec["b"]), c=float(rec["c"]),
                           r=int(rec.get("r", 1)))
        return ChannelPreset(str(rec["label"]), params, str(rec.get("provenance", "")))
    except KeyError as exc:
        raise ConfigError(f"preset record missing field {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"invalid preset {rec.get('label')!r}: {exc}") from None


def load_presets(path: str | Path | None = None) -> dict[str, ChannelPreset]:
    """Read a JSON array of preset records; the bundled registry by default."""
    if path is None:
        text = resources.files("rfuwoc.data").joinpath("presets.json").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    records = json.loads(text)
    if not isinstance(records, list):
        raise ConfigError("preset registry must be a JSON array")
    presets = {}
    for rec in records:
        preset = _preset_from_record(rec)
        presets[preset.label] = preset
    return presets


def get_preset(label: str, registry: dict[str, ChannelPreset] | None = None) -> ChannelPreset:
    registry = load_presets() if registry is None else registry
    try:
        return registry[label]
    except KeyError:
        known = ", ".join(sorted(registry))
        raise ConfigError(f"unknown UWOC preset {label!r}; known presets: {known}") from None
