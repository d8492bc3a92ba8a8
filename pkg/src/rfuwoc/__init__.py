"""Secrecy performance of a mixed RF / underwater-optical fixed-gain relay link."""

from .channels import (AlphaMuParams, ChannelPreset, EggParams, alpha_mu_cdf, alpha_mu_pdf,
                       alpha_mu_sample, egg_ccdf, egg_pdf, egg_sample, get_preset, load_presets)
from .e2e import (LinkPair, RelayConfig, cdf_gamma_eq, fixed_gain_constant, gamma_eq,
                  pdf_gamma_eq)
from .errors import (ConfigError, ConvergenceError, DomainError, InfeasibleError,
                     NoContourError, PoleError, RfuwocError)
from .mellin import (BivariateFoxHSpec, ContourSpec, FoxHSpec, GammaTerm, choose_contour,
                     eval_bivariate_fox_h, eval_fox_h, exp_integral_Ei, exp_integral_En,
                     log_gamma_complex)
from .montecarlo import McConfig, McEstimate, mc_cdf_gamma_eq, mc_pnz, mc_sop_exact, mc_sop_lower
from .optimizer import PowerTarget, min_power_for_target, saturation_floor
from .secrecy import (EveParams, SecrecyConfig, pnz_asymptotic_high_eve, pnz_asymptotic_high_main,
                      pnz_exact, sop_asymptotic_high_eve, sop_asymptotic_high_main,
                      sop_lower_bound, sop_rayleigh_special)

__version__ = "0.1.0"
