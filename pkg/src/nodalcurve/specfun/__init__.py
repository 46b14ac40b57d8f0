from .core import EvalReport, Regime, SpectralParam, as_tau
from .gamma import LogScaled, abs_gamma_half, gamma_ratio, log_abs_gamma_half, log_gamma_ratio
from .bessel import (
    AIRY_C0,
    AIRY_C0_UNNORMALIZED,
    bessel_regime,
    j_bessel,
    k_bessel_oracle,
    k_tilde,
    k_tilde_asym,
    k_tilde_envelope,
    k_tilde_log,
    k_tilde_value,
)
from .legendre import (
    AsymVariables,
    ConicalProfile,
    conical_profile,
    asym_variables,
    c_tau,
    c_tau_asym,
    c_tau_oracle,
    c_tau_path,
    p_s_circle_avg,
    solve_eta,
    solve_zeta,
)
from .scans import ColaRow, ColaScan, CompareRow, bessel_compare, c_moment, cola_scan, regime_grid
