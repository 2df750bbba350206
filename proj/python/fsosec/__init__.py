"""Secrecy performance of optical satellite/HAPS links under exponentiated-Weibull fading."""

from ._core import (  # noqa: F401
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    EWParams,
    LinkBudget,
    NumericalError,
    ParseError,
    __version__,
    asc_downlink,
    asc_uplink_quadrature,
    ew_cdf_snr,
    ew_moment,
    ew_pdf_snr,
    ew_quantile,
    fit_from_scint,
    mc_sop,
    normalized,
    preset_names,
    preset_text,
    run_sweep,
    sop_downlink,
    sop_uplink_quadrature,
    sop_uplink_series,
)
