#pragma once

#include "fsosec/numerics.hpp"

namespace fsosec::ew
{

//! Exponentiated-Weibull irradiance law F(I) = [1 - exp(-(I/eta)^beta)]^alpha.
struct EWParams
{
    double alpha = 1.0;
    double beta = 2.0;
    double eta = 1.0;

    void validate() const;
};

struct EWFit
{
    EWParams params;
    //! false when the scintillation index lies outside the range the fit was built on.
    bool in_validity_range = true;
};

//! Scintillation range over which fit_from_scint() reports in_validity_range.
inline constexpr double kFitMinScint = 0.05;
inline constexpr double kFitMaxScint = 5.0;

//! Shape parameters from the scintillation index, using the moment-matching
//! fit of R. Barrios and F. Dios, "Exponentiated Weibull distribution family
//! under aperture averaging for Gaussian beam waves", Opt. Express 20 (2012):
//!   alpha = 7.220 s^(1/3) / Gamma(2.487 s^(1/6) - 0.104)
//!   beta  = 1.012 (alpha s)^(-13/25) + 0.142
//! with s = sigma_I^2. The fit's own eta is discarded; eta comes from
//! normalize_eta() so that E[I^2] = 1.
EWFit fit_from_scint(double scint_index);

//! Scale parameter giving E[I^2] = 1 for the given shapes.
double normalize_eta(double alpha, double beta, const numerics::SeriesControl& ctl = {});

//! {alpha, beta, normalize_eta(alpha, beta)}.
EWParams normalized(double alpha, double beta);

double ew_cdf_irradiance(double irradiance, const EWParams& p);

//! CDF of gamma = gbar I^2.
double ew_cdf_snr(double snr, double avg_snr, const EWParams& p);

//! 1 - ew_cdf_snr, evaluated without cancellation in the upper tail.
double ew_ccdf_snr(double snr, double avg_snr, const EWParams& p);

//! Density of gamma = gbar I^2. Returns +inf at gamma = 0 when beta < 2.
double ew_pdf_snr(double snr, double avg_snr, const EWParams& p);

//! Inverse of ew_cdf_irradiance on [0, 1).
double ew_quantile(double u, const EWParams& p);

//! Raw moment E[I^n].
//!
//! Evaluated from alpha eta^n Gamma(1 + n/beta) sum_j (-1)^j C(alpha-1, j) / (1+j)^(1+n/beta).
//! For alpha < 1 the series terms do not alternate and converge slowly; if the
//! series has not converged within ctl.max_terms the moment is integrated
//! directly instead.
double ew_moment(int n, const EWParams& p, const numerics::SeriesControl& ctl = {});

}  // namespace fsosec::ew
