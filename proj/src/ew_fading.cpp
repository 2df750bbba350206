#include "fsosec/ew_fading.hpp"

#include <cmath>
#include <limits>

#include "fsosec/error.hpp"

namespace fsosec::ew
{

namespace
{

// -log(1 - w) for w = u^(1/alpha), accurate at both ends of [0, 1).
double neg_log1m_root(double u, double alpha)
{
    const double log_w = std::log(u) / alpha;
    const double w = std::exp(log_w);
    if (w < 0.5)
        return -std::log1p(-w);
    return -std::log(-std::expm1(log_w));
}

// E[I^n] for eta = 1.
double unit_moment(int n, double alpha, double beta, const numerics::SeriesControl& ctl)
{
    const double s = static_cast<double>(n) / beta;
    const double a1 = alpha - 1.0;
    double binom = 1.0;
    auto term = [&](int j) {
        if (j > 0)
            binom *= (a1 - (j - 1)) / j;
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        return sign * binom / std::pow(1.0 + j, 1.0 + s);
    };
    const auto series = numerics::sum_alternating(term, ctl);
    const double lg = numerics::log_gamma(1.0 + s);
    if (series.converged)
        return alpha * std::exp(lg) * series.value;

    // Slowly converging (alpha < 1) case: integrate in x = I^beta directly.
    auto integrand = [&](double x) {
        if (x == 0.0)
            return 0.0;
        const double log_f = std::log(alpha) + s * std::log(x) - x + a1 * std::log(-std::expm1(-x));
        return std::exp(log_f);
    };
    numerics::QuadratureControl qc;
    qc.rel_tol = 1e-12;
    qc.abs_tol = 1e-300;
    qc.max_subdivisions = 5000;
    return numerics::integrate_semi_infinite(integrand, qc, 1.0).value;
}

}  // namespace

void EWParams::validate() const
{
    if (!(alpha > 0.0 && std::isfinite(alpha)) || !(beta > 0.0 && std::isfinite(beta)) ||
        !(eta > 0.0 && std::isfinite(eta)))
        throw DomainError("EWParams: alpha, beta and eta must be positive and finite");
}

EWFit fit_from_scint(double scint_index)
{
    if (!(scint_index > 0.0) || !std::isfinite(scint_index))
        throw DomainError("fit_from_scint: scintillation index must be positive and finite");
    const double s = scint_index;
    const double alpha =
        7.220 * std::cbrt(s) / std::exp(numerics::log_gamma(2.487 * std::pow(s, 1.0 / 6.0) - 0.104));
    const double beta = 1.012 * std::pow(alpha * s, -13.0 / 25.0) + 0.142;
    EWFit fit;
    fit.params = normalized(alpha, beta);
    fit.in_validity_range = s >= kFitMinScint && s <= kFitMaxScint;
    return fit;
}

double normalize_eta(double alpha, double beta, const numerics::SeriesControl& ctl)
{
    EWParams{alpha, beta, 1.0}.validate();
    const double m2 = unit_moment(2, alpha, beta, ctl);
    if (!(m2 > 0.0) || !std::isfinite(m2))
        throw NumericalError("normalize_eta: second moment evaluated to a non-positive value");
    return 1.0 / std::sqrt(m2);
}

EWParams normalized(double alpha, double beta)
{
    return {alpha, beta, normalize_eta(alpha, beta)};
}

double ew_cdf_irradiance(double irradiance, const EWParams& p)
{
    if (!(irradiance >= 0.0))
        throw DomainError("ew_cdf_irradiance: irradiance must be >= 0");
    if (irradiance == 0.0)
        return 0.0;
    const double x = std::pow(irradiance / p.eta, p.beta);
    return std::exp(p.alpha * std::log(-std::expm1(-x)));
}

double ew_cdf_snr(double snr, double avg_snr, const EWParams& p)
{
    if (!(snr >= 0.0))
        throw DomainError("ew_cdf_snr: SNR must be >= 0");
    if (!(avg_snr > 0.0))
        throw DomainError("ew_cdf_snr: average SNR must be > 0");
    if (snr == 0.0)
        return 0.0;
    const double x = std::pow(snr / (p.eta * p.eta * avg_snr), 0.5 * p.beta);
    return std::exp(p.alpha * std::log(-std::expm1(-x)));
}

double ew_ccdf_snr(double snr, double avg_snr, const EWParams& p)
{
    if (!(snr >= 0.0))
        throw DomainError("ew_ccdf_snr: SNR must be >= 0");
    if (!(avg_snr > 0.0))
        throw DomainError("ew_ccdf_snr: average SNR must be > 0");
    if (snr == 0.0)
        return 1.0;
    const double x = std::pow(snr / (p.eta * p.eta * avg_snr), 0.5 * p.beta);
    return -std::expm1(p.alpha * std::log1p(-std::exp(-x)));
}

double ew_pdf_snr(double snr, double avg_snr, const EWParams& p)
{
    if (!(snr >= 0.0))
        throw DomainError("ew_pdf_snr: SNR must be >= 0");
    if (!(avg_snr > 0.0))
        throw DomainError("ew_pdf_snr: average SNR must be > 0");
    const double half_beta = 0.5 * p.beta;
    const double scale = p.eta * p.eta * avg_snr;
    if (snr == 0.0)
    {
        // f ~ gamma^(alpha beta/2 - 1) near the origin.
        const double order = p.alpha * half_beta - 1.0;
        if (order > 0.0)
            return 0.0;
        if (order < 0.0)
            return std::numeric_limits<double>::infinity();
        return p.alpha * half_beta / std::pow(scale, half_beta);
    }
    const double x = std::pow(snr / scale, half_beta);
    const double log_f = std::log(p.alpha * half_beta) - half_beta * std::log(scale) +
                         (half_beta - 1.0) * std::log(snr) - x +
                         (p.alpha - 1.0) * std::log(-std::expm1(-x));
    return std::exp(log_f);
}

double ew_quantile(double u, const EWParams& p)
{
    if (!(u >= 0.0 && u < 1.0))
        throw DomainError("ew_quantile: probability must lie in [0, 1)");
    if (u == 0.0)
        return 0.0;
    return p.eta * std::pow(neg_log1m_root(u, p.alpha), 1.0 / p.beta);
}

double ew_moment(int n, const EWParams& p, const numerics::SeriesControl& ctl)
{
    if (n < 1)
        throw DomainError("ew_moment: order must be >= 1");
    p.validate();
    return std::pow(p.eta, n) * unit_moment(n, p.alpha, p.beta, ctl);
}

}  // namespace fsosec::ew
