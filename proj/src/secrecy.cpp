#include "fsosec/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fsosec/error.hpp"

namespace fsosec::secrecy
{

namespace
{

long double log_gamma_ext(long double x)
{
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgammal_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

// log Gamma(a) - log Gamma(a + b). Differencing two lgamma values loses
// about a log(a) ulps, so large a goes through the Stirling difference.
long double log_gamma_ratio(long double a, long double b)
{
    if (a < 32)
        return log_gamma_ext(a) - log_gamma_ext(a + b);
    auto stirling_tail = [](long double x) {
        static constexpr long double c[] = {1.0L / 12,     -1.0L / 360,          1.0L / 1260,
                                            -1.0L / 1680,  1.0L / 1188,          -691.0L / 360360,
                                            1.0L / 156,    -3617.0L / 122400};
        const long double inv2 = 1 / (x * x);
        long double sum = 0;
        long double pw = 1 / x;
        for (long double ck : c)
        {
            sum += ck * pw;
            pw *= inv2;
        }
        return sum;
    };
    return -(a - 0.5L) * std::log1p(b / a) - b * std::log(a + b) + b + stirling_tail(a) -
           stirling_tail(a + b);
}

void check_rate(double rs, const char* who)
{
    if (!(rs > 0.0) || !std::isfinite(rs))
        throw DomainError(std::string(who) + ": secrecy rate must be positive and finite");
}

void check_fraction(double f, const char* name)
{
    if (!(f >= 0.0 && f <= 1.0))
        throw ConfigError(std::string("LinkBudget: ") + name + " must lie in [0, 1]");
}

}  // namespace

LinkBudget LinkBudget::from_fractions(double power_over_noise, double frac_legit, double frac_eav)
{
    if (!(power_over_noise > 0.0) || !std::isfinite(power_over_noise))
        throw ConfigError("LinkBudget: P/N0 must be positive and finite");
    check_fraction(frac_legit, "r_b");
    check_fraction(frac_eav, "r_e");
    if (!(frac_legit > 0.0))
        throw ConfigError("LinkBudget: r_b must be > 0");
    if (!(frac_eav < 1.0))
        throw ConfigError("LinkBudget: r_e must be < 1");
    if (frac_legit + frac_eav > 1.0 + 1e-12)
        throw ConfigError("LinkBudget: violates r_e+r_b <= 1");
    LinkBudget b;
    b.power_over_noise_ = power_over_noise;
    b.frac_legit_ = frac_legit;
    b.frac_eav_ = frac_eav;
    b.avg_snr_legit_ = frac_legit * power_over_noise;
    b.avg_snr_eav_ = frac_eav * power_over_noise;
    return b;
}

LinkBudget LinkBudget::from_snrs(double avg_snr_legit, double avg_snr_eav)
{
    if (!(avg_snr_legit > 0.0) || !std::isfinite(avg_snr_legit))
        throw ConfigError("LinkBudget: legitimate average SNR must be positive and finite");
    if (!(avg_snr_eav >= 0.0) || !std::isfinite(avg_snr_eav))
        throw ConfigError("LinkBudget: eavesdropper average SNR must be non-negative and finite");
    LinkBudget b;
    b.avg_snr_legit_ = avg_snr_legit;
    b.avg_snr_eav_ = avg_snr_eav;
    return b;
}

LinkBudget LinkBudget::with_eavesdropper_snr(double power_over_noise, double frac_legit,
                                             double frac_eav, double avg_snr_eav)
{
    LinkBudget b = from_fractions(power_over_noise, frac_legit, frac_eav);
    if (!(avg_snr_eav >= 0.0) || !std::isfinite(avg_snr_eav))
        throw ConfigError("LinkBudget: eavesdropper average SNR must be non-negative and finite");
    b.avg_snr_eav_ = avg_snr_eav;
    return b;
}

std::string_view to_string(Method m)
{
    switch (m)
    {
    case Method::closed_form:
        return "closed_form";
    case Method::quadrature:
        return "quadrature";
    case Method::monte_carlo:
        return "monte_carlo";
    }
    return "unknown";
}

SecrecyResult asc_downlink(const LinkBudget& budget)
{
    const double c = std::log2(1.0 + budget.avg_snr_legit()) - std::log2(1.0 + budget.avg_snr_eav());
    return {std::max(0.0, c), Method::closed_form, 0.0, 0};
}

SecrecyResult asc_uplink_quadrature(const LinkBudget& budget, const ew::EWParams& legit,
                                    const ew::EWParams& eav, const numerics::QuadratureControl& ctl)
{
    legit.validate();
    eav.validate();
    const double gl = budget.avg_snr_legit();
    const double ge = budget.avg_snr_eav();
    auto integrand = [&](double g) {
        const double fe = ge > 0.0 ? ew::ew_cdf_snr(g, ge, eav) : 1.0;
        if (fe == 0.0)
            return 0.0;
        return fe * ew::ew_ccdf_snr(g, gl, legit) / (1.0 + g);
    };
    const double scale_l = legit.eta * legit.eta * gl;
    const double scale_e = ge > 0.0 ? eav.eta * eav.eta * ge : 1.0;
    const auto r = numerics::integrate_semi_infinite(integrand, ctl, std::sqrt(scale_l * scale_e));
    return {r.value / std::numbers::ln2, Method::quadrature, r.err_est / std::numbers::ln2,
            r.evaluations};
}

SecrecyResult sop_downlink(const LinkBudget& budget, const ew::EWParams& legit, double rs)
{
    check_rate(rs, "sop_downlink");
    legit.validate();
    const double threshold = std::exp2(rs) * (1.0 + budget.avg_snr_eav()) - 1.0;
    return {ew::ew_cdf_snr(threshold, budget.avg_snr_legit(), legit), Method::closed_form, 0.0, 0};
}

numerics::SeriesControl uplink_series_control()
{
    numerics::SeriesControl ctl;
    ctl.max_terms = 1000000;
    ctl.tail_tol = 1e-13;
    ctl.consecutive_small = 3;
    return ctl;
}

SecrecyResult sop_uplink_series(const LinkBudget& budget, const ew::EWParams& p, double rs,
                                const numerics::SeriesControl& ctl, SeriesVariant variant)
{
    using real = long double;
    check_rate(rs, "sop_uplink_series");
    p.validate();
    ctl.validate();

    const real alpha = p.alpha;
    const real g_th = std::exp2(static_cast<real>(rs));
    const real c_direct = std::pow(g_th * budget.avg_snr_eav() / budget.avg_snr_legit(),
                                   static_cast<real>(p.beta) / 2);
    // Exchanging the two channels gives 1 - P as the same series in 1/c. The
    // form with ratio >= 1 is summed: its outer terms decay like rho^-(2 alpha + 1)
    // and, for c < 1, the rho >= 1 terms carry P itself without cancellation.
    const bool complement = c_direct < 1;
    const real c = complement ? 1 / c_direct : c_direct;
    const real q_shift = variant == SeriesVariant::shifted_q ? 1 : 0;

    // Inner q-sum in closed form: sum_q (-1)^q C(alpha-1, q) / (a + q) = B(a, alpha).
    const real lg_alpha = log_gamma_ext(alpha);
    auto inner = [&](int rho) {
        const real a = rho * c + 1 + q_shift;
        return std::exp(lg_alpha + log_gamma_ratio(a, alpha));
    };
    // rho = 0 term alpha B(1 + shift, alpha), in closed form so that the
    // complementary result carries no rounding from it.
    const real head = q_shift == 0 ? real(1) : 1 / (alpha + 1);

    // Past rho > alpha the terms keep one sign and decay at least like
    // rho^-(alpha+1), so the remainder is below |term| rho / alpha. The tail rule
    // is applied to that bound relative to the result.
    auto result = [&](real tail_sum) {
        return complement ? (1 - head) - alpha * tail_sum : head + alpha * tail_sum;
    };
    real binom = 1;
    real partial = 0;
    real last = 0;
    int small = 0;
    int used = 1;
    bool converged = false;
    for (int rho = 1; rho < ctl.max_terms; ++rho)
    {
        binom *= (alpha - (rho - 1)) / rho;
        last = ((rho % 2 == 0) ? binom : -binom) * inner(rho);
        if (!std::isfinite(static_cast<double>(last)))
            throw NumericalError("sop_uplink_series: non-finite term at index " +
                                 std::to_string(rho));
        partial += last;
        used = rho + 1;
        const real bound = alpha * std::abs(last) * std::max<real>(1, rho / alpha);
        if (bound < static_cast<real>(ctl.tail_tol) * std::abs(result(partial)) +
                        std::numeric_limits<real>::min())
            ++small;
        else
            small = 0;
        if (small >= ctl.consecutive_small)
        {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("sop_uplink_series: outer series did not converge",
                               static_cast<double>(result(partial)),
                               static_cast<double>(alpha * std::abs(last)));

    const double value = std::clamp(static_cast<double>(result(partial)), 0.0, 1.0);
    const double err = static_cast<double>(alpha * std::abs(last) * std::max<real>(1, used / alpha));
    return {value, Method::closed_form, err, used};
}

SecrecyResult sop_uplink_quadrature(const LinkBudget& budget, const ew::EWParams& legit,
                                    const ew::EWParams& eav, double rs, bool exact_shift,
                                    const numerics::QuadratureControl& ctl)
{
    check_rate(rs, "sop_uplink_quadrature");
    legit.validate();
    eav.validate();
    const double g_th = std::exp2(rs);
    const double shift = exact_shift ? g_th - 1.0 : 0.0;
    const double gl = budget.avg_snr_legit();
    const double ge = budget.avg_snr_eav();

    if (ge == 0.0)
    {
        // Eavesdropper SNR is identically zero.
        const double v = shift > 0.0 ? ew::ew_cdf_snr(shift, gl, legit) : 0.0;
        return {v, Method::quadrature, 0.0, 0};
    }

    const double s = eav.eta * eav.eta * ge;
    const double inv_beta_e = 2.0 / eav.beta;
    const double a = eav.alpha;
    // g = s u^(2/beta_E) turns f_E(g) dg into a e^-u (1 - e^-u)^(a-1) du.
    auto integrand = [&](double u) {
        const double g = s * std::pow(u, inv_beta_e);
        const double fl = ew::ew_cdf_snr(g * g_th + shift, gl, legit);
        if (fl == 0.0)
            return 0.0;
        const double dens = a * std::exp(-u + (a - 1.0) * std::log(-std::expm1(-u)));
        return fl * dens;
    };
    const auto r = numerics::integrate_semi_infinite(integrand, ctl, 1.0);
    return {std::clamp(r.value, 0.0, 1.0), Method::quadrature, r.err_est, r.evaluations};
}

SecrecyResult secrecy_throughput(const SecrecyResult& sop, double rs)
{
    check_rate(rs, "secrecy_throughput");
    if (!(sop.value >= 0.0 && sop.value <= 1.0))
        throw DomainError("secrecy_throughput: SOP must lie in [0, 1]");
    return {rs * (1.0 - sop.value), sop.method, rs * sop.err_est, sop.terms_or_samples};
}

double secrecy_capacity_sample(double snr_legit, double snr_eav)
{
    if (!(snr_legit >= 0.0) || !(snr_eav >= 0.0))
        throw DomainError("secrecy_capacity_sample: SNRs must be >= 0");
    if (snr_legit <= snr_eav)
        return 0.0;
    return (std::log1p(snr_legit) - std::log1p(snr_eav)) / std::numbers::ln2;
}

}  // namespace fsosec::secrecy
