#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "fsosec/ew_fading.hpp"
#include "fsosec/numerics.hpp"

namespace fsosec::secrecy
{

//! Average SNRs of the legitimate receiver and the eavesdropper (linear units).
//!
//! Built either from transmit SNR and power fractions (both SNRs derived), from
//! the two SNRs directly (fractions absent), or from fractions with the
//! eavesdropper SNR pinned against its own noise floor.
class LinkBudget
{
public:
    static LinkBudget from_fractions(double power_over_noise, double frac_legit, double frac_eav);
    static LinkBudget from_snrs(double avg_snr_legit, double avg_snr_eav);
    static LinkBudget with_eavesdropper_snr(double power_over_noise, double frac_legit,
                                            double frac_eav, double avg_snr_eav);

    double avg_snr_legit() const { return avg_snr_legit_; }
    double avg_snr_eav() const { return avg_snr_eav_; }
    std::optional<double> power_over_noise() const { return power_over_noise_; }
    std::optional<double> frac_legit() const { return frac_legit_; }
    std::optional<double> frac_eav() const { return frac_eav_; }

private:
    LinkBudget() = default;

    double avg_snr_legit_ = 0.0;
    double avg_snr_eav_ = 0.0;
    std::optional<double> power_over_noise_;
    std::optional<double> frac_legit_;
    std::optional<double> frac_eav_;
};

enum class Method
{
    closed_form,
    quadrature,
    monte_carlo,
};

std::string_view to_string(Method m);

struct SecrecyResult
{
    double value = 0.0;  // bits/s/Hz for ASC and ST, probability for SOP
    Method method = Method::closed_form;
    double err_est = 0.0;
    std::int64_t terms_or_samples = 0;
};

//! Downlink ASC from the high-SNR Jensen approximation, clamped at zero:
//!   max(0, log2(1 + gbar_legit) - log2(1 + gbar_eav)).
SecrecyResult asc_downlink(const LinkBudget& budget);

//! Uplink ASC (1/ln 2) int_0^inf F_E(g) / (1 + g) [1 - F_legit(g)] dg.
//!
//! The integrand already encodes the ordering of the two channels; no clamp is
//! applied. An eavesdropper with zero average SNR gives the ergodic capacity of
//! the legitimate link, and an eavesdropper CDF identically zero gives 0.
SecrecyResult asc_uplink_quadrature(const LinkBudget& budget, const ew::EWParams& legit,
                                    const ew::EWParams& eav,
                                    const numerics::QuadratureControl& ctl = {});

//! Downlink SOP F_legit(2^rs (1 + gbar_eav) - 1); the eavesdropper sees no fading.
SecrecyResult sop_downlink(const LinkBudget& budget, const ew::EWParams& legit, double rs);

//! Default truncation for sop_uplink_series.
numerics::SeriesControl uplink_series_control();

//! Term layout of the uplink SOP double series. `shifted_q` moves the inner
//! index by one and exists only as a negative control for validation runs.
enum class SeriesVariant
{
    exact,
    shifted_q,
};

//! Uplink SOP with equal fading on both links and threshold g_th = 2^rs:
//!   P = alpha sum_rho sum_q (-1)^(rho+q) C(alpha, rho) C(alpha-1, q) / (rho c + q + 1),
//!   c = (g_th gbar_eav / gbar_legit)^(beta/2).
//!
//! The q-sum is evaluated in closed form, sum_q (-1)^q C(alpha-1, q) / (a + q) = B(a, alpha).
//! For c < 1 the channels are exchanged, 1 - P being the same series in 1/c, so
//! the outer sum always runs with a ratio >= 1. Outer terms then decay like
//! rho^-(2 alpha + 1); shapes with alpha below about 1 exhaust ctl.max_terms and
//! raise ConvergenceError.
SecrecyResult sop_uplink_series(const LinkBudget& budget, const ew::EWParams& p, double rs,
                                const numerics::SeriesControl& ctl = uplink_series_control(),
                                SeriesVariant variant = SeriesVariant::exact);

//! Uplink SOP int_0^inf F_legit(g g_th + shift) f_E(g) dg with shift = g_th - 1
//! when `exact_shift`, else 0. Integrated after the substitution
//! g = eta_E^2 gbar_E u^(2/beta_E), which removes the g^(beta_E/2 - 1) endpoint
//! singularity of the density.
SecrecyResult sop_uplink_quadrature(const LinkBudget& budget, const ew::EWParams& legit,
                                    const ew::EWParams& eav, double rs, bool exact_shift = false,
                                    const numerics::QuadratureControl& ctl = {1e-10, 1e-300, 4000});

//! rs (1 - P_SO), error propagated linearly.
SecrecyResult secrecy_throughput(const SecrecyResult& sop, double rs);

//! Instantaneous secrecy capacity, zero unless the legitimate SNR is larger.
double secrecy_capacity_sample(double snr_legit, double snr_eav);

}  // namespace fsosec::secrecy
