#include "fsosec/turbulence.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "fsosec/error.hpp"

namespace fsosec::turbulence
{

namespace
{

using numerics::QuadratureControl;

// Path integrals are O(1e-12) or smaller, so only the relative tolerance may bind.
QuadratureControl path_control(const QuadratureControl& ctl)
{
    QuadratureControl out = ctl;
    out.abs_tol = std::min(ctl.abs_tol, 1e-300);
    return out;
}

double weighted_path_integral(const LinkGeometry& geom, const Cn2Profile& profile,
                              const QuadratureControl& ctl, double power)
{
    const double h0 = geom.platform_altitude_m;
    auto integrand = [&](double h) {
        const double c = profile(h);
        if (c == 0.0)
            return 0.0;
        return power == 0.0 ? c : c * std::pow(h - h0, power);
    };
    // Most of the profile lives in the first few scale heights above h0.
    const double top = geom.sat_altitude_m;
    const double split = std::min(top, h0 + 30e3);
    double total = numerics::integrate(integrand, h0, split, path_control(ctl)).value;
    if (split < top)
        total += numerics::integrate(integrand, split, top, path_control(ctl)).value;
    return total;
}

double bracket_exponent(double s, double theta)
{
    const double s65 = std::pow(s, 1.2);
    return 0.49 * s / std::pow(1.0 + (1.11 + theta) * s65, 7.0 / 6.0) +
           0.51 * s / std::pow(1.0 + 0.69 * s65, 5.0 / 6.0);
}

}  // namespace

void LinkGeometry::validate() const
{
    if (!(platform_altitude_m >= 0.0))
        throw DomainError("LinkGeometry: platform altitude must be >= 0");
    if (!(sat_altitude_m > platform_altitude_m))
        throw DomainError("LinkGeometry: satellite altitude must exceed platform altitude");
    if (!(zenith_angle_rad >= 0.0) || !(zenith_angle_rad < kMaxZenithRad))
        throw DomainError("LinkGeometry: zenith angle must lie in [0, 85) degrees");
    if (!(wavelength_m > 0.0))
        throw DomainError("LinkGeometry: wavelength must be > 0");
    if (!std::isfinite(wind_speed_mps))
        throw DomainError("LinkGeometry: wind speed must be finite");
}

double LinkGeometry::wavenumber() const
{
    return 2.0 * std::numbers::pi / wavelength_m;
}

double LinkGeometry::secant() const
{
    return 1.0 / std::cos(zenith_angle_rad);
}

double LinkGeometry::slant_range() const
{
    return vertical_extent() * secant();
}

double cn2_hv(double h_m, double wind_mps, double ground_cn2)
{
    if (!(h_m >= 0.0))
        throw DomainError("cn2_hv: altitude must be >= 0");
    if (std::isinf(h_m))
        return 0.0;
    const double w = wind_mps / 27.0;
    const double hk = 1e-5 * h_m;
    return 0.00594 * w * w * std::pow(hk, 10) * std::exp(-h_m / 1000.0) +
           2.7e-16 * std::exp(-h_m / 1500.0) + ground_cn2 * std::exp(-h_m / 100.0);
}

Cn2Profile hufnagel_valley(double wind_mps, double ground_cn2)
{
    return [wind_mps, ground_cn2](double h) { return cn2_hv(h, wind_mps, ground_cn2); };
}

double rytov_downlink(const LinkGeometry& geom, const Cn2Profile& profile,
                      const QuadratureControl& ctl)
{
    geom.validate();
    const double k = geom.wavenumber();
    const double integral = weighted_path_integral(geom, profile, ctl, 5.0 / 6.0);
    return 2.25 * std::pow(k, 7.0 / 6.0) * std::pow(geom.secant(), 11.0 / 6.0) * integral;
}

double scint_index_downlink(double rytov_var)
{
    if (!(rytov_var >= 0.0))
        throw DomainError("scint_index_downlink: Rytov variance must be >= 0");
    return std::expm1(bracket_exponent(rytov_var, 0.0));
}

BeamGeometry beam_at_receiver(const LinkGeometry& geom, const BeamGeometry& beam)
{
    if (!(beam.w0_m > 0.0))
        throw DomainError("beam_at_receiver: W0 must be > 0");
    const double L = geom.slant_range();
    const double lambda0 = 2.0 * L / (geom.wavenumber() * beam.w0_m * beam.w0_m);
    const double theta0 = beam.curvature_theta0;
    const double denom = theta0 * theta0 + lambda0 * lambda0;
    BeamGeometry out = beam;
    out.receiver_beam_radius_m = beam.w0_m * std::sqrt(denom);
    out.theta_recv = theta0 / denom;
    out.lambda_recv = lambda0 / denom;
    return out;
}

double fried_r0(const LinkGeometry& geom, const Cn2Profile& profile, const QuadratureControl& ctl)
{
    geom.validate();
    const double k = geom.wavenumber();
    const double integral = weighted_path_integral(geom, profile, ctl, 0.0);
    if (integral <= 0.0)
        return std::numeric_limits<double>::infinity();
    return std::pow(0.423 * k * k * geom.secant() * integral, -3.0 / 5.0);
}

double rytov_uplink(const LinkGeometry& geom, const BeamGeometry& beam, const Cn2Profile& profile,
                    const QuadratureControl& ctl)
{
    geom.validate();
    if (!beam.propagated())
        throw ConfigError("rytov_uplink: beam has not been propagated to the receiver");
    const double h0 = geom.platform_altitude_m;
    const double span = geom.vertical_extent();
    const double lam = beam.lambda_recv;
    const double theta_bar = 1.0 - beam.theta_recv;
    const double lam56 = std::pow(lam, 5.0 / 6.0);
    auto integrand = [&](double h) {
        const double c = profile(h);
        if (c == 0.0)
            return 0.0;
        const double xi = 1.0 - (h - h0) / span;
        const std::complex<double> z(lam * xi, 1.0 - theta_bar * xi);
        const double bracket =
            std::pow(xi, 5.0 / 6.0) * std::pow(z, 5.0 / 6.0).real() - lam56 * std::pow(xi, 5.0 / 3.0);
        return c * bracket;
    };
    const double top = geom.sat_altitude_m;
    const double split = std::min(top, h0 + 30e3);
    double mu3u = numerics::integrate(integrand, h0, split, path_control(ctl)).value;
    if (split < top)
        mu3u += numerics::integrate(integrand, split, top, path_control(ctl)).value;
    const double k = geom.wavenumber();
    const double value = 8.70 * mu3u * std::pow(k, 7.0 / 6.0) * std::pow(span, 5.0 / 6.0) *
                         std::pow(geom.secant(), 11.0 / 6.0);
    return std::max(0.0, value);
}

double pointing_error(const LinkGeometry& geom, const BeamGeometry& beam, double fried_r0_m)
{
    geom.validate();
    if (!(fried_r0_m > 0.0))
        throw DomainError("pointing_error: r0 must be > 0");
    if (std::isinf(fried_r0_m))
        return 0.0;
    const double w0 = beam.w0_m;
    const double L = geom.slant_range();
    const double ratio = 2.0 * w0 / fried_r0_m;
    const double lambda_over = geom.wavelength_m / (2.0 * w0);
    const double wander = 0.54 * L * L * lambda_over * lambda_over * std::pow(ratio, 5.0 / 3.0);
    const double x = std::numbers::pi * std::numbers::pi * w0 * w0 / (fried_r0_m * fried_r0_m);
    const double sigma_pe2 = wander * (1.0 - std::pow(x / (1.0 + x), 1.0 / 6.0));
    return std::sqrt(sigma_pe2) / L;
}

double pointing_error(const LinkGeometry& geom, const BeamGeometry& beam, const Cn2Profile& profile,
                      const QuadratureControl& ctl)
{
    const BeamGeometry rx = beam.propagated() ? beam : beam_at_receiver(geom, beam);
    return pointing_error(geom, rx, fried_r0(geom, profile, ctl));
}

double scint_index_uplink(const LinkGeometry& geom, const BeamGeometry& beam,
                          const UplinkScintInputs& in)
{
    if (!in.rytov_var)
        throw ConfigError("scint_index_uplink: missing rytov_var (uplink Rytov variance)");
    if (!in.fried_r0_m)
        throw ConfigError("scint_index_uplink: missing fried_r0_m");
    if (!in.pointing_error_rad)
        throw ConfigError("scint_index_uplink: missing pointing_error_rad");
    if (!beam.propagated())
        throw ConfigError("scint_index_uplink: missing receiver_beam_radius_m (beam not propagated)");
    const double s = *in.rytov_var;
    const double r0 = *in.fried_r0_m;
    const double ape = *in.pointing_error_rad;
    if (!(s >= 0.0) || !(r0 > 0.0) || !(ape >= 0.0))
        throw DomainError("scint_index_uplink: ingredients out of range");

    double wander_term = 0.0;
    if (ape > 0.0 && std::isfinite(r0))
    {
        const double H = geom.vertical_extent();
        const double sec = geom.secant();
        const double ratio = ape / beam.receiver_beam_radius_m;
        wander_term = 5.95 * H * H * sec * sec * std::pow(2.0 * beam.w0_m / r0, 5.0 / 3.0) *
                      ratio * ratio;
    }
    return wander_term + std::expm1(bracket_exponent(s, beam.theta_recv));
}

TurbulenceStats downlink_stats(const LinkGeometry& geom, const Cn2Profile& profile,
                               const TurbulenceOverrides& ov)
{
    TurbulenceStats st;
    st.rytov_var = ov.rytov_downlink ? *ov.rytov_downlink : rytov_downlink(geom, profile);
    st.fried_r0_m = ov.fried_r0_m ? *ov.fried_r0_m : fried_r0(geom, profile);
    st.scint_index = ov.scint_downlink ? *ov.scint_downlink : scint_index_downlink(st.rytov_var);
    if (!(st.scint_index >= 0.0) || !std::isfinite(st.scint_index))
        throw DomainError("downlink scintillation index must be finite and >= 0");
    return st;
}

TurbulenceStats uplink_stats(const LinkGeometry& geom, const BeamGeometry& beam,
                             const Cn2Profile& profile, const TurbulenceOverrides& ov)
{
    const BeamGeometry rx = beam.propagated() ? beam : beam_at_receiver(geom, beam);
    TurbulenceStats st;
    st.rytov_var = ov.rytov_uplink ? *ov.rytov_uplink : rytov_uplink(geom, rx, profile);
    st.fried_r0_m = ov.fried_r0_m ? *ov.fried_r0_m : fried_r0(geom, profile);
    st.pointing_error_rad =
        ov.pointing_error_rad ? *ov.pointing_error_rad : pointing_error(geom, rx, st.fried_r0_m);
    st.scint_index = ov.scint_uplink
                         ? *ov.scint_uplink
                         : scint_index_uplink(geom, rx, {st.rytov_var, st.fried_r0_m, st.pointing_error_rad});
    if (!(st.scint_index >= 0.0) || !std::isfinite(st.scint_index))
        throw DomainError("uplink scintillation index must be finite and >= 0");
    return st;
}

}  // namespace fsosec::turbulence
