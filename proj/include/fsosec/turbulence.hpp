#pragma once

#include <functional>
#include <optional>

#include "fsosec/numerics.hpp"

namespace fsosec::turbulence
{

inline constexpr double kDefaultGroundCn2 = 1.7e-14;
inline constexpr double kMaxZenithRad = 85.0 * 3.14159265358979323846 / 180.0;

//! Slant-path geometry between the platform (HAPS) and the satellite.
struct LinkGeometry
{
    double sat_altitude_m = 500e3;
    double platform_altitude_m = 18e3;
    double zenith_angle_rad = 0.0;
    double wavelength_m = 1550e-9;
    double wind_speed_mps = 21.0;

    //! Throws DomainError on any violated invariant (zenith limited to < 85 deg).
    void validate() const;
    double wavenumber() const;
    double vertical_extent() const { return sat_altitude_m - platform_altitude_m; }
    double slant_range() const;
    double secant() const;
};

//! Gaussian beam launched from the platform. The receiver-plane fields are
//! filled by beam_at_receiver().
struct BeamGeometry
{
    double w0_m = 0.1;
    double curvature_theta0 = 1.0;  // 1 = collimated
    double receiver_beam_radius_m = 0.0;
    double theta_recv = 0.0;
    double lambda_recv = 0.0;

    bool propagated() const { return receiver_beam_radius_m > 0.0; }
};

struct TurbulenceStats
{
    double rytov_var = 0.0;
    double fried_r0_m = 0.0;          // +inf when the profile carries no turbulence
    double pointing_error_rad = 0.0;  // rms beam-wander pointing-error angle (alpha_pe)
    double scint_index = 0.0;
};

//! Refractive-index structure parameter Cn^2(h) in m^(-2/3).
using Cn2Profile = std::function<double(double)>;

//! Hufnagel-Valley Cn^2 [m^-2/3] with rms wind `wind_mps` and ground term `ground_cn2`.
double cn2_hv(double h_m, double wind_mps, double ground_cn2 = kDefaultGroundCn2);

Cn2Profile hufnagel_valley(double wind_mps, double ground_cn2 = kDefaultGroundCn2);

//! Plane-wave downlink Rytov variance
//!   2.25 k^(7/6) sec^(11/6)(zenith) * integral_{h0}^{H} Cn2(h) (h - h0)^(5/6) dh.
double rytov_downlink(const LinkGeometry& geom, const Cn2Profile& profile,
                      const numerics::QuadratureControl& ctl = {});

double scint_index_downlink(double rytov_var);

//! Collimated/focused Gaussian beam propagated over the uplink slant range.
BeamGeometry beam_at_receiver(const LinkGeometry& geom, const BeamGeometry& beam);

//! Fried parameter r0 = [0.423 k^2 sec(zenith) integral Cn2 dh]^(-3/5).
//! Returns +inf for a turbulence-free profile.
double fried_r0(const LinkGeometry& geom, const Cn2Profile& profile,
                const numerics::QuadratureControl& ctl = {});

//! Uplink Gaussian-beam Rytov variance (Andrews & Phillips, "Laser Beam
//! Propagation through Random Media", 2nd ed., Ch. 12):
//!   8.70 mu_3u k^(7/6) (H - h0)^(5/6) sec^(11/6)(zenith),
//!   mu_3u = Re integral Cn2(h) { xi^(5/6) [Lambda xi + i(1 - (1-Theta) xi)]^(5/6)
//!                                 - Lambda^(5/6) xi^(5/3) } dh,  xi = 1 - (h - h0)/(H - h0).
//! `beam` must already be propagated.
double rytov_uplink(const LinkGeometry& geom, const BeamGeometry& beam, const Cn2Profile& profile,
                    const numerics::QuadratureControl& ctl = {});

//! Beam-wander induced rms pointing-error angle alpha_pe = sigma_pe / L with
//!   <r_c^2>  = 0.54 (H - h0)^2 sec^2(zenith) (lambda / 2 W0)^2 (2 W0 / r0)^(5/3)
//!   sigma_pe^2 = <r_c^2> [1 - (pi^2 W0^2 / r0^2 / (1 + pi^2 W0^2 / r0^2))^(1/6)]
//! (same reference, Sect. 12.5). Zero for a turbulence-free profile.
double pointing_error(const LinkGeometry& geom, const BeamGeometry& beam, double fried_r0_m);
double pointing_error(const LinkGeometry& geom, const BeamGeometry& beam, const Cn2Profile& profile,
                      const numerics::QuadratureControl& ctl = {});

//! Ingredients of the uplink scintillation index. Any of them may be injected.
struct UplinkScintInputs
{
    std::optional<double> rytov_var;
    std::optional<double> fried_r0_m;
    std::optional<double> pointing_error_rad;
};

//! Uplink scintillation index with the untracked beam-wander term:
//!   5.95 (H - h0)^2 sec^2 (2 W0 / r0)^(5/3) (alpha_pe / W)^2
//!   + exp[0.49 s / (1 + (1.11 + Theta) s^(6/5))^(7/6) + 0.51 s / (1 + 0.69 s^(6/5))^(5/6)] - 1
//! with s the uplink Rytov variance.
double scint_index_uplink(const LinkGeometry& geom, const BeamGeometry& beam,
                          const UplinkScintInputs& in);

//! Values that replace the model-derived quantities when present.
struct TurbulenceOverrides
{
    std::optional<double> rytov_downlink;
    std::optional<double> rytov_uplink;
    std::optional<double> fried_r0_m;
    std::optional<double> pointing_error_rad;
    std::optional<double> scint_downlink;
    std::optional<double> scint_uplink;
};

//! Full downlink chain: profile -> Rytov -> scintillation index.
TurbulenceStats downlink_stats(const LinkGeometry& geom, const Cn2Profile& profile,
                               const TurbulenceOverrides& ov = {});

//! Full uplink chain: beam propagation, Rytov, r0, beam wander, scintillation.
TurbulenceStats uplink_stats(const LinkGeometry& geom, const BeamGeometry& beam,
                             const Cn2Profile& profile, const TurbulenceOverrides& ov = {});

}  // namespace fsosec::turbulence
