#include <cmath>
#include <complex>
#include <numbers>

#include <doctest.h>

#include "fsosec/error.hpp"
#include "fsosec/turbulence.hpp"
#include "fsosec/units.hpp"
#include "support/oracles.hpp"

using namespace fsosec;
using namespace fsosec::turbulence;
using fsosec::units::deg_to_rad;

namespace
{

LinkGeometry reference_geometry(double zenith_deg = 70.0)
{
    LinkGeometry g;
    g.sat_altitude_m = 500e3;
    g.platform_altitude_m = 18e3;
    g.zenith_angle_rad = deg_to_rad(zenith_deg);
    g.wavelength_m = 1550e-9;
    g.wind_speed_mps = 65.0;
    return g;
}

Cn2Profile zero_profile()
{
    return [](double) { return 0.0; };
}

}  // namespace

TEST_SUITE("turbulence")
{
    TEST_CASE("Hufnagel-Valley profile values")
    {
        CHECK(cn2_hv(0.0, 21.0, 1.7e-14) == doctest::Approx(2.7e-16 + 1.7e-14).epsilon(1e-14));
        // Term-by-term high-precision evaluation.
        CHECK(cn2_hv(10000.0, 65.0, 1.7e-14) == doctest::Approx(1.56637073030916e-16).epsilon(1e-12));
        CHECK(cn2_hv(INFINITY, 65.0, 1.7e-14) == 0.0);
        CHECK(cn2_hv(1e7, 65.0, 1.7e-14) < 1e-300);
        CHECK_THROWS_AS(cn2_hv(-1.0, 21.0, 1.7e-14), DomainError);
    }

    TEST_CASE("downlink scintillation index")
    {
        CHECK(scint_index_downlink(0.0) == 0.0);
        CHECK(scint_index_downlink(1e-6) == doctest::Approx(1e-6).epsilon(1e-5));
        CHECK(scint_index_downlink(1.0) == doctest::Approx(0.706438495919242).epsilon(1e-13));
        CHECK_THROWS_AS(scint_index_downlink(-0.1), DomainError);
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i)
        {
            const double s = scint_index_downlink(10.0 * i / 1000.0);
            CHECK(s > prev);
            prev = s;
        }
    }

    TEST_CASE("downlink Rytov variance")
    {
        const auto hv = hufnagel_valley(65.0);
        CHECK(rytov_downlink(reference_geometry(), zero_profile()) == 0.0);

        const double r0 = rytov_downlink(reference_geometry(0.0), hv);
        const double r60 = rytov_downlink(reference_geometry(60.0), hv);
        CHECK(r60 / r0 == doctest::Approx(std::pow(2.0, 11.0 / 6.0)).epsilon(1e-9));

        const double oracle = oracle::rytov_downlink(18e3, 500e3, deg_to_rad(70.0), 1550e-9, 65.0, 1.7e-14);
        CHECK(rytov_downlink(reference_geometry(), hv) == doctest::Approx(oracle).epsilon(1e-7));

        double prev = 0.0;
        for (double z = 0.0; z < 85.0; z += 2.5)
        {
            const double r = rytov_downlink(reference_geometry(z), hv);
            CHECK(r > prev);
            prev = r;
        }
    }

    TEST_CASE("geometry invariants")
    {
        LinkGeometry g = reference_geometry();
        g.zenith_angle_rad = deg_to_rad(85.0);
        CHECK_THROWS_AS(g.validate(), DomainError);
        g = reference_geometry();
        g.platform_altitude_m = g.sat_altitude_m;
        CHECK_THROWS_AS(g.validate(), DomainError);
        g = reference_geometry();
        g.wavelength_m = 0.0;
        CHECK_THROWS_AS(g.validate(), DomainError);
    }

    TEST_CASE("Fried parameter")
    {
        const auto hv = hufnagel_valley(65.0);
        CHECK(std::isinf(fried_r0(reference_geometry(), zero_profile())));
        const double oracle = oracle::fried_r0(18e3, 500e3, deg_to_rad(70.0), 1550e-9, 65.0, 1.7e-14);
        CHECK(fried_r0(reference_geometry(), hv) == doctest::Approx(oracle).epsilon(1e-7));

        LinkGeometry half = reference_geometry();
        half.wavelength_m = 775e-9;
        CHECK(fried_r0(half, hv) / fried_r0(reference_geometry(), hv) ==
              doctest::Approx(std::pow(2.0, -6.0 / 5.0)).epsilon(1e-9));
    }

    TEST_CASE("beam at receiver")
    {
        LinkGeometry g = reference_geometry(0.0);
        g.sat_altitude_m = 18e3 + 1.41e6;
        BeamGeometry b;
        b.w0_m = 0.1;
        const auto rx = beam_at_receiver(g, b);
        CHECK(rx.receiver_beam_radius_m == doctest::Approx(6.95738126087247).epsilon(1e-12));
        CHECK(rx.theta_recv == doctest::Approx(2.0658957098064e-4).epsilon(1e-10));
        CHECK(rx.receiver_beam_radius_m >= b.w0_m);

        // Far field: W_p -> 2 L / (k W0).
        CHECK(rx.receiver_beam_radius_m == doctest::Approx(2 * 1.41e6 / (g.wavenumber() * 0.1)).epsilon(1e-3));

        LinkGeometry near = reference_geometry(0.0);
        near.sat_altitude_m = 18e3 + 1e-3;
        const auto nr = beam_at_receiver(near, b);
        CHECK(nr.receiver_beam_radius_m == doctest::Approx(0.1).epsilon(1e-9));
        CHECK(nr.theta_recv == doctest::Approx(1.0).epsilon(1e-9));

        b.w0_m = 0.0;
        CHECK_THROWS_AS(beam_at_receiver(g, b), DomainError);
    }

    TEST_CASE("uplink Rytov variance against a trapezoid evaluation")
    {
        const LinkGeometry g = reference_geometry();
        BeamGeometry b;
        b.w0_m = 0.15;
        const auto rx = beam_at_receiver(g, b);
        const double h0 = g.platform_altitude_m;
        const double span = g.vertical_extent();
        const double lam = rx.lambda_recv;
        const double tb = 1 - rx.theta_recv;
        auto f = [&](double z) {
            const double xi = 1 - z / span;
            const std::complex<double> w(lam * xi, 1 - tb * xi);
            return oracle::cn2_hv(h0 + z, 65.0, 1.7e-14) *
                   (std::pow(xi, 5.0 / 6.0) * std::pow(w, 5.0 / 6.0).real() - std::pow(lam, 5.0 / 6.0) * std::pow(xi, 5.0 / 3.0));
        };
        const double mu = oracle::trapezoid_log(f, 1e-6, span, 400000);
        const double k = g.wavenumber();
        const double expected = 8.70 * mu * std::pow(k, 7.0 / 6.0) * std::pow(span, 5.0 / 6.0) *
                                std::pow(g.secant(), 11.0 / 6.0);
        CHECK(rytov_uplink(g, rx, hufnagel_valley(65.0)) == doctest::Approx(expected).epsilon(1e-6));
        CHECK(rytov_uplink(g, rx, zero_profile()) == 0.0);
        CHECK_THROWS_AS(rytov_uplink(g, b, hufnagel_valley(65.0)), ConfigError);
    }

    TEST_CASE("uplink scintillation index")
    {
        const LinkGeometry g = reference_geometry();
        BeamGeometry b;
        b.w0_m = 0.15;
        const auto rx = beam_at_receiver(g, b);

        CHECK(scint_index_uplink(g, rx, {0.0, 0.1, 0.0}) == 0.0);
        // Without pointing error only the exponential term remains.
        const double s = 0.3;
        const double theta = rx.theta_recv;
        const double expected = std::exp(0.49 * s / std::pow(1 + (1.11 + theta) * std::pow(s, 1.2), 7.0 / 6.0) +
                                         0.51 * s / std::pow(1 + 0.69 * std::pow(s, 1.2), 5.0 / 6.0)) - 1;
        CHECK(scint_index_uplink(g, rx, {s, 0.1, 0.0}) == doctest::Approx(expected).epsilon(1e-14));

        // Beam-wander term scales as (2 W0 / r0)^(5/3).
        BeamGeometry wide = rx;
        wide.w0_m = 2 * rx.w0_m;
        const double t1 = scint_index_uplink(g, rx, {0.0, 0.2, 1e-6});
        const double t2 = scint_index_uplink(g, wide, {0.0, 0.2, 1e-6});
        CHECK(t2 / t1 == doctest::Approx(std::pow(2.0, 5.0 / 3.0)).epsilon(1e-12));

        CHECK_THROWS_WITH_AS(scint_index_uplink(g, rx, {std::nullopt, 0.1, 0.0}),
                             doctest::Contains("rytov_var"), ConfigError);
        CHECK_THROWS_WITH_AS(scint_index_uplink(g, rx, {0.1, std::nullopt, 0.0}),
                             doctest::Contains("fried_r0_m"), ConfigError);
        CHECK_THROWS_WITH_AS(scint_index_uplink(g, rx, {0.1, 0.1, std::nullopt}),
                             doctest::Contains("pointing_error_rad"), ConfigError);
        CHECK_THROWS_WITH_AS(scint_index_uplink(g, b, {0.1, 0.1, 0.0}),
                             doctest::Contains("receiver_beam_radius_m"), ConfigError);
    }

    TEST_CASE("pointing error and zero turbulence")
    {
        const LinkGeometry g = reference_geometry();
        BeamGeometry b;
        b.w0_m = 0.15;
        CHECK(pointing_error(g, b, zero_profile()) == 0.0);
        const auto st = uplink_stats(g, b, zero_profile(), {});
        CHECK(st.rytov_var == 0.0);
        CHECK(st.pointing_error_rad == 0.0);
        CHECK(st.scint_index == 0.0);
        const auto dl = downlink_stats(g, zero_profile(), {});
        CHECK(dl.scint_index == 0.0);
        CHECK(pointing_error(g, beam_at_receiver(g, b), 0.05) > 0.0);
    }

    TEST_CASE("overrides pass through verbatim")
    {
        const LinkGeometry g = reference_geometry();
        BeamGeometry b;
        b.w0_m = 0.15;
        TurbulenceOverrides ov;
        ov.rytov_uplink = 0.25;
        ov.fried_r0_m = 0.08;
        ov.pointing_error_rad = 2e-7;
        const auto st = uplink_stats(g, b, hufnagel_valley(65.0), ov);
        CHECK(st.rytov_var == 0.25);
        CHECK(st.fried_r0_m == 0.08);
        CHECK(st.pointing_error_rad == 2e-7);

        TurbulenceOverrides direct;
        direct.scint_downlink = 0.4;
        direct.scint_uplink = 0.7;
        CHECK(downlink_stats(g, hufnagel_valley(65.0), direct).scint_index == 0.4);
        CHECK(uplink_stats(g, b, hufnagel_valley(65.0), direct).scint_index == 0.7);
    }
}
