#include "fsosec/units.hpp"
#include <cmath>
#include "fsosec/units.hpp"
#include <random>
#include "fsosec/units.hpp"
#include <vector>
#include "fsosec/units.hpp"

#include "fsosec/units.hpp"
#include <doctest.h>
#include "fsosec/units.hpp"

#include "fsosec/units.hpp"
#include "fsosec/error.hpp"
#include "fsosec/ew_fading.hpp"
#include "fsosec/numerics.hpp"
#include "support/oracles.hpp"

using namespace fsosec;
using namespace fsosec::ew;
using fsosec::units::db_to_linear;

TEST_SUITE("ew_fading")
{
    TEST_CASE("fit from scintillation index")
    {
        // High-precision evaluation of the fit expressions and of the E[I^2] = 1 scale.
        const auto f = fit_from_scint(0.5);
        CHECK(f.params.alpha == doctest::Approx(5.44482415796297).epsilon(1e-12));
        CHECK(f.params.beta == doctest::Approx(0.743179971840203).epsilon(1e-12));
        CHECK(f.params.eta == doctest::Approx(0.242466565327280).epsilon(1e-9));
        CHECK(f.in_validity_range);

        const auto g = fit_from_scint(2.0);
        CHECK(g.params.alpha == doctest::Approx(5.94742475100925).epsilon(1e-12));
        CHECK(g.params.beta == doctest::Approx(0.421250434606578).epsilon(1e-12));
        CHECK(g.params.eta == doctest::Approx(0.0481825396643748).epsilon(1e-9));

        CHECK_FALSE(fit_from_scint(0.01).in_validity_range);
        CHECK_FALSE(fit_from_scint(6.0).in_validity_range);
        CHECK_THROWS_AS(fit_from_scint(0.0), DomainError);
    }

    TEST_CASE("fitted beta decreases with scintillation")
    {
        double prev = INFINITY;
        for (double s = 0.1; s <= 3.0; s += 0.01)
        {
            const double b = fit_from_scint(s).params.beta;
            CHECK(b < prev);
            prev = b;
        }
    }

    TEST_CASE("normalization gives unit second moment")
    {
        CHECK(normalize_eta(1.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
        for (double beta : {0.8, 1.7, 4.0})
            CHECK(normalize_eta(1.0, beta) ==
                  doctest::Approx(std::exp(-0.5 * std::lgamma(1 + 2 / beta))).epsilon(1e-13));
        for (double s : {0.06, 0.2, 0.5, 1.0, 2.0, 4.5})
        {
            const auto p = fit_from_scint(s).params;
            CHECK(std::abs(ew_moment(2, p) - 1.0) < 1e-9);
            CHECK(oracle::ew_moment_trapezoid(2, p.alpha, p.beta, p.eta) == doctest::Approx(1.0).epsilon(1e-8));
        }
        // alpha < 1 takes the integral path.
        const auto p = normalized(0.6, 1.3);
        CHECK(std::abs(ew_moment(2, p) - 1.0) < 1e-9);
        CHECK(oracle::ew_moment_trapezoid(2, p.alpha, p.beta, p.eta) == doctest::Approx(1.0).epsilon(1e-8));
    }

    TEST_CASE("moments")
    {
        const EWParams w{1.0, 1.5, 0.8};
        CHECK(ew_moment(3, w) == doctest::Approx(std::pow(0.8, 3) * std::tgamma(1 + 3 / 1.5)).epsilon(1e-12));
        const auto p = normalized(3.2, 1.7);
        CHECK(p.eta == doctest::Approx(0.675709277078137).epsilon(1e-10));
        CHECK(ew_moment(1, p) == doctest::Approx(0.939861817885180).epsilon(1e-10));
        CHECK(ew_moment(1, p) == doctest::Approx(oracle::ew_moment_trapezoid(1, 3.2, 1.7, p.eta)).epsilon(1e-8));
        CHECK_THROWS_AS(ew_moment(0, p), DomainError);
    }

    TEST_CASE("CDF boundary values")
    {
        const EWParams w{1.0, 2.0, 1.0};
        CHECK(ew_cdf_irradiance(0.0, w) == 0.0);
        CHECK(ew_cdf_irradiance(1.0, w) == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-15));
        CHECK(ew_cdf_irradiance(1e3, w) == 1.0);
        CHECK_THROWS_AS(ew_cdf_irradiance(-1.0, w), DomainError);
        CHECK_THROWS_AS(ew_cdf_snr(1.0, 0.0, w), DomainError);
        CHECK(ew_ccdf_snr(0.0, 2.0, w) == 1.0);
    }

    TEST_CASE("CDF equals its alternating series")
    {
        for (double alpha : {0.8, 1.0, 2.3, 3.7, 5.0, 8.0})
        {
            const auto p = normalized(alpha, 1.9);
            double worst = 0.0;
            for (double g = 0.02; g < 30.0; g *= 1.15)
                worst = std::max(worst, std::abs(ew_cdf_snr(g, 1.0, p) -
                                                 oracle::ew_cdf_series(g, 1.0, p.alpha, p.beta, p.eta)));
            CHECK(worst < 1e-8);
        }
    }

    TEST_CASE("CDF is monotone and the complement is accurate in the tail")
    {
        const auto p = normalized(2.5, 3.0);
        double prev = 0.0;
        for (double g = 1e-4; g < 50.0; g *= 1.05)
        {
            const double f = ew_cdf_snr(g, 1.0, p);
            CHECK(f >= prev);
            CHECK(ew_pdf_snr(g, 1.0, p) >= 0.0);
            prev = f;
        }
        const double g = 30.0;
        const double y = std::pow(g / (p.eta * p.eta), p.beta / 2);
        CHECK(ew_ccdf_snr(g, 1.0, p) == doctest::Approx(-std::expm1(p.alpha * std::log1p(-std::exp(-y)))).epsilon(1e-12));
        CHECK(ew_ccdf_snr(g, 1.0, p) > 0.0);
    }

    TEST_CASE("density integrates to one")
    {
        for (const auto& p : {normalized(3.2, 1.5), normalized(1.3, 6.0), normalized(0.7, 1.2)})
        {
            numerics::QuadratureControl ctl;
            ctl.rel_tol = 1e-11;
            ctl.abs_tol = 1e-300;
            const auto r = numerics::integrate_semi_infinite([&](double g) { return ew_pdf_snr(g, 3.0, p); }, ctl, 3.0);
            CHECK(r.value == doctest::Approx(1.0).epsilon(1e-8));
        }
    }

    TEST_CASE("density matches the derivative of the CDF")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> ug(0.05, 8.0);
        const auto p = normalized(2.7, 2.4);
        for (int i = 0; i < 100; ++i)
        {
            const double g = ug(rng);
            const double h = 1e-5 * g;
            const double fd = (ew_cdf_snr(g + h, 2.0, p) - ew_cdf_snr(g - h, 2.0, p)) / (2 * h);
            CHECK(ew_pdf_snr(g, 2.0, p) == doctest::Approx(fd).epsilon(1e-6));
        }
    }

    TEST_CASE("density equals its series form")
    {
        const auto p = normalized(3.2, 1.5);
        for (double g = 0.01; g < 20.0; g *= 1.3)
        {
            const double s = oracle::ew_pdf_series(g, 1.0, p.alpha, p.beta, p.eta);
            CHECK(std::abs(ew_pdf_snr(g, 1.0, p) - s) <= 1e-9 * std::max(1.0, s));
        }
    }

    TEST_CASE("density at the origin")
    {
        CHECK(ew_pdf_snr(0.0, 1.0, EWParams{2.0, 3.0, 1.0}) == 0.0);
        CHECK(std::isinf(ew_pdf_snr(0.0, 1.0, EWParams{1.0, 1.0, 1.0})));
        // alpha beta / 2 = 1: finite non-zero limit.
        CHECK(ew_pdf_snr(0.0, 2.0, EWParams{1.0, 2.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK_THROWS_AS(ew_pdf_snr(-1.0, 1.0, EWParams{}), DomainError);
    }

    TEST_CASE("quantile inverts the CDF")
    {
        const EWParams w{1.0, 2.0, 1.0};
        CHECK(ew_quantile(0.0, w) == 0.0);
        CHECK(ew_quantile(1 - std::exp(-1.0), w) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK_THROWS_AS(ew_quantile(1.0, w), DomainError);
        CHECK_THROWS_AS(ew_quantile(-0.1, w), DomainError);
        for (const auto& p : {normalized(0.7, 1.1), normalized(2.3, 4.6), normalized(6.0, 0.5)})
            for (double u = 0.01; u < 0.995; u += 0.01)
                CHECK(ew_cdf_irradiance(ew_quantile(u, p), p) == doctest::Approx(u).epsilon(1e-12));
    }

    TEST_CASE("quantiles scale with eta")
    {
        const EWParams p{2.2, 1.8, 0.7};
        const EWParams q{2.2, 1.8, 0.7 * 3.0};
        for (double u = 0.05; u < 1.0; u += 0.1)
            CHECK(ew_quantile(u, q) == doctest::Approx(3.0 * ew_quantile(u, p)).epsilon(1e-15));
    }

    TEST_CASE("parameter validation")
    {
        CHECK_THROWS_AS((EWParams{0.0, 1.0, 1.0}.validate()), DomainError);
        CHECK_THROWS_AS((EWParams{1.0, -1.0, 1.0}.validate()), DomainError);
        CHECK_THROWS_AS((EWParams{1.0, 1.0, INFINITY}.validate()), DomainError);
        CHECK_THROWS_AS(normalized(-1.0, 2.0), DomainError);
    }
}
