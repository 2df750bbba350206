#include "fsosec/units.hpp"
#include <cmath>
#include "fsosec/units.hpp"
#include <sstream>
#include "fsosec/units.hpp"
#include <string>
#include "fsosec/units.hpp"

#include "fsosec/units.hpp"
#include <doctest.h>
#include "fsosec/units.hpp"
#include <json.hpp>
#include "fsosec/units.hpp"

#include "fsosec/units.hpp"
#include "fsosec/presets.hpp"
#include "fsosec/scenario.hpp"
#include "fsosec/sweep.hpp"

using namespace fsosec;
using namespace fsosec::cli;
using fsosec::units::db_to_linear;

namespace
{

std::string csv(const CurveTable& t)
{
    std::ostringstream s;
    write_csv(t, s);
    return s.str();
}

Scenario small_fig2()
{
    Scenario s = parse_scenario(*preset_text("fig2"));
    s.sweep.points = 5;
    return s;
}

RunOptions quick(unsigned workers = 1)
{
    RunOptions o;
    o.mc_samples = 5000;
    o.workers = workers;
    o.timestamp = false;
    return o;
}

}  // namespace

TEST_SUITE("sweep")
{
    TEST_CASE("column layout")
    {
        const auto t = run_sweep(small_fig2(), quick());
        const std::vector<std::string> stems = {"sop_dl_closed", "sop_dl_mc", "sop_dl_mc_ci", "sop_ul_closed",
                                                "sop_ul_quad", "sop_ul_mc", "sop_ul_mc_ci"};
        REQUIRE(t.columns.size() == 1 + 3 * stems.size());
        CHECK(t.columns[0].name == "sweep_snr_db");
        for (std::size_t i = 0; i < stems.size(); ++i)
            CHECK(t.columns[1 + i].name == stems[i] + "__re0.1_rs0.01");
        CHECK(t.rows.size() == 5);
        for (const auto& r : t.rows)
            CHECK(r.size() == t.columns.size());
        for (std::size_t i = 1; i < t.rows.size(); ++i)
            CHECK(t.rows[i][0] > t.rows[i - 1][0]);
        CHECK(t.failures.empty());
    }

    TEST_CASE("emitted values respect their ranges")
    {
        for (const auto name : preset_names())
        {
            Scenario s = parse_scenario(*preset_text(name));
            s.sweep.points = 4;
            const auto t = run_sweep(s, quick());
            CHECK(t.failures.empty());
            for (const auto& r : t.rows)
                for (std::size_t i = 1; i < r.size(); ++i)
                {
                    const auto& c = t.columns[i];
                    CHECK(r[i] >= 0.0);
                    if (c.unit == "probability")
                        CHECK(r[i] <= 1.0);
                }
        }
    }

    TEST_CASE("output is byte-identical across worker counts and re-runs")
    {
        const auto a = csv(run_sweep(small_fig2(), quick(1)));
        CHECK(a == csv(run_sweep(small_fig2(), quick(3))));
        CHECK(a == csv(run_sweep(small_fig2(), quick(8))));
        CHECK(a.find("# generated:") == std::string::npos);
        RunOptions stamped = quick();
        stamped.timestamp = true;
        CHECK(csv(run_sweep(small_fig2(), stamped)).find("# generated:") != std::string::npos);
    }

    TEST_CASE("metadata identifies the run")
    {
        const auto t = run_sweep(small_fig2(), quick());
        auto has = [&](const std::string& k) {
            for (const auto& [key, v] : t.metadata)
                if (key == k)
                    return true;
            return false;
        };
        for (const char* k : {"scenario_hash", "seed", "mc_samples", "library_version", "units", "methods",
                              "scenario_json", "assumption"})
            CHECK(has(k));
    }

    TEST_CASE("a failing cell is recorded and the sweep continues")
    {
        // alpha below one: the uplink series does not converge.
        const std::string doc = R"({"direction": "uplink", "fading_route": "explicit",
            "alpha_ul": 0.4, "beta_ul": 2.0, "snr_eav_db": 4, "methods": ["closed_form", "quadrature"],
            "snr_legit_db": 10,
            "sweep_axis": "snr_legit_db", "sweep_start": 30, "sweep_stop": 40, "sweep_points": 2})";
        const auto t = run_sweep(parse_scenario(doc), quick());
        CHECK(t.failures.size() == 2);
        const auto closed = *t.column_index("sop_ul_closed");
        const auto quad = *t.column_index("sop_ul_quad");
        CHECK(std::isnan(t.rows[0][closed]));
        CHECK(std::isfinite(t.rows[0][quad]));
        CHECK(csv(t).find(",nan,") != std::string::npos);
    }

    TEST_CASE("JSON mirrors the CSV")
    {
        const auto t = run_sweep(small_fig2(), quick());
        std::ostringstream s;
        write_json(t, s);
        const auto j = nlohmann::json::parse(s.str());
        CHECK(j["columns"].size() == t.columns.size());
        CHECK(j["rows"].size() == t.rows.size());
        CHECK(j["rows"][2][1].get<double>() == doctest::Approx(t.rows[2][1]).epsilon(1e-11));
    }

    TEST_CASE("validation passes on the reference grid and flags a perturbed series")
    {
        Scenario s = small_fig2();
        s.methods.monte_carlo = false;
        const auto ok = validate_scenario(s, quick(), {});
        CHECK(ok.passed());
        CHECK_FALSE(ok.rows.empty());

        RunOptions bad = quick();
        bad.series = secrecy::SeriesVariant::shifted_q;
        const auto rep = validate_scenario(s, bad, {});
        CHECK_FALSE(rep.passed());
        REQUIRE(rep.worst() != nullptr);
        CHECK(rep.worst()->check.find("quadrature") != std::string::npos);
        std::ostringstream out;
        print_report(rep, out);
        CHECK(out.str().find("worst point") != std::string::npos);
        CHECK(out.str().find("VALIDATION FAILED") != std::string::npos);
    }

    TEST_CASE("validation needs two methods")
    {
        Scenario s = small_fig2();
        s.methods = {true, false, false};
        CHECK_THROWS_AS(validate_scenario(s, quick(), {}), ConfigError);
    }
}
