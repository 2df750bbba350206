// Command-line front end: scenario sweeps, method cross-validation and the
// built-in figure presets.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fsosec/error.hpp"
#include "fsosec/presets.hpp"
#include "fsosec/scenario.hpp"
#include "fsosec/sweep.hpp"

namespace
{

using namespace fsosec;
using namespace fsosec::cli;

struct Globals
{
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> mc_samples;
    bool no_timestamp = false;

    RunOptions run_options() const
    {
        RunOptions o;
        o.seed = seed;
        o.workers = workers;
        o.mc_samples = mc_samples;
        o.timestamp = !no_timestamp;
        return o;
    }
};

Scenario load(const std::string& file, const std::string& preset)
{
    if (!preset.empty())
    {
        const auto text = preset_text(preset);
        if (!text)
            throw ConfigError("unknown preset '" + preset + "'");
        return parse_scenario(*text);
    }
    return load_scenario(file);
}

int write_table(const CurveTable& t, const std::filesystem::path& out)
{
    if (out.has_parent_path())
        std::filesystem::create_directories(out.parent_path());
    std::ofstream f(out, std::ios::binary);
    if (!f)
    {
        std::cerr << "error: cannot open '" << out.string() << "' for writing\n";
        return kExitUsage;
    }
    if (out.extension() == ".json")
        write_json(t, f);
    else
        write_csv(t, f);
    if (!f)
    {
        std::cerr << "error: writing '" << out.string() << "' failed\n";
        return kExitUsage;
    }
    for (const auto& msg : t.failures)
        std::cerr << "cell failed: " << msg << "\n";
    return t.failures.empty() ? kExitOk : kExitNumerical;
}

int run_sweep_command(const Scenario& s, const Globals& g, const std::string& out)
{
    return write_table(run_sweep(s, g.run_options()), out);
}

int run_validate_command(const Scenario& s, const Globals& g, std::optional<double> tolerance,
                         const std::string& fault)
{
    RunOptions o = g.run_options();
    if (fault == "q-offset")
        o.series = secrecy::SeriesVariant::shifted_q;
    ValidateOptions v;
    v.tolerance = tolerance;
    const ValidationReport rep = validate_scenario(s, o, v);
    print_report(rep, std::cout);
    const bool checks_ok = std::all_of(rep.rows.begin(), rep.rows.end(),
                                       [](const CheckRow& r) { return r.pass; });
    if (!checks_ok)
        return kExitValidation;
    return rep.failures.empty() ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Secrecy performance of optical satellite/HAPS links under exponentiated-Weibull fading"};
    app.set_version_flag("--version", std::string("fsosec ") + kVersion);
    app.require_subcommand(1);

    Globals g;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::uint64_t samples = 0;
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed (overrides the scenario)");
    auto* workers_opt = app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    auto* samples_opt =
        app.add_option("--mc-samples", samples, "Monte Carlo samples per point")->check(CLI::Range(
            std::uint64_t{1000}, std::uint64_t{1} << 62));
    app.add_flag("--no-timestamp", g.no_timestamp, "Omit the generation time from the output");

    std::string scenario_file;
    std::string preset;
    std::string out;

    auto* sweep = app.add_subcommand("sweep", "Evaluate a scenario over its sweep axis");
    auto* sweep_file = sweep->add_option("--scenario", scenario_file, "Scenario file")
                           ->check(CLI::ExistingFile);
    sweep->add_option("--preset", preset, "Built-in preset instead of a file")->excludes(sweep_file);
    sweep->add_option("--out", out, "Output path (.csv or .json)")->required();

    double tolerance = 0.0;
    std::string fault;
    auto* validate = app.add_subcommand("validate", "Cross-check the methods of a scenario");
    auto* validate_file = validate->add_option("--scenario", scenario_file, "Scenario file")
                              ->check(CLI::ExistingFile);
    validate->add_option("--preset", preset, "Built-in preset instead of a file")
        ->excludes(validate_file);
    auto* tol_opt = validate->add_option("--tolerance", tolerance,
                                         "Relative tolerance replacing the scenario's")
                        ->check(CLI::PositiveNumber);
    validate->add_option("--inject-fault", fault, "Perturb the uplink series (negative control)")
        ->check(CLI::IsMember({"q-offset"}));

    std::string figure_name;
    auto* figure = app.add_subcommand("figure", "Run a built-in figure preset");
    figure->add_option("name", figure_name, "Preset name")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
    figure->add_option("--out", out, "Output path (.csv or .json)")->required();

    CLI11_PARSE(app, argc, argv);

    if (*seed_opt)
        g.seed = seed;
    if (*workers_opt)
        g.workers = workers;
    if (*samples_opt)
        g.mc_samples = samples;

    try
    {
        if (*sweep || *validate)
        {
            if (scenario_file.empty() && preset.empty())
            {
                std::cerr << "error: --scenario or --preset is required\n";
                return kExitUsage;
            }
            const Scenario s = load(scenario_file, preset);
            if (*sweep)
                return run_sweep_command(s, g, out);
            return run_validate_command(s, g, *tol_opt ? std::optional<double>(tolerance)
                                                       : std::nullopt,
                                        fault);
        }
        return run_sweep_command(load("", figure_name), g, out);
    }
    catch (const ParseError& e)
    {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    }
    catch (const ConfigError& e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitParse;
    }
    catch (const NumericalError& e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const Error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const std::filesystem::filesystem_error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
