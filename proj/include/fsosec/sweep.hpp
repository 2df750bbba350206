#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsosec/scenario.hpp"

namespace fsosec::cli
{

inline constexpr const char* kVersion = "0.3.0";

struct Column
{
    std::string name;
    std::string unit;
    std::string method;  // closed_form | quadrature | monte_carlo | sweep | ci
};

struct CurveTable
{
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;
    //! Ordered "# key: value" lines. The "generated" entry is the only one that
    //! varies between identical runs.
    std::vector<std::pair<std::string, std::string>> metadata;
    //! One message per failed cell; failed cells hold NaN.
    std::vector<std::string> failures;

    std::optional<std::size_t> column_index(std::string_view name) const;
};

//! Command-line overrides of the scenario's Monte Carlo settings.
struct RunOptions
{
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::uint64_t> mc_samples;
    //! Layout used for the uplink closed-form series (negative controls only).
    secrecy::SeriesVariant series = secrecy::SeriesVariant::exact;
    bool timestamp = true;
};

//! Scenario with the RunOptions overrides applied.
Scenario apply_options(Scenario s, const RunOptions& opt);

//! Evaluates every (variant, sweep point) cell; rows are in ascending sweep
//! order. Cells run in parallel on `mc.workers` threads, the Monte Carlo draws
//! being indexed by sample number so the output does not depend on it.
CurveTable run_sweep(const Scenario& s, const RunOptions& opt = {});

void write_csv(const CurveTable& t, std::ostream& out);
void write_json(const CurveTable& t, std::ostream& out);

struct CheckRow
{
    std::string variant;
    double x = 0.0;
    std::string check;  // e.g. "sop_ul closed_form~quadrature"
    double reference = 0.0;
    double candidate = 0.0;
    double deviation = 0.0;  // |candidate - reference|, relative for series checks
    double allowed = 0.0;
    bool pass = true;
    bool informational = false;
};

struct ValidationReport
{
    std::vector<CheckRow> rows;
    std::vector<std::string> failures;  // cell-level numerical failures
    bool passed() const;
    //! Failing row with the largest deviation / allowed ratio, if any.
    const CheckRow* worst() const;
};

struct ValidateOptions
{
    std::optional<double> tolerance;  // replaces tol_mc_rel and tol_series_rel
};

//! Cross-checks every pair of methods present in the scenario:
//!   SOP downlink  closed form vs MC:           max(tol_mc_rel |closed|, sigmas ci)
//!   SOP uplink    series vs quadrature:        relative tol_series_rel where quad > floor
//!   SOP uplink    closed form vs MC:           max(tol_mc_rel |closed|, sigmas ci)
//!   ASC uplink    quadrature vs MC:            max(tol_asc_bits, sigmas ci)
//!   ASC downlink  Jensen vs MC:                recorded, not judged
//! Throws ConfigError when fewer than two methods are requested.
ValidationReport validate_scenario(const Scenario& s, const RunOptions& opt = {},
                                   const ValidateOptions& vopt = {});

void print_report(const ValidationReport& r, std::ostream& out);

//! Exit codes of the command-line tool.
enum ExitCode : int
{
    kExitOk = 0,
    kExitUsage = 1,
    kExitParse = 2,
    kExitNumerical = 3,
    kExitValidation = 4,
};

}  // namespace fsosec::cli
