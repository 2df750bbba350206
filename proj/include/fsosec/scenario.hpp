#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fsosec/ew_fading.hpp"
#include "fsosec/montecarlo.hpp"
#include "fsosec/secrecy.hpp"
#include "fsosec/turbulence.hpp"

namespace fsosec::cli
{

enum class Direction
{
    downlink,
    uplink,
    both,
};

enum class FadingRoute
{
    scint,     // turbulence chain -> scintillation index -> EW fit
    explicit_params,  // (alpha, beta) given, eta normalized
};

struct MethodSet
{
    bool closed_form = false;
    bool quadrature = false;
    bool monte_carlo = false;

    int count() const { return int(closed_form) + int(quadrature) + int(monte_carlo); }
};

struct MetricSet
{
    bool sop = false;
    bool asc = false;
    bool st = false;
};

//! Inputs of one curve point after defaults, variant and sweep value are applied.
struct CaseParams
{
    Direction direction = Direction::both;
    turbulence::LinkGeometry geometry;
    turbulence::BeamGeometry beam;
    double ground_cn2 = turbulence::kDefaultGroundCn2;

    // Budget. Either snr_db + r_e [+ r_b] [+ snr_eav_db], or snr_legit_db + snr_eav_db.
    std::optional<double> snr_db;
    std::optional<double> snr_legit_db;
    std::optional<double> snr_eav_db;
    std::optional<double> r_b;
    std::optional<double> r_e;

    FadingRoute fading_route = FadingRoute::scint;
    std::optional<double> alpha_dl;
    std::optional<double> beta_dl;
    std::optional<double> alpha_ul;
    std::optional<double> beta_ul;
    turbulence::TurbulenceOverrides overrides;

    double rs = 0.01;

    bool has_downlink() const { return direction != Direction::uplink; }
    bool has_uplink() const { return direction != Direction::downlink; }

    //! Throws ConfigError naming the violated invariant.
    secrecy::LinkBudget budget() const;
};

//! Fading laws and turbulence statistics of one case.
struct FadingSet
{
    std::optional<ew::EWParams> downlink;
    std::optional<ew::EWParams> uplink;
    std::optional<turbulence::TurbulenceStats> downlink_stats;
    std::optional<turbulence::TurbulenceStats> uplink_stats;
    bool downlink_fit_in_range = true;
    bool uplink_fit_in_range = true;
};

FadingSet resolve_fading(const CaseParams& c);

using Setting = std::variant<double, std::string>;
using Settings = std::map<std::string, Setting>;

struct Variant
{
    std::string label;  // empty for a scenario without variants
    Settings settings;
};

struct Sweep
{
    std::string axis;
    double start = 0.0;
    double stop = 0.0;
    int points = 1;

    //! Evenly spaced, ascending in index order.
    std::vector<double> values() const;
};

struct Tolerances
{
    double mc_rel = 0.02;       // closed form vs Monte Carlo, relative part
    double mc_sigmas = 3.0;     // closed form vs Monte Carlo, CI multiples
    double series_rel = 1e-6;   // uplink series vs quadrature
    double asc_bits = 0.02;     // ASC quadrature vs Monte Carlo, absolute part
    double series_floor = 1e-10;  // series check applies where quadrature exceeds this
};

struct Scenario
{
    std::string name;
    MetricSet metrics;
    MethodSet methods;
    Sweep sweep;
    Settings base;
    std::vector<Variant> variants;  // never empty
    mc::McConfig mc;
    Tolerances tol;
    std::vector<std::string> assumptions;
    std::string canonical;  // normalized document text, hashed into output metadata

    CaseParams resolve(std::size_t variant, double sweep_value) const;
};

//! Parses a commented JSON scenario document.
//!
//! Syntax errors raise ParseError with line and column; semantic errors raise
//! ConfigError naming the violated invariant. Unknown keys are rejected.
Scenario parse_scenario(std::string_view text);

Scenario load_scenario(const std::filesystem::path& path);

//! Keys that may be swept or set per variant with a numeric value.
const std::vector<std::string_view>& numeric_keys();

//! 64-bit FNV-1a of `text`, as 16 hex digits.
std::string content_hash(std::string_view text);

}  // namespace fsosec::cli
