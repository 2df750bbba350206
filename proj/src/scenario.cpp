#include "fsosec/scenario.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fsosec/error.hpp"
#include "fsosec/units.hpp"

namespace fsosec::cli
{

namespace
{

using json = nlohmann::json;
using NumericSetter = std::function<void(CaseParams&, double)>;

const std::map<std::string, NumericSetter, std::less<>>& numeric_setters()
{
    static const std::map<std::string, NumericSetter, std::less<>> table = {
        {"rs", [](CaseParams& c, double v) { c.rs = v; }},
        {"sat_altitude_m", [](CaseParams& c, double v) { c.geometry.sat_altitude_m = v; }},
        {"platform_altitude_m", [](CaseParams& c, double v) { c.geometry.platform_altitude_m = v; }},
        {"zenith_deg",
         [](CaseParams& c, double v) { c.geometry.zenith_angle_rad = units::deg_to_rad(v); }},
        {"wavelength_m", [](CaseParams& c, double v) { c.geometry.wavelength_m = v; }},
        {"wind_speed_mps", [](CaseParams& c, double v) { c.geometry.wind_speed_mps = v; }},
        {"ground_cn2", [](CaseParams& c, double v) { c.ground_cn2 = v; }},
        {"w0_m", [](CaseParams& c, double v) { c.beam.w0_m = v; }},
        {"theta0", [](CaseParams& c, double v) { c.beam.curvature_theta0 = v; }},
        {"snr_db", [](CaseParams& c, double v) { c.snr_db = v; }},
        {"snr_legit_db", [](CaseParams& c, double v) { c.snr_legit_db = v; }},
        {"snr_eav_db", [](CaseParams& c, double v) { c.snr_eav_db = v; }},
        {"r_b", [](CaseParams& c, double v) { c.r_b = v; }},
        {"r_e", [](CaseParams& c, double v) { c.r_e = v; }},
        {"alpha_dl", [](CaseParams& c, double v) { c.alpha_dl = v; }},
        {"beta_dl", [](CaseParams& c, double v) { c.beta_dl = v; }},
        {"alpha_ul", [](CaseParams& c, double v) { c.alpha_ul = v; }},
        {"beta_ul", [](CaseParams& c, double v) { c.beta_ul = v; }},
        {"override_rytov_dl", [](CaseParams& c, double v) { c.overrides.rytov_downlink = v; }},
        {"override_rytov_ul", [](CaseParams& c, double v) { c.overrides.rytov_uplink = v; }},
        {"override_r0_m", [](CaseParams& c, double v) { c.overrides.fried_r0_m = v; }},
        {"override_pointing_rad",
         [](CaseParams& c, double v) { c.overrides.pointing_error_rad = v; }},
        {"override_scint_dl", [](CaseParams& c, double v) { c.overrides.scint_downlink = v; }},
        {"override_scint_ul", [](CaseParams& c, double v) { c.overrides.scint_uplink = v; }},
    };
    return table;
}

const std::set<std::string, std::less<>> kStringKeys = {"direction", "fading_route"};

const std::set<std::string, std::less<>> kTopKeys = {
    "name",        "metrics",     "methods",    "sweep_axis",  "sweep_start",
    "sweep_stop",  "sweep_points", "variants",  "mc_samples",  "mc_seed",
    "mc_workers",  "ci_level",    "tol_mc_rel", "tol_mc_sigmas", "tol_series_rel",
    "tol_asc_bits", "assumptions",
};

Direction parse_direction(std::string_view s)
{
    if (s == "downlink")
        return Direction::downlink;
    if (s == "uplink")
        return Direction::uplink;
    if (s == "both")
        return Direction::both;
    throw ConfigError("direction must be one of downlink, uplink, both (got '" + std::string(s) +
                      "')");
}

FadingRoute parse_route(std::string_view s)
{
    if (s == "scint")
        return FadingRoute::scint;
    if (s == "explicit")
        return FadingRoute::explicit_params;
    throw ConfigError("fading_route must be scint or explicit (got '" + std::string(s) + "')");
}

void apply(CaseParams& c, const std::string& key, const Setting& value)
{
    if (const auto* d = std::get_if<double>(&value))
    {
        numeric_setters().at(key)(c, *d);
        return;
    }
    const auto& s = std::get<std::string>(value);
    if (key == "direction")
        c.direction = parse_direction(s);
    else
        c.fading_route = parse_route(s);
}

// Per-case key/value into `out`; false when `key` is not a per-case key.
bool read_case_key(const std::string& key, const json& value, Settings& out)
{
    if (numeric_setters().count(key))
    {
        if (!value.is_number())
            throw ConfigError("key '" + key + "' must be a number");
        const double v = value.get<double>();
        if (!std::isfinite(v))
            throw ConfigError("key '" + key + "' must be finite");
        out[key] = v;
        return true;
    }
    if (kStringKeys.count(key))
    {
        if (!value.is_string())
            throw ConfigError("key '" + key + "' must be a string");
        const auto s = value.get<std::string>();
        if (key == "direction")
            parse_direction(s);
        else
            parse_route(s);
        out[key] = s;
        return true;
    }
    return false;
}

double number(const json& doc, const char* key)
{
    const auto& v = doc.at(key);
    if (!v.is_number())
        throw ConfigError(std::string("key '") + key + "' must be a number");
    return v.get<double>();
}

std::uint64_t unsigned_integer(const json& doc, const char* key)
{
    const auto& v = doc.at(key);
    if (!v.is_number_unsigned())
        throw ConfigError(std::string("key '") + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<std::string> string_list(const json& doc, const char* key)
{
    const auto& v = doc.at(key);
    if (!v.is_array())
        throw ConfigError(std::string("key '") + key + "' must be a list of strings");
    std::vector<std::string> out;
    for (const auto& e : v)
    {
        if (!e.is_string())
            throw ConfigError(std::string("key '") + key + "' must be a list of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

bool valid_label(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.' || ch == '-';
    });
}

void location_of(std::string_view text, std::size_t byte, int& line, int& column)
{
    line = 1;
    column = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            column = 1;
        }
        else
        {
            ++column;
        }
    }
}

std::string describe(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

const std::vector<std::string_view>& numeric_keys()
{
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> k;
        for (const auto& [name, setter] : numeric_setters())
            k.push_back(name);
        return k;
    }();
    return keys;
}

secrecy::LinkBudget CaseParams::budget() const
{
    if (snr_legit_db)
    {
        if (snr_db || r_b || r_e)
            throw ConfigError("budget: give either snr_legit_db + snr_eav_db or snr_db + r_e, not both");
        if (!snr_eav_db)
            throw ConfigError("budget: snr_legit_db requires snr_eav_db");
        return secrecy::LinkBudget::from_snrs(units::db_to_linear(*snr_legit_db),
                                              units::db_to_linear(*snr_eav_db));
    }
    if (!snr_db)
        throw ConfigError("budget: snr_db (transmit P/N0) or snr_legit_db is required");
    if (!r_e)
        throw ConfigError("budget: r_e is required together with snr_db");
    const double rb = r_b.value_or(1.0 - *r_e);
    const double p = units::db_to_linear(*snr_db);
    if (snr_eav_db)
        return secrecy::LinkBudget::with_eavesdropper_snr(p, rb, *r_e,
                                                          units::db_to_linear(*snr_eav_db));
    return secrecy::LinkBudget::from_fractions(p, rb, *r_e);
}

FadingSet resolve_fading(const CaseParams& c)
{
    FadingSet f;
    if (c.fading_route == FadingRoute::explicit_params)
    {
        if (c.has_downlink())
        {
            if (!c.alpha_dl || !c.beta_dl)
                throw ConfigError("fading_route explicit requires alpha_dl and beta_dl");
            f.downlink = ew::normalized(*c.alpha_dl, *c.beta_dl);
        }
        if (c.has_uplink())
        {
            if (!c.alpha_ul || !c.beta_ul)
                throw ConfigError("fading_route explicit requires alpha_ul and beta_ul");
            f.uplink = ew::normalized(*c.alpha_ul, *c.beta_ul);
        }
        return f;
    }
    const auto profile = turbulence::hufnagel_valley(c.geometry.wind_speed_mps, c.ground_cn2);
    if (c.has_downlink())
    {
        f.downlink_stats = turbulence::downlink_stats(c.geometry, profile, c.overrides);
        const auto fit = ew::fit_from_scint(f.downlink_stats->scint_index);
        f.downlink = fit.params;
        f.downlink_fit_in_range = fit.in_validity_range;
    }
    if (c.has_uplink())
    {
        f.uplink_stats = turbulence::uplink_stats(c.geometry, c.beam, profile, c.overrides);
        const auto fit = ew::fit_from_scint(f.uplink_stats->scint_index);
        f.uplink = fit.params;
        f.uplink_fit_in_range = fit.in_validity_range;
    }
    return f;
}

std::vector<double> Sweep::values() const
{
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        v[i] = points == 1 ? start : start + (stop - start) * i / (points - 1);
    if (points > 1)
        v.back() = stop;
    return v;
}

CaseParams Scenario::resolve(std::size_t variant, double sweep_value) const
{
    Settings merged = base;
    for (const auto& [k, v] : variants.at(variant).settings)
        merged[k] = v;
    merged[sweep.axis] = sweep_value;
    CaseParams c;
    for (const auto& [k, v] : merged)
        apply(c, k, v);
    return c;
}

Scenario parse_scenario(std::string_view text)
{
    json doc;
    try
    {
        doc = json::parse(text, nullptr, true, true);
    }
    catch (const json::parse_error& e)
    {
        int line = 0;
        int column = 0;
        location_of(text, e.byte, line, column);
        std::string msg = e.what();
        // Drop the library's own "[json.exception.parse_error.101] parse error at ..." prefix.
        if (const auto pos = msg.find(": "); pos != std::string::npos)
            msg = msg.substr(pos + 2);
        throw ParseError("scenario syntax error: " + msg, line, column);
    }
    if (!doc.is_object())
        throw ParseError("scenario must be a JSON object", 1, 1);

    Scenario s;
    for (const auto& [key, value] : doc.items())
    {
        if (kTopKeys.count(key))
            continue;
        if (!read_case_key(key, value, s.base))
            throw ConfigError("unknown key '" + key + "'");
    }

    if (doc.contains("name"))
    {
        if (!doc["name"].is_string())
            throw ConfigError("key 'name' must be a string");
        s.name = doc["name"].get<std::string>();
    }

    const auto metrics = doc.contains("metrics") ? string_list(doc, "metrics")
                                                 : std::vector<std::string>{"sop"};
    for (const auto& m : metrics)
    {
        if (m == "sop")
            s.metrics.sop = true;
        else if (m == "asc")
            s.metrics.asc = true;
        else if (m == "st")
            s.metrics.st = true;
        else
            throw ConfigError("metrics: unknown metric '" + m + "' (sop, asc, st)");
    }
    if (metrics.empty())
        throw ConfigError("metrics must name at least one metric");

    const auto methods = doc.contains("methods") ? string_list(doc, "methods")
                                                 : std::vector<std::string>{"closed_form"};
    for (const auto& m : methods)
    {
        if (m == "closed_form")
            s.methods.closed_form = true;
        else if (m == "quadrature")
            s.methods.quadrature = true;
        else if (m == "monte_carlo")
            s.methods.monte_carlo = true;
        else
            throw ConfigError("methods: unknown method '" + m +
                              "' (closed_form, quadrature, monte_carlo)");
    }
    if (s.methods.count() == 0)
        throw ConfigError("methods must name at least one method");

    for (const char* key : {"sweep_axis", "sweep_start", "sweep_stop", "sweep_points"})
        if (!doc.contains(key))
            throw ConfigError(std::string("missing required key '") + key + "'");
    if (!doc["sweep_axis"].is_string())
        throw ConfigError("key 'sweep_axis' must be a string");
    s.sweep.axis = doc["sweep_axis"].get<std::string>();
    if (!numeric_setters().count(s.sweep.axis))
        throw ConfigError("sweep_axis '" + s.sweep.axis + "' does not name a numeric field");
    s.sweep.start = number(doc, "sweep_start");
    s.sweep.stop = number(doc, "sweep_stop");
    const auto points = unsigned_integer(doc, "sweep_points");
    if (points < 1 || points > 100000)
        throw ConfigError("sweep_points must lie in [1, 100000]");
    s.sweep.points = static_cast<int>(points);
    if (!(s.sweep.stop >= s.sweep.start))
        throw ConfigError("sweep_stop must be >= sweep_start");
    if (s.sweep.points == 1 && s.sweep.stop != s.sweep.start)
        throw ConfigError("a single-point sweep needs sweep_start == sweep_stop");

    if (doc.contains("variants"))
    {
        const auto& list = doc["variants"];
        if (!list.is_array() || list.empty())
            throw ConfigError("variants must be a non-empty list of objects");
        std::set<std::string> labels;
        for (const auto& entry : list)
        {
            if (!entry.is_object())
                throw ConfigError("variants must be a non-empty list of objects");
            if (!entry.contains("label") || !entry["label"].is_string())
                throw ConfigError("every variant needs a string 'label'");
            Variant v;
            v.label = entry["label"].get<std::string>();
            if (!valid_label(v.label))
                throw ConfigError("variant label '" + v.label +
                                  "' must be non-empty and use only [A-Za-z0-9_.-]");
            if (!labels.insert(v.label).second)
                throw ConfigError("duplicate variant label '" + v.label + "'");
            for (const auto& [key, value] : entry.items())
            {
                if (key == "label")
                    continue;
                if (key == s.sweep.axis)
                    throw ConfigError("variant '" + v.label + "' sets the sweep axis '" + key + "'");
                if (!read_case_key(key, value, v.settings))
                    throw ConfigError("unknown key '" + key + "' in variant '" + v.label + "'");
            }
            s.variants.push_back(std::move(v));
        }
    }
    else
    {
        s.variants.push_back({});
    }

    if (doc.contains("mc_samples"))
        s.mc.samples = unsigned_integer(doc, "mc_samples");
    if (doc.contains("mc_seed"))
        s.mc.seed = unsigned_integer(doc, "mc_seed");
    if (doc.contains("mc_workers"))
    {
        const auto w = unsigned_integer(doc, "mc_workers");
        if (w < 1 || w > 1024)
            throw ConfigError("mc_workers must lie in [1, 1024]");
        s.mc.workers = static_cast<unsigned>(w);
    }
    if (doc.contains("ci_level"))
        s.mc.ci_level = number(doc, "ci_level");
    s.mc.validate();

    if (doc.contains("tol_mc_rel"))
        s.tol.mc_rel = number(doc, "tol_mc_rel");
    if (doc.contains("tol_mc_sigmas"))
        s.tol.mc_sigmas = number(doc, "tol_mc_sigmas");
    if (doc.contains("tol_series_rel"))
        s.tol.series_rel = number(doc, "tol_series_rel");
    if (doc.contains("tol_asc_bits"))
        s.tol.asc_bits = number(doc, "tol_asc_bits");
    if (!(s.tol.mc_rel >= 0.0) || !(s.tol.mc_sigmas >= 0.0) || !(s.tol.series_rel > 0.0) ||
        !(s.tol.asc_bits >= 0.0))
        throw ConfigError("tolerances must be non-negative (tol_series_rel positive)");

    if (doc.contains("assumptions"))
        s.assumptions = string_list(doc, "assumptions");

    // Every case must satisfy the per-case invariants over the whole sweep.
    const auto xs = s.sweep.values();
    for (std::size_t v = 0; v < s.variants.size(); ++v)
    {
        for (const double x : xs)
        {
            try
            {
                const CaseParams c = s.resolve(v, x);
                if (!(c.rs > 0.0))
                    throw ConfigError("rs must be > 0");
                c.geometry.validate();
                if (!(c.beam.w0_m > 0.0))
                    throw ConfigError("w0_m must be > 0");
                if (!(c.ground_cn2 >= 0.0))
                    throw ConfigError("ground_cn2 must be >= 0");
                c.budget();
                if (c.fading_route == FadingRoute::explicit_params)
                {
                    if (c.has_downlink() && (!c.alpha_dl || !c.beta_dl))
                        throw ConfigError("fading_route explicit requires alpha_dl and beta_dl");
                    if (c.has_uplink() && (!c.alpha_ul || !c.beta_ul))
                        throw ConfigError("fading_route explicit requires alpha_ul and beta_ul");
                }
            }
            catch (const ParseError&)
            {
                throw;
            }
            catch (const Error& e)
            {
                std::string where = s.variants[v].label.empty()
                                        ? std::string()
                                        : "variant '" + s.variants[v].label + "', ";
                throw ConfigError(where + s.sweep.axis + "=" + describe(x) + ": " + e.what());
            }
        }
    }

    s.canonical = doc.dump();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string content_hash(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace fsosec::cli
