#include "fsosec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fsosec/error.hpp"

namespace fsosec::cli
{

namespace
{

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string suffix(const Variant& v) { return v.label.empty() ? std::string() : "__" + v.label; }

// Column stems of one variant, in output order.
std::vector<Column> variant_columns(const Scenario& s, const CaseParams& c)
{
    std::vector<Column> cols;
    const auto& m = s.methods;
    const bool mc = m.monte_carlo;
    auto add = [&](std::string name, const char* unit, const char* method) {
        cols.push_back({std::move(name), unit, method});
    };
    auto dir = [&](const char* d) {
        const std::string D(d);
        const bool dl = D == "dl";
        if (s.metrics.sop)
        {
            if (m.closed_form)
                add("sop_" + D + "_closed", "probability", "closed_form");
            if (!dl && m.quadrature)
                add("sop_" + D + "_quad", "probability", "quadrature");
            if (mc)
            {
                add("sop_" + D + "_mc", "probability", "monte_carlo");
                add("sop_" + D + "_mc_ci", "probability", "ci");
            }
        }
        if (s.metrics.asc)
        {
            if (dl && m.closed_form)
                add("asc_dl_closed", "bit/s/Hz", "closed_form");
            if (!dl && (m.closed_form || m.quadrature))
                add("asc_ul_quad", "bit/s/Hz", "quadrature");
            if (mc)
            {
                add("asc_" + D + "_mc", "bit/s/Hz", "monte_carlo");
                add("asc_" + D + "_mc_ci", "bit/s/Hz", "ci");
            }
        }
        if (s.metrics.st)
        {
            if (m.closed_form)
                add("st_" + D + "_closed", "bit/s/Hz", "closed_form");
            if (!dl && m.quadrature)
                add("st_" + D + "_quad", "bit/s/Hz", "quadrature");
            if (mc)
            {
                add("st_" + D + "_mc", "bit/s/Hz", "monte_carlo");
                add("st_" + D + "_mc_ci", "bit/s/Hz", "ci");
            }
        }
    };
    if (c.has_downlink())
        dir("dl");
    if (c.has_uplink())
        dir("ul");
    return cols;
}

using Values = std::map<std::string, double>;

struct CellResult
{
    Values values;
    std::vector<std::string> failures;
};

// Runs `body`, recording any library error against `what`.
template <class Body>
void guarded(CellResult& out, const std::string& what, Body&& body)
{
    try
    {
        body();
    }
    catch (const Error& e)
    {
        out.failures.push_back(what + ": " + e.what());
    }
}

CellResult evaluate_cell(const Scenario& s, const CaseParams& c, const RunOptions& opt)
{
    CellResult out;
    auto& v = out.values;
    const auto& m = s.methods;
    mc::McConfig cfg = s.mc;
    cfg.workers = 1;

    FadingSet fading;
    secrecy::LinkBudget budget = c.budget();
    try
    {
        fading = resolve_fading(c);
    }
    catch (const Error& e)
    {
        out.failures.push_back(std::string("fading: ") + e.what());
        return out;
    }

    const bool need_sop = s.metrics.sop || s.metrics.st;
    if (c.has_downlink())
    {
        const ew::EWParams& p = *fading.downlink;
        if (need_sop && m.closed_form)
            guarded(out, "sop_dl_closed", [&] {
                const auto r = secrecy::sop_downlink(budget, p, c.rs);
                v["sop_dl_closed"] = r.value;
                v["st_dl_closed"] = secrecy::secrecy_throughput(r, c.rs).value;
            });
        if (need_sop && m.monte_carlo)
            guarded(out, "sop_dl_mc", [&] {
                const auto e = mc::mc_sop(budget, p, std::nullopt, c.rs, cfg);
                v["sop_dl_mc"] = e.mean;
                v["sop_dl_mc_ci"] = e.ci_half_width;
                v["st_dl_mc"] = c.rs * (1.0 - e.mean);
                v["st_dl_mc_ci"] = c.rs * e.ci_half_width;
            });
        if (s.metrics.asc && m.closed_form)
            guarded(out, "asc_dl_closed",
                    [&] { v["asc_dl_closed"] = secrecy::asc_downlink(budget).value; });
        if (s.metrics.asc && m.monte_carlo)
            guarded(out, "asc_dl_mc", [&] {
                const auto e = mc::mc_asc(budget, p, std::nullopt, cfg);
                v["asc_dl_mc"] = e.mean;
                v["asc_dl_mc_ci"] = e.ci_half_width;
            });
    }
    if (c.has_uplink())
    {
        const ew::EWParams& p = *fading.uplink;
        if (need_sop && m.closed_form)
            guarded(out, "sop_ul_closed", [&] {
                const auto r = secrecy::sop_uplink_series(
                    budget, p, c.rs, secrecy::uplink_series_control(), opt.series);
                v["sop_ul_closed"] = r.value;
                v["st_ul_closed"] = secrecy::secrecy_throughput(r, c.rs).value;
            });
        if (need_sop && m.quadrature)
            guarded(out, "sop_ul_quad", [&] {
                const auto r = secrecy::sop_uplink_quadrature(budget, p, p, c.rs);
                v["sop_ul_quad"] = r.value;
                v["st_ul_quad"] = secrecy::secrecy_throughput(r, c.rs).value;
            });
        if (need_sop && m.monte_carlo)
            guarded(out, "sop_ul_mc", [&] {
                const auto e = mc::mc_sop(budget, p, p, c.rs, cfg);
                v["sop_ul_mc"] = e.mean;
                v["sop_ul_mc_ci"] = e.ci_half_width;
                v["st_ul_mc"] = c.rs * (1.0 - e.mean);
                v["st_ul_mc_ci"] = c.rs * e.ci_half_width;
            });
        if (s.metrics.asc && (m.closed_form || m.quadrature))
            guarded(out, "asc_ul_quad", [&] {
                v["asc_ul_quad"] = secrecy::asc_uplink_quadrature(budget, p, p).value;
            });
        if (s.metrics.asc && m.monte_carlo)
            guarded(out, "asc_ul_mc", [&] {
                const auto e = mc::mc_asc(budget, p, p, cfg);
                v["asc_ul_mc"] = e.mean;
                v["asc_ul_mc_ci"] = e.ci_half_width;
            });
    }
    return out;
}

std::string utc_now()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string describe_settings(const Settings& st)
{
    std::string out;
    for (const auto& [k, val] : st)
    {
        if (!out.empty())
            out += ", ";
        out += k + "=";
        if (const auto* d = std::get_if<double>(&val))
            out += fmt(*d);
        else
            out += std::get<std::string>(val);
    }
    return out.empty() ? "(base)" : out;
}

std::string describe_fading(const std::optional<ew::EWParams>& p,
                            const std::optional<turbulence::TurbulenceStats>& st, bool in_range)
{
    if (!p)
        return "";
    std::string out = "alpha=" + fmt(p->alpha) + " beta=" + fmt(p->beta) + " eta=" + fmt(p->eta);
    if (st)
    {
        out += " scint_index=" + fmt(st->scint_index) + " rytov=" + fmt(st->rytov_var);
        if (!in_range)
            out += " (scintillation index outside the fit range)";
    }
    return out;
}

// Fading summary of one variant; "varies with <axis>" when the first and last
// sweep points differ.
std::vector<std::pair<std::string, std::string>> fading_metadata(const Scenario& s, std::size_t vi)
{
    const auto xs = s.sweep.values();
    const std::string tag = s.variants[vi].label.empty() ? "" : " " + s.variants[vi].label;
    std::vector<std::pair<std::string, std::string>> out;
    try
    {
        const auto c0 = s.resolve(vi, xs.front());
        const auto c1 = s.resolve(vi, xs.back());
        const auto f0 = resolve_fading(c0);
        const auto f1 = resolve_fading(c1);
        auto same = [](const std::optional<ew::EWParams>& a, const std::optional<ew::EWParams>& b) {
            return (!a && !b) || (a && b && a->alpha == b->alpha && a->beta == b->beta && a->eta == b->eta);
        };
        const std::string varies = "varies with " + s.sweep.axis;
        if (c0.has_downlink())
            out.push_back({"fading_dl" + tag, same(f0.downlink, f1.downlink)
                                                  ? describe_fading(f0.downlink, f0.downlink_stats,
                                                                    f0.downlink_fit_in_range)
                                                  : varies});
        if (c0.has_uplink())
            out.push_back({"fading_ul" + tag, same(f0.uplink, f1.uplink)
                                                  ? describe_fading(f0.uplink, f0.uplink_stats,
                                                                    f0.uplink_fit_in_range)
                                                  : varies});
    }
    catch (const Error& e)
    {
        out.push_back({"fading" + tag, std::string("unavailable: ") + e.what()});
    }
    return out;
}

}  // namespace

std::optional<std::size_t> CurveTable::column_index(std::string_view name) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].name == name)
            return i;
    return std::nullopt;
}

Scenario apply_options(Scenario s, const RunOptions& opt)
{
    if (opt.seed)
        s.mc.seed = *opt.seed;
    if (opt.workers)
        s.mc.workers = *opt.workers;
    if (opt.mc_samples)
        s.mc.samples = *opt.mc_samples;
    s.mc.validate();
    return s;
}

CurveTable run_sweep(const Scenario& scenario, const RunOptions& opt)
{
    const Scenario s = apply_options(scenario, opt);
    const auto xs = s.sweep.values();
    const std::size_t n_var = s.variants.size();

    CurveTable t;
    t.columns.push_back({"sweep_" + s.sweep.axis, s.sweep.axis, "sweep"});
    std::vector<std::vector<Column>> stems(n_var);
    for (std::size_t vi = 0; vi < n_var; ++vi)
    {
        stems[vi] = variant_columns(s, s.resolve(vi, xs.front()));
        for (const auto& c : stems[vi])
            t.columns.push_back({c.name + suffix(s.variants[vi]), c.unit, c.method});
    }

    // Cell k covers variant k / n_points, point k % n_points.
    const std::size_t n_cells = n_var * xs.size();
    std::vector<CellResult> cells(n_cells);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;)
        {
            const std::size_t k = next.fetch_add(1);
            if (k >= n_cells)
                return;
            const std::size_t vi = k / xs.size();
            const std::size_t pi = k % xs.size();
            try
            {
                cells[k] = evaluate_cell(s, s.resolve(vi, xs[pi]), opt);
            }
            catch (const Error& e)
            {
                cells[k].failures.push_back(e.what());
            }
        }
    };
    const unsigned n_threads =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, s.mc.workers), n_cells));
    if (n_threads <= 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(work);
    }

    t.rows.assign(xs.size(), {});
    for (std::size_t pi = 0; pi < xs.size(); ++pi)
    {
        auto& row = t.rows[pi];
        row.push_back(xs[pi]);
        for (std::size_t vi = 0; vi < n_var; ++vi)
        {
            const auto& cell = cells[vi * xs.size() + pi];
            for (const auto& c : stems[vi])
            {
                const auto it = cell.values.find(c.name);
                row.push_back(it == cell.values.end() ? kNaN : it->second);
            }
            for (const auto& f : cell.failures)
            {
                std::string where = s.variants[vi].label.empty() ? "" : s.variants[vi].label + " ";
                t.failures.push_back(where + s.sweep.axis + "=" + fmt(xs[pi]) + " " + f);
            }
        }
    }

    auto& md = t.metadata;
    md.push_back({"scenario", s.name});
    md.push_back({"scenario_hash", content_hash(scenario.canonical)});
    md.push_back({"scenario_json", scenario.canonical});
    md.push_back({"library_version", std::string("fsosec ") + kVersion});
    if (opt.timestamp)
        md.push_back({"generated", utc_now()});
    md.push_back({"seed", std::to_string(s.mc.seed)});
    md.push_back({"mc_samples", std::to_string(s.mc.samples)});
    md.push_back({"ci_level", fmt(s.mc.ci_level)});
    md.push_back({"sweep", s.sweep.axis + " from " + fmt(s.sweep.start) + " to " +
                               fmt(s.sweep.stop) + " in " + std::to_string(s.sweep.points) +
                               " points"});
    for (std::size_t vi = 0; vi < n_var; ++vi)
    {
        if (!s.variants[vi].label.empty())
            md.push_back({"variant " + s.variants[vi].label,
                          describe_settings(s.variants[vi].settings)});
        for (auto& kv : fading_metadata(s, vi))
            md.push_back(std::move(kv));
    }
    for (const auto& a : s.assumptions)
        md.push_back({"assumption", a});
    std::string units_line;
    std::string methods_line;
    for (const auto& c : t.columns)
    {
        units_line += (units_line.empty() ? "" : ",") + c.name + "=" + c.unit;
        methods_line += (methods_line.empty() ? "" : ",") + c.name + "=" + c.method;
    }
    md.push_back({"units", units_line});
    md.push_back({"methods", methods_line});
    md.push_back({"failed_cells", std::to_string(t.failures.size())});
    return t;
}

void write_csv(const CurveTable& t, std::ostream& out)
{
    for (const auto& [k, v] : t.metadata)
        out << "# " << k << ": " << v << "\n";
    for (const auto& f : t.failures)
        out << "# failure: " << f << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i].name;
    out << "\n";
    for (const auto& row : t.rows)
    {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt(row[i]);
        out << "\n";
    }
}

void write_json(const CurveTable& t, std::ostream& out)
{
    using json = nlohmann::ordered_json;
    json doc;
    json md = json::array();
    for (const auto& [k, v] : t.metadata)
        md.push_back(json::array({k, v}));
    doc["metadata"] = md;
    json cols = json::array();
    for (const auto& c : t.columns)
        cols.push_back({{"name", c.name}, {"unit", c.unit}, {"method", c.method}});
    doc["columns"] = cols;
    json rows = json::array();
    for (const auto& row : t.rows)
    {
        json r = json::array();
        for (const double v : row)
            r.push_back(std::isnan(v) ? json(nullptr) : json(std::stod(fmt(v))));
        rows.push_back(r);
    }
    doc["rows"] = rows;
    doc["failures"] = t.failures;
    out << doc.dump(1) << "\n";
}

bool ValidationReport::passed() const
{
    return failures.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

const CheckRow* ValidationReport::worst() const
{
    const CheckRow* w = nullptr;
    double worst_ratio = -1.0;
    for (const auto& r : rows)
    {
        if (r.pass || r.informational)
            continue;
        const double ratio = r.allowed > 0.0 ? r.deviation / r.allowed
                                             : std::numeric_limits<double>::infinity();
        if (ratio > worst_ratio)
        {
            worst_ratio = ratio;
            w = &r;
        }
    }
    return w;
}

ValidationReport validate_scenario(const Scenario& scenario, const RunOptions& opt,
                                   const ValidateOptions& vopt)
{
    if (scenario.methods.count() < 2)
        throw ConfigError("validate needs at least two methods in the scenario");
    Scenario s = scenario;
    if (vopt.tolerance)
    {
        if (!(*vopt.tolerance > 0.0))
            throw ConfigError("--tolerance must be > 0");
        s.tol.mc_rel = *vopt.tolerance;
        s.tol.series_rel = *vopt.tolerance;
    }
    const CurveTable t = run_sweep(s, opt);
    ValidationReport rep;
    rep.failures = t.failures;
    const auto& tol = s.tol;

    for (const auto& var : s.variants)
    {
        const std::string sfx = suffix(var);
        auto col = [&](const std::string& stem) { return t.column_index(stem + sfx); };
        auto each = [&](const std::string& ref_stem, const std::string& cand_stem,
                        const std::string& check, auto&& judge) {
            const auto ri = col(ref_stem);
            const auto ci = col(cand_stem);
            if (!ri || !ci)
                return;
            const auto ei = col(cand_stem + "_ci");
            for (const auto& row : t.rows)
            {
                const double ref = row[*ri];
                const double cand = row[*ci];
                if (std::isnan(ref) || std::isnan(cand))
                    continue;
                CheckRow r;
                r.variant = var.label;
                r.x = row[0];
                r.check = check;
                r.reference = ref;
                r.candidate = cand;
                if (!judge(r, ei ? row[*ei] : 0.0))
                    continue;
                rep.rows.push_back(r);
            }
        };
        auto mc_rule = [&](double rel_part_of, double abs_part) {
            return [=](CheckRow& r, double ci) {
                r.deviation = std::abs(r.candidate - r.reference);
                r.allowed = std::max({rel_part_of * std::abs(r.reference), abs_part,
                                      tol.mc_sigmas * ci});
                r.pass = r.deviation <= r.allowed;
                return true;
            };
        };
        each("sop_dl_closed", "sop_dl_mc", "sop_dl closed_form~monte_carlo", mc_rule(tol.mc_rel, 0.0));
        each("sop_ul_quad", "sop_ul_closed", "sop_ul closed_form~quadrature",
             [&](CheckRow& r, double) {
                 if (!(r.reference > tol.series_floor))
                     return false;
                 r.deviation = std::abs(r.candidate - r.reference) / r.reference;
                 r.allowed = tol.series_rel;
                 r.pass = r.deviation <= r.allowed;
                 return true;
             });
        each("sop_ul_closed", "sop_ul_mc", "sop_ul closed_form~monte_carlo", mc_rule(tol.mc_rel, 0.0));
        if (!col("sop_ul_closed"))
            each("sop_ul_quad", "sop_ul_mc", "sop_ul quadrature~monte_carlo",
                 mc_rule(tol.mc_rel, 0.0));
        each("asc_ul_quad", "asc_ul_mc", "asc_ul quadrature~monte_carlo", mc_rule(0.0, tol.asc_bits));
        each("asc_dl_closed", "asc_dl_mc", "asc_dl jensen~monte_carlo (gap, not judged)",
             [&](CheckRow& r, double) {
                 r.deviation = std::abs(r.candidate - r.reference);
                 r.allowed = 0.0;
                 r.pass = true;
                 r.informational = true;
                 return true;
             });
    }
    return rep;
}

void print_report(const ValidationReport& rep, std::ostream& out)
{
    out << std::left << std::setw(16) << "variant" << std::setw(12) << "x" << std::setw(46)
        << "check" << std::setw(20) << "reference" << std::setw(20) << "candidate"
        << std::setw(20) << "deviation" << std::setw(20) << "allowed"
        << "result\n";
    std::map<std::string, double> max_dev;
    for (const auto& r : rep.rows)
    {
        out << std::left << std::setw(16) << (r.variant.empty() ? "-" : r.variant) << std::setw(12)
            << fmt(r.x) << std::setw(46) << r.check << std::setw(20) << fmt(r.reference)
            << std::setw(20) << fmt(r.candidate) << std::setw(20) << fmt(r.deviation)
            << std::setw(20) << (r.informational ? "-" : fmt(r.allowed))
            << (r.informational ? "info" : (r.pass ? "PASS" : "FAIL")) << "\n";
        auto& m = max_dev[r.check];
        m = std::max(m, r.deviation);
    }
    out << "\n";
    for (const auto& [check, dev] : max_dev)
        out << "max deviation  " << std::setw(46) << check << fmt(dev) << "\n";
    for (const auto& f : rep.failures)
        out << "numerical failure: " << f << "\n";
    if (const CheckRow* w = rep.worst())
        out << "worst point: " << (w->variant.empty() ? "" : w->variant + " ") << "x=" << fmt(w->x)
            << " " << w->check << " deviation " << fmt(w->deviation) << " > allowed "
            << fmt(w->allowed) << "\n";
    out << (rep.passed() ? "VALIDATION PASSED" : "VALIDATION FAILED") << "\n";
}

}  // namespace fsosec::cli
