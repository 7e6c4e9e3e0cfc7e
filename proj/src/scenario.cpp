#include "rabi/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <istream>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "rabi/analysis.hpp"
#include "rabi/jc.hpp"

namespace rabi {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view key, std::string_view text)
{
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ValidationError(fmt::format("{}: '{}' is not a finite number", key, text));
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

std::string_view to_string(Engine e)
{
    switch (e) {
    case Engine::factored: return "factored";
    case Engine::direct: return "direct";
    case Engine::jc: return "jc";
    case Engine::oracle: return "oracle";
    }
    return "?";
}

std::string_view to_string(InitialKind k)
{
    switch (k) {
    case InitialKind::excited: return "excited";
    case InitialKind::ground: return "ground";
    case InitialKind::custom: return "custom";
    }
    return "?";
}

std::vector<Engine> parse_engines(std::string_view list)
{
    std::vector<Engine> out;
    for (auto item : split(list, ',')) {
        Engine e;
        if (item == "factored") e = Engine::factored;
        else if (item == "direct") e = Engine::direct;
        else if (item == "jc") e = Engine::jc;
        else if (item == "oracle") e = Engine::oracle;
        else throw ValidationError(fmt::format("engines: unknown engine '{}'", item));
        if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
    }
    if (out.empty()) throw ValidationError("engines: at least one engine required");
    return out;
}

InitialKind parse_init(std::string_view s)
{
    s = trim(s);
    if (s == "excited") return InitialKind::excited;
    if (s == "ground") return InitialKind::ground;
    if (s == "custom") return InitialKind::custom;
    throw ValidationError(fmt::format("init: expected excited|ground|custom, got '{}'", s));
}

OutputFormat parse_format(std::string_view s)
{
    s = trim(s);
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ValidationError(fmt::format("format: expected csv|json, got '{}'", s));
}

std::vector<double> parse_double_list(std::string_view list)
{
    std::vector<double> out;
    for (auto item : split(list, ',')) out.push_back(parse_number("list", item));
    return out;
}

void ScenarioConfig::validate() const
{
    if (omega && !(*omega > 0.0)) throw ValidationError("omega must be > 0");
    if (delta.has_value() == omega.has_value()) {
        throw ValidationError("delta/omega: give exactly one of --delta or --omega");
    }
    if (!(t_max > 0.0)) throw ValidationError("tmax must be > 0");
    if (dt && !(*dt > 0.0)) throw ValidationError("dt must be > 0");
    if (engines.empty()) throw ValidationError("engines: at least one engine required");
    if (n_max < 1) throw ValidationError("nmax must be >= 1");
    (void)params();
    (void)initial_state();
}

ModelParams ScenarioConfig::params() const
{
    if (delta) return ModelParams::from_detuning(omega0, *delta, g);
    if (omega) return ModelParams(omega0, *omega, g);
    throw ValidationError("delta/omega: give exactly one of --delta or --omega");
}

AtomState ScenarioConfig::initial_state() const
{
    return make_atom_state(init, custom_rho);
}

TimeGrid ScenarioConfig::grid() const
{
    return TimeGrid::covering(t_max, dt.value_or(default_step(params())));
}

bool ScenarioConfig::has(Engine e) const
{
    return std::find(engines.begin(), engines.end(), e) != engines.end();
}

ScenarioConfig figure_preset(int figure)
{
    ScenarioConfig cfg;
    cfg.g = 1.0;
    cfg.engines = {Engine::factored, Engine::jc, Engine::oracle};
    switch (figure) {
    case 1:
        cfg.omega0 = 10.0;
        cfg.delta = 0.0;
        cfg.t_max = 6.0;
        break;
    case 2:
        cfg.omega0 = 20.0;
        cfg.delta = 2.0;
        cfg.t_max = 25.0 / 2.0;
        break;
    case 3:
        cfg.omega0 = 50.0;
        cfg.delta = 5.0;
        cfg.t_max = 25.0 / 5.0;
        break;
    case 4:
        cfg.omega0 = 10.0;
        cfg.delta = 2.0;
        cfg.t_max = 12.0;
        break;
    case 5:
        cfg.omega0 = 20.0;
        cfg.delta = 10.0;
        cfg.init = InitialKind::ground;
        cfg.t_max = 6.0;
        break;
    default:
        throw ValidationError(fmt::format("figure: expected 1..5, got {}", figure));
    }
    return cfg;
}

void apply_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "omega0") cfg.omega0 = parse_number(key, value);
    else if (key == "omega") cfg.omega = parse_number(key, value);
    else if (key == "delta") cfg.delta = parse_number(key, value);
    else if (key == "g") cfg.g = parse_number(key, value);
    else if (key == "init") cfg.init = parse_init(value);
    else if (key == "tmax") cfg.t_max = parse_number(key, value);
    else if (key == "dt") cfg.dt = parse_number(key, value);
    else if (key == "engines") cfg.engines = parse_engines(value);
    else if (key == "nmax") {
        const double n = parse_number(key, value);
        if (n != std::floor(n)) throw ValidationError("nmax must be an integer");
        cfg.n_max = static_cast<int>(n);
    }
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "out") cfg.out_path = std::string(value);
    else if (key == "rho11") {
        const double p = parse_number(key, value);
        cfg.custom_rho(0, 0) = p;
        cfg.custom_rho(1, 1) = 1.0 - p;
    }
    else if (key == "rho10") {
        const auto parts = parse_double_list(value);
        if (parts.size() != 2) throw ValidationError("rho10: expected 're,im'");
        cfg.custom_rho(0, 1) = cplx(parts[0], parts[1]);
        cfg.custom_rho(1, 0) = cplx(parts[0], -parts[1]);
    }
    else if (key == "fallback") {
        if (value == "true" || value == "1") cfg.allow_fallback = true;
        else if (value == "false" || value == "0") cfg.allow_fallback = false;
        else throw ValidationError("fallback: expected true|false");
    }
    else throw ValidationError(fmt::format("unknown config key '{}'", key));
}

void apply_config_lines(std::istream& in, ScenarioConfig& cfg)
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError(fmt::format("config line {}: expected key=value", lineno));
        }
        apply_config_value(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
}

std::size_t counter_rotating_window(const ModelParams& params, double dt)
{
    const double samples = 2.0 * std::numbers::pi / params.bigdelta() / dt;
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(samples)));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
    cfg.validate();
    const ModelParams params = cfg.params();
    const AtomState rho0 = cfg.initial_state();
    const TimeGrid grid = cfg.grid();

    std::vector<double> times(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) times[i] = grid.time(i);

    std::future<Trajectory> factored, direct;
    std::future<std::vector<AtomState>> oracle;
    if (cfg.has(Engine::factored)) {
        factored = std::async(std::launch::async, [&] {
            return cfg.allow_fallback ? propagate_factored_with_fallback(rho0, params, grid)
                                      : propagate_factored(rho0, params, grid);
        });
    }
    if (cfg.has(Engine::direct)) {
        direct = std::async(std::launch::async, [&] { return propagate_direct(rho0, params, grid); });
    }
    if (cfg.has(Engine::oracle)) {
        oracle = std::async(std::launch::async, [&] {
            return oracle_atom_trajectory(params, cfg.n_max, CouplingMode::full, rho0, times);
        });
    }

    std::optional<Trajectory> fac_traj, dir_traj;
    std::optional<std::vector<AtomState>> orc;
    if (factored.valid()) fac_traj = factored.get();
    if (direct.valid()) dir_traj = direct.get();
    if (oracle.valid()) orc = oracle.get();

    ScenarioResult res{cfg, params, grid, {}, false, {}};
    if (fac_traj && fac_traj->fallback_used) {
        res.fallback_used = true;
        res.fallback_reason = fac_traj->fallback_reason;
    }

    res.rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SampleRow row;
        row.t = times[i];
        row.g_t = params.g() * row.t;
        row.delta_t = params.delta() * row.t;
        row.gamma_k = evaluate_coefficients(params, row.t).gamma_k;

        double trace = 0.0, herm = 0.0;
        bool have_state = false;
        const auto take = [&](const AtomState& s) {
            trace = std::max(trace, s.trace_error());
            herm = std::max(herm, s.hermiticity_error());
            have_state = true;
        };
        if (fac_traj) {
            const auto& rec = fac_traj->records[i];
            row.pe_factored = rec.p_excited;
            if (rec.map) {
                row.l_raw = rec.map->l;
                row.m_raw = rec.map->m;
            }
            take(rec.state);
        }
        if (dir_traj) {
            row.pe_direct = dir_traj->records[i].p_excited;
            take(dir_traj->records[i].state);
        }
        if (orc) {
            row.pe_oracle = (*orc)[i].rho11();
            take((*orc)[i]);
        }
        if (cfg.has(Engine::jc)) {
            // Vacuum RWA: |g,0> is stationary, so only the excited weight evolves.
            row.pe_jc = rho0.rho11() * jc_excited_probability(params, row.t, InitialKind::excited).p_excited;
        }
        if (have_state) {
            row.trace_err = trace;
            row.herm_err = herm;
            row.trace_warn = trace > kTraceWarnThreshold;
        }
        res.rows.push_back(row);
    }
    return res;
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> cols{"t",         "g_t",     "delta_t",  "pe_factored", "pe_direct",
                                               "pe_jc",     "pe_oracle", "l_raw",  "m_raw",       "gamma_k",
                                               "trace_err", "herm_err", "trace_warn"};
    return cols;
}

void write_csv(std::ostream& os, const ScenarioResult& res)
{
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : res.rows) {
        os << num(r.t) << ',' << num(r.g_t) << ',' << num(r.delta_t) << ',' << num(r.pe_factored) << ','
           << num(r.pe_direct) << ',' << num(r.pe_jc) << ',' << num(r.pe_oracle) << ',' << num(r.l_raw) << ','
           << num(r.m_raw) << ',' << num(r.gamma_k) << ',' << num(r.trace_err) << ',' << num(r.herm_err) << ','
           << (r.trace_warn ? 1 : 0) << '\n';
    }
}

void write_json(std::ostream& os, const ScenarioResult& res)
{
    using nlohmann::json;
    const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    const auto& cfg = res.config;

    json engines = json::array();
    for (auto e : cfg.engines) engines.push_back(to_string(e));

    json meta;
    meta["artifact"] = "rabi";
    meta["version"] = std::string(kVersion);
    meta["config"] = {{"omega0", cfg.omega0},
                      {"omega", res.params.omega()},
                      {"delta", res.params.delta()},
                      {"g", cfg.g},
                      {"init", to_string(cfg.init)},
                      {"tmax", cfg.t_max},
                      {"engines", engines},
                      {"nmax", cfg.n_max},
                      {"fallback_allowed", cfg.allow_fallback}};
    if (cfg.init == InitialKind::custom) {
        meta["config"]["rho11"] = cfg.custom_rho(0, 0).real();
        meta["config"]["rho10"] = {cfg.custom_rho(0, 1).real(), cfg.custom_rho(0, 1).imag()};
    }
    meta["grid"] = {{"t_max", res.grid.t_max()}, {"dt", res.grid.dt()}, {"samples", res.grid.size()}};
    meta["fallback_used"] = res.fallback_used;
    if (res.fallback_used) meta["fallback_reason"] = res.fallback_reason;

    json samples = json::array();
    for (const auto& r : res.rows) {
        samples.push_back({{"t", r.t},
                           {"g_t", r.g_t},
                           {"delta_t", r.delta_t},
                           {"pe_factored", opt(r.pe_factored)},
                           {"pe_direct", opt(r.pe_direct)},
                           {"pe_jc", opt(r.pe_jc)},
                           {"pe_oracle", opt(r.pe_oracle)},
                           {"l_raw", opt(r.l_raw)},
                           {"m_raw", opt(r.m_raw)},
                           {"gamma_k", r.gamma_k},
                           {"trace_err", opt(r.trace_err)},
                           {"herm_err", opt(r.herm_err)},
                           {"trace_warn", r.trace_warn}});
    }
    os << json{{"metadata", meta}, {"samples", samples}}.dump(1) << '\n';
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg)
{
    if (cfg.delta_ratios.empty() || cfg.g_ratios.empty()) throw ValidationError("sweep: empty grid");
    if (!(cfg.gt_max > 0.0)) throw ValidationError("sweep: tmax must be > 0");
    if (cfg.init == InitialKind::custom) throw ValidationError("sweep: init must be excited or ground");

    std::vector<SweepRow> rows;
    for (double gr : cfg.g_ratios) {
        if (!(gr > 0.0)) throw ValidationError("sweep: g ratios must be > 0");
        for (double dr : cfg.delta_ratios) {
            if (!(dr < 1.0)) throw ValidationError("sweep: delta ratio must be < 1 so that omega > 0");
            SweepRow row;
            row.delta_ratio = dr;
            row.g_ratio = gr;
            row.omega0 = 1.0 / gr;
            row.delta = dr * row.omega0;

            const auto params = ModelParams::from_detuning(row.omega0, row.delta, 1.0);
            const auto grid = TimeGrid::covering(cfg.gt_max, default_step(params));
            const auto traj = propagate_factored_with_fallback(make_atom_state(cfg.init), params, grid);
            const auto pe = excited_population(traj);
            row.fallback_used = traj.fallback_used;

            const auto [lo, hi] = std::minmax_element(pe.p_excited.begin(), pe.p_excited.end());
            row.min_pe = *lo;
            row.max_pe = *hi;
            if (pe.times.size() >= kMinSeriesLength) {
                const auto summary =
                    find_extrema(pe.times, pe.p_excited, counter_rotating_window(params, grid.dt()));
                if (summary.dominant_period) {
                    row.dominant_period = summary.dominant_period->period;
                    row.period_uncertainty = summary.dominant_period->uncertainty;
                }
            }
            row.envelope_dev = envelope_check(pe.times, pe.p_excited, EnvelopeModel::gaussian, 1.0);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << "delta_over_omega0,g_over_omega0,omega0,delta,max_pe,min_pe,dominant_period,period_uncertainty,"
          "envelope_dev,fallback\n";
    for (const auto& r : rows) {
        os << num(r.delta_ratio) << ',' << num(r.g_ratio) << ',' << num(r.omega0) << ',' << num(r.delta) << ','
           << num(r.max_pe) << ',' << num(r.min_pe) << ',' << num(r.dominant_period) << ','
           << num(r.period_uncertainty) << ',' << num(r.envelope_dev) << ',' << (r.fallback_used ? 1 : 0) << '\n';
    }
}

}  // namespace rabi
