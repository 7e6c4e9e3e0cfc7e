// scenario.hpp — run configurations, figure presets, multi-engine runs and
// their CSV/JSON serialization. The command-line tool is a thin layer on top.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rabi/fock_oracle.hpp"
#include "rabi/model.hpp"
#include "rabi/propagator.hpp"

namespace rabi {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Engine { factored, direct, jc, oracle };
enum class OutputFormat { csv, json };

std::string_view to_string(Engine e);
std::string_view to_string(InitialKind k);
std::vector<Engine> parse_engines(std::string_view list);
InitialKind parse_init(std::string_view s);
OutputFormat parse_format(std::string_view s);

struct ScenarioConfig {
    double omega0 = 10.0;
    std::optional<double> delta;  // exactly one of delta / omega
    std::optional<double> omega;
    double g = 1.0;
    InitialKind init = InitialKind::excited;
    Eigen::Matrix2cd custom_rho = Eigen::Matrix2cd::Zero();
    double t_max = 6.0;
    std::optional<double> dt;  // default_step() when unset
    std::vector<Engine> engines{Engine::factored, Engine::jc};
    int n_max = kDefaultNmax;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;  // empty: stdout
    bool allow_fallback = true;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    ModelParams params() const;
    AtomState initial_state() const;
    TimeGrid grid() const;
    bool has(Engine e) const;
};

/// The five `figure` presets (1..5), in units of g = 1.
ScenarioConfig figure_preset(int figure);

/// Applies key=value lines (same keys as the long flags, '#' comments).
void apply_config_lines(std::istream& in, ScenarioConfig& cfg);
void apply_config_value(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Moving-average window covering one counter-rotating period 2*pi/Delta.
std::size_t counter_rotating_window(const ModelParams& params, double dt);

inline constexpr double kTraceWarnThreshold = 1e-8;

struct SampleRow {
    double t = 0.0;
    double g_t = 0.0;
    double delta_t = 0.0;
    std::optional<double> pe_factored;
    std::optional<double> pe_direct;
    std::optional<double> pe_jc;
    std::optional<double> pe_oracle;
    std::optional<double> l_raw;
    std::optional<double> m_raw;
    double gamma_k = 0.0;
    std::optional<double> trace_err;
    std::optional<double> herm_err;
    bool trace_warn = false;
};

struct ScenarioResult {
    ScenarioConfig config;
    ModelParams params;
    TimeGrid grid;
    std::vector<SampleRow> rows;
    bool fallback_used = false;
    std::string fallback_reason;
};

/// Runs every requested engine on one shared grid. Engines run concurrently.
/// Throws RiccatiDivergence when the factored engine diverges and
/// cfg.allow_fallback is false.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Column names in output order.
const std::vector<std::string>& csv_columns();

void write_csv(std::ostream& os, const ScenarioResult& res);
void write_json(std::ostream& os, const ScenarioResult& res);

/// One row of a parameter sweep, frequencies in units of g.
struct SweepRow {
    double delta_ratio = 0.0;  // delta / omega0
    double g_ratio = 0.0;      // g / omega0
    double omega0 = 0.0;
    double delta = 0.0;
    double max_pe = 0.0;
    double min_pe = 0.0;
    std::optional<double> dominant_period;
    std::optional<double> period_uncertainty;
    double envelope_dev = 0.0;  // max |P_e - exp(-g^2 t^2)|
    bool fallback_used = false;
};

struct SweepConfig {
    std::vector<double> delta_ratios{0.0, 0.1, 0.2, 0.5};
    std::vector<double> g_ratios{0.02, 0.05, 0.1};
    InitialKind init = InitialKind::excited;
    double gt_max = 6.0;
};

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

std::vector<double> parse_double_list(std::string_view list);

}  // namespace rabi
