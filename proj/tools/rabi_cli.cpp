// rabi_cli — vacuum Rabi dynamics with and without the rotating-wave
// approximation.
//
//   rabi_cli simulate --omega0 10 --delta 0 --g 1 --init excited --tmax 6 --engines factored,jc
//   rabi_cli figure 2 --out fig2.csv
//   rabi_cli check all
//   rabi_cli sweep --delta-ratios 0,0.1,0.5 --g-ratios 0.05,0.1
//
// Exit codes: 0 success, 1 runtime or check failure, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rabi/checks.hpp"
#include "rabi/scenario.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Flags shared by `simulate` and `figure`. Only explicitly given flags
// override the preset or config file.
struct RunFlags {
    std::optional<double> omega0, omega, delta, g, tmax, dt;
    std::optional<std::string> init, engines, format, rho10;
    std::optional<double> rho11;
    std::optional<int> nmax;
    std::string out;
    std::string config;
    bool no_fallback = false;
    bool seed_free = false;

    void attach(CLI::App* app)
    {
        app->add_option("--omega0", omega0, "atomic transition frequency (units of g)");
        app->add_option("--omega", omega, "cavity frequency; give this or --delta");
        app->add_option("--delta", delta, "detuning omega0 - omega; give this or --omega");
        app->add_option("--g", g, "coupling strength");
        app->add_option("--init", init, "initial atom state: excited|ground|custom");
        app->add_option("--rho11", rho11, "excited population for --init custom");
        app->add_option("--rho10", rho10, "coherence 're,im' for --init custom");
        app->add_option("--tmax", tmax, "final time");
        app->add_option("--dt", dt, "maximum step (default: 1/200 of the fastest period)");
        app->add_option("--engines", engines, "comma list of factored,direct,jc,oracle");
        app->add_option("--nmax", nmax, "photon cutoff of the Fock oracle");
        app->add_option("--format", format, "csv|json");
        app->add_option("--out", out, "output path (default stdout)");
        app->add_option("--config", config, "key=value config file; flags override it");
        app->add_flag("--no-fallback", no_fallback, "fail instead of falling back to the direct path");
        app->add_flag("--seed-free", seed_free, "reserved; rejected");
    }

    void apply(rabi::ScenarioConfig& cfg) const
    {
        if (seed_free) throw rabi::ValidationError("seed-free: flag is reserved (no RNG is used) and must not be set");
        if (!config.empty()) {
            std::ifstream in(config);
            if (!in) throw rabi::ValidationError(fmt::format("config: cannot open '{}'", config));
            rabi::ScenarioConfig file_cfg = cfg;
            // A file that names one of delta/omega replaces the preset's choice.
            file_cfg.delta.reset();
            file_cfg.omega.reset();
            rabi::apply_config_lines(in, file_cfg);
            if (!file_cfg.delta && !file_cfg.omega) {
                file_cfg.delta = cfg.delta;
                file_cfg.omega = cfg.omega;
            }
            cfg = file_cfg;
        }
        if (delta && omega) {
            // Both given on the command line: report the bad value first if there is one.
            cfg.delta = delta;
            cfg.omega = omega;
        } else if (delta) {
            cfg.delta = delta;
            cfg.omega.reset();
        } else if (omega) {
            cfg.omega = omega;
            cfg.delta.reset();
        }
        if (omega0) cfg.omega0 = *omega0;
        if (g) cfg.g = *g;
        if (init) cfg.init = rabi::parse_init(*init);
        if (rho11) rabi::apply_config_value(cfg, "rho11", fmt::format("{:.17g}", *rho11));
        if (rho10) rabi::apply_config_value(cfg, "rho10", *rho10);
        if (tmax) cfg.t_max = *tmax;
        if (dt) cfg.dt = *dt;
        if (engines) cfg.engines = rabi::parse_engines(*engines);
        if (nmax) cfg.n_max = *nmax;
        if (format) cfg.format = rabi::parse_format(*format);
        if (!out.empty()) cfg.out_path = out;
        if (no_fallback) cfg.allow_fallback = false;
    }
};

void configure_logging()
{
    auto logger = spdlog::stderr_color_mt("rabi");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("RABI_LOG")) {
        spdlog::set_level(spdlog::level::from_str(env));
    }
}

template <class Writer>
void emit(const std::string& path, Writer&& write)
{
    if (path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
    write(os);
}

int run_simulation(const rabi::ScenarioConfig& cfg)
{
    cfg.validate();
    const auto params = cfg.params();
    spdlog::info("omega0={} omega={} g={} delta={} init={} tmax={}", params.omega0(), params.omega(), params.g(),
                 params.delta(), rabi::to_string(cfg.init), cfg.t_max);
    const auto result = rabi::run_scenario(cfg);
    spdlog::info("grid: {} samples, dt={}", result.grid.size(), result.grid.dt());
    if (result.fallback_used) spdlog::warn("factored path fell back to direct: {}", result.fallback_reason);

    std::size_t warned = 0;
    for (const auto& row : result.rows) warned += row.trace_warn ? 1 : 0;
    if (warned) spdlog::warn("{} samples exceed |tr rho - 1| > {}", warned, rabi::kTraceWarnThreshold);

    emit(cfg.out_path, [&](std::ostream& os) {
        if (cfg.format == rabi::OutputFormat::json) rabi::write_json(os, result);
        else rabi::write_csv(os, result);
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    configure_logging();

    CLI::App app{"Vacuum Rabi oscillation of a two-level atom without the rotating-wave approximation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(rabi::kVersion));

    RunFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "run engines for one parameter set");
    sim_flags.attach(simulate);

    RunFlags fig_flags;
    int figure_number = 0;
    auto* figure = app.add_subcommand("figure", "run one of the five preset scenarios");
    figure->add_option("number", figure_number, "figure 1..5")->required();
    fig_flags.attach(figure);

    std::string suite_name = "all";
    int check_nmax = 8;
    bool quiet = false;
    auto* check = app.add_subcommand("check", "run the acceptance checks");
    check->add_option("suite", suite_name, "invariants|figures|oracle|all");
    check->add_option("--nmax", check_nmax, "cutoff for the truncation check (compared with 2*nmax)");
    check->add_flag("--quiet", quiet, "only print measurements of failing checks");

    std::string delta_ratios = "0,0.1,0.2,0.5";
    std::string g_ratios = "0.02,0.05,0.1";
    std::string sweep_init = "excited";
    double sweep_tmax = 6.0;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "grid over delta/omega0 and g/omega0 with summary rows");
    sweep->add_option("--delta-ratios", delta_ratios, "comma list of delta/omega0");
    sweep->add_option("--g-ratios", g_ratios, "comma list of g/omega0");
    sweep->add_option("--init", sweep_init, "excited|ground");
    sweep->add_option("--tmax", sweep_tmax, "final g*t");
    sweep->add_option("--out", sweep_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*simulate) {
            rabi::ScenarioConfig cfg;
            sim_flags.apply(cfg);
            return run_simulation(cfg);
        }
        if (*figure) {
            rabi::ScenarioConfig cfg = rabi::figure_preset(figure_number);
            fig_flags.apply(cfg);
            return run_simulation(cfg);
        }
        if (*check) {
            const auto suite = rabi::parse_suite(suite_name);
            if (check_nmax < 1) throw rabi::ValidationError("nmax must be >= 1");
            rabi::CheckOptions opts;
            opts.truncation_n_max = check_nmax;
            const auto results = rabi::run_suite(suite, opts);
            rabi::print_report(std::cout, results, !quiet);
            for (const auto& r : results) {
                if (!r.passed()) return kExitRuntime;
            }
            return 0;
        }
        if (*sweep) {
            rabi::SweepConfig cfg;
            cfg.delta_ratios = rabi::parse_double_list(delta_ratios);
            cfg.g_ratios = rabi::parse_double_list(g_ratios);
            cfg.init = rabi::parse_init(sweep_init);
            cfg.gt_max = sweep_tmax;
            const auto rows = rabi::run_sweep(cfg);
            emit(sweep_out, [&](std::ostream& os) { rabi::write_sweep_csv(os, rows); });
            return 0;
        }
    } catch (const rabi::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    } catch (const rabi::RiccatiDivergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
