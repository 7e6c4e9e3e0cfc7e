#include "rabi/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <span>

#include <fmt/format.h>

#include "rabi/analysis.hpp"
#include "rabi/fock_oracle.hpp"
#include "rabi/jc.hpp"
#include "rabi/propagator.hpp"
#include "rabi/scenario.hpp"

namespace rabi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Regime {
    const char* name;
    double omega0;       // units of g
    double delta_ratio;  // delta / omega0

    ModelParams params() const { return ModelParams::from_detuning(omega0, delta_ratio * omega0, 1.0); }
};

// Parameter sets of the five figure presets; preset 4 has two detunings.
constexpr Regime kRegimes[] = {
    {"fig1", 10.0, 0.0}, {"fig2", 20.0, 0.1}, {"fig3", 50.0, 0.1},
    {"fig4a", 10.0, 0.2}, {"fig4b", 10.0, 0.6}, {"fig5", 20.0, 0.5},
};

std::vector<AtomState> probe_states()
{
    Eigen::Matrix2cd sup;
    sup << 0.5, cplx(0.3, 0.2), cplx(0.3, -0.2), 0.5;
    return {make_atom_state(InitialKind::excited), make_atom_state(InitialKind::ground),
            make_atom_state(InitialKind::custom, sup)};
}

TimeGrid default_grid(const ModelParams& p, double t_max) { return TimeGrid::covering(t_max, default_step(p)); }

double max_elementwise(const Trajectory& a, const Trajectory& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        worst = std::max(worst, (a.records[i].state.matrix() - b.records[i].state.matrix()).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::vector<double> linspace(double t_max, std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

std::size_t count_upto(std::span<const double> times, double t_end)
{
    std::size_t n = 0;
    while (n < times.size() && times[n] <= t_end + 1e-12) ++n;
    return n;
}

PopulationSeries factored_population(double omega0, double delta, double t_max, InitialKind init)
{
    const auto p = ModelParams::from_detuning(omega0, delta, 1.0);
    return excited_population(propagate_factored(make_atom_state(init), p, default_grid(p, t_max)));
}

}  // namespace

bool Measurement::passed() const
{
    switch (relation) {
    case Relation::le: return value <= limit;
    case Relation::lt: return value < limit;
    case Relation::ge: return value >= limit;
    case Relation::gt: return value > limit;
    case Relation::info: return true;
    }
    return false;
}

bool CriterionResult::passed() const
{
    return std::all_of(items.begin(), items.end(), [](const Measurement& m) { return m.passed(); });
}

Suite parse_suite(const std::string& s)
{
    if (s == "invariants") return Suite::invariants;
    if (s == "figures") return Suite::figures;
    if (s == "oracle") return Suite::oracle;
    if (s == "all") return Suite::all;
    throw ValidationError(fmt::format("suite: expected invariants|figures|oracle|all, got '{}'", s));
}

CriterionResult check_identity_and_trace()
{
    CriterionResult r{"AC1", "identity at origin and trace preservation, g*t in [0,6]", {}, {}};
    const auto states = probe_states();
    for (const auto& reg : kRegimes) {
        const auto p = reg.params();
        const auto grid = default_grid(p, 6.0);
        double id_f = 0.0, id_d = 0.0, tr_f = 0.0, tr_d = 0.0;
        for (const auto& s : states) {
            const auto f = propagate_factored(s, p, grid);
            const auto d = propagate_direct(s, p, grid);
            id_f = std::max(id_f, (f.records.front().state.matrix() - s.matrix()).cwiseAbs().maxCoeff());
            id_d = std::max(id_d, (d.records.front().state.matrix() - s.matrix()).cwiseAbs().maxCoeff());
            tr_f = std::max(tr_f, f.max_trace_error());
            tr_d = std::max(tr_d, d.max_trace_error());
        }
        r.items.push_back({fmt::format("{} factored |rho(0)-rho0|", reg.name), id_f, 0.0, Relation::le});
        r.items.push_back({fmt::format("{} direct   |rho(0)-rho0|", reg.name), id_d, 0.0, Relation::le});
        r.items.push_back({fmt::format("{} factored max |tr-1|", reg.name), tr_f, 1e-8, Relation::le});
        r.items.push_back({fmt::format("{} direct   max |tr-1|", reg.name), tr_d, 1e-8, Relation::le});
    }
    return r;
}

CriterionResult check_splitting_exactness()
{
    CriterionResult r{"AC2", "factored vs direct agreement and 4th-order convergence", {}, {}};
    const auto states = probe_states();
    for (const auto& reg : kRegimes) {
        const auto p = reg.params();
        const auto grid = default_grid(p, 6.0);
        double worst = 0.0;
        for (const auto& s : states) {
            worst = std::max(worst, max_elementwise(propagate_factored(s, p, grid), propagate_direct(s, p, grid)));
        }
        r.items.push_back({fmt::format("{} max elementwise |factored-direct|", reg.name), worst, 1e-6, Relation::le});
    }

    // At the default step the discrepancy sits at roundoff, so the order is
    // measured on coarser grids where truncation error dominates.
    const auto p = kRegimes[1].params();
    const auto s = make_atom_state(InitialKind::excited);
    const auto coarse = TimeGrid::covering(6.0, 8.0 * default_step(p));
    const auto fine = TimeGrid::covering(6.0, 4.0 * default_step(p));
    const double e_coarse = max_elementwise(propagate_factored(s, p, coarse), propagate_direct(s, p, coarse));
    const double e_fine = max_elementwise(propagate_factored(s, p, fine), propagate_direct(s, p, fine));
    r.items.push_back({"fig2 discrepancy at dt = 8x default", e_coarse, 0.0, Relation::info});
    r.items.push_back({"fig2 discrepancy at dt = 4x default", e_fine, 0.0, Relation::info});
    r.items.push_back({"fig2 ratio when halving dt", e_coarse / e_fine, 11.0, Relation::ge});
    return r;
}

CriterionResult check_gamma_quadrature()
{
    CriterionResult r{"AC3", "Gamma_k closed form vs quadrature of g^2(Re alpha + Re f)", {}, {}};
    for (const auto& reg : kRegimes) {
        const auto p = reg.params();
        const auto grid = default_grid(p, 6.0);
        const double h = grid.dt();
        double q = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < grid.steps(); ++i) {
            const double t = grid.time(i);
            // Simpson on each grid interval
            q += h / 6.0 *
                 (evaluate_coefficients(p, t).gamma_k_dot + 4.0 * evaluate_coefficients(p, t + 0.5 * h).gamma_k_dot +
                  evaluate_coefficients(p, t + h).gamma_k_dot);
            const double exact = evaluate_coefficients(p, grid.time(i + 1)).gamma_k;
            worst = std::max(worst, std::abs(q - exact) / (1.0 + std::abs(exact)));
        }
        r.items.push_back({fmt::format("{} max |quad-Gamma_k|/(1+|Gamma_k|)", reg.name), worst, 1e-9, Relation::le});
    }
    return r;
}

CriterionResult check_jc_baseline()
{
    CriterionResult r{"AC4", "rotating-wave Fock oracle vs analytic J-C, g*t in [0,10]", {}, {}};
    const auto times = linspace(10.0, 2001);
    const auto excited = JointState::basis(AtomLevel::excited, 0, kDefaultNmax);
    for (double delta : {0.0, 2.0}) {
        const auto p = ModelParams::from_detuning(10.0, delta, 1.0);
        const auto H = build_hamiltonian(p, kDefaultNmax, CouplingMode::rwa);
        const FockPropagator U(H);

        double worst = 0.0;
        for (double t : times) {
            const double oracle = reduced_atom_state(U.at(excited, t)).rho11();
            worst = std::max(worst, std::abs(oracle - jc_excited_probability(p, t, InitialKind::excited).p_excited));
        }
        r.items.push_back({fmt::format("delta={}g max |P_oracle-P_jc|", delta), worst, 1e-8, Relation::le});

        // Rabi period from the splitting of the two eigenstates carrying |e,0>.
        const auto idx = static_cast<Eigen::Index>(JointState::index(AtomLevel::excited, 0, kDefaultNmax));
        std::vector<std::pair<double, double>> weight_energy;
        for (Eigen::Index k = 0; k < U.eigenvalues().size(); ++k) {
            weight_energy.emplace_back(std::norm(U.eigenvectors()(idx, k)), U.eigenvalues()(k));
        }
        std::sort(weight_energy.rbegin(), weight_energy.rend());
        const double splitting = std::abs(weight_energy[0].second - weight_energy[1].second);
        const double period_jc = kTwoPi / jc_rabi_frequency(p);
        r.items.push_back({fmt::format("delta={}g |T_oracle - 2pi/Omega|", delta), std::abs(kTwoPi / splitting - period_jc),
                           1e-6, Relation::le});

        double periodic = 0.0;
        for (double t : times) {
            periodic = std::max(periodic, std::abs(jc_excited_probability(p, t + period_jc, InitialKind::excited).p_excited -
                                                   jc_excited_probability(p, t, InitialKind::excited).p_excited));
        }
        r.items.push_back({fmt::format("delta={}g max |P(t+2pi/Omega)-P(t)|", delta), periodic, 1e-6, Relation::le});
    }
    return r;
}

CriterionResult check_figure1_damping()
{
    CriterionResult r{"AC5", "fig1 damped oscillation and Gaussian envelopes (omega0=10g, delta=0)", {}, {}};
    const auto pe = factored_population(10.0, 0.0, 6.0, InitialKind::excited);

    const auto summary = find_extrema(pe.times, pe.p_excited, 1);
    double rise = 0.0;
    for (std::size_t i = 1; i < summary.local_maxima.size(); ++i) {
        rise = std::max(rise, summary.local_maxima[i].value - summary.local_maxima[i - 1].value);
    }
    r.items.push_back({"local maxima found", static_cast<double>(summary.local_maxima.size()), 0.0, Relation::info});
    r.items.push_back({"largest rise between consecutive maxima", rise, 0.0, Relation::le});

    const std::size_t n = count_upto(pe.times, 3.0);
    const std::span<const double> t(pe.times.data(), n);
    const std::span<const double> l(pe.l_raw->data(), n);
    const std::span<const double> p(pe.p_excited.data(), n);
    r.items.push_back({"max |l - exp(-g^2t^2/2)|, g*t<=3", envelope_check(t, l, EnvelopeModel::gaussian_half, 1.0), 0.05,
                       Relation::le});
    r.items.push_back({"max |P_e - exp(-g^2t^2)|, g*t<=3", envelope_check(t, p, EnvelopeModel::gaussian, 1.0), 0.05,
                       Relation::le});

    // Report how far the raw-l envelope actually holds.
    double holds_until = 0.0;
    for (std::size_t i = 0; i < pe.times.size(); ++i) {
        if (std::abs((*pe.l_raw)[i] - envelope_value(EnvelopeModel::gaussian_half, 1.0, pe.times[i])) > 0.05) break;
        holds_until = pe.times[i];
    }
    r.items.push_back({"g*t up to which |l - exp(-g^2t^2/2)| <= 0.05", holds_until, 0.0, Relation::info});
    r.notes.push_back("l = e^{Gamma_k} P_e: the counter-rotating ripple in P_e (~5e-3) is amplified by "
                      "e^{Gamma_k} ~ e^{g^2t^2/2}, so the raw-l envelope degrades for g*t > ~2");
    const double min_pe = *std::min_element(pe.p_excited.begin(), pe.p_excited.end());
    r.items.push_back({"min P_e over g*t in [0,6]", min_pe, 0.0, Relation::info});
    return r;
}

CriterionResult check_detuning_frequency()
{
    CriterionResult r{"AC6", "oscillation period set by the detuning (omega0=20g,50g; delta=0.1 omega0)", {}, {}};
    for (double omega0 : {20.0, 50.0}) {
        const double delta = 0.1 * omega0;
        const auto p = ModelParams::from_detuning(omega0, delta, 1.0);
        const auto grid = default_grid(p, 25.0 / delta);
        const auto pe = excited_population(propagate_factored(make_atom_state(InitialKind::excited), p, grid));

        const auto exact = find_extrema(pe.times, pe.p_excited, counter_rotating_window(p, grid.dt()));
        const double target = kTwoPi / delta;
        const double measured = exact.dominant_period ? exact.dominant_period->period : 0.0;
        r.items.push_back({fmt::format("omega0={}g exact period", omega0), measured, target, Relation::info});
        r.items.push_back({fmt::format("omega0={}g |T - 2pi/delta|/(2pi/delta)", omega0),
                           std::abs(measured - target) / target, 0.10, Relation::le});

        std::vector<double> jc(pe.times.size());
        for (std::size_t i = 0; i < jc.size(); ++i) {
            jc[i] = jc_excited_probability(p, pe.times[i], InitialKind::excited).p_excited;
        }
        const auto jcs = find_extrema(pe.times, jc, 1);
        const double jc_period = jcs.dominant_period ? jcs.dominant_period->period : 0.0;
        r.items.push_back({fmt::format("omega0={}g |T_jc - 2pi/Omega| in grid steps", omega0),
                           std::abs(jc_period - kTwoPi / jc_rabi_frequency(p)) / grid.dt(), 2.0, Relation::le});
        r.items.push_back({fmt::format("omega0={}g max |P_exact - P_jc|", omega0),
                           compare_series(pe.times, pe.p_excited, pe.times, jc).max_abs_diff, 0.1, Relation::gt});
    }
    return r;
}

CriterionResult check_figure4_ordering()
{
    CriterionResult r{"AC7", "fig4 larger detuning: smaller amplitude, faster oscillation (omega0=10g)", {}, {}};
    SeriesSummary s[2];
    const double deltas[2] = {2.0, 6.0};
    for (int k = 0; k < 2; ++k) {
        const auto p = ModelParams::from_detuning(10.0, deltas[k], 1.0);
        const auto grid = default_grid(p, 12.0);
        const auto pe = excited_population(propagate_factored(make_atom_state(InitialKind::excited), p, grid));
        s[k] = find_extrema(pe.times, pe.p_excited, counter_rotating_window(p, grid.dt()));
        r.items.push_back({fmt::format("delta={}g peak-to-trough", deltas[k]), s[k].peak_to_trough, 0.0, Relation::info});
        r.items.push_back({fmt::format("delta={}g dominant period", deltas[k]),
                           s[k].dominant_period ? s[k].dominant_period->period : 0.0, 0.0, Relation::info});
    }
    const bool have_periods = s[0].dominant_period && s[1].dominant_period;
    r.items.push_back({"peak-to-trough ratio 0.6/0.2", s[1].peak_to_trough / s[0].peak_to_trough, 1.0, Relation::lt});
    r.items.push_back({"period ratio 0.6/0.2",
                       have_periods ? s[1].dominant_period->period / s[0].dominant_period->period : INFINITY, 1.0,
                       Relation::lt});
    return r;
}

CriterionResult check_ground_state_oscillation()
{
    CriterionResult r{"AC8", "fig5 excitation of an initially unexcited atom (delta=0.5 omega0)", {}, {}};
    const auto p = ModelParams::from_detuning(20.0, 10.0, 1.0);
    const auto grid = default_grid(p, 6.0);
    const auto ground = make_atom_state(InitialKind::ground);
    const auto fac = excited_population(propagate_factored(ground, p, grid));
    const auto dir = excited_population(propagate_direct(ground, p, grid));
    const double max_fac = *std::max_element(fac.p_excited.begin(), fac.p_excited.end());
    const double max_dir = *std::max_element(dir.p_excited.begin(), dir.p_excited.end());
    const double threshold = 2.0 / (p.bigdelta() * p.bigdelta());

    r.items.push_back({"omega0=20g max P_e (factored)", max_fac, threshold, Relation::gt});
    r.items.push_back({"omega0=20g |max factored - max direct|", std::abs(max_fac - max_dir), 1e-6, Relation::le});

    double jc_max = 0.0;
    for (double t : fac.times) {
        jc_max = std::max(jc_max, std::abs(jc_excited_probability(p, t, InitialKind::ground).p_excited));
    }
    r.items.push_back({"J-C max |P_e|", jc_max, 0.0, Relation::le});

    const auto strong = factored_population(10.0, 5.0, 6.0, InitialKind::ground);
    const double max_strong = *std::max_element(strong.p_excited.begin(), strong.p_excited.end());
    r.items.push_back({"omega0=10g max P_e", max_strong, 0.0, Relation::info});
    r.items.push_back({"max P_e(10g) - max P_e(20g)", max_strong - max_fac, 0.0, Relation::gt});
    return r;
}

CriterionResult check_oracle_short_time()
{
    CriterionResult r{"AC9", "master equation vs full Rabi oracle, fig2 regime", {}, {}};
    const auto p = kRegimes[1].params();
    const auto grid = default_grid(p, 6.0);
    const auto pe = excited_population(propagate_factored(make_atom_state(InitialKind::excited), p, grid));
    const auto oracle =
        oracle_atom_trajectory(p, kDefaultNmax, CouplingMode::full, make_atom_state(InitialKind::excited), pe.times);

    double short_gap = 0.0, long_gap = 0.0, t_long = 0.0;
    for (std::size_t i = 0; i < pe.times.size(); ++i) {
        const double d = std::abs(pe.p_excited[i] - oracle[i].rho11());
        if (pe.times[i] <= 0.3 + 1e-12) short_gap = std::max(short_gap, d);
        if (d > long_gap) {
            long_gap = d;
            t_long = pe.times[i];
        }
    }
    r.items.push_back({"max |P_factored - P_oracle|, g*t<=0.3", short_gap, 5e-3, Relation::le});
    r.items.push_back({"max |P_factored - P_oracle|, g*t<=6 (reported)", long_gap, 0.0, Relation::info});
    r.items.push_back({"g*t of largest gap (reported)", t_long, 0.0, Relation::info});
    r.notes.push_back("the time-local master equation departs from the full Rabi dynamics at g*t >~ 1; "
                      "the gap is reported, not asserted");
    return r;
}

CriterionResult check_oracle_internal(const CheckOptions& opts)
{
    CriterionResult r{"AC10", "oracle norm, parity and truncation convergence", {}, {}};
    const auto times = linspace(6.0, 601);

    for (int k : {0, 1}) {
        const auto& reg = kRegimes[k];
        const auto H = build_hamiltonian(reg.params(), kDefaultNmax, CouplingMode::full);
        const auto psi0 = JointState::basis(AtomLevel::excited, 0, kDefaultNmax);
        double norm = 0.0, parity = 0.0;
        for (const auto& psi : evolve(psi0, H, times)) {
            norm = std::max(norm, psi.norm_error());
            parity = std::max(parity, std::abs(parity_expectation(psi) + 1.0));
        }
        r.items.push_back({fmt::format("{} max |norm-1|", reg.name), norm, 1e-12, Relation::le});
        r.items.push_back({fmt::format("{} max |<parity>+1|", reg.name), parity, 1e-10, Relation::le});
    }

    for (const auto& reg : kRegimes) {
        const auto rep = truncation_check(reg.params(), opts.truncation_n_max, times);
        r.items.push_back({fmt::format("{} truncation delta n_max {}->{}", reg.name, rep.n_max, rep.n_max_reference),
                           rep.max_difference, 1e-6, Relation::le});
    }
    return r;
}

CriterionResult check_hermiticity_and_reality()
{
    CriterionResult r{"INV", "Hermiticity and real populations from a coherent start", {}, {}};
    Eigen::Matrix2cd sup;
    sup << 0.5, cplx(0.3, 0.2), cplx(0.3, -0.2), 0.5;
    const auto s = make_atom_state(InitialKind::custom, sup);
    double herm = 0.0, imag = 0.0;
    for (const auto& reg : kRegimes) {
        const auto p = reg.params();
        const auto grid = default_grid(p, 6.0);
        for (const auto& traj : {propagate_factored(s, p, grid), propagate_direct(s, p, grid)}) {
            herm = std::max(herm, traj.max_hermiticity_error());
            for (const auto& rec : traj.records) imag = std::max(imag, rec.state.population_imag());
        }
    }
    r.items.push_back({"max |rho10 - conj(rho01)|, both paths", herm, 1e-8, Relation::le});
    r.items.push_back({"max |Im rho11|, |Im rho00|, both paths", imag, 1e-12, Relation::le});
    return r;
}

std::vector<CriterionResult> run_suite(Suite suite, const CheckOptions& opts)
{
    std::vector<CriterionResult> out;
    const bool all = suite == Suite::all;
    if (all || suite == Suite::invariants) {
        out.push_back(check_identity_and_trace());
        out.push_back(check_splitting_exactness());
        out.push_back(check_gamma_quadrature());
        out.push_back(check_hermiticity_and_reality());
    }
    if (all || suite == Suite::oracle) out.push_back(check_jc_baseline());
    if (all || suite == Suite::figures) {
        out.push_back(check_figure1_damping());
        out.push_back(check_detuning_frequency());
        out.push_back(check_figure4_ordering());
        out.push_back(check_ground_state_oscillation());
    }
    if (all || suite == Suite::oracle) {
        out.push_back(check_oracle_short_time());
        out.push_back(check_oracle_internal(opts));
    }
    return out;
}

void print_report(std::ostream& os, const std::vector<CriterionResult>& results, bool verbose)
{
    static constexpr const char* rel[] = {"<=", "<", ">=", ">", ""};
    std::size_t failed = 0;
    for (const auto& c : results) {
        if (!c.passed()) ++failed;
        os << fmt::format("[{}] {:<5} {}\n", c.passed() ? "PASS" : "FAIL", c.id, c.title);
        if (!verbose && c.passed()) continue;
        for (const auto& m : c.items) {
            if (m.relation == Relation::info) {
                os << fmt::format("         {:<52} {:.6g}\n", m.label, m.value);
            } else {
                os << fmt::format("    {} {:<52} {:.6g} {} {:.6g}\n", m.passed() ? "ok " : "BAD", m.label, m.value,
                                  rel[static_cast<int>(m.relation)], m.limit);
            }
        }
        for (const auto& n : c.notes) os << "         note: " << n << '\n';
    }
    os << fmt::format("{} of {} criteria passed\n", results.size() - failed, results.size());
}

}  // namespace rabi
