#include "rabi/propagator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "rabi/rk4.hpp"

namespace rabi {

TimeGrid TimeGrid::covering(double t_max, double dt_max)
{
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max must be > 0");
    if (!(dt_max > 0.0) || !std::isfinite(dt_max)) throw ValidationError("dt must be > 0");
    // The small slack keeps t_max/dt = 600 from becoming 601 steps.
    const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt_max * (1.0 - 1e-12)));
    const std::size_t n = std::max<std::size_t>(steps, 1);
    return TimeGrid(t_max / static_cast<double>(n), n);
}

double default_step(const ModelParams& params)
{
    const double omega_rabi = std::hypot(params.delta(), 2.0 * params.g());
    const double fastest =
        std::max({params.bigdelta(), std::abs(params.delta()), omega_rabi, params.g()});
    return 2.0 * std::numbers::pi / fastest / 200.0;
}

RiccatiDivergence::RiccatiDivergence(double time, const std::string& what)
    : std::runtime_error(what), time_(time)
{
}

namespace {

using JVec = Eigen::Vector3cd;  // (j+, j0, j-)
using KVec = Eigen::Vector3d;   // (k+, k0, k-)

// X+' = mu+ - mu- X+^2 + mu0 X+,  X0' = mu0 - 2 mu- X+,  X-' = mu- e^{X0}
template <class Vec, class Scalar>
Vec riccati_rhs(const Vec& X, Scalar mu0, Scalar mu_plus, Scalar mu_minus)
{
    Vec d;
    d(0) = mu_plus - mu_minus * X(0) * X(0) + mu0 * X(0);
    d(1) = mu0 - 2.0 * mu_minus * X(0);
    d(2) = mu_minus * std::exp(X(1));
    return d;
}

RiccatiState to_state(const JVec& j, const KVec& k)
{
    return RiccatiState{j(0), j(1), j(2), k(0), k(1), k(2)};
}

std::array<CoefficientSet, 3> step_nodes(const ModelParams& params, double t, double h)
{
    return {evaluate_coefficients(params, t), evaluate_coefficients(params, t + 0.5 * h),
            evaluate_coefficients(params, t + h)};
}

TrajectoryRecord make_record(const Eigen::Matrix2cd& rho)
{
    TrajectoryRecord rec;
    rec.state = AtomState::unchecked(rho);
    rec.p_excited = rec.state.rho11();
    rec.trace_error = rec.state.trace_error();
    rec.hermiticity_error = rec.state.hermiticity_error();
    return rec;
}

}  // namespace

std::vector<RiccatiState> integrate_riccati(const ModelParams& params, const TimeGrid& grid)
{
    std::vector<RiccatiState> out;
    out.reserve(grid.size());

    JVec j = JVec::Zero();
    KVec k = KVec::Zero();
    out.push_back(to_state(j, k));

    const double h = grid.dt() / kRiccatiSubsteps;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        for (int sub = 0; sub < kRiccatiSubsteps; ++sub) {
            const double t = grid.time(i) + sub * h;
            const auto nodes = step_nodes(params, t, h);

            j = detail::rk4_step(j, h, [&](int node, const JVec& X) {
                const auto& c = nodes[node];
                return riccati_rhs(X, c.eps0, c.eps_plus, c.eps_minus);
            });
            k = detail::rk4_step(k, h, [&](int node, const KVec& X) {
                const auto& c = nodes[node];
                return riccati_rhs(X, c.nu0, c.nu_plus, c.nu_minus);
            });
        }

        const double t_next = grid.time(i + 1);
        if (!j.allFinite() || !k.allFinite() || std::abs(j(0)) > kRiccatiOverflowGuard ||
            std::abs(k(0)) > kRiccatiOverflowGuard) {
            throw RiccatiDivergence(
                t_next, fmt::format("Riccati system diverged at t = {:.6g} (|j+| = {:.3g}, |k+| = {:.3g}); "
                                    "use the direct propagator for this regime",
                                    t_next, std::abs(j(0)), std::abs(k(0))));
        }
        out.push_back(to_state(j, k));
    }
    return out;
}

MapCoefficients assemble_map(const RiccatiState& s, double gamma_k)
{
    MapCoefficients m;
    const double ek_half = std::exp(0.5 * s.k_0);
    const double ek_mhalf = std::exp(-0.5 * s.k_0);
    const cplx ej_half = std::exp(0.5 * s.j_0);
    const cplx ej_mhalf = std::exp(-0.5 * s.j_0);

    m.l = ek_half + ek_mhalf * s.k_plus * s.k_minus;
    m.m = ek_mhalf * s.k_plus;
    m.n = ek_mhalf;
    m.p = ek_mhalf * s.k_minus;
    m.q = ej_mhalf;
    m.r = ej_mhalf * s.j_minus;
    m.x = ej_half + ej_mhalf * s.j_plus * s.j_minus;
    m.y = ej_mhalf * s.j_plus;
    m.gamma_k = gamma_k;
    return m;
}

Eigen::Matrix2cd apply_map(const MapCoefficients& map, const Eigen::Matrix2cd& rho0)
{
    const cplx r11 = rho0(0, 0);
    const cplx r00 = rho0(1, 1);
    const cplx r10 = rho0(0, 1);
    const cplx r01 = rho0(1, 0);
    const double decay = std::exp(-map.gamma_k);

    Eigen::Matrix2cd rho;
    rho(0, 0) = decay * (map.l * r11 + map.m * r00);
    rho(1, 1) = decay * (map.n * r00 + map.p * r11);
    rho(0, 1) = decay * (map.x * r10 + map.y * r01);
    rho(1, 0) = decay * (map.q * r01 + map.r * r10);
    return rho;
}

Eigen::Matrix2cd generator(const CoefficientSet& c, const Eigen::Matrix2cd& rho)
{
    static const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1.0, 0.0, 0.0, -1.0).finished();
    static const Eigen::Matrix2cd sp = (Eigen::Matrix2cd() << 0.0, 1.0, 0.0, 0.0).finished();
    static const Eigen::Matrix2cd sm = sp.transpose();
    static const Eigen::Matrix2cd proj_e = sp * sm;

    const Eigen::Matrix2cd J0 = 0.25 * (sz * rho - rho * sz);
    const Eigen::Matrix2cd Jp = sp * rho * sp;
    const Eigen::Matrix2cd Jm = sm * rho * sm;
    const Eigen::Matrix2cd K0 = 0.5 * (proj_e * rho + rho * proj_e - rho);
    const Eigen::Matrix2cd Kp = sp * rho * sm;
    const Eigen::Matrix2cd Km = sm * rho * sp;

    return c.eps0 * J0 + c.eps_plus * Jp + c.eps_minus * Jm - c.gamma_k_dot * rho +
           c.nu0 * K0 + c.nu_plus * Kp + c.nu_minus * Km;
}

double Trajectory::max_trace_error() const
{
    double e = 0.0;
    for (const auto& r : records) e = std::max(e, r.trace_error);
    return e;
}

double Trajectory::max_hermiticity_error() const
{
    double e = 0.0;
    for (const auto& r : records) e = std::max(e, r.hermiticity_error);
    return e;
}

Trajectory propagate_factored(const AtomState& rho0, const ModelParams& params, const TimeGrid& grid)
{
    const auto riccati = integrate_riccati(params, grid);

    Trajectory traj{params, grid, PropagationPath::factored, {}, false, {}};
    traj.records.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double gamma_k = evaluate_coefficients(params, grid.time(i)).gamma_k;
        const MapCoefficients map = assemble_map(riccati[i], gamma_k);
        auto rec = make_record(i == 0 ? rho0.matrix() : apply_map(map, rho0.matrix()));
        rec.map = map;
        traj.records.push_back(std::move(rec));
    }
    return traj;
}

Trajectory propagate_direct(const AtomState& rho0, const ModelParams& params, const TimeGrid& grid)
{
    Trajectory traj{params, grid, PropagationPath::direct, {}, false, {}};
    traj.records.reserve(grid.size());

    Eigen::Matrix2cd rho = rho0.matrix();
    traj.records.push_back(make_record(rho));

    const double h = grid.dt();
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const auto nodes = step_nodes(params, grid.time(i), h);
        rho = detail::rk4_step(rho, h, [&](int node, const Eigen::Matrix2cd& r) {
            return generator(nodes[node], r);
        });
        traj.records.push_back(make_record(rho));
    }
    return traj;
}

Trajectory propagate_factored_with_fallback(const AtomState& rho0,
                                            const ModelParams& params,
                                            const TimeGrid& grid)
{
    try {
        return propagate_factored(rho0, params, grid);
    } catch (const RiccatiDivergence& e) {
        Trajectory traj = propagate_direct(rho0, params, grid);
        traj.fallback_used = true;
        traj.fallback_reason = e.what();
        return traj;
    }
}

PopulationSeries excited_population(const Trajectory& traj)
{
    PopulationSeries s;
    const std::size_t n = traj.records.size();
    s.times.reserve(n);
    s.p_excited.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.times.push_back(traj.grid.time(i));
        s.p_excited.push_back(traj.records[i].p_excited);
    }
    if (n > 0 && traj.records.front().map) {
        std::vector<double> l, m;
        l.reserve(n);
        m.reserve(n);
        for (const auto& r : traj.records) {
            l.push_back(r.map->l);
            m.push_back(r.map->m);
        }
        s.l_raw = std::move(l);
        s.m_raw = std::move(m);
    }
    return s;
}

}  // namespace rabi
