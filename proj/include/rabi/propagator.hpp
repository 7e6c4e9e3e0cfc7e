// propagator.hpp — atomic density matrix evolution under the vacuum master
// equation, computed two ways:
//
//   factored  the disentangled map. Two Riccati systems (one per sub-block of
//             the density matrix) are integrated and assembled into the eight
//             map coefficients l, m, n, p, q, r, x, y; the scalar e^{-Gamma_k}
//             is applied from its closed form.
//   direct    the generator is applied literally to the 2x2 matrix with the
//             J and K superoperators and integrated with the same RK4 scheme.
//
// Both paths share a uniform TimeGrid and return a Trajectory whose first
// record is the initial state itself.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

/// Uniform grid t_i = i * dt, i = 0..steps.
class TimeGrid {
public:
    /// Smallest uniform grid on [0, t_max] with spacing <= dt_max.
    static TimeGrid covering(double t_max, double dt_max);

    double dt() const { return dt_; }
    std::size_t steps() const { return steps_; }
    std::size_t size() const { return steps_ + 1; }
    double t_max() const { return dt_ * static_cast<double>(steps_); }
    double time(std::size_t i) const { return dt_ * static_cast<double>(i); }

    bool operator==(const TimeGrid&) const = default;

private:
    TimeGrid(double dt, std::size_t steps) : dt_(dt), steps_(steps) {}
    double dt_;
    std::size_t steps_;
};

/// Default step: 1/200 of the shortest period among Delta, |delta|, Omega, g.
double default_step(const ModelParams& params);

/// Disentangling variables. The k system is real because its coefficients are.
struct RiccatiState {
    cplx j_plus{};
    cplx j_0{};
    cplx j_minus{};
    double k_plus = 0.0;
    double k_0 = 0.0;
    double k_minus = 0.0;
};

struct MapCoefficients {
    double l = 1.0;
    double m = 0.0;
    double n = 1.0;
    double p = 0.0;
    cplx q{1.0, 0.0};
    cplx r{};
    cplx x{1.0, 0.0};
    cplx y{};
    double gamma_k = 0.0;
};

/// The j or k Riccati system left the representable range.
class RiccatiDivergence : public std::runtime_error {
public:
    RiccatiDivergence(double time, const std::string& what);
    double time() const { return time_; }

private:
    double time_;
};

/// |j+| or |k+| above this is reported as divergence.
inline constexpr double kRiccatiOverflowGuard = 1e12;

/// RK4 steps per grid interval in integrate_riccati. The j system rotates at
/// about 2*omega0, twice the coherence frequency the grid is sized for.
inline constexpr int kRiccatiSubsteps = 2;

/// Integrates both Riccati systems from the all-zero state with
/// kRiccatiSubsteps RK4 steps per grid interval, coefficients evaluated in
/// closed form at each stage time.
/// Throws RiccatiDivergence on blow-up.
std::vector<RiccatiState> integrate_riccati(const ModelParams& params, const TimeGrid& grid);

MapCoefficients assemble_map(const RiccatiState& s, double gamma_k);

/// Applies e^{-Gamma_k} times the map to rho0.
Eigen::Matrix2cd apply_map(const MapCoefficients& map, const Eigen::Matrix2cd& rho0);

enum class PropagationPath { factored, direct };

struct TrajectoryRecord {
    AtomState state;
    double p_excited = 0.0;
    std::optional<MapCoefficients> map;  // factored path only
    double trace_error = 0.0;
    double hermiticity_error = 0.0;
};

struct Trajectory {
    ModelParams params;
    TimeGrid grid;
    PropagationPath path = PropagationPath::direct;
    std::vector<TrajectoryRecord> records;
    bool fallback_used = false;
    std::string fallback_reason;

    double max_trace_error() const;
    double max_hermiticity_error() const;
};

Trajectory propagate_factored(const AtomState& rho0, const ModelParams& params, const TimeGrid& grid);
Trajectory propagate_direct(const AtomState& rho0, const ModelParams& params, const TimeGrid& grid);

/// Factored path; on Riccati divergence falls back to the direct path and
/// records the reason in the trajectory.
Trajectory propagate_factored_with_fallback(const AtomState& rho0,
                                            const ModelParams& params,
                                            const TimeGrid& grid);

/// The master-equation generator applied to rho at time t.
Eigen::Matrix2cd generator(const CoefficientSet& c, const Eigen::Matrix2cd& rho);

struct PopulationSeries {
    std::vector<double> times;
    std::vector<double> p_excited;
    /// Raw map entries without the e^{-Gamma_k} prefactor (factored path only).
    std::optional<std::vector<double>> l_raw;
    std::optional<std::vector<double>> m_raw;
};

PopulationSeries excited_population(const Trajectory& traj);

}  // namespace rabi
