// fock_oracle.hpp — brute-force reference: the full Rabi Hamiltonian (or its
// rotating-wave part) in a truncated Fock basis, evolved exactly through one
// Hermitian eigendecomposition.
//
// Joint basis index = level * (n_max + 1) + n with level 0 = excited,
// 1 = ground, matching the (excited, ground) order of AtomState.

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rabi/model.hpp"

namespace rabi {

enum class CouplingMode { full, rwa };
enum class AtomLevel { excited = 0, ground = 1 };

/// Default photon-number cutoff.
inline constexpr int kDefaultNmax = 16;

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct JointState {
    Eigen::VectorXcd amplitudes;
    int n_max = 0;

    static JointState basis(AtomLevel level, int photons, int n_max);
    static std::size_t index(AtomLevel level, int photons, int n_max);
    int dim() const { return static_cast<int>(amplitudes.size()); }
    double norm_error() const { return std::abs(amplitudes.squaredNorm() - 1.0); }
};

struct RabiHamiltonian {
    Eigen::MatrixXcd matrix;
    CouplingMode mode = CouplingMode::full;
    int n_max = 0;
};

/// H = omega0 sz/2 + omega a^dag a + coupling; coupling is
/// g (s+ + s-)(a^dag + a) in full mode and g (s+ a + s- a^dag) in rwa mode.
RabiHamiltonian build_hamiltonian(const ModelParams& params, int n_max, CouplingMode mode);

/// exp(-iHt) from one eigendecomposition, reusable for any number of times.
class FockPropagator {
public:
    explicit FockPropagator(const RabiHamiltonian& H);

    JointState at(const JointState& psi0, double t) const;
    const Eigen::VectorXd& eigenvalues() const { return energies_; }
    const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

private:
    int n_max_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

std::vector<JointState> evolve(const JointState& psi0, const RabiHamiltonian& H,
                               std::span<const double> times);

/// Partial trace over the field.
AtomState reduced_atom_state(const JointState& psi);

/// <psi| (-1)^{n + level} |psi>, level excited = 1, ground = 0.
double parity_expectation(const JointState& psi);

/// Reduced atomic states for rho0 (x) |vacuum><vacuum|. Mixed rho0 is split
/// into its eigencomponents, each evolved as a pure joint state.
std::vector<AtomState> oracle_atom_trajectory(const ModelParams& params, int n_max, CouplingMode mode,
                                              const AtomState& rho0, std::span<const double> times);

struct TruncationReport {
    int n_max = 0;
    int n_max_reference = 0;
    double max_difference = 0.0;
    double t_of_max = 0.0;
};

/// max_t |P_e(n_max) - P_e(2 n_max)| for the given start.
TruncationReport truncation_check(const ModelParams& params, int n_max, std::span<const double> times,
                                  CouplingMode mode = CouplingMode::full,
                                  InitialKind init = InitialKind::excited);

}  // namespace rabi
