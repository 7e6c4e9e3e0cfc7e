#include "rabi/fock_oracle.hpp"

#include <cmath>
#include <string>

#include <fmt/format.h>

namespace rabi {

std::size_t JointState::index(AtomLevel level, int photons, int n_max)
{
    return static_cast<std::size_t>(static_cast<int>(level) * (n_max + 1) + photons);
}

JointState JointState::basis(AtomLevel level, int photons, int n_max)
{
    if (n_max < 0 || photons < 0 || photons > n_max) {
        throw ValidationError(fmt::format("photon number {} outside [0, {}]", photons, n_max));
    }
    JointState s;
    s.n_max = n_max;
    s.amplitudes = Eigen::VectorXcd::Zero(2 * (n_max + 1));
    s.amplitudes(static_cast<Eigen::Index>(index(level, photons, n_max))) = 1.0;
    return s;
}

RabiHamiltonian build_hamiltonian(const ModelParams& params, int n_max, CouplingMode mode)
{
    if (n_max < 0) throw ValidationError("n_max must be >= 0");
    if (n_max == 0 && mode == CouplingMode::full) {
        throw ValidationError("n_max must be >= 1 in full mode (counter-rotating coupling needs one photon)");
    }
    const int dim = 2 * (n_max + 1);
    const auto e = [&](int n) { return static_cast<Eigen::Index>(JointState::index(AtomLevel::excited, n, n_max)); };
    const auto gr = [&](int n) { return static_cast<Eigen::Index>(JointState::index(AtomLevel::ground, n, n_max)); };

    RabiHamiltonian H;
    H.mode = mode;
    H.n_max = n_max;
    H.matrix = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n <= n_max; ++n) {
        H.matrix(e(n), e(n)) = 0.5 * params.omega0() + params.omega() * n;
        H.matrix(gr(n), gr(n)) = -0.5 * params.omega0() + params.omega() * n;
    }
    const double g = params.g();
    for (int n = 0; n < n_max; ++n) {
        const double amp = g * std::sqrt(static_cast<double>(n + 1));
        // s+ a : |g, n+1> -> |e, n>
        H.matrix(e(n), gr(n + 1)) = amp;
        H.matrix(gr(n + 1), e(n)) = amp;
        if (mode == CouplingMode::full) {
            // s+ a^dag : |g, n> -> |e, n+1>
            H.matrix(e(n + 1), gr(n)) = amp;
            H.matrix(gr(n), e(n + 1)) = amp;
        }
    }
    return H;
}

FockPropagator::FockPropagator(const RabiHamiltonian& H) : n_max_(H.n_max)
{
    if (!H.matrix.allFinite()) throw OracleError("Hamiltonian has non-finite entries");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H.matrix);
    if (solver.info() != Eigen::Success) throw OracleError("eigendecomposition failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

JointState FockPropagator::at(const JointState& psi0, double t) const
{
    if (psi0.dim() != vectors_.rows()) {
        throw ValidationError(fmt::format("state dimension {} does not match Hamiltonian dimension {}",
                                          psi0.dim(), vectors_.rows()));
    }
    Eigen::VectorXcd c = vectors_.adjoint() * psi0.amplitudes;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        c(i) *= std::polar(1.0, -energies_(i) * t);
    }
    JointState out;
    out.n_max = n_max_;
    out.amplitudes = vectors_ * c;
    return out;
}

std::vector<JointState> evolve(const JointState& psi0, const RabiHamiltonian& H,
                               std::span<const double> times)
{
    const FockPropagator U(H);
    std::vector<JointState> out;
    out.reserve(times.size());
    for (double t : times) {
        out.push_back(t == 0.0 ? psi0 : U.at(psi0, t));
    }
    return out;
}

AtomState reduced_atom_state(const JointState& psi)
{
    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    const int n_max = psi.n_max;
    for (int n = 0; n <= n_max; ++n) {
        const cplx ae = psi.amplitudes(static_cast<Eigen::Index>(JointState::index(AtomLevel::excited, n, n_max)));
        const cplx ag = psi.amplitudes(static_cast<Eigen::Index>(JointState::index(AtomLevel::ground, n, n_max)));
        rho(0, 0) += std::norm(ae);
        rho(1, 1) += std::norm(ag);
        rho(0, 1) += ae * std::conj(ag);
    }
    rho(1, 0) = std::conj(rho(0, 1));
    return AtomState::unchecked(rho);
}

double parity_expectation(const JointState& psi)
{
    double p = 0.0;
    const int n_max = psi.n_max;
    for (int level = 0; level < 2; ++level) {
        // excited (index 0) counts as one excitation
        const int atom_excitations = level == 0 ? 1 : 0;
        for (int n = 0; n <= n_max; ++n) {
            const double sign = (n + atom_excitations) % 2 == 0 ? 1.0 : -1.0;
            p += sign * std::norm(psi.amplitudes(level * (n_max + 1) + n));
        }
    }
    return p;
}

std::vector<AtomState> oracle_atom_trajectory(const ModelParams& params, int n_max, CouplingMode mode,
                                              const AtomState& rho0, std::span<const double> times)
{
    const FockPropagator U(build_hamiltonian(params, n_max, mode));

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> mix(rho0.matrix());
    std::vector<Eigen::Matrix2cd> acc(times.size(), Eigen::Matrix2cd::Zero());
    for (int k = 0; k < 2; ++k) {
        const double weight = mix.eigenvalues()(k);
        if (weight <= 0.0) continue;
        JointState psi0;
        psi0.n_max = n_max;
        psi0.amplitudes = Eigen::VectorXcd::Zero(2 * (n_max + 1));
        psi0.amplitudes(static_cast<Eigen::Index>(JointState::index(AtomLevel::excited, 0, n_max))) =
            mix.eigenvectors()(0, k);
        psi0.amplitudes(static_cast<Eigen::Index>(JointState::index(AtomLevel::ground, 0, n_max))) =
            mix.eigenvectors()(1, k);
        for (std::size_t i = 0; i < times.size(); ++i) {
            acc[i] += weight * reduced_atom_state(U.at(psi0, times[i])).matrix();
        }
    }

    std::vector<AtomState> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        out.push_back(times[i] == 0.0 ? rho0 : AtomState::unchecked(acc[i]));
    }
    return out;
}

TruncationReport truncation_check(const ModelParams& params, int n_max, std::span<const double> times,
                                  CouplingMode mode, InitialKind init)
{
    if (n_max < 1) throw ValidationError("n_max must be >= 1 for a truncation check");
    const AtomState rho0 = make_atom_state(init);
    const auto coarse = oracle_atom_trajectory(params, n_max, mode, rho0, times);
    const auto fine = oracle_atom_trajectory(params, 2 * n_max, mode, rho0, times);

    TruncationReport rep;
    rep.n_max = n_max;
    rep.n_max_reference = 2 * n_max;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = std::abs(coarse[i].rho11() - fine[i].rho11());
        if (d > rep.max_difference) {
            rep.max_difference = d;
            rep.t_of_max = times[i];
        }
    }
    return rep;
}

}  // namespace rabi
