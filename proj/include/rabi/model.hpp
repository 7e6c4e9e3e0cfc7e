// model.hpp — physical parameters, atom states and the closed-form
// time-dependent coefficients of the vacuum reduced master equation.

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rabi {

using cplx = std::complex<double>;

/// Raised when a parameter set, state or option violates one of its invariants.
/// The message names the violated field.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two-level atom coupled to one cavity mode, hbar = 1.
/// All three frequencies share one unit (usually multiples of g).
class ModelParams {
public:
    ModelParams(double omega0, double omega, double g);

    /// Builds from atomic frequency and detuning delta = omega0 - omega.
    static ModelParams from_detuning(double omega0, double delta, double g);

    double omega0() const { return omega0_; }
    double omega() const { return omega_; }
    double g() const { return g_; }
    /// omega0 - omega
    double delta() const { return omega0_ - omega_; }
    /// omega0 + omega
    double bigdelta() const { return omega0_ + omega_; }

private:
    double omega0_;
    double omega_;
    double g_;
};

/// 2x2 atomic density matrix. Basis order is (excited, ground), so
/// entry (0,0) is the excited-state population rho^11.
///
/// Validated states come from make_atom_state(). Propagated states are
/// wrapped unchecked so that numerical drift stays observable.
class AtomState {
public:
    AtomState() = default;

    static AtomState unchecked(const Eigen::Matrix2cd& rho) { return AtomState(rho); }

    const Eigen::Matrix2cd& matrix() const { return rho_; }

    double rho11() const { return rho_(0, 0).real(); }
    double rho00() const { return rho_(1, 1).real(); }
    cplx rho10() const { return rho_(0, 1); }
    cplx rho01() const { return rho_(1, 0); }

    double trace_error() const { return std::abs(rho_.trace() - 1.0); }
    double hermiticity_error() const { return std::abs(rho_(0, 1) - std::conj(rho_(1, 0))); }
    /// Largest imaginary part on the diagonal.
    double population_imag() const
    {
        return std::max(std::abs(rho_(0, 0).imag()), std::abs(rho_(1, 1).imag()));
    }

private:
    explicit AtomState(const Eigen::Matrix2cd& rho) : rho_(rho) {}
    Eigen::Matrix2cd rho_ = Eigen::Matrix2cd::Zero();
};

enum class InitialKind { excited, ground, custom };

/// Validating factory. For `custom`, rho must be Hermitian with unit trace
/// (tolerance 1e-12); otherwise the argument is ignored.
AtomState make_atom_state(InitialKind kind, const Eigen::Matrix2cd& rho = Eigen::Matrix2cd::Zero());

/// Every time-dependent scalar of the vacuum master equation at one instant.
///
/// alpha is the counter-rotating memory kernel, f the rotating one;
/// alpha_tilde and F_int are their integrals from 0 to t.
struct CoefficientSet {
    cplx alpha{};
    cplx f{};
    cplx alpha_tilde{};
    cplx F_int{};
    cplx eps0{};
    cplx eps_plus{};
    cplx eps_minus{};
    double nu0 = 0.0;
    double nu_plus = 0.0;
    double nu_minus = 0.0;
    double gamma_k = 0.0;
    double gamma_k_dot = 0.0;
};

/// |x| below which the kernels switch to their Taylor series in x = freq*t.
inline constexpr double kSeriesThreshold = 1e-3;

/// (e^{i w t} - 1) / (i w), continuous through w = 0.
cplx memory_kernel(double w, double t);
/// Integral of memory_kernel over [0, t]: (1 + i w t - e^{i w t}) / w^2.
cplx memory_kernel_integral(double w, double t);

/// Closed-form forms used above the series threshold. Exposed for the splice test.
cplx memory_kernel_closed(double w, double t);
cplx memory_kernel_integral_closed(double w, double t);
cplx memory_kernel_series(double w, double t);
cplx memory_kernel_integral_series(double w, double t);

CoefficientSet evaluate_coefficients(const ModelParams& params, double t);

}  // namespace rabi
