#include "rabi/model.hpp"

#include <cmath>
#include <string>

namespace rabi {

namespace {

void require_finite(double v, const char* name)
{
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

}  // namespace

ModelParams::ModelParams(double omega0, double omega, double g)
    : omega0_(omega0), omega_(omega), g_(g)
{
    require_finite(omega0, "omega0");
    require_finite(omega, "omega");
    require_finite(g, "g");
    if (omega0 <= 0.0) throw ValidationError("omega0 must be > 0");
    if (omega <= 0.0) throw ValidationError("omega must be > 0");
    if (g < 0.0) throw ValidationError("g must be >= 0");
}

ModelParams ModelParams::from_detuning(double omega0, double delta, double g)
{
    require_finite(delta, "delta");
    return ModelParams(omega0, omega0 - delta, g);
}

AtomState make_atom_state(InitialKind kind, const Eigen::Matrix2cd& rho)
{
    constexpr double tol = 1e-12;
    switch (kind) {
    case InitialKind::excited: {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        m(0, 0) = 1.0;
        return AtomState::unchecked(m);
    }
    case InitialKind::ground: {
        Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
        m(1, 1) = 1.0;
        return AtomState::unchecked(m);
    }
    case InitialKind::custom:
        break;
    }
    if (!rho.allFinite()) throw ValidationError("custom state: entries must be finite");
    if (std::abs(rho(0, 0).imag()) > tol || std::abs(rho(1, 1).imag()) > tol) {
        throw ValidationError("custom state: not Hermitian (populations must be real)");
    }
    if (std::abs(rho(0, 1) - std::conj(rho(1, 0))) > tol) {
        throw ValidationError("custom state: not Hermitian (rho10 != conj(rho01))");
    }
    if (std::abs(rho(0, 0).real() + rho(1, 1).real() - 1.0) > tol) {
        throw ValidationError("custom state: trace must be 1");
    }
    Eigen::Matrix2cd m = rho;
    m(0, 0) = rho(0, 0).real();
    m(1, 1) = rho(1, 1).real();
    m(1, 0) = std::conj(rho(0, 1));
    return AtomState::unchecked(m);
}

// With x = w t:
//   kernel   = t * (e^{ix} - 1)/(ix)       = t * sum_k (ix)^k / (k+1)!
//   integral = t^2 * (1 + ix - e^{ix})/x^2 = t^2 * sum_k -(i)^{k+2} x^k / (k+2)!
// The closed forms avoid the cancellation in e^{ix} - 1 by writing
// cos x - 1 = -2 sin^2(x/2).

cplx memory_kernel_closed(double w, double t)
{
    const double x = w * t;
    const double s = std::sin(0.5 * x);
    return cplx(std::sin(x), 2.0 * s * s) / w;
}

cplx memory_kernel_integral_closed(double w, double t)
{
    const double x = w * t;
    const double s = std::sin(0.5 * x);
    return cplx(2.0 * s * s, x - std::sin(x)) / (w * w);
}

cplx memory_kernel_series(double w, double t)
{
    const double x = w * t;
    const double x2 = x * x;
    // 1 + ix/2 - x^2/6 - ix^3/24 + x^4/120 + ix^5/720
    const double re = 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    const double im = x * (0.5 - x2 / 24.0 + x2 * x2 / 720.0);
    return t * cplx(re, im);
}

cplx memory_kernel_integral_series(double w, double t)
{
    const double x = w * t;
    const double x2 = x * x;
    // 1/2 + ix/6 - x^2/24 - ix^3/120 + x^4/720 + ix^5/5040
    const double re = 0.5 - x2 / 24.0 + x2 * x2 / 720.0;
    const double im = x * (1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0);
    return t * t * cplx(re, im);
}

cplx memory_kernel(double w, double t)
{
    return std::abs(w * t) < kSeriesThreshold ? memory_kernel_series(w, t)
                                              : memory_kernel_closed(w, t);
}

cplx memory_kernel_integral(double w, double t)
{
    return std::abs(w * t) < kSeriesThreshold ? memory_kernel_integral_series(w, t)
                                              : memory_kernel_integral_closed(w, t);
}

CoefficientSet evaluate_coefficients(const ModelParams& params, double t)
{
    if (!std::isfinite(t)) throw ValidationError("t must be finite");
    if (t < 0.0) throw ValidationError("t must be >= 0");

    const double g2 = params.g() * params.g();
    CoefficientSet c;
    // alpha = (1 - e^{-i Delta t})/(i Delta) is the same kernel at frequency -Delta.
    c.alpha = memory_kernel(-params.bigdelta(), t);
    c.f = memory_kernel(params.delta(), t);
    c.alpha_tilde = memory_kernel_integral(-params.bigdelta(), t);
    c.F_int = memory_kernel_integral(params.delta(), t);

    const double aR = c.alpha.real();
    const double aI = c.alpha.imag();
    const double fR = c.f.real();
    const double fI = c.f.imag();

    c.eps0 = cplx(0.0, -2.0 * (params.omega0() - g2 * aI + g2 * fI));
    c.eps_plus = g2 * (c.alpha + std::conj(c.f));
    c.eps_minus = g2 * (std::conj(c.alpha) + c.f);
    c.nu0 = 2.0 * g2 * (aR - fR);
    c.nu_plus = 2.0 * g2 * aR;
    c.nu_minus = 2.0 * g2 * fR;
    c.gamma_k = g2 * (c.alpha_tilde.real() + c.F_int.real());
    c.gamma_k_dot = g2 * (aR + fR);
    return c;
}

}  // namespace rabi
