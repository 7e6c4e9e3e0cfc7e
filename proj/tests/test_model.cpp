#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "rabi/model.hpp"

using namespace rabi;
using rabi::testing::Gen;

namespace {

// Composite Simpson quadrature of the kernel, independent of the closed forms.
cplx integrate_kernel(double w, double t, int panels = 4000)
{
    auto k = [w](double s) {
        if (w == 0.0) return cplx(s, 0.0);
        return (std::exp(cplx(0.0, w * s)) - 1.0) / cplx(0.0, w);
    };
    const double h = t / panels;
    cplx sum = k(0.0) + k(t);
    for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4.0 : 2.0) * k(i * h);
    return sum * h / 3.0;
}

// Long-double evaluation of (e^{ix} - 1)/(iw) with the real part as
// -2 sin^2(x/2), which avoids the cancellation of the literal definition.
std::complex<long double> kernel_reference(long double w, long double t)
{
    using cl = std::complex<long double>;
    const long double x = w * t;
    const long double s = std::sin(x / 2.0L);
    return cl(-2.0L * s * s, std::sin(x)) / cl(0.0L, w);
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(ModelParams, RejectsNonPhysicalValues)
{
    EXPECT_THROW(ModelParams(0.0, 1.0, 1.0), ValidationError);
    EXPECT_THROW(ModelParams(1.0, -1.0, 1.0), ValidationError);
    EXPECT_THROW(ModelParams(1.0, 1.0, -0.1), ValidationError);
    EXPECT_THROW(ModelParams(std::nan(""), 1.0, 1.0), ValidationError);
    EXPECT_THROW(ModelParams(1.0, std::numeric_limits<double>::infinity(), 1.0), ValidationError);
    EXPECT_NO_THROW(ModelParams(1.0, 1.0, 0.0));
}

TEST(ModelParams, OmegaMessageNamesField)
{
    try {
        ModelParams::from_detuning(10.0, 11.0, 1.0);
        FAIL() << "expected ValidationError";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("omega"), std::string::npos);
    }
}

TEST(ModelParams, DetuningAccessors)
{
    const auto p = ModelParams::from_detuning(20.0, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(p.omega(), 18.0);
    EXPECT_DOUBLE_EQ(p.delta(), 2.0);
    EXPECT_DOUBLE_EQ(p.bigdelta(), 38.0);
}

TEST(Coefficients, AllVanishAtZeroExceptEps0)
{
    const ModelParams p(10.0, 9.0, 1.0);
    const auto c = evaluate_coefficients(p, 0.0);
    EXPECT_EQ(c.alpha, cplx(0.0));
    EXPECT_EQ(c.f, cplx(0.0));
    EXPECT_EQ(c.alpha_tilde, cplx(0.0));
    EXPECT_EQ(c.F_int, cplx(0.0));
    EXPECT_EQ(c.eps_plus, cplx(0.0));
    EXPECT_EQ(c.eps_minus, cplx(0.0));
    EXPECT_EQ(c.nu0, 0.0);
    EXPECT_EQ(c.nu_plus, 0.0);
    EXPECT_EQ(c.nu_minus, 0.0);
    EXPECT_EQ(c.gamma_k, 0.0);
    EXPECT_EQ(c.gamma_k_dot, 0.0);
    // The free atomic rotation survives at t = 0.
    EXPECT_EQ(c.eps0, cplx(0.0, -2.0 * p.omega0()));
}

TEST(Coefficients, ResonantRotatingKernelIsLinear)
{
    const auto p = ModelParams::from_detuning(10.0, 0.0, 1.0);
    for (double t : {0.0, 1e-6, 0.3, 2.0, 6.0}) {
        const auto c = evaluate_coefficients(p, t);
        EXPECT_EQ(c.f, cplx(t, 0.0));
        EXPECT_NEAR(c.F_int.real(), t * t / 2.0, 1e-15 * (1.0 + t * t));
        EXPECT_EQ(c.F_int.imag(), 0.0);
        EXPECT_NEAR(c.gamma_k, p.g() * p.g() * (c.alpha_tilde.real() + t * t / 2.0), 1e-14 * (1.0 + t * t));
    }
}

TEST(Coefficients, FullCounterRotatingPeriod)
{
    const ModelParams p(10.0, 8.0, 1.0);
    const double t = 2.0 * M_PI / p.bigdelta();
    const auto c = evaluate_coefficients(p, t);
    EXPECT_LT(std::abs(c.alpha), 1e-14);
    EXPECT_LT(std::abs(c.alpha_tilde.real()), 1e-15);
    EXPECT_NEAR(c.alpha_tilde.imag(), -2.0 * M_PI / (p.bigdelta() * p.bigdelta()), 1e-15);
}

TEST(Coefficients, KernelIntegralMatchesQuadrature)
{
    Gen gen(11);
    for (int i = 0; i < 40; ++i) {
        const double w = gen.uniform(-80.0, 80.0);
        const double t = gen.uniform(0.0, 3.0);
        EXPECT_LT(std::abs(memory_kernel_integral(w, t) - integrate_kernel(w, t)), 1e-10 * (1.0 + t * t))
            << "w=" << w << " t=" << t;
    }
}

TEST(Coefficients, IntegralDerivativeIsKernel)
{
    Gen gen(12);
    for (int i = 0; i < 40; ++i) {
        const double w = gen.uniform(-50.0, 50.0);
        const double t = gen.uniform(0.1, 5.0);
        const double h = 1e-4;
        const cplx fd = (memory_kernel_integral(w, t + h) - memory_kernel_integral(w, t - h)) / (2.0 * h);
        EXPECT_LT(std::abs(fd - memory_kernel(w, t)), 1e-6 * (1.0 + std::abs(w) * std::abs(w) * 1e-2));
    }
}

TEST(Coefficients, SeriesAgreesWithExtendedPrecisionNearZero)
{
    for (double x : {1e-9, 1e-7, 1e-5, 3e-4, 9e-4}) {
        const double w = 7.0;
        const double t = x / w;
        const auto ref = kernel_reference(w, t);
        const cplx r(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
        EXPECT_LT(rel(memory_kernel(w, t), r), 1e-14) << "x=" << x;
    }
}

TEST(Coefficients, SeriesClosedFormSplice)
{
    for (double w : {-40.0, -3.0, 0.5, 12.0}) {
        const double t = kSeriesThreshold / std::abs(w);
        for (double s : {0.999, 1.0, 1.001}) {
            EXPECT_LT(rel(memory_kernel_series(w, s * t), memory_kernel_closed(w, s * t)), 1e-12);
            EXPECT_LT(rel(memory_kernel_integral_series(w, s * t), memory_kernel_integral_closed(w, s * t)), 1e-12);
        }
        const double below = std::nextafter(t, 0.0);
        EXPECT_LT(rel(memory_kernel(w, below), memory_kernel(w, t)), 1e-12);
        EXPECT_LT(rel(memory_kernel_integral(w, below), memory_kernel_integral(w, t)), 1e-12);
    }
}

TEST(Coefficients, ConjugatePairsAndRealGenerators)
{
    Gen gen(13);
    for (int i = 0; i < 100; ++i) {
        const auto p = gen.params();
        const double t = gen.uniform(0.0, 8.0);
        const auto c = evaluate_coefficients(p, t);
        EXPECT_EQ(c.eps_minus, std::conj(c.eps_plus));
        EXPECT_EQ(c.eps0.real(), 0.0);
        EXPECT_TRUE(std::isfinite(c.nu0) && std::isfinite(c.nu_plus) && std::isfinite(c.nu_minus));
        EXPECT_NEAR(c.nu0, c.nu_plus - c.nu_minus, 1e-12 * (std::abs(c.nu_plus) + std::abs(c.nu_minus) + 1.0));
    }
}

TEST(Coefficients, KernelsDependOnOneFrequencyEach)
{
    // Same Delta, different delta.
    const ModelParams a(10.0, 5.0, 1.0), b(7.0, 8.0, 1.0);
    // Same delta, different Delta.
    const ModelParams c(10.0, 9.0, 1.0), d(30.0, 29.0, 1.0);
    for (double t : {0.1, 1.0, 4.0}) {
        EXPECT_EQ(evaluate_coefficients(a, t).alpha, evaluate_coefficients(b, t).alpha);
        EXPECT_NE(evaluate_coefficients(a, t).f, evaluate_coefficients(b, t).f);
        EXPECT_EQ(evaluate_coefficients(c, t).f, evaluate_coefficients(d, t).f);
        EXPECT_NE(evaluate_coefficients(c, t).alpha, evaluate_coefficients(d, t).alpha);
    }
}

TEST(Coefficients, RejectsBadTimes)
{
    const ModelParams p(10.0, 10.0, 1.0);
    EXPECT_THROW(evaluate_coefficients(p, -1e-9), ValidationError);
    EXPECT_THROW(evaluate_coefficients(p, std::nan("")), ValidationError);
}

TEST(AtomStateFactory, PureStarts)
{
    const auto e = make_atom_state(InitialKind::excited);
    EXPECT_EQ(e.rho11(), 1.0);
    EXPECT_EQ(e.rho00(), 0.0);
    const auto g = make_atom_state(InitialKind::ground);
    EXPECT_EQ(g.rho11(), 0.0);
    EXPECT_EQ(g.rho00(), 1.0);
}

TEST(AtomStateFactory, CustomValidation)
{
    Eigen::Matrix2cd ok;
    ok << 0.5, cplx(0.3, 0.2), cplx(0.3, -0.2), 0.5;
    EXPECT_NO_THROW(make_atom_state(InitialKind::custom, ok));

    auto expect_named = [](const Eigen::Matrix2cd& m, const std::string& word) {
        try {
            make_atom_state(InitialKind::custom, m);
            ADD_FAILURE() << "expected ValidationError mentioning " << word;
        } catch (const ValidationError& e) {
            EXPECT_NE(std::string(e.what()).find(word), std::string::npos) << e.what();
        }
    };
    Eigen::Matrix2cd bad_herm = ok;
    bad_herm(1, 0) = cplx(0.3, 0.2);
    expect_named(bad_herm, "rho10");
    Eigen::Matrix2cd bad_trace = ok;
    bad_trace(1, 1) = 0.6;
    expect_named(bad_trace, "trace");
    Eigen::Matrix2cd bad_pop = ok;
    bad_pop(0, 0) = cplx(0.5, 1e-6);
    expect_named(bad_pop, "populations");
}

TEST(AtomStateFactory, GeneratedStatesAccepted)
{
    Gen gen(14);
    for (int i = 0; i < 200; ++i) EXPECT_NO_THROW(make_atom_state(InitialKind::custom, gen.density()));
}
