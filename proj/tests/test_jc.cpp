#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "rabi/jc.hpp"

using namespace rabi;
using rabi::testing::Gen;

namespace {

// P_e from the 2x2 one-excitation block {|e,0>, |g,1>} diagonalized numerically.
double two_level_reference(const ModelParams& p, double t)
{
    Eigen::Matrix2d h;
    h << 0.5 * p.delta(), p.g(), p.g(), -0.5 * p.delta();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    cplx amp{};
    for (int k = 0; k < 2; ++k) {
        const double v = es.eigenvectors()(0, k);
        amp += v * v * std::exp(cplx(0.0, -es.eigenvalues()(k) * t));
    }
    return std::norm(amp);
}

}  // namespace

TEST(Jc, StartsExcited)
{
    EXPECT_EQ(jc_excited_probability(ModelParams::from_detuning(10.0, 3.0, 1.0), 0.0, InitialKind::excited).p_excited,
              1.0);
}

TEST(Jc, ResonantFullTransfer)
{
    const auto p = ModelParams::from_detuning(10.0, 0.0, 1.0);
    EXPECT_NEAR(jc_excited_probability(p, M_PI / 2.0, InitialKind::excited).p_excited, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(jc_rabi_frequency(p), 2.0);
}

TEST(Jc, DetunedHalfTransfer)
{
    // delta = 2g: Omega = 2 sqrt(2) g, minimum delta^2/Omega^2 = 1/2.
    const auto p = ModelParams::from_detuning(10.0, 2.0, 1.0);
    const double omega = jc_rabi_frequency(p);
    EXPECT_NEAR(omega, 2.0 * std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(jc_excited_probability(p, M_PI / omega, InitialKind::excited).p_excited, 0.5, 1e-15);
}

TEST(Jc, GroundAndUncoupledStay)
{
    const auto p = ModelParams::from_detuning(10.0, 1.0, 1.0);
    EXPECT_EQ(jc_excited_probability(p, 2.3, InitialKind::ground).p_excited, 0.0);
    const ModelParams free(10.0, 9.0, 0.0);
    EXPECT_EQ(jc_excited_probability(free, 2.3, InitialKind::excited).p_excited, 1.0);
}

TEST(Jc, RejectsCustomAndNegativeTime)
{
    const auto p = ModelParams::from_detuning(10.0, 1.0, 1.0);
    EXPECT_THROW(jc_excited_probability(p, 1.0, InitialKind::custom), ValidationError);
    EXPECT_THROW(jc_excited_probability(p, -1.0, InitialKind::excited), ValidationError);
}

TEST(JcProperty, MatchesNumericalTwoLevelBlock)
{
    Gen gen(31);
    for (int i = 0; i < 200; ++i) {
        const auto p = gen.params();
        const double t = gen.uniform(0.0, 10.0);
        EXPECT_NEAR(jc_excited_probability(p, t, InitialKind::excited).p_excited, two_level_reference(p, t), 1e-12);
    }
}

TEST(JcProperty, PeriodicBoundedWithKnownMinimum)
{
    Gen gen(32);
    for (int i = 0; i < 200; ++i) {
        const auto p = gen.params();
        const double t = gen.uniform(0.0, 10.0);
        const double omega = jc_rabi_frequency(p);
        EXPECT_GE(omega, 2.0 * p.g());
        const double a = jc_excited_probability(p, t, InitialKind::excited).p_excited;
        const double b = jc_excited_probability(p, t + 2.0 * M_PI / omega, InitialKind::excited).p_excited;
        EXPECT_NEAR(a, b, 1e-10);
        const double floor = p.delta() * p.delta() / (omega * omega);
        EXPECT_GE(a, floor - 1e-12);
        EXPECT_LE(a, 1.0 + 1e-15);
        EXPECT_NEAR(jc_excited_probability(p, M_PI / omega, InitialKind::excited).p_excited, floor, 1e-12);
    }
}
