#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "rabi/analysis.hpp"

using namespace rabi;
using rabi::testing::Gen;

namespace {

struct Series {
    std::vector<double> t, v;
};

template <class F>
Series sample(double t_end, int n, F f)
{
    Series s;
    for (int i = 0; i <= n; ++i) {
        const double t = t_end * i / n;
        s.t.push_back(t);
        s.v.push_back(f(t));
    }
    return s;
}

}  // namespace

TEST(MovingAverage, WindowOneIsCopyAndEdgesShrink)
{
    const std::vector<double> v{1, 2, 3, 4, 5};
    EXPECT_EQ(moving_average(v, 1), v);
    const auto m = moving_average(v, 3);
    EXPECT_DOUBLE_EQ(m[0], 1.5);
    EXPECT_DOUBLE_EQ(m[2], 3.0);
    EXPECT_DOUBLE_EQ(m[4], 4.5);
    EXPECT_THROW(moving_average(v, 0), ValidationError);
}

TEST(MovingAverage, RemovesFastRipple)
{
    // 20 samples per ripple period, window of one period.
    const auto s = sample(10.0, 2000, [](double t) { return 0.3 + 0.1 * std::sin(2.0 * M_PI * t / 0.1); });
    const auto m = moving_average(s.v, 20);
    for (std::size_t i = 20; i + 20 < m.size(); ++i) EXPECT_NEAR(m[i], 0.3, 1e-3);
}

TEST(Extrema, SinusoidPeriodWithinOneStep)
{
    Gen gen(51);
    for (int i = 0; i < 30; ++i) {
        const double period = gen.uniform(0.5, 3.0);
        const double phase = gen.uniform(0.0, 2.0 * M_PI);
        const auto s = sample(20.0, 4000, [&](double t) { return std::cos(2.0 * M_PI * t / period + phase); });
        const auto r = find_extrema(s.t, s.v);
        ASSERT_TRUE(r.dominant_period.has_value());
        EXPECT_NEAR(r.dominant_period->period, period, 20.0 / 4000);
        EXPECT_NEAR(r.peak_to_trough, 2.0, 1e-3);
    }
}

TEST(Extrema, DampedMaximaDecrease)
{
    const auto s = sample(6.0, 3000, [](double t) { return std::exp(-t * t / 4) * std::cos(2.0 * t) * std::cos(2.0 * t); });
    const auto r = find_extrema(s.t, s.v);
    ASSERT_GE(r.local_maxima.size(), 3u);
    for (std::size_t i = 1; i < r.local_maxima.size(); ++i)
        EXPECT_LT(r.local_maxima[i].value, r.local_maxima[i - 1].value);
}

TEST(Extrema, NegationSwapsMaximaAndMinima)
{
    Gen gen(52);
    for (int i = 0; i < 20; ++i) {
        const double a = gen.uniform(0.5, 4.0), b = gen.uniform(5.0, 11.0);
        const auto s = sample(8.0, 1600, [&](double t) { return std::sin(a * t) + 0.3 * std::cos(b * t); });
        std::vector<double> neg(s.v.size());
        for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = -s.v[k];
        const auto p = find_extrema(s.t, s.v), q = find_extrema(s.t, neg);
        ASSERT_EQ(p.local_maxima.size(), q.local_minima.size());
        ASSERT_EQ(p.local_minima.size(), q.local_maxima.size());
        for (std::size_t k = 0; k < p.local_maxima.size(); ++k)
            EXPECT_EQ(p.local_maxima[k].t, q.local_minima[k].t);
    }
}

TEST(Extrema, AffineInvariance)
{
    Gen gen(53);
    for (int i = 0; i < 20; ++i) {
        const double scale = gen.uniform(0.1, 10.0), shift = gen.uniform(-5.0, 5.0);
        const auto s = sample(10.0, 2000, [](double t) { return std::sin(3.0 * t) * std::exp(-0.1 * t); });
        std::vector<double> w(s.v.size());
        for (std::size_t k = 0; k < w.size(); ++k) w[k] = scale * s.v[k] + shift;
        const auto p = find_extrema(s.t, s.v), q = find_extrema(s.t, w);
        ASSERT_EQ(p.local_maxima.size(), q.local_maxima.size());
        for (std::size_t k = 0; k < p.local_maxima.size(); ++k)
            EXPECT_EQ(p.local_maxima[k].t, q.local_maxima[k].t);
        ASSERT_TRUE(p.dominant_period && q.dominant_period);
        EXPECT_NEAR(p.dominant_period->period, q.dominant_period->period, 1e-12);
    }
}

TEST(Extrema, FlatPlateausCountOnce)
{
    std::vector<double> t, v;
    for (int i = 0; i < 40; ++i) {
        t.push_back(i);
        v.push_back((i >= 10 && i < 14) ? 1.0 : (i < 10 ? i / 10.0 : std::max(0.0, 1.0 - (i - 13) / 10.0)));
    }
    const auto r = find_extrema(t, v);
    ASSERT_EQ(r.local_maxima.size(), 1u);
    EXPECT_DOUBLE_EQ(r.local_maxima[0].t, 11.5);
    EXPECT_FALSE(r.dominant_period.has_value());
}

TEST(Extrema, ConstantSeriesHasNone)
{
    const auto s = sample(1.0, 50, [](double) { return 0.25; });
    const auto r = find_extrema(s.t, s.v);
    EXPECT_TRUE(r.local_maxima.empty());
    EXPECT_TRUE(r.local_minima.empty());
    EXPECT_EQ(r.peak_to_trough, 0.0);
}

TEST(Extrema, Errors)
{
    const std::vector<double> short_t(kMinSeriesLength - 1, 0.0);
    EXPECT_THROW(find_extrema(short_t, short_t), ValidationError);
    const std::vector<double> t(20, 0.0), v(21, 0.0);
    EXPECT_THROW(find_extrema(t, v), ValidationError);
}

TEST(Envelope, ExactModelGivesZero)
{
    const double g = 1.3;
    const auto a = sample(5.0, 500, [&](double t) { return std::exp(-g * g * t * t); });
    const auto b = sample(5.0, 500, [&](double t) { return std::exp(-g * g * t * t / 2); });
    EXPECT_EQ(envelope_check(a.t, a.v, EnvelopeModel::gaussian, g), 0.0);
    EXPECT_EQ(envelope_check(b.t, b.v, EnvelopeModel::gaussian_half, g), 0.0);
    EXPECT_GT(envelope_check(a.t, a.v, EnvelopeModel::gaussian_half, g), 0.1);
    EXPECT_EQ(envelope_value(EnvelopeModel::gaussian, g, 0.0), 1.0);
}

TEST(Compare, IdenticalAndShifted)
{
    const auto s = sample(2.0, 100, [](double t) { return std::sin(t); });
    const auto same = compare_series(s.t, s.v, s.t, s.v);
    EXPECT_EQ(same.max_abs_diff, 0.0);
    EXPECT_EQ(same.rms_diff, 0.0);

    auto shifted = s.v;
    shifted[37] += 0.5;
    const auto d = compare_series(s.t, s.v, s.t, shifted);
    EXPECT_DOUBLE_EQ(d.max_abs_diff, 0.5);
    EXPECT_DOUBLE_EQ(d.t_of_max, s.t[37]);
    EXPECT_NEAR(d.rms_diff, 0.5 / std::sqrt(101.0), 1e-15);
}

TEST(Compare, GridMismatchRejected)
{
    const auto a = sample(2.0, 100, [](double t) { return t; });
    const auto b = sample(2.0, 101, [](double t) { return t; });
    const auto c = sample(2.1, 100, [](double t) { return t; });
    EXPECT_THROW(compare_series(a.t, a.v, b.t, b.v), ValidationError);
    EXPECT_THROW(compare_series(a.t, a.v, c.t, c.v), ValidationError);
}
