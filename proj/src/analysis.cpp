#include "rabi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rabi/model.hpp"

namespace rabi {

std::vector<double> moving_average(std::span<const double> values, std::size_t window)
{
    if (window == 0) throw ValidationError("smoothing window must be >= 1");
    std::vector<double> out(values.begin(), values.end());
    if (window == 1) return out;

    const std::size_t n = values.size();
    const std::size_t left = (window - 1) / 2;
    const std::size_t right = window - 1 - left;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= left ? i - left : 0;
        const std::size_t hi = std::min(n - 1, i + right);
        const double sum = std::accumulate(values.begin() + lo, values.begin() + hi + 1, 0.0);
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

SeriesSummary find_extrema(std::span<const double> times, std::span<const double> values,
                           std::size_t smoothing_window)
{
    if (times.size() != values.size()) throw ValidationError("times and values differ in length");
    if (values.size() < kMinSeriesLength) {
        throw ValidationError(fmt::format("series too short: {} samples, need {}", values.size(), kMinSeriesLength));
    }
    const std::vector<double> v = moving_average(values, smoothing_window);

    // Collapse runs of equal values.
    struct Run {
        double t;
        double value;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
        runs.push_back({0.5 * (times[i] + times[j]), v[i]});
        i = j + 1;
    }

    SeriesSummary s;
    for (std::size_t i = 1; i + 1 < runs.size(); ++i) {
        const double prev = runs[i - 1].value;
        const double cur = runs[i].value;
        const double next = runs[i + 1].value;
        if (cur > prev && cur > next) s.local_maxima.push_back({runs[i].t, cur});
        if (cur < prev && cur < next) s.local_minima.push_back({runs[i].t, cur});
    }

    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    s.peak_to_trough = *hi - *lo;

    if (s.local_maxima.size() >= 2) {
        std::vector<double> spacing;
        for (std::size_t i = 1; i < s.local_maxima.size(); ++i) {
            spacing.push_back(s.local_maxima[i].t - s.local_maxima[i - 1].t);
        }
        const double mean = std::accumulate(spacing.begin(), spacing.end(), 0.0) / spacing.size();
        double var = 0.0;
        for (double d : spacing) var += (d - mean) * (d - mean);
        s.dominant_period = PeriodEstimate{mean, std::sqrt(var / spacing.size())};
    }
    return s;
}

double envelope_value(EnvelopeModel model, double g, double t)
{
    const double gt2 = g * g * t * t;
    return model == EnvelopeModel::gaussian_half ? std::exp(-0.5 * gt2) : std::exp(-gt2);
}

double envelope_check(std::span<const double> times, std::span<const double> values,
                      EnvelopeModel model, double g)
{
    if (times.size() != values.size()) throw ValidationError("times and values differ in length");
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        worst = std::max(worst, std::abs(values[i] - envelope_value(model, g, times[i])));
    }
    return worst;
}

SeriesComparison compare_series(std::span<const double> times_a, std::span<const double> a,
                                std::span<const double> times_b, std::span<const double> b)
{
    if (times_a.size() != a.size() || times_b.size() != b.size()) {
        throw ValidationError("times and values differ in length");
    }
    if (times_a.size() != times_b.size()) {
        throw ValidationError(fmt::format("grid mismatch: {} vs {} samples", times_a.size(), times_b.size()));
    }
    for (std::size_t i = 0; i < times_a.size(); ++i) {
        if (std::abs(times_a[i] - times_b[i]) > 1e-12 * (1.0 + std::abs(times_a[i]))) {
            throw ValidationError(fmt::format("grid mismatch at sample {}", i));
        }
    }

    SeriesComparison c;
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        sq += d * d;
        if (d > c.max_abs_diff) {
            c.max_abs_diff = d;
            c.t_of_max = times_a[i];
        }
    }
    c.rms_diff = a.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(a.size()));
    return c;
}

}  // namespace rabi
