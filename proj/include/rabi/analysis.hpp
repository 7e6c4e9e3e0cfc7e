// analysis.hpp — estimators for the oscillation features of P_e(t) series:
// extrema, dominant period, envelopes and pairwise differences.

#pragma once

#include <optional>
#include <span>
#include <vector>

namespace rabi {

struct Extremum {
    double t = 0.0;
    double value = 0.0;
};

struct PeriodEstimate {
    double period = 0.0;
    double uncertainty = 0.0;  // standard deviation of maxima spacings
};

struct SeriesSummary {
    std::vector<Extremum> local_maxima;
    std::vector<Extremum> local_minima;
    std::optional<PeriodEstimate> dominant_period;  // needs >= 2 maxima
    double peak_to_trough = 0.0;                     // max - min of the analysed series
};

/// Minimum series length accepted by find_extrema.
inline constexpr std::size_t kMinSeriesLength = 16;

/// Centered moving average; the window shrinks at the edges. window 1 is a copy.
std::vector<double> moving_average(std::span<const double> values, std::size_t window);

/// Local extrema by three-point comparison after optional smoothing. Runs of
/// equal values count as one point located at the run midpoint, so maxima and
/// minima always alternate. Requires a uniform grid.
SeriesSummary find_extrema(std::span<const double> times, std::span<const double> values,
                           std::size_t smoothing_window = 1);

enum class EnvelopeModel {
    gaussian_half,  // exp(-g^2 t^2 / 2)
    gaussian,       // exp(-g^2 t^2)
};

double envelope_value(EnvelopeModel model, double g, double t);

/// max_i |values_i - model(t_i)|.
double envelope_check(std::span<const double> times, std::span<const double> values,
                      EnvelopeModel model, double g);

struct SeriesComparison {
    double max_abs_diff = 0.0;
    double rms_diff = 0.0;
    double t_of_max = 0.0;
};

/// Throws ValidationError when the grids differ.
SeriesComparison compare_series(std::span<const double> times_a, std::span<const double> a,
                                std::span<const double> times_b, std::span<const double> b);

}  // namespace rabi
