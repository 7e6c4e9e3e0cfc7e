// checks.hpp — the acceptance criteria as runnable checks. Shared by the
// acceptance test binary and `rabi_cli check`.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rabi {

enum class Relation { le, lt, ge, gt, info };

struct Measurement {
    std::string label;
    double value = 0.0;
    double limit = 0.0;
    Relation relation = Relation::info;

    bool passed() const;
};

struct CriterionResult {
    std::string id;
    std::string title;
    std::vector<Measurement> items;
    std::vector<std::string> notes;

    bool passed() const;
};

enum class Suite { invariants, figures, oracle, all };

Suite parse_suite(const std::string& s);

struct CheckOptions {
    /// Cutoff for the truncation comparison n_max vs 2 n_max.
    int truncation_n_max = 8;
};

CriterionResult check_identity_and_trace();
CriterionResult check_splitting_exactness();
CriterionResult check_gamma_quadrature();
CriterionResult check_jc_baseline();
CriterionResult check_figure1_damping();
CriterionResult check_detuning_frequency();
CriterionResult check_figure4_ordering();
CriterionResult check_ground_state_oscillation();
CriterionResult check_oracle_short_time();
CriterionResult check_oracle_internal(const CheckOptions& opts);
CriterionResult check_hermiticity_and_reality();

std::vector<CriterionResult> run_suite(Suite suite, const CheckOptions& opts = {});

/// One summary line per criterion followed by indented measurements.
void print_report(std::ostream& os, const std::vector<CriterionResult>& results, bool verbose = true);

}  // namespace rabi
