#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gpvec/config.hpp"

namespace gpvec {

// A tree's score against the solution column, rounded to the configured
// number of decimal places at scoring time; all comparisons use the rounded
// value.
struct FitnessScore {
    double value = 0.0;
    FitnessDirection direction = FitnessDirection::minimize;

    bool operator==(const FitnessScore&) const = default;
};

double round_to_precision(double value, int precision);

// Regression: sum of absolute deviations, accumulated in ascending row order
// (the reduction order is part of the contract so both backends score
// identically). Lower is better.
FitnessScore score_regression(const std::vector<double>& result,
    const std::vector<double>& solution, int precision);

// Buckets a raw output value into a class label: round half up, then clamp
// into [0, n_classes - 1].
int infer_label(double result_value, int n_classes);

// Classification: number of rows whose inferred label matches the solution
// label. Higher is better.
FitnessScore score_classification(const std::vector<double>& result,
    const std::vector<double>& solution, int n_classes);

// Match: number of rows within half an ulp of the configured precision,
// i.e. |result - solution| < 0.5 * 10^-precision. Higher is better.
FitnessScore score_match(const std::vector<double>& result,
    const std::vector<double>& solution, int precision);

// Kernel dispatch used by the evolution loop.
FitnessScore score_kernel(const Kernel& kernel, const std::vector<double>& result,
    const std::vector<double>& solution, int precision);

// Registration point for custom fitness functions; kernels cover the standard
// cases, user code may add its own scoring routine under a name.
using CustomFitness = std::function<FitnessScore(const std::vector<double>& result,
    const std::vector<double>& solution)>;

void register_fitness(const std::string& name, CustomFitness fn);
const CustomFitness* find_fitness(const std::string& name);

} // namespace gpvec
