#include "gpvec/fitness.hpp"

#include <cmath>
#include <map>

#include "gpvec/errors.hpp"

namespace gpvec {

namespace {

    void check_lengths(const std::vector<double>& result, const std::vector<double>& solution)
    {
        if (result.size() != solution.size())
            throw Error(Errc::length_mismatch,
                "result has " + std::to_string(result.size()) + " rows, solution has "
                    + std::to_string(solution.size()));
    }

    std::map<std::string, CustomFitness>& registry()
    {
        static std::map<std::string, CustomFitness> fns;
        return fns;
    }

} // namespace

double round_to_precision(double value, int precision)
{
    const double scale = std::pow(10.0, precision);
    return std::round(value * scale) / scale;
}

FitnessScore score_regression(const std::vector<double>& result,
    const std::vector<double>& solution, int precision)
{
    check_lengths(result, solution);
    double total = 0.0;
    for (std::size_t i = 0; i < result.size(); ++i)
        total += std::abs(result[i] - solution[i]);
    return { round_to_precision(total, precision), FitnessDirection::minimize };
}

int infer_label(double result_value, int n_classes)
{
    const double bucket = std::floor(result_value + 0.5);
    if (bucket < 0.0)
        return 0;
    if (bucket > static_cast<double>(n_classes - 1))
        return n_classes - 1;
    return static_cast<int>(bucket);
}

FitnessScore score_classification(const std::vector<double>& result,
    const std::vector<double>& solution, int n_classes)
{
    check_lengths(result, solution);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < result.size(); ++i) {
        const double label = solution[i];
        if (!(std::floor(label) == label) || label < 0.0 || label > static_cast<double>(n_classes - 1))
            throw Error(Errc::label_out_of_range,
                "solution label at row " + std::to_string(i) + " is outside [0, "
                    + std::to_string(n_classes - 1) + "]");
        if (infer_label(result[i], n_classes) == static_cast<int>(label))
            ++correct;
    }
    return { static_cast<double>(correct), FitnessDirection::maximize };
}

FitnessScore score_match(const std::vector<double>& result,
    const std::vector<double>& solution, int precision)
{
    check_lengths(result, solution);
    const double tolerance = 0.5 * std::pow(10.0, -precision);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < result.size(); ++i)
        if (std::abs(result[i] - solution[i]) < tolerance)
            ++matched;
    return { static_cast<double>(matched), FitnessDirection::maximize };
}

FitnessScore score_kernel(const Kernel& kernel, const std::vector<double>& result,
    const std::vector<double>& solution, int precision)
{
    switch (kernel.kind) {
    case KernelKind::regression: return score_regression(result, solution, precision);
    case KernelKind::classification: return score_classification(result, solution, kernel.n_classes);
    case KernelKind::match: return score_match(result, solution, precision);
    }
    throw Error(Errc::unknown_operator, "unknown kernel");
}

void register_fitness(const std::string& name, CustomFitness fn)
{
    registry()[name] = std::move(fn);
}

const CustomFitness* find_fitness(const std::string& name)
{
    const auto& fns = registry();
    const auto it = fns.find(name);
    return it == fns.end() ? nullptr : &it->second;
}

} // namespace gpvec
