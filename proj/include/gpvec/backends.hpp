#pragma once

#include <cstddef>
#include <vector>

#include "gpvec/compile.hpp"
#include "gpvec/data.hpp"

namespace gpvec {

// Evaluation output, one value per dataset row. Protected arithmetic keeps
// every element finite on finite inputs.
using ResultVector = std::vector<double>;

// The one arithmetic semantics both backends share. +, - and * are plain IEEE
// double operations; division returns 0 when |y| < div_epsilon.
double protected_apply(OpCode op, double x, double y = 0.0);

// Row-at-a-time reference interpreter: for each row, walks the plan over that
// row's scalars. Single-threaded by contract; it is the semantic oracle and
// the performance baseline, and deliberately does no cross-row work.
ResultVector eval_scalar(const EvalPlan& plan, const ColumnStore& store);

// Column-at-a-time evaluator: each plan node is applied elementwise over whole
// column vectors. With workers > 1 the rows are partitioned into fixed-size
// chunks processed in parallel; element values are identical to eval_scalar
// bit for bit regardless of worker count or chunk size.
ResultVector eval_vector(const EvalPlan& plan, const ColumnStore& store,
    int workers = 1, std::size_t chunk_rows = 8192);

struct EvalSettings {
    Backend backend = Backend::vector;
    int workers = 1;
    std::size_t chunk_rows = 8192;
};

inline EvalSettings eval_settings_from(const Config& config)
{
    return { config.backend, config.workers, static_cast<std::size_t>(config.chunk_rows) };
}

ResultVector evaluate(const EvalPlan& plan, const ColumnStore& store, const EvalSettings& settings);

// Debug hook (off by default, off the hot path): evaluates the plan and
// returns the value vector of every node, including intermediates.
std::vector<ResultVector> evaluate_with_intermediates(const EvalPlan& plan, const ColumnStore& store);

// Resolves workers == 0 to the hardware thread count.
int resolve_workers(int workers);

} // namespace gpvec
