#include "gpvec/backends.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <thread>

#include "gpvec/errors.hpp"
#include "gpvec/fitness.hpp"

namespace gpvec {

double protected_apply(OpCode op, double x, double y)
{
    switch (op) {
    case OpCode::add: return x + y;
    case OpCode::sub: return x - y;
    case OpCode::mul: return x * y;
    case OpCode::div: return std::abs(y) < div_epsilon ? 0.0 : x / y;
    case OpCode::neg: return -x;
    }
    throw Error(Errc::unknown_operator, "unknown operator id " + std::to_string(static_cast<int>(op)));
}

namespace {

    void check_features(const EvalPlan& plan, const ColumnStore& store)
    {
        for (const PlanNode& node : plan.nodes) {
            const auto* feed = std::get_if<PlanFeed>(&node);
            if (!feed)
                continue;
            if (feed->feature < 0 || static_cast<std::size_t>(feed->feature) >= store.n_features()
                || store.feature_names[static_cast<std::size_t>(feed->feature)] != feed->name)
                throw Error(Errc::feature_mismatch,
                    "plan feeds feature '" + feed->name + "' (column " + std::to_string(feed->feature)
                        + ") which the store does not provide");
        }
    }

    // Working storage for one chunk: feed nodes alias store columns, all other
    // nodes own a buffer. Reused across chunks so allocation happens once per
    // worker.
    struct NodeSlot {
        std::vector<double> owned;
        const double* data = nullptr;
    };

    // Evaluates every plan node over rows [begin, end), one sub-column at a
    // time, and leaves the output node's values in result[begin, end).
    // The per-element arithmetic is exactly protected_apply's, applied in the
    // same order as the scalar walk, so the two backends agree bit for bit.
    void eval_chunk(const EvalPlan& plan, const ColumnStore& store,
        std::size_t begin, std::size_t end, std::vector<NodeSlot>& slots, double* result)
    {
        const std::size_t len = end - begin;
        const auto out_of = [&](std::size_t i) -> double* {
            if (static_cast<int>(i) == plan.output)
                return result + begin;
            slots[i].owned.resize(len);
            return slots[i].owned.data();
        };

        for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
            const PlanNode& node = plan.nodes[i];
            if (const auto* feed = std::get_if<PlanFeed>(&node)) {
                slots[i].data = store.columns[static_cast<std::size_t>(feed->feature)].data() + begin;
            } else if (const auto* cst = std::get_if<PlanConst>(&node)) {
                double* out = out_of(i);
                for (std::size_t r = 0; r < len; ++r)
                    out[r] = cst->value;
                slots[i].data = out;
            } else if (const auto* op = std::get_if<PlanOp>(&node)) {
                const double* lhs = slots[static_cast<std::size_t>(op->lhs)].data;
                double* out = out_of(i);
                switch (op->op) {
                case OpCode::add: {
                    const double* rhs = slots[static_cast<std::size_t>(op->rhs)].data;
                    for (std::size_t r = 0; r < len; ++r)
                        out[r] = lhs[r] + rhs[r];
                    break;
                }
                case OpCode::sub: {
                    const double* rhs = slots[static_cast<std::size_t>(op->rhs)].data;
                    for (std::size_t r = 0; r < len; ++r)
                        out[r] = lhs[r] - rhs[r];
                    break;
                }
                case OpCode::mul: {
                    const double* rhs = slots[static_cast<std::size_t>(op->rhs)].data;
                    for (std::size_t r = 0; r < len; ++r)
                        out[r] = lhs[r] * rhs[r];
                    break;
                }
                case OpCode::div: {
                    const double* rhs = slots[static_cast<std::size_t>(op->rhs)].data;
                    for (std::size_t r = 0; r < len; ++r)
                        out[r] = std::abs(rhs[r]) < div_epsilon ? 0.0 : lhs[r] / rhs[r];
                    break;
                }
                case OpCode::neg:
                    for (std::size_t r = 0; r < len; ++r)
                        out[r] = -lhs[r];
                    break;
                }
                slots[i].data = out;
            } else {
                const auto& labels = std::get<PlanLabels>(node);
                const double* in = slots[static_cast<std::size_t>(labels.input)].data;
                double* out = out_of(i);
                for (std::size_t r = 0; r < len; ++r)
                    out[r] = static_cast<double>(infer_label(in[r], labels.n_classes));
                slots[i].data = out;
            }
        }

        // identity plans leave the output aliased to a store column
        const double* final_data = slots[static_cast<std::size_t>(plan.output)].data;
        if (final_data != result + begin)
            std::memcpy(result + begin, final_data, len * sizeof(double));
    }

} // namespace

ResultVector eval_scalar(const EvalPlan& plan, const ColumnStore& store)
{
    check_features(plan, store);
    ResultVector result(store.n_rows);
    std::vector<double> scratch(plan.nodes.size());
    for (std::size_t row = 0; row < store.n_rows; ++row) {
        for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
            const PlanNode& node = plan.nodes[i];
            if (const auto* feed = std::get_if<PlanFeed>(&node))
                scratch[i] = store.columns[static_cast<std::size_t>(feed->feature)][row];
            else if (const auto* cst = std::get_if<PlanConst>(&node))
                scratch[i] = cst->value;
            else if (const auto* op = std::get_if<PlanOp>(&node))
                scratch[i] = op->rhs == -1
                    ? protected_apply(op->op, scratch[static_cast<std::size_t>(op->lhs)])
                    : protected_apply(op->op, scratch[static_cast<std::size_t>(op->lhs)],
                        scratch[static_cast<std::size_t>(op->rhs)]);
            else {
                const auto& labels = std::get<PlanLabels>(node);
                scratch[i] = static_cast<double>(
                    infer_label(scratch[static_cast<std::size_t>(labels.input)], labels.n_classes));
            }
        }
        result[row] = scratch[static_cast<std::size_t>(plan.output)];
    }
    return result;
}

ResultVector eval_vector(const EvalPlan& plan, const ColumnStore& store, int workers, std::size_t chunk_rows)
{
    check_features(plan, store);
    if (chunk_rows == 0)
        chunk_rows = 1;
    workers = resolve_workers(workers);

    ResultVector result(store.n_rows);
    const std::size_t n_chunks = (store.n_rows + chunk_rows - 1) / chunk_rows;

    if (workers <= 1 || n_chunks <= 1) {
        std::vector<NodeSlot> slots(plan.nodes.size());
        for (std::size_t chunk = 0; chunk < n_chunks; ++chunk) {
            const std::size_t begin = chunk * chunk_rows;
            eval_chunk(plan, store, begin, std::min(begin + chunk_rows, store.n_rows),
                slots, result.data());
        }
        return result;
    }

    std::atomic<std::size_t> next_chunk{ 0 };
    auto work = [&]() {
        std::vector<NodeSlot> slots(plan.nodes.size());
        while (true) {
            const std::size_t chunk = next_chunk.fetch_add(1, std::memory_order_relaxed);
            if (chunk >= n_chunks)
                return;
            const std::size_t begin = chunk * chunk_rows;
            eval_chunk(plan, store, begin, std::min(begin + chunk_rows, store.n_rows),
                slots, result.data());
        }
    };

    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), n_chunks);
    std::vector<std::thread> pool;
    pool.reserve(n_threads - 1);
    for (std::size_t t = 1; t < n_threads; ++t)
        pool.emplace_back(work);
    work();
    for (std::thread& t : pool)
        t.join();
    return result;
}

ResultVector evaluate(const EvalPlan& plan, const ColumnStore& store, const EvalSettings& settings)
{
    if (settings.backend == Backend::scalar)
        return eval_scalar(plan, store);
    return eval_vector(plan, store, settings.workers, settings.chunk_rows);
}

std::vector<ResultVector> evaluate_with_intermediates(const EvalPlan& plan, const ColumnStore& store)
{
    check_features(plan, store);
    ResultVector result(store.n_rows);
    std::vector<NodeSlot> slots(plan.nodes.size());
    if (store.n_rows > 0)
        eval_chunk(plan, store, 0, store.n_rows, slots, result.data());

    std::vector<ResultVector> values(plan.nodes.size());
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        if (static_cast<int>(i) == plan.output)
            values[i] = result;
        else
            values[i].assign(slots[i].data, slots[i].data + store.n_rows);
    }
    return values;
}

int resolve_workers(int workers)
{
    if (workers > 0)
        return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace gpvec
