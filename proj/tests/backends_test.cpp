#include <doctest.h>

#include <cmath>

#include "gpvec/backends.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/generate.hpp"
#include "test_helpers.hpp"

using namespace gpvec;

namespace {

const std::vector<std::string> abc{ "a", "b", "c" };

EvalPlan plan_of(const std::string& expr, Kernel kernel = { KernelKind::regression, 0 })
{
    return build_plan(parse_expression(expr, abc), kernel, abc);
}

} // namespace

TEST_CASE("protected arithmetic")
{
    CHECK(protected_apply(OpCode::div, 1.0, 0.0) == 0.0);
    CHECK(protected_apply(OpCode::div, 6.0, 3.0) == 2.0);
    CHECK(protected_apply(OpCode::div, 5.0, 1e-13) == 0.0); // below the threshold
    CHECK(protected_apply(OpCode::mul, -2.0, 0.5) == -1.0);
    CHECK(protected_apply(OpCode::add, 0.1, 0.2) == 0.1 + 0.2);
    CHECK(protected_apply(OpCode::sub, 1.0, 0.25) == 0.75);
    CHECK(protected_apply(OpCode::neg, 3.0) == -3.0);
}

TEST_CASE("eval_scalar walks the plan row by row")
{
    const ColumnStore store = test::make_store(abc,
        { { 1.0, 2.0 }, { 2.0, 4.0 }, { 4.0, 8.0 } }, { 0, 0 });
    // 1*1 + 4/2 = 3 ; 2*2 + 8/4 = 6
    const ResultVector result = eval_scalar(plan_of("a*a + c/b"), store);
    CHECK(result == ResultVector{ 3.0, 6.0 });
}

TEST_CASE("identity plan returns the column")
{
    const ColumnStore store = test::make_store({ "a" }, { { 5, 7, 9 } }, { 0, 0, 0 });
    const EvalPlan plan = build_plan(parse_expression("a", { "a" }), { KernelKind::regression, 0 }, { "a" });
    CHECK(eval_scalar(plan, store) == ResultVector{ 5, 7, 9 });
}

TEST_CASE("division by zero yields zero elements")
{
    const ColumnStore store = test::make_store(abc,
        { { 1, 1, 1 }, { 2.0, 0.0, 4.0 }, { 6.0, 6.0, 6.0 } }, { 0, 0, 0 });
    const ResultVector result = eval_scalar(plan_of("c/b"), store);
    CHECK(result == ResultVector{ 3.0, 0.0, 1.5 });
}

TEST_CASE("vector backend matches scalar bit for bit")
{
    const ColumnStore store = test::make_store(abc,
        { { 1.0, 2.0 }, { 2.0, 4.0 }, { 4.0, 8.0 } }, { 0, 0 });
    const EvalPlan plan = plan_of("a*a + c/b");
    const ResultVector scalar = eval_scalar(plan, store);
    const ResultVector vector = eval_vector(plan, store);
    CHECK(vector == ResultVector{ 3.0, 6.0 });
    CHECK(vector == scalar);
}

TEST_CASE("constant-only plan broadcasts to n_rows")
{
    const ColumnStore store = test::make_store({ "a" }, { { 1, 2, 3, 4 } }, { 0, 0, 0, 0 });
    const EvalPlan plan = build_plan(parse_expression("2.5", { "a" }),
        { KernelKind::regression, 0 }, { "a" });
    const ResultVector result = eval_vector(plan, store);
    CHECK(result == ResultVector{ 2.5, 2.5, 2.5, 2.5 });
    CHECK(eval_scalar(plan, store) == result);
}

TEST_CASE("results are independent of worker count and chunk size")
{
    const ColumnStore store = synth_dataset(10007, 3, { KernelKind::regression, 0 }, 11);
    Rng rng(3);
    const Tree tree = gen_tree(GenMethod::grow, 5, store.feature_names, default_operator_set(), 3, rng);
    const EvalPlan plan = compile_tree(tree, { KernelKind::regression, 0 }, store.feature_names);

    const ResultVector reference = eval_vector(plan, store, 1);
    for (const auto& [workers, chunk] : std::vector<std::pair<int, std::size_t>>{
             { 1, 100 }, { 2, 100 }, { 2, 8192 }, { 4, 1000 }, { 3, 1 }, { 8, 997 } }) {
        const ResultVector out = eval_vector(plan, store, workers, chunk);
        REQUIRE(out == reference);
    }
    CHECK(eval_scalar(plan, store) == reference);
}

TEST_CASE("finiteness holds on adversarial zero-heavy columns")
{
    // columns packed with zeros and near-zero denominators
    Rng rng(17);
    std::uniform_int_distribution<int> coin(0, 3);
    std::uniform_real_distribution<double> tiny(-1e-12, 1e-12);
    std::uniform_real_distribution<double> wide(-1e6, 1e6);

    ColumnStore store;
    store.feature_names = abc;
    store.n_rows = 512;
    store.columns.assign(3, std::vector<double>(store.n_rows));
    for (auto& column : store.columns)
        for (double& v : column) {
            switch (coin(rng)) {
            case 0: v = 0.0; break;
            case 1: v = tiny(rng); break;
            default: v = wide(rng); break;
            }
        }
    store.solution.assign(store.n_rows, 0.0);

    for (int i = 0; i < 200; ++i) {
        const Tree tree = gen_tree(GenMethod::grow, 5, store.feature_names,
            default_operator_set(), 3, rng);
        const EvalPlan plan = compile_tree(tree, { KernelKind::regression, 0 }, store.feature_names);
        for (double v : eval_vector(plan, store, 2, 64))
            REQUIRE(std::isfinite(v));
    }
}

TEST_CASE("feature mismatch is rejected")
{
    const ColumnStore store = test::make_store({ "x" }, { { 1, 2 } }, { 0, 0 });
    const EvalPlan plan = plan_of("a + b"); // built against a,b,c
    CHECK_THROWS_AS(eval_scalar(plan, store), Error);
    CHECK_THROWS_AS(eval_vector(plan, store), Error);
}

TEST_CASE("intermediates hook exposes every node's values")
{
    const ColumnStore store = test::make_store(abc,
        { { 1.0, 2.0 }, { 2.0, 4.0 }, { 4.0, 8.0 } }, { 0, 0 });
    const EvalPlan plan = plan_of("a*a + c/b");
    const auto intermediates = evaluate_with_intermediates(plan, store);
    CHECK(intermediates.size() == plan.nodes.size());
    CHECK(intermediates[static_cast<std::size_t>(plan.output)] == ResultVector{ 3.0, 6.0 });
}
