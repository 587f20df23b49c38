#include <doctest.h>

#include "gpvec/backends.hpp"
#include "gpvec/compile.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/generate.hpp"
#include "test_helpers.hpp"

using namespace gpvec;
using test::TreeBuilder;

namespace {

const std::vector<std::string> abc{ "a", "b", "c" };

Tree square_plus_ratio()
{
    // a*a + c/b
    TreeBuilder b;
    const auto mul = b.op(OpCode::mul, b.var(0, "a"), b.var(0, "a"));
    const auto div = b.op(OpCode::div, b.var(2, "c"), b.var(1, "b"));
    return b.finish(b.op(OpCode::add, mul, div));
}

} // namespace

TEST_CASE("rendering squares as self-multiplication, fully parenthesized")
{
    CHECK(render_expression(square_plus_ratio()) == "((a)*(a)) + ((c)/(b))");
}

TEST_CASE("a single terminal renders as its name")
{
    TreeBuilder b;
    CHECK(render_expression(b.finish(b.var(0, "a"))) == "a");
}

TEST_CASE("unary minus and constants render parseably")
{
    TreeBuilder b;
    const auto neg = b.op(OpCode::neg, b.var(0, "a"));
    const Tree tree = b.finish(b.op(OpCode::add, neg, b.constant(0.5)));
    const std::string expr = render_expression(tree);
    CHECK(expr == "(-(a)) + (0.5)");
    CHECK_NOTHROW(parse_expression(expr, abc));
}

TEST_CASE("division binds tighter than addition")
{
    const Ast ast = parse_expression("a + c/b", abc);
    const auto& add = std::get<AstBinary>(ast.node);
    CHECK(add.op == OpCode::add);
    CHECK(std::holds_alternative<AstVar>(add.left->node));
    const auto& div = std::get<AstBinary>(add.right->node);
    CHECK(div.op == OpCode::div);
}

TEST_CASE("parentheses override precedence")
{
    const Ast ast = parse_expression("(a + c)/b", abc);
    const auto& div = std::get<AstBinary>(ast.node);
    CHECK(div.op == OpCode::div);
    const auto& add = std::get<AstBinary>(div.left->node);
    CHECK(add.op == OpCode::add);
    CHECK(std::get<AstVar>(div.right->node).name == "b");
}

TEST_CASE("subtraction is left associative")
{
    // a - b - c == (a - b) - c
    const Ast ast = parse_expression("a - b - c", abc);
    const auto& outer = std::get<AstBinary>(ast.node);
    CHECK(outer.op == OpCode::sub);
    CHECK(std::get<AstVar>(outer.right->node).name == "c");
    const auto& inner = std::get<AstBinary>(outer.left->node);
    CHECK(inner.op == OpCode::sub);
}

TEST_CASE("unary minus binds tighter than multiplication")
{
    // -a*b == (-a)*b
    const Ast ast = parse_expression("-a*b", abc);
    const auto& mul = std::get<AstBinary>(ast.node);
    CHECK(mul.op == OpCode::mul);
    CHECK(std::holds_alternative<AstUnary>(mul.left->node));
}

TEST_CASE("parser reports unknown identifiers with position")
{
    try {
        parse_expression("a + d", abc);
        FAIL("expected UnknownIdentifier");
    } catch (const ParseError& e) {
        CHECK(e.code() == Errc::unknown_identifier);
        CHECK(e.position() == 4);
        CHECK(std::string(e.what()).find("'d'") != std::string::npos);
    }
}

TEST_CASE("parser reports syntax errors with position")
{
    try {
        parse_expression("a + ", abc);
        FAIL("expected SyntaxError");
    } catch (const ParseError& e) {
        CHECK(e.code() == Errc::syntax_error);
    }

    try {
        parse_expression("(a + b", abc);
        FAIL("expected SyntaxError");
    } catch (const ParseError& e) {
        CHECK(e.code() == Errc::syntax_error);
        CHECK(e.position() == 6);
    }

    CHECK_THROWS_AS(parse_expression("", abc), ParseError);
}

TEST_CASE("parser distinguishes unknown operators")
{
    try {
        parse_expression("a ^ b", abc);
        FAIL("expected UnknownOperator");
    } catch (const ParseError& e) {
        CHECK(e.code() == Errc::unknown_operator);
    }
}

TEST_CASE("plan for a*a + c/b has one feed per distinct variable")
{
    const Ast ast = parse_expression("a*a + c/b", abc);
    const EvalPlan plan = build_plan(ast, { KernelKind::regression, 0 }, abc);
    CHECK(plan.feed_count() == 3); // a, b, c each once
    CHECK(is_topologically_ordered(plan));
    CHECK(plan.kernel_outputs.empty());
    // 3 feeds + mul + div + add
    CHECK(plan.nodes.size() == 6);
    CHECK(std::holds_alternative<PlanOp>(plan.nodes[static_cast<std::size_t>(plan.output)]));
}

TEST_CASE("plan of a bare variable is a single feed node that is the output")
{
    const Ast ast = parse_expression("a", abc);
    const EvalPlan plan = build_plan(ast, { KernelKind::regression, 0 }, abc);
    CHECK(plan.nodes.size() == 1);
    CHECK(plan.output == 0);
    CHECK(std::holds_alternative<PlanFeed>(plan.nodes[0]));
}

TEST_CASE("classification plans expose a labels output")
{
    const Ast ast = parse_expression("a+b", abc);
    const EvalPlan plan = build_plan(ast, { KernelKind::classification, 3 }, abc);
    REQUIRE(plan.kernel_outputs.count("labels") == 1);
    const int labels = plan.kernel_outputs.at("labels");
    const auto& node = std::get<PlanLabels>(plan.nodes[static_cast<std::size_t>(labels)]);
    CHECK(node.input == plan.output);
    CHECK(node.n_classes == 3);
    CHECK(is_topologically_ordered(plan));

    const EvalPlan regression = build_plan(ast, { KernelKind::regression, 0 }, abc);
    CHECK(regression.kernel_outputs.count("labels") == 0);
}

TEST_CASE("feed minimality: feeds equal distinct variables")
{
    const Ast ast = parse_expression("a*a*a + a - b*(a + b)", abc);
    const EvalPlan plan = build_plan(ast, { KernelKind::regression, 0 }, abc);
    CHECK(plan.feed_count() == 2);
}

TEST_CASE("round trip: tree -> string -> ast -> plan evaluates like the tree")
{
    const ColumnStore store = test::make_store(abc,
        { { 1.0, 2.0, -3.5, 0.0 }, { 2.0, 4.0, 0.0, -1.0 }, { 4.0, 8.0, 1.25, 9.0 } },
        { 0, 0, 0, 0 });

    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        const Tree tree = gen_tree(i % 2 == 0 ? GenMethod::full : GenMethod::grow,
            1 + i % 5, store.feature_names, default_operator_set(), 1, rng);
        const EvalPlan plan = compile_tree(tree, { KernelKind::regression, 0 }, store.feature_names);
        CHECK(is_topologically_ordered(plan));
        const ResultVector via_plan = eval_scalar(plan, store);
        const std::vector<double> direct = test::eval_tree_direct(tree, store);
        REQUIRE(via_plan == direct); // elementwise exact
    }
}

TEST_CASE("plan dump lists nodes and marks the output")
{
    const Ast ast = parse_expression("a + b", abc);
    const EvalPlan plan = build_plan(ast, { KernelKind::regression, 0 }, abc);
    const std::string dump = dump_plan(plan);
    CHECK(dump.find("feed a") != std::string::npos);
    CHECK(dump.find("<- output") != std::string::npos);
}
