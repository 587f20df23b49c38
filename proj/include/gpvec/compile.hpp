#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gpvec/config.hpp"
#include "gpvec/tree.hpp"

namespace gpvec {

// Abstract syntax of a multivariate expression. Trees are rendered to strings
// for archival, and strings are parsed back to this form before a plan is
// built; the string is the interchange format between the two.
struct Ast;
using AstPtr = std::unique_ptr<Ast>;

struct AstBinary {
    OpCode op;
    AstPtr left;
    AstPtr right;
};

struct AstUnary {
    OpCode op;
    AstPtr operand;
};

struct AstVar {
    std::string name;
};

struct AstConst {
    double value;
};

struct Ast {
    std::variant<AstBinary, AstUnary, AstVar, AstConst> node;
};

// Renders a tree as a fully parenthesized infix expression. Deterministic;
// parsing the result evaluates identically to the tree on all inputs.
// Additive operators are spaced for readability: "((a)*(a)) + ((c)/(b))".
std::string render_expression(const Tree& tree);

// Recursive-descent parser. Precedence: unary minus > * / > + -, left
// associative, parentheses override. Identifiers must name features.
Ast parse_expression(const std::string& expr, const std::vector<std::string>& feature_names);

// The evaluation DAG compiled from one expression: feeding nodes inject
// dataset columns, constant nodes broadcast literals, operation nodes apply
// protected arithmetic, and the labels node buckets classifier output.
struct PlanFeed {
    int feature;
    std::string name;
};

struct PlanConst {
    double value;
};

struct PlanOp {
    OpCode op;
    int lhs;
    int rhs; // -1 for unary operations
};

struct PlanLabels {
    int input;
    int n_classes;
};

using PlanNode = std::variant<PlanFeed, PlanConst, PlanOp, PlanLabels>;

struct EvalPlan {
    std::vector<PlanNode> nodes; // topologically ordered: inputs precede consumers
    int output = 0;              // index of the result node
    std::map<std::string, int> kernel_outputs; // e.g. "labels" for classification

    [[nodiscard]] std::size_t feed_count() const;
};

// Compiles an AST into a plan. A feature appears as at most one feeding node
// no matter how often the expression references it; other subexpressions are
// not shared. Classification kernels get a "labels" output subgraph.
EvalPlan build_plan(const Ast& ast, const Kernel& kernel, const std::vector<std::string>& feature_names);

// Convenience: the full archival route, tree -> string -> AST -> plan.
EvalPlan compile_tree(const Tree& tree, const Kernel& kernel, const std::vector<std::string>& feature_names);

// True when every node's inputs appear earlier in the list. Exported for
// tests; plans produced by build_plan always satisfy it.
bool is_topologically_ordered(const EvalPlan& plan);

// Human-readable plan listing (debug display mode).
std::string dump_plan(const EvalPlan& plan);

std::string format_constant(double value);

} // namespace gpvec
