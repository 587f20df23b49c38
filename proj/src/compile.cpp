#include "gpvec/compile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "gpvec/errors.hpp"

namespace gpvec {

std::string format_constant(double value)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return { buf, ptr };
}

namespace {

    void render_node(const Tree& tree, NodeId id, std::string& out)
    {
        const TreeNode& node = tree.nodes[id];
        if (const auto* var = std::get_if<VariableNode>(&node.kind)) {
            out += var->name;
            return;
        }
        if (const auto* cst = std::get_if<ConstantNode>(&node.kind)) {
            out += format_constant(cst->value);
            return;
        }
        const auto& op = std::get<OperatorNode>(node.kind);
        if (op_arity(op.op) == 1) {
            out += op_symbol(op.op);
            out += '(';
            render_node(tree, node.children[0], out);
            out += ')';
            return;
        }
        const bool spaced = op.op == OpCode::add || op.op == OpCode::sub;
        out += '(';
        render_node(tree, node.children[0], out);
        out += ')';
        if (spaced)
            out += ' ';
        out += op_symbol(op.op);
        if (spaced)
            out += ' ';
        out += '(';
        render_node(tree, node.children[1], out);
        out += ')';
    }

    // --- parser ------------------------------------------------------------

    class Parser {
    public:
        Parser(const std::string& text, const std::vector<std::string>& features)
            : text_(text)
            , features_(features)
        {
        }

        Ast parse()
        {
            skip_space();
            if (pos_ >= text_.size())
                throw ParseError(Errc::syntax_error, pos_, "empty expression");
            Ast ast = parse_expr();
            skip_space();
            if (pos_ < text_.size())
                throw unexpected_char();
            return ast;
        }

    private:
        Ast parse_expr()
        {
            Ast lhs = parse_term();
            while (true) {
                skip_space();
                if (peek() == '+' || peek() == '-') {
                    const OpCode op = text_[pos_] == '+' ? OpCode::add : OpCode::sub;
                    ++pos_;
                    Ast rhs = parse_term();
                    lhs = make_binary(op, std::move(lhs), std::move(rhs));
                } else {
                    return lhs;
                }
            }
        }

        Ast parse_term()
        {
            Ast lhs = parse_unary();
            while (true) {
                skip_space();
                if (peek() == '*' || peek() == '/') {
                    const OpCode op = text_[pos_] == '*' ? OpCode::mul : OpCode::div;
                    ++pos_;
                    Ast rhs = parse_unary();
                    lhs = make_binary(op, std::move(lhs), std::move(rhs));
                } else {
                    return lhs;
                }
            }
        }

        Ast parse_unary()
        {
            skip_space();
            if (peek() == '-') {
                ++pos_;
                Ast operand = parse_unary();
                Ast out;
                out.node = AstUnary{ OpCode::neg, std::make_unique<Ast>(std::move(operand)) };
                return out;
            }
            return parse_primary();
        }

        Ast parse_primary()
        {
            skip_space();
            if (pos_ >= text_.size())
                throw ParseError(Errc::syntax_error, pos_, "unexpected end of expression");
            const char c = text_[pos_];

            if (c == '(') {
                ++pos_;
                Ast inner = parse_expr();
                skip_space();
                if (peek() != ')')
                    throw ParseError(Errc::syntax_error, pos_, "expected ')'");
                ++pos_;
                return inner;
            }

            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
                return parse_number();

            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
                return parse_identifier();

            throw unexpected_char();
        }

        ParseError unexpected_char() const
        {
            const char c = text_[pos_];
            if (std::string_view("^%!&|~<>=").find(c) != std::string_view::npos)
                return { Errc::unknown_operator, pos_, std::string("unknown operator '") + c + "'" };
            return { Errc::syntax_error, pos_, std::string("unexpected '") + c + "'" };
        }

        Ast parse_number()
        {
            const std::size_t start = pos_;
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
            if (ec != std::errc{})
                throw ParseError(Errc::syntax_error, start, "malformed number");
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            Ast out;
            out.node = AstConst{ value };
            return out;
        }

        Ast parse_identifier()
        {
            const std::size_t start = pos_;
            while (pos_ < text_.size()
                && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            if (std::find(features_.begin(), features_.end(), name) == features_.end())
                throw ParseError(Errc::unknown_identifier, start, "unknown identifier '" + name + "'");
            Ast out;
            out.node = AstVar{ std::move(name) };
            return out;
        }

        static Ast make_binary(OpCode op, Ast lhs, Ast rhs)
        {
            Ast out;
            out.node = AstBinary{ op, std::make_unique<Ast>(std::move(lhs)),
                std::make_unique<Ast>(std::move(rhs)) };
            return out;
        }

        char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

        void skip_space()
        {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }

        const std::string& text_;
        const std::vector<std::string>& features_;
        std::size_t pos_ = 0;
    };

    // --- plan builder -------------------------------------------------------

    class PlanBuilder {
    public:
        PlanBuilder(const std::vector<std::string>& features)
            : features_(features)
        {
        }

        int emit(const Ast& ast)
        {
            if (const auto* var = std::get_if<AstVar>(&ast.node)) {
                auto found = feed_index_.find(var->name);
                if (found != feed_index_.end())
                    return found->second;
                const auto it = std::find(features_.begin(), features_.end(), var->name);
                if (it == features_.end())
                    throw ParseError(Errc::unknown_identifier, 0, "unknown identifier '" + var->name + "'");
                const int feature = static_cast<int>(it - features_.begin());
                const int index = push(PlanFeed{ feature, var->name });
                feed_index_.emplace(var->name, index);
                return index;
            }
            if (const auto* cst = std::get_if<AstConst>(&ast.node))
                return push(PlanConst{ cst->value });
            if (const auto* unary = std::get_if<AstUnary>(&ast.node)) {
                const int operand = emit(*unary->operand);
                return push(PlanOp{ unary->op, operand, -1 });
            }
            const auto& binary = std::get<AstBinary>(ast.node);
            const int lhs = emit(*binary.left);
            const int rhs = emit(*binary.right);
            return push(PlanOp{ binary.op, lhs, rhs });
        }

        EvalPlan finish(int output, const Kernel& kernel)
        {
            EvalPlan plan;
            plan.nodes = std::move(nodes_);
            plan.output = output;
            if (kernel.kind == KernelKind::classification) {
                plan.nodes.push_back(PlanLabels{ output, kernel.n_classes });
                plan.kernel_outputs.emplace("labels", static_cast<int>(plan.nodes.size() - 1));
            }
            return plan;
        }

    private:
        int push(PlanNode node)
        {
            nodes_.push_back(std::move(node));
            return static_cast<int>(nodes_.size() - 1);
        }

        const std::vector<std::string>& features_;
        std::vector<PlanNode> nodes_;
        std::map<std::string, int> feed_index_;
    };

} // namespace

std::string render_expression(const Tree& tree)
{
    std::string out;
    render_node(tree, tree.root, out);
    return out;
}

Ast parse_expression(const std::string& expr, const std::vector<std::string>& feature_names)
{
    if (expr.empty())
        throw ParseError(Errc::syntax_error, 0, "empty expression");
    return Parser(expr, feature_names).parse();
}

EvalPlan build_plan(const Ast& ast, const Kernel& kernel, const std::vector<std::string>& feature_names)
{
    PlanBuilder builder(feature_names);
    const int output = builder.emit(ast);
    return builder.finish(output, kernel);
}

EvalPlan compile_tree(const Tree& tree, const Kernel& kernel, const std::vector<std::string>& feature_names)
{
    const Ast ast = parse_expression(render_expression(tree), feature_names);
    return build_plan(ast, kernel, feature_names);
}

std::size_t EvalPlan::feed_count() const
{
    return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(),
        [](const PlanNode& n) { return std::holds_alternative<PlanFeed>(n); }));
}

bool is_topologically_ordered(const EvalPlan& plan)
{
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        const auto check = [i](int input) { return input >= 0 && static_cast<std::size_t>(input) < i; };
        if (const auto* op = std::get_if<PlanOp>(&plan.nodes[i])) {
            if (!check(op->lhs))
                return false;
            if (op->rhs != -1 && !check(op->rhs))
                return false;
        } else if (const auto* labels = std::get_if<PlanLabels>(&plan.nodes[i])) {
            if (!check(labels->input))
                return false;
        }
    }
    return plan.output >= 0 && static_cast<std::size_t>(plan.output) < plan.nodes.size();
}

std::string dump_plan(const EvalPlan& plan)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < plan.nodes.size(); ++i) {
        out << '%' << i << " = ";
        if (const auto* feed = std::get_if<PlanFeed>(&plan.nodes[i]))
            out << "feed " << feed->name << " (column " << feed->feature << ")";
        else if (const auto* cst = std::get_if<PlanConst>(&plan.nodes[i]))
            out << "const " << format_constant(cst->value);
        else if (const auto* op = std::get_if<PlanOp>(&plan.nodes[i])) {
            out << "op " << op_symbol(op->op) << " %" << op->lhs;
            if (op->rhs != -1)
                out << " %" << op->rhs;
        } else if (const auto* labels = std::get_if<PlanLabels>(&plan.nodes[i]))
            out << "labels %" << labels->input << " (" << labels->n_classes << " classes)";
        if (static_cast<int>(i) == plan.output)
            out << "   <- output";
        out << '\n';
    }
    return out.str();
}

} // namespace gpvec
