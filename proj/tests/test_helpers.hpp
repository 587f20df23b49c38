#pragma once

// Shared test utilities: hand-built trees, an independent recursive tree
// evaluator (the oracle the compiled-plan path is checked against), and
// temp-directory plumbing.

#include <atomic>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "gpvec/backends.hpp"
#include "gpvec/data.hpp"
#include "gpvec/tree.hpp"

namespace gpvec::test {

struct TreeBuilder {
    Tree tree;

    NodeId var(int index, std::string name)
    {
        tree.nodes.push_back({ VariableNode{ index, std::move(name) }, {} });
        return static_cast<NodeId>(tree.nodes.size() - 1);
    }

    NodeId constant(double value)
    {
        tree.nodes.push_back({ ConstantNode{ value }, {} });
        return static_cast<NodeId>(tree.nodes.size() - 1);
    }

    NodeId op(OpCode code, NodeId lhs, NodeId rhs)
    {
        tree.nodes.push_back({ OperatorNode{ code }, { lhs, rhs } });
        return static_cast<NodeId>(tree.nodes.size() - 1);
    }

    NodeId op(OpCode code, NodeId operand)
    {
        tree.nodes.push_back({ OperatorNode{ code }, { operand } });
        return static_cast<NodeId>(tree.nodes.size() - 1);
    }

    Tree finish(NodeId root, int id = 1)
    {
        tree.root = root;
        tree.id = id;
        tree.birth_generation = 1;
        refresh_depth(tree);
        return std::move(tree);
    }
};

// Direct recursive evaluation of the tree itself, bypassing the whole
// render/parse/plan route. Kept deliberately naive.
inline double eval_tree_at_row(const Tree& tree, NodeId node, const ColumnStore& store, std::size_t row)
{
    const TreeNode& n = tree.nodes[node];
    if (const auto* var = std::get_if<VariableNode>(&n.kind))
        return store.columns[static_cast<std::size_t>(var->index)][row];
    if (const auto* cst = std::get_if<ConstantNode>(&n.kind))
        return cst->value;
    const auto& op = std::get<OperatorNode>(n.kind);
    if (op_arity(op.op) == 1)
        return protected_apply(op.op, eval_tree_at_row(tree, n.children[0], store, row));
    return protected_apply(op.op, eval_tree_at_row(tree, n.children[0], store, row),
        eval_tree_at_row(tree, n.children[1], store, row));
}

inline std::vector<double> eval_tree_direct(const Tree& tree, const ColumnStore& store)
{
    std::vector<double> out(store.n_rows);
    for (std::size_t row = 0; row < store.n_rows; ++row)
        out[row] = eval_tree_at_row(tree, tree.root, store, row);
    return out;
}

inline ColumnStore make_store(std::vector<std::string> names,
    std::vector<std::vector<double>> columns, std::vector<double> solution)
{
    ColumnStore store;
    store.feature_names = std::move(names);
    store.columns = std::move(columns);
    store.solution = std::move(solution);
    store.n_rows = store.solution.size();
    return store;
}

// Unique scratch directory under the system temp root; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static std::atomic<unsigned> counter{ 0 };
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("gpvec-" + tag + "-" + std::to_string(::getpid()) + "-"
            + std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }

    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    [[nodiscard]] std::string str() const { return path_.string(); }
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string data_file(const std::string& name)
{
    return std::string(GPVEC_DATA_DIR) + "/" + name;
}

} // namespace gpvec::test
