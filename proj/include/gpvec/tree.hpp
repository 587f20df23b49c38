#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpvec/ops.hpp"

namespace gpvec {

using NodeId = std::uint32_t;

struct OperatorNode {
    OpCode op;
};

struct VariableNode {
    int index = 0;    // column in the active dataset
    std::string name; // feature label, used when rendering
};

struct ConstantNode {
    double value = 0.0;
};

using NodeKind = std::variant<OperatorNode, VariableNode, ConstantNode>;

inline int node_arity(const NodeKind& kind) noexcept
{
    if (const auto* op = std::get_if<OperatorNode>(&kind))
        return op_arity(op->op);
    return 0;
}

inline bool is_terminal(const NodeKind& kind) noexcept { return node_arity(kind) == 0; }

struct TreeNode {
    NodeKind kind;
    std::vector<NodeId> children; // ordered, size == arity of kind
};

// One expression tree, the unit of evolution. Nodes live in a flat vector and
// reference each other by index; the structure must form a single rooted tree
// (checked by validate_tree).
struct Tree {
    int id = 0;
    int birth_generation = 0;
    std::vector<TreeNode> nodes;
    NodeId root = 0;
    int depth = 0; // longest root-to-leaf edge count; a lone terminal is depth 0
    std::optional<double> fitness;

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes.size(); }
};

// Recomputes the depth of the subtree rooted at `node`.
int subtree_depth(const Tree& tree, NodeId node);

// Refreshes the cached depth field from the structure.
void refresh_depth(Tree& tree);

// Structural check: single root covering all nodes, each node with exactly one
// parent, arity-correct child counts, cached depth consistent. Returns an
// explanation for the first violation found, or nullopt when the tree is valid.
std::optional<std::string> validate_tree(const Tree& tree);

// Depth of `node` below the root (root itself is 0).
int node_level(const Tree& tree, NodeId node);

// Deep-copies the subtree of `source` rooted at `node` into `dest`, returning
// the id of the copied root within `dest`.
NodeId copy_subtree(const Tree& source, NodeId node, Tree& dest);

} // namespace gpvec
