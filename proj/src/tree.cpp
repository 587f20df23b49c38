#include "gpvec/tree.hpp"

#include <algorithm>

namespace gpvec {

int subtree_depth(const Tree& tree, NodeId node)
{
    const TreeNode& n = tree.nodes[node];
    int deepest = -1;
    for (NodeId child : n.children)
        deepest = std::max(deepest, subtree_depth(tree, child));
    return deepest + 1;
}

void refresh_depth(Tree& tree)
{
    tree.depth = tree.nodes.empty() ? 0 : subtree_depth(tree, tree.root);
}

std::optional<std::string> validate_tree(const Tree& tree)
{
    if (tree.nodes.empty())
        return "tree has no nodes";
    if (tree.root >= tree.nodes.size())
        return "root id out of range";

    const std::size_t n = tree.nodes.size();
    std::vector<int> parents(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const TreeNode& node = tree.nodes[i];
        const int arity = node_arity(node.kind);
        if (static_cast<int>(node.children.size()) != arity)
            return "node " + std::to_string(i) + " has " + std::to_string(node.children.size())
                + " children, arity is " + std::to_string(arity);
        for (NodeId child : node.children) {
            if (child >= n)
                return "node " + std::to_string(i) + " references missing child " + std::to_string(child);
            parents[child] += 1;
        }
    }

    if (parents[tree.root] != 0)
        return "root has a parent";
    for (std::size_t i = 0; i < n; ++i) {
        if (i == tree.root)
            continue;
        if (parents[i] == 0)
            return "node " + std::to_string(i) + " is unreachable";
        if (parents[i] > 1)
            return "node " + std::to_string(i) + " has multiple parents";
    }

    // Parent counts rule out sharing; a cycle would leave the root unable to
    // reach every node, so a reachability sweep completes the check.
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{ tree.root };
    std::size_t visited = 0;
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        if (seen[cur])
            return "cycle through node " + std::to_string(cur);
        seen[cur] = 1;
        ++visited;
        for (NodeId child : tree.nodes[cur].children)
            stack.push_back(child);
    }
    if (visited != n)
        return "tree is not fully connected";

    if (tree.depth != subtree_depth(tree, tree.root))
        return "cached depth " + std::to_string(tree.depth) + " does not match structure";

    return std::nullopt;
}

int node_level(const Tree& tree, NodeId node)
{
    // Trees are small; a rootward search over parent links is not available,
    // so walk down from the root.
    struct Frame {
        NodeId id;
        int level;
    };
    std::vector<Frame> stack{ { tree.root, 0 } };
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.id == node)
            return f.level;
        for (NodeId child : tree.nodes[f.id].children)
            stack.push_back({ child, f.level + 1 });
    }
    return -1;
}

NodeId copy_subtree(const Tree& source, NodeId node, Tree& dest)
{
    const TreeNode& src = source.nodes[node];
    TreeNode copy;
    copy.kind = src.kind;
    copy.children.reserve(src.children.size());
    for (NodeId child : src.children)
        copy.children.push_back(copy_subtree(source, child, dest));
    dest.nodes.push_back(std::move(copy));
    return static_cast<NodeId>(dest.nodes.size() - 1);
}

} // namespace gpvec
