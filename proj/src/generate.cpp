#include "gpvec/generate.hpp"

#include "gpvec/errors.hpp"

namespace gpvec {

namespace {

    NodeId build_node(Tree& tree, GenMethod method, int level, int depth_target,
        std::span<const std::string> features, const std::vector<OpCode>& operator_set,
        Rng& rng, double grow_bias)
    {
        bool make_operator = level < depth_target;
        if (make_operator && method == GenMethod::grow) {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            make_operator = unit(rng) < grow_bias;
        }

        TreeNode node;
        if (make_operator) {
            std::uniform_int_distribution<std::size_t> pick(0, operator_set.size() - 1);
            const OpCode op = operator_set[pick(rng)];
            node.kind = OperatorNode{ op };
            node.children.reserve(static_cast<std::size_t>(op_arity(op)));
            for (int c = 0; c < op_arity(op); ++c)
                node.children.push_back(build_node(tree, method, level + 1, depth_target,
                    features, operator_set, rng, grow_bias));
        } else {
            node.kind = random_terminal(features, rng);
        }
        tree.nodes.push_back(std::move(node));
        return static_cast<NodeId>(tree.nodes.size() - 1);
    }

    Tree build_once(GenMethod method, int depth_target, std::span<const std::string> features,
        const std::vector<OpCode>& operator_set, Rng& rng, double grow_bias)
    {
        Tree tree;
        tree.root = build_node(tree, method, 0, depth_target, features, operator_set, rng, grow_bias);
        refresh_depth(tree);
        return tree;
    }

} // namespace

NodeKind random_terminal(std::span<const std::string> features, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, features.size() - 1);
    const std::size_t index = pick(rng);
    return VariableNode{ static_cast<int>(index), features[index] };
}

Tree gen_tree(GenMethod method, int depth_target, std::span<const std::string> features,
    const std::vector<OpCode>& operator_set, int min_nodes, Rng& rng, double grow_bias)
{
    for (int attempt = 0; attempt < 100; ++attempt) {
        Tree tree = build_once(method, depth_target, features, operator_set, rng, grow_bias);
        if (static_cast<int>(tree.node_count()) >= min_nodes)
            return tree;
    }
    throw Error(Errc::retry_exhausted,
        "could not generate a tree with >= " + std::to_string(min_nodes)
            + " nodes at depth target " + std::to_string(depth_target)
            + " in 100 attempts; the configuration is inconsistent");
}

Tree gen_subtree(int depth_target, std::span<const std::string> features,
    const std::vector<OpCode>& operator_set, Rng& rng, double grow_bias)
{
    return build_once(GenMethod::grow, depth_target, features, operator_set, rng, grow_bias);
}

Population gen_population(const Config& config, std::span<const std::string> features, Rng& rng)
{
    struct Slot {
        GenMethod method;
        int depth;
    };
    std::vector<Slot> slots;
    slots.reserve(static_cast<std::size_t>(config.tree_pop_max));

    if (config.tree_type == TreeType::full || config.tree_type == TreeType::grow) {
        const GenMethod method = config.tree_type == TreeType::full ? GenMethod::full : GenMethod::grow;
        for (int i = 0; i < config.tree_pop_max; ++i)
            slots.push_back({ method, config.tree_depth_base });
    } else {
        // ramp over depths 2..base (a lone depth when base < 2)
        const int low = std::min(2, config.tree_depth_base);
        const int n_depths = config.tree_depth_base - low + 1;
        const int per_depth = config.tree_pop_max / n_depths;
        const int remainder = config.tree_pop_max % n_depths;
        for (int depth = low; depth <= config.tree_depth_base; ++depth) {
            const int n_full = per_depth / 2;
            for (int i = 0; i < n_full; ++i)
                slots.push_back({ GenMethod::full, depth });
            for (int i = n_full; i < per_depth; ++i)
                slots.push_back({ GenMethod::grow, depth });
        }
        for (int i = 0; i < remainder; ++i)
            slots.push_back({ GenMethod::grow, config.tree_depth_base });
    }

    Population population;
    population.generation = 1;
    population.trees.reserve(slots.size());
    int next_id = 1;
    for (const Slot& slot : slots) {
        Tree tree = gen_tree(slot.method, slot.depth, features, config.operator_set,
            config.min_nodes, rng, config.grow_bias);
        tree.id = next_id++;
        tree.birth_generation = 1;
        population.trees.push_back(std::move(tree));
    }
    return population;
}

} // namespace gpvec
