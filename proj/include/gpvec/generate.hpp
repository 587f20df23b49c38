#pragma once

#include <span>
#include <string>
#include <vector>

#include "gpvec/config.hpp"
#include "gpvec/rng.hpp"
#include "gpvec/tree.hpp"

namespace gpvec {

// One generation's worth of trees.
struct Population {
    int generation = 1;
    std::vector<Tree> trees;
};

enum class GenMethod { full, grow };

// Builds one random tree. Full places operators everywhere above depth_target
// and terminals exactly at it; grow chooses an operator with probability
// grow_bias at each level below the target, so branches may stop early.
// Regenerates (up to 100 attempts) until the tree has at least min_nodes
// nodes; an unsatisfiable combination raises RetryExhausted.
Tree gen_tree(GenMethod method, int depth_target, std::span<const std::string> features,
    const std::vector<OpCode>& operator_set, int min_nodes, Rng& rng, double grow_bias = 0.5);

// Builds generation 1. Ramped half/half spreads trees evenly over depth
// targets 2..tree_depth_base, half full and half grow at each depth, with any
// remainder assigned to grow at the base depth. Tree ids are 1..tree_pop_max.
Population gen_population(const Config& config, std::span<const std::string> features, Rng& rng);

// Random subtree for branch mutation and pruning: a grow tree with no
// minimum-size constraint (depth_target 0 yields a lone terminal).
Tree gen_subtree(int depth_target, std::span<const std::string> features,
    const std::vector<OpCode>& operator_set, Rng& rng, double grow_bias = 0.5);

NodeKind random_terminal(std::span<const std::string> features, Rng& rng);

} // namespace gpvec
