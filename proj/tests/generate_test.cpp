#include <doctest.h>

#include <map>
#include <set>

#include "gpvec/compile.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/generate.hpp"
#include "test_helpers.hpp"

using namespace gpvec;

namespace {

const std::vector<std::string> two_features{ "a", "b" };

bool equal_structure(const Tree& x, const Tree& y)
{
    return render_expression(x) == render_expression(y);
}

} // namespace

TEST_CASE("full trees put every leaf at the target depth")
{
    Rng rng(1);
    const Tree tree = gen_tree(GenMethod::full, 2, two_features, default_operator_set(), 3, rng);
    CHECK(tree.depth == 2);
    CHECK(tree.node_count() == 7); // binary operators force 3 ops + 4 leaves
    int operators = 0, leaves = 0;
    for (const TreeNode& node : tree.nodes)
        (is_terminal(node.kind) ? leaves : operators) += 1;
    CHECK(operators == 3);
    CHECK(leaves == 4);
    CHECK(!validate_tree(tree).has_value());
}

TEST_CASE("grow trees never exceed the target depth")
{
    Rng rng(2);
    for (int i = 0; i < 1000; ++i) {
        const Tree tree = gen_tree(GenMethod::grow, 5, two_features, default_operator_set(), 1, rng);
        REQUIRE(tree.depth <= 5);
        REQUIRE(!validate_tree(tree).has_value());
    }
}

TEST_CASE("generation is deterministic per seed")
{
    Rng a(42), b(42);
    const Tree x = gen_tree(GenMethod::grow, 4, two_features, default_operator_set(), 3, a);
    const Tree y = gen_tree(GenMethod::grow, 4, two_features, default_operator_set(), 3, b);
    CHECK(equal_structure(x, y));
}

TEST_CASE("min_nodes is enforced by regeneration")
{
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Tree tree = gen_tree(GenMethod::grow, 2, two_features, default_operator_set(), 3, rng);
        REQUIRE(tree.node_count() >= 3);
    }
}

TEST_CASE("unsatisfiable min_nodes raises RetryExhausted")
{
    Rng rng(4);
    // a depth-1 tree of binary operators has at most 3 nodes
    try {
        gen_tree(GenMethod::full, 1, two_features, default_operator_set(), 4, rng);
        FAIL("expected RetryExhausted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::retry_exhausted);
    }
}

TEST_CASE("ramped population spreads depths 2..base, half full half grow")
{
    Config config; // pop 100, base 5
    Rng rng(5);
    const Population population = gen_population(config, two_features, rng);
    CHECK(population.generation == 1);
    CHECK(population.trees.size() == 100);

    std::map<int, int> full_at, grow_at;
    std::size_t index = 0;
    for (int depth = 2; depth <= 5; ++depth) {
        // slots are laid out depth by depth, full then grow
        for (int k = 0; k < 25; ++k, ++index) {
            const Tree& tree = population.trees[index];
            REQUIRE(tree.depth <= depth);
            if (k < 12)
                full_at[depth] += tree.depth == depth ? 1 : 0;
            else
                grow_at[depth] += 1;
        }
    }
    for (int depth = 2; depth <= 5; ++depth) {
        CHECK(full_at[depth] == 12); // full trees reach the target exactly
        CHECK(grow_at[depth] == 13);
    }

    // ids unique 1..100, every tree valid and sized
    std::set<int> ids;
    for (const Tree& tree : population.trees) {
        ids.insert(tree.id);
        REQUIRE(!validate_tree(tree).has_value());
        REQUIRE(tree.node_count() >= 3);
        REQUIRE(tree.depth <= 5);
        REQUIRE(tree.birth_generation == 1);
    }
    CHECK(ids.size() == 100);
    CHECK(*ids.begin() == 1);
    CHECK(*ids.rbegin() == 100);
}

TEST_CASE("smallest ramp: one full and one grow tree at depth 2")
{
    Config config;
    config.tree_pop_max = 2;
    config.tree_depth_base = 2;
    config.tree_depth_max = 2;
    config.tournament_size = 2;
    validate_config(config);

    Rng rng(6);
    const Population population = gen_population(config, two_features, rng);
    REQUIRE(population.trees.size() == 2);
    CHECK(population.trees[0].depth == 2); // full reaches the target
    CHECK(population.trees[1].depth <= 2);
}

TEST_CASE("ramp remainder goes to grow at the base depth")
{
    Config config;
    config.tree_pop_max = 101;
    validate_config(config);
    Rng rng(7);
    const Population population = gen_population(config, two_features, rng);
    CHECK(population.trees.size() == 101);
    CHECK(population.trees.back().depth <= 5);
}

TEST_CASE("uniform tree types build whole populations at the base depth")
{
    Config config;
    config.tree_type = TreeType::full;
    config.tree_pop_max = 10;
    validate_config(config);
    Rng rng(8);
    const Population population = gen_population(config, two_features, rng);
    for (const Tree& tree : population.trees)
        CHECK(tree.depth == 5);

    config.tree_type = TreeType::grow;
    const Population grown = gen_population(config, two_features, rng);
    for (const Tree& tree : grown.trees)
        CHECK(tree.depth <= 5);
}
