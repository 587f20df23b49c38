#pragma once

#include <chrono>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gpvec/archive.hpp"
#include "gpvec/backends.hpp"
#include "gpvec/config.hpp"
#include "gpvec/data.hpp"
#include "gpvec/generate.hpp"
#include "gpvec/rng.hpp"

namespace gpvec {

// How many offspring each genetic operator contributes to a generation.
// Computed from the configured fractions by largest-remainder rounding, so the
// counts always sum to the population size.
struct OperatorBudget {
    int n_reproduce = 0;
    int n_mutate = 0;
    int n_crossover = 0;

    bool operator==(const OperatorBudget&) const = default;
};

OperatorBudget operator_budget(int pop, double reproduction, double mutation, double crossover);

inline OperatorBudget operator_budget(const Config& config)
{
    return operator_budget(config.tree_pop_max, config.op_reproduction,
        config.op_mutation, config.op_crossover);
}

// Samples `size` trees uniformly without replacement and returns the best by
// rounded fitness; ties go to the smaller tree, then the lower id.
const Tree& tournament_select(const Population& population, int size,
    FitnessDirection direction, Rng& rng);

// Structural deep copy with a fresh id and birth generation; fitness unset.
Tree op_reproduce(const Tree& parent, int new_id, int birth_generation);

// Point mutation (one node's kind swapped for an arity-compatible
// alternative) or branch mutation (one subtree regrown within the depth
// ceiling), chosen by config.point_mutation_bias. Never fails: branch
// mutations that cannot satisfy min_nodes fall back to point mutation.
Tree op_mutate(const Tree& parent, const Config& config,
    std::span<const std::string> features, Rng& rng, int new_id, int birth_generation);

// Subtree crossover: a copy of parent_a with a uniformly chosen node replaced
// by a uniformly chosen subtree of parent_b, pruned back to the depth
// ceiling. Offspring below min_nodes resample the cut point; after bounded
// retries the child is a plain copy of parent_a.
Tree op_crossover(const Tree& parent_a, const Tree& parent_b, const Config& config,
    std::span<const std::string> features, Rng& rng, int new_id, int birth_generation);

// Replaces every operator node sitting at depth_max with a random terminal,
// deleting anything deeper. Trees already within the ceiling are returned
// unchanged.
Tree prune_to_depth(const Tree& tree, int depth_max,
    std::span<const std::string> features, Rng& rng);

// Scores a tree in place (sets tree.fitness to the rounded value). Must be
// safe to call concurrently on distinct trees.
using TreeScorer = std::function<void(Tree&)>;

// Builds and scores the next generation: budgeted reproduction, mutation and
// crossover over tournament winners. Population size is preserved exactly.
Population next_generation(const Population& current, const Config& config,
    FitnessDirection direction, std::span<const std::string> features,
    const TreeScorer& scorer, RngSet& rngs);

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    int best_id = 0;
    double wall_seconds = 0.0; // this generation only
};

struct RunResult {
    Population population; // final generation
    std::vector<GenerationStats> history;
    double elapsed_seconds = 0.0; // generation-1 construction to final archive flush
    RunArchive archive;
    Kernel kernel;
};

// Drives one evolution run: owns the population, the rng substreams, the
// archive and the wall-time boundary. The interactive front end steps it one
// generation at a time; run_evolution drains it in one call.
class EvolutionEngine {
public:
    EvolutionEngine(Config config, const ColumnStore& store);

    // Builds, scores and archives generation 1. Starts the run clock.
    GenerationStats start();

    // Advances one generation. Requires start() first.
    GenerationStats step();

    [[nodiscard]] bool done() const;
    [[nodiscard]] const Population& population() const { return population_; }
    [[nodiscard]] const Tree& best_tree() const;
    [[nodiscard]] const Kernel& kernel() const { return kernel_; }
    [[nodiscard]] const ColumnStore& store() const { return store_; }
    [[nodiscard]] const std::vector<GenerationStats>& history() const { return history_; }
    [[nodiscard]] const RunArchive& archive() const { return archive_; }

    // Runtime-reconfigurable parameters: generation cap, tournament size and
    // operator fractions. Everything else is fixed for the life of the run.
    void set_generation_max(int value);
    void set_tournament_size(int value);
    void set_operator_fractions(double reproduction, double mutation, double crossover);

    [[nodiscard]] const Config& config() const { return config_; }

    RunResult finalize();

private:
    GenerationStats record_generation(std::chrono::steady_clock::time_point gen_start);
    void score_population(Population& population);
    TreeScorer make_scorer() const;

    Config config_;
    const ColumnStore& store_;
    Kernel kernel_;
    FitnessDirection direction_;
    RngSet rngs_;
    Population population_;
    std::vector<GenerationStats> history_;
    RunArchive archive_;
    std::chrono::steady_clock::time_point run_start_{};
    double elapsed_seconds_ = 0.0;
    bool started_ = false;
};

// Full run: generation 1 through generation_max, every generation archived.
// Deterministic for a fixed (seed, config, dataset, backend).
RunResult run_evolution(const Config& config, const ColumnStore& store);

// Resolves the kernel against the dataset (classification derives n_classes
// from the distinct solution labels).
Kernel resolve_kernel(const Config& config, const ColumnStore& store);

} // namespace gpvec
