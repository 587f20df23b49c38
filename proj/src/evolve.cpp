#include "gpvec/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "gpvec/compile.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/fitness.hpp"

namespace gpvec {

namespace {

    constexpr int mutation_retries = 10;
    constexpr int crossover_retries = 10;

    // True when `a` beats `b` under the kernel's direction; ties go to the
    // smaller tree, then the lower id, so selection is fully deterministic.
    bool beats(const Tree& a, const Tree& b, FitnessDirection direction)
    {
        const double fa = *a.fitness;
        const double fb = *b.fitness;
        if (fa != fb)
            return direction == FitnessDirection::minimize ? fa < fb : fa > fb;
        if (a.node_count() != b.node_count())
            return a.node_count() < b.node_count();
        return a.id < b.id;
    }

    // Copy of `base` with the subtree at `at` replaced by the subtree of
    // `replacement` rooted at `repl_root`.
    NodeId graft_copy(const Tree& base, NodeId current, NodeId at,
        const Tree& replacement, NodeId repl_root, Tree& out)
    {
        if (current == at)
            return copy_subtree(replacement, repl_root, out);
        const TreeNode& src = base.nodes[current];
        TreeNode node;
        node.kind = src.kind;
        node.children.reserve(src.children.size());
        for (NodeId child : src.children)
            node.children.push_back(graft_copy(base, child, at, replacement, repl_root, out));
        out.nodes.push_back(std::move(node));
        return static_cast<NodeId>(out.nodes.size() - 1);
    }

    Tree graft(const Tree& base, NodeId at, const Tree& replacement, NodeId repl_root)
    {
        Tree out;
        out.root = graft_copy(base, base.root, at, replacement, repl_root, out);
        refresh_depth(out);
        return out;
    }

    NodeId prune_copy(const Tree& src, NodeId current, int level, int depth_max,
        std::span<const std::string> features, Rng& rng, Tree& out)
    {
        const TreeNode& node = src.nodes[current];
        if (level >= depth_max && !is_terminal(node.kind)) {
            out.nodes.push_back(TreeNode{ random_terminal(features, rng), {} });
            return static_cast<NodeId>(out.nodes.size() - 1);
        }
        TreeNode copy;
        copy.kind = node.kind;
        copy.children.reserve(node.children.size());
        for (NodeId child : node.children)
            copy.children.push_back(prune_copy(src, child, level + 1, depth_max, features, rng, out));
        out.nodes.push_back(std::move(copy));
        return static_cast<NodeId>(out.nodes.size() - 1);
    }

    NodeId pick_node(const Tree& tree, Rng& rng)
    {
        std::uniform_int_distribution<std::size_t> pick(0, tree.node_count() - 1);
        return static_cast<NodeId>(pick(rng));
    }

    Tree point_mutate(const Tree& parent, const Config& config,
        std::span<const std::string> features, Rng& rng)
    {
        // candidate nodes are those with at least one arity-compatible alternative
        std::vector<NodeId> candidates;
        for (NodeId i = 0; i < parent.node_count(); ++i) {
            const NodeKind& kind = parent.nodes[i].kind;
            if (const auto* op = std::get_if<OperatorNode>(&kind)) {
                const auto alternatives = std::count_if(config.operator_set.begin(),
                    config.operator_set.end(), [&](OpCode c) {
                        return c != op->op && op_arity(c) == op_arity(op->op);
                    });
                if (alternatives > 0)
                    candidates.push_back(i);
            } else if (std::holds_alternative<VariableNode>(kind)) {
                if (features.size() >= 2)
                    candidates.push_back(i);
            } else {
                // constants leave the default terminal set under mutation
                candidates.push_back(i);
            }
        }

        Tree child = parent;
        if (candidates.empty())
            return child; // degenerate config: nothing to mutate

        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const NodeId target = candidates[pick(rng)];
        NodeKind& kind = child.nodes[target].kind;

        if (const auto* op = std::get_if<OperatorNode>(&kind)) {
            std::vector<OpCode> alternatives;
            for (OpCode c : config.operator_set)
                if (c != op->op && op_arity(c) == op_arity(op->op))
                    alternatives.push_back(c);
            std::uniform_int_distribution<std::size_t> choose(0, alternatives.size() - 1);
            kind = OperatorNode{ alternatives[choose(rng)] };
        } else if (const auto* var = std::get_if<VariableNode>(&kind)) {
            // uniform over the other variables
            std::uniform_int_distribution<std::size_t> choose(0, features.size() - 2);
            std::size_t index = choose(rng);
            if (index >= static_cast<std::size_t>(var->index))
                ++index;
            kind = VariableNode{ static_cast<int>(index), features[index] };
        } else {
            kind = random_terminal(features, rng);
        }
        refresh_depth(child);
        return child;
    }

} // namespace

OperatorBudget operator_budget(int pop, double reproduction, double mutation, double crossover)
{
    const double fractions[3] = { reproduction, mutation, crossover };
    int counts[3];
    double remainders[3];
    int assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = fractions[i] * pop;
        counts[i] = static_cast<int>(exact);
        remainders[i] = exact - counts[i];
        assigned += counts[i];
    }
    // hand leftover slots to the largest remainders; ties prefer the larger
    // fraction, then the later operator (crossover over mutation over
    // reproduction)
    int order[3] = { 0, 1, 2 };
    std::sort(order, order + 3, [&](int a, int b) {
        if (remainders[a] != remainders[b])
            return remainders[a] > remainders[b];
        if (fractions[a] != fractions[b])
            return fractions[a] > fractions[b];
        return a > b;
    });
    for (int k = 0; assigned < pop; ++k, ++assigned)
        counts[order[k % 3]] += 1;
    return { counts[0], counts[1], counts[2] };
}

const Tree& tournament_select(const Population& population, int size,
    FitnessDirection direction, Rng& rng)
{
    const std::size_t pop = population.trees.size();
    // partial Fisher-Yates over the index range: a uniform sample without
    // replacement
    std::vector<std::size_t> indices(pop);
    std::iota(indices.begin(), indices.end(), std::size_t{ 0 });

    const Tree* best = nullptr;
    for (int k = 0; k < size; ++k) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), pop - 1);
        std::swap(indices[static_cast<std::size_t>(k)], indices[pick(rng)]);
        const Tree& contender = population.trees[indices[static_cast<std::size_t>(k)]];
        if (!contender.fitness)
            throw Error(Errc::unscored_population,
                "tree " + std::to_string(contender.id) + " has no fitness score");
        if (!best || beats(contender, *best, direction))
            best = &contender;
    }
    return *best;
}

Tree op_reproduce(const Tree& parent, int new_id, int birth_generation)
{
    Tree child = parent;
    child.id = new_id;
    child.birth_generation = birth_generation;
    child.fitness.reset();
    return child;
}

Tree op_mutate(const Tree& parent, const Config& config,
    std::span<const std::string> features, Rng& rng, int new_id, int birth_generation)
{
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Tree child;
    bool branch = unit(rng) >= config.point_mutation_bias;
    if (branch) {
        bool done = false;
        for (int attempt = 0; attempt < mutation_retries && !done; ++attempt) {
            const NodeId target = pick_node(parent, rng);
            const int budget = config.tree_depth_max - node_level(parent, target);
            Tree replacement = gen_subtree(budget, features, config.operator_set, rng, config.grow_bias);
            Tree candidate = graft(parent, target, replacement, replacement.root);
            if (static_cast<int>(candidate.node_count()) >= config.min_nodes) {
                child = std::move(candidate);
                done = true;
            }
        }
        if (!done)
            branch = false; // fall back to point mutation
    }
    if (!branch)
        child = point_mutate(parent, config, features, rng);

    child.id = new_id;
    child.birth_generation = birth_generation;
    child.fitness.reset();
    return child;
}

Tree op_crossover(const Tree& parent_a, const Tree& parent_b, const Config& config,
    std::span<const std::string> features, Rng& rng, int new_id, int birth_generation)
{
    for (int attempt = 0; attempt < crossover_retries; ++attempt) {
        const NodeId cut = pick_node(parent_a, rng);
        const NodeId donor = pick_node(parent_b, rng);
        Tree child = graft(parent_a, cut, parent_b, donor);
        child = prune_to_depth(child, config.tree_depth_max, features, rng);
        if (static_cast<int>(child.node_count()) >= config.min_nodes) {
            child.id = new_id;
            child.birth_generation = birth_generation;
            child.fitness.reset();
            return child;
        }
    }
    return op_reproduce(parent_a, new_id, birth_generation);
}

Tree prune_to_depth(const Tree& tree, int depth_max, std::span<const std::string> features, Rng& rng)
{
    if (tree.depth <= depth_max)
        return tree;
    Tree out;
    out.id = tree.id;
    out.birth_generation = tree.birth_generation;
    out.root = prune_copy(tree, tree.root, 0, depth_max, features, rng, out);
    refresh_depth(out);
    return out;
}

Population next_generation(const Population& current, const Config& config,
    FitnessDirection direction, std::span<const std::string> features,
    const TreeScorer& scorer, RngSet& rngs)
{
    const OperatorBudget budget = operator_budget(config);
    const int generation = current.generation + 1;

    Population next;
    next.generation = generation;
    next.trees.reserve(static_cast<std::size_t>(config.tree_pop_max));
    int next_id = 1;

    for (int k = 0; k < budget.n_reproduce; ++k) {
        const Tree& parent = tournament_select(current, config.tournament_size, direction, rngs.selection);
        next.trees.push_back(op_reproduce(parent, next_id++, generation));
    }
    for (int k = 0; k < budget.n_mutate; ++k) {
        const Tree& parent = tournament_select(current, config.tournament_size, direction, rngs.selection);
        next.trees.push_back(op_mutate(parent, config, features, rngs.operators, next_id++, generation));
    }
    for (int k = 0; k < budget.n_crossover; ++k) {
        const Tree& parent_a = tournament_select(current, config.tournament_size, direction, rngs.selection);
        const Tree& parent_b = tournament_select(current, config.tournament_size, direction, rngs.selection);
        next.trees.push_back(op_crossover(parent_a, parent_b, config, features,
            rngs.operators, next_id++, generation));
    }

    // construct first, then score (selection in the next iteration needs the
    // fitness of every tree)
    const int workers = config.tree_parallel ? resolve_workers(config.workers) : 1;
    if (workers <= 1 || next.trees.size() < 2) {
        for (Tree& tree : next.trees)
            scorer(tree);
    } else {
        std::atomic<std::size_t> cursor{ 0 };
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto work = [&]() {
            while (true) {
                const std::size_t i = cursor.fetch_add(1, std::memory_order_relaxed);
                if (i >= next.trees.size())
                    return;
                try {
                    scorer(next.trees[i]);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(workers), next.trees.size());
        pool.reserve(n_threads - 1);
        for (std::size_t t = 1; t < n_threads; ++t)
            pool.emplace_back(work);
        work();
        for (std::thread& t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }
    return next;
}

Kernel resolve_kernel(const Config& config, const ColumnStore& store)
{
    Kernel kernel = config.kernel;
    if (kernel.kind == KernelKind::classification) {
        kernel.n_classes = count_distinct_labels(store);
        if (kernel.n_classes < 2)
            throw ConfigError("kernel",
                "classification needs at least 2 distinct labels, dataset has "
                    + std::to_string(kernel.n_classes));
    } else {
        kernel.n_classes = 0;
    }
    return kernel;
}

EvolutionEngine::EvolutionEngine(Config config, const ColumnStore& store)
    : config_(std::move(config))
    , store_(store)
    , rngs_(0)
{
    validate_config(config_);
    kernel_ = resolve_kernel(config_, store_);
    direction_ = direction_for(kernel_.kind);

    const std::uint64_t master = config_.rng_seed ? *config_.rng_seed : random_master_seed();
    config_.rng_seed = master; // archived snapshot records the seed actually used
    rngs_ = RngSet(master);

    archive_ = init_run_dir(config_, dataset_fingerprint(store_), master);
}

TreeScorer EvolutionEngine::make_scorer() const
{
    EvalSettings settings = eval_settings_from(config_);
    if (config_.tree_parallel)
        settings.workers = 1; // parallelism is across trees in that mode
    const Kernel kernel = kernel_;
    const int precision = config_.precision;
    const ColumnStore& store = store_;
    return [settings, kernel, precision, &store](Tree& tree) {
        const EvalPlan plan = compile_tree(tree, kernel, store.feature_names);
        const ResultVector result = evaluate(plan, store, settings);
        tree.fitness = score_kernel(kernel, result, store.solution, precision).value;
    };
}

void EvolutionEngine::score_population(Population& population)
{
    const TreeScorer scorer = make_scorer();
    for (Tree& tree : population.trees)
        scorer(tree);
}

GenerationStats EvolutionEngine::record_generation(std::chrono::steady_clock::time_point gen_start)
{
    write_generation(archive_, population_, config_.precision);
    const auto now = std::chrono::steady_clock::now();
    elapsed_seconds_ = std::chrono::duration<double>(now - run_start_).count();

    GenerationStats stats;
    stats.generation = population_.generation;
    stats.wall_seconds = std::chrono::duration<double>(now - gen_start).count();
    const Tree* best = nullptr;
    double sum = 0.0;
    for (const Tree& tree : population_.trees) {
        sum += tree.fitness.value_or(0.0);
        if (!best || beats(tree, *best, direction_))
            best = &tree;
    }
    stats.best_fitness = *best->fitness;
    stats.best_id = best->id;
    stats.mean_fitness = sum / static_cast<double>(population_.trees.size());
    history_.push_back(stats);
    return stats;
}

GenerationStats EvolutionEngine::start()
{
    run_start_ = std::chrono::steady_clock::now();
    started_ = true;
    population_ = gen_population(config_, store_.feature_names, rngs_.generation);
    score_population(population_);
    return record_generation(run_start_);
}

GenerationStats EvolutionEngine::step()
{
    const auto gen_start = std::chrono::steady_clock::now();
    population_ = next_generation(population_, config_, direction_, store_.feature_names,
        make_scorer(), rngs_);
    return record_generation(gen_start);
}

bool EvolutionEngine::done() const
{
    return started_ && population_.generation >= config_.generation_max;
}

const Tree& EvolutionEngine::best_tree() const
{
    const Tree* best = nullptr;
    for (const Tree& tree : population_.trees)
        if (!best || beats(tree, *best, direction_))
            best = &tree;
    return *best;
}

void EvolutionEngine::set_generation_max(int value)
{
    if (value < 1)
        throw ConfigError("generation_max", "must be >= 1");
    config_.generation_max = value;
}

void EvolutionEngine::set_tournament_size(int value)
{
    if (value < 1 || value > config_.tree_pop_max)
        throw ConfigError("tournament_size", "must be in [1, tree_pop_max]");
    config_.tournament_size = value;
}

void EvolutionEngine::set_operator_fractions(double reproduction, double mutation, double crossover)
{
    Config trial = config_;
    trial.op_reproduction = reproduction;
    trial.op_mutation = mutation;
    trial.op_crossover = crossover;
    validate_config(trial); // normalizes or throws
    config_.op_reproduction = trial.op_reproduction;
    config_.op_mutation = trial.op_mutation;
    config_.op_crossover = trial.op_crossover;
}

RunResult EvolutionEngine::finalize()
{
    finalize_run(archive_);
    RunResult result;
    result.population = std::move(population_);
    result.history = std::move(history_);
    result.elapsed_seconds = elapsed_seconds_;
    result.archive = archive_;
    result.kernel = kernel_;
    return result;
}

RunResult run_evolution(const Config& config, const ColumnStore& store)
{
    EvolutionEngine engine(config, store);
    engine.start();
    while (!engine.done())
        engine.step();
    return engine.finalize();
}

} // namespace gpvec
