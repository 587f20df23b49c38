#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpvec/archive.hpp"
#include "gpvec/backends.hpp"
#include "gpvec/compile.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/evolve.hpp"
#include "gpvec/fitness.hpp"
#include "test_helpers.hpp"

using namespace gpvec;

namespace {

Config small_config(const std::string& archive_dir)
{
    Config config;
    config.tree_pop_max = 8;
    config.tournament_size = 3;
    config.generation_max = 2;
    config.kernel.kind = KernelKind::regression;
    config.rng_seed = 21;
    config.archive_dir = archive_dir;
    validate_config(config);
    return config;
}

} // namespace

TEST_CASE("runs in the same second get distinct directories")
{
    test::TempDir dir("arch-distinct");
    const Config config = small_config(dir.str());
    const RunArchive a = init_run_dir(config, "fp", 1);
    const RunArchive b = init_run_dir(config, "fp", 1);
    const RunArchive c = init_run_dir(config, "fp", 1);
    CHECK(a.root_dir != b.root_dir);
    CHECK(b.root_dir != c.root_dir);
    CHECK(std::filesystem::exists(a.root_dir));
    CHECK(std::filesystem::exists(b.root_dir));
}

TEST_CASE("config snapshot reloads to the in-memory config")
{
    test::TempDir dir("arch-snapshot");
    const Config config = small_config(dir.str());
    const RunArchive archive = init_run_dir(config, "fp", 1);
    CHECK(load_config(archive.config_file) == config);
}

TEST_CASE("unwritable archive path fails before any evolution work")
{
    Config config = small_config("/proc/gpvec-cannot-write-here");
    try {
        init_run_dir(config, "fp", 1);
        FAIL("expected IoFailure");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::io_failure);
    }
}

TEST_CASE("generation files carry one row per tree with fixed-precision fitness")
{
    test::TempDir dir("arch-rows");
    const Config config = small_config(dir.str());
    const ColumnStore store = synth_dataset(30, 2, { KernelKind::regression, 0 }, 1);
    const RunResult result = run_evolution(config, store);

    REQUIRE(result.archive.generation_files.size() == 2);
    for (const std::string& path : result.archive.generation_files) {
        std::ifstream in(path);
        std::string header;
        REQUIRE(std::getline(in, header));
        CHECK(header == "id,birth_gen,depth,node_count,fitness,expression");
        int rows = 0;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            ++rows;
            // fitness column: exactly `precision` decimals
            const std::size_t first = line.find(',');
            std::size_t from = first;
            for (int skip = 0; skip < 3; ++skip)
                from = line.find(',', from + 1);
            const std::size_t to = line.find(',', from + 1);
            const std::string fitness = line.substr(from + 1, to - from - 1);
            const std::size_t dot = fitness.find('.');
            REQUIRE(dot != std::string::npos);
            CHECK(fitness.size() - dot - 1 == 4);
        }
        CHECK(rows == 8);
    }
}

TEST_CASE("archived expressions re-parse and re-score to the archived fitness")
{
    test::TempDir dir("arch-rescore");
    Config config = small_config(dir.str());
    config.generation_max = 3;
    const ColumnStore store = synth_dataset(30, 2, { KernelKind::regression, 0 }, 6);
    const RunResult result = run_evolution(config, store);

    for (const std::string& path : result.archive.generation_files) {
        for (const ArchivedTree& row : read_generation_file(path)) {
            const Ast ast = parse_expression(row.expression, store.feature_names);
            const EvalPlan plan = build_plan(ast, result.kernel, store.feature_names);
            const ResultVector values = eval_vector(plan, store);
            const FitnessScore score = score_kernel(result.kernel, values, store.solution, config.precision);
            REQUIRE(score.value == row.fitness);
        }
    }
}

TEST_CASE("manifest records the run metadata")
{
    test::TempDir dir("arch-manifest");
    const Config config = small_config(dir.str());
    const ColumnStore store = synth_dataset(10, 2, { KernelKind::regression, 0 }, 1);
    const RunResult result = run_evolution(config, store);

    std::ifstream in(result.archive.root_dir + "/manifest.txt");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string manifest = buffer.str();
    CHECK(manifest.find("run_id=") != std::string::npos);
    CHECK(manifest.find("dataset_fingerprint=" + dataset_fingerprint(store)) != std::string::npos);
    CHECK(manifest.find("backend=vector") != std::string::npos);
    CHECK(manifest.find("seed=21") != std::string::npos);
    CHECK(manifest.find("ended=2") != std::string::npos); // end timestamp filled in
}

TEST_CASE("quoted expressions round trip through the generation file")
{
    test::TempDir dir("arch-quote");
    const Config config = small_config(dir.str());
    RunArchive archive = init_run_dir(config, "fp", 1);

    test::TreeBuilder b;
    const auto mul = b.op(OpCode::mul, b.var(0, "a"), b.var(0, "a"));
    Tree tree = b.finish(b.op(OpCode::add, mul, b.var(1, "b")));
    tree.fitness = 1.5;
    Population population;
    population.generation = 1;
    population.trees.push_back(std::move(tree));

    write_generation(archive, population, 4);
    const auto rows = read_generation_file(archive.generation_files.front());
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].expression == "((a)*(a)) + (b)");
    CHECK(rows[0].fitness == 1.5);
    CHECK(rows[0].node_count == 5);
}
