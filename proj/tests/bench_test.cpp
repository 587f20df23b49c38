#include <doctest.h>

#include <cmath>

#include "gpvec/bench.hpp"
#include "gpvec/errors.hpp"
#include "test_helpers.hpp"

using namespace gpvec;

TEST_CASE("mean of two mocked samples")
{
    const BenchStats stats = summarize({ 100.0, 200.0 });
    CHECK(stats.n == 2);
    CHECK(stats.mean == 150.0);
    CHECK(stats.min == 100.0);
    CHECK(stats.max == 200.0);
}

TEST_CASE("identical samples have zero spread and zero CI half-width")
{
    const BenchStats two = summarize({ 42.0, 42.0 });
    CHECK(two.stddev == 0.0);
    CHECK(two.ci95_half == 0.0);

    const BenchStats ten = summarize(std::vector<double>(10, 3.5));
    CHECK(ten.n == 10);
    CHECK(ten.mean == 3.5);
    CHECK(ten.ci95_half == 0.0);
}

TEST_CASE("CI half-width uses Student-t with n-1 dof")
{
    // n=10 -> dof 9 -> t = 2.262; samples 1..10: mean 5.5, sd = sqrt(110/12)
    std::vector<double> samples;
    for (int i = 1; i <= 10; ++i)
        samples.push_back(i);
    const BenchStats stats = summarize(samples);
    CHECK(stats.mean == doctest::Approx(5.5));
    CHECK(stats.stddev == doctest::Approx(3.0276503540974917));
    CHECK(stats.ci95_half == doctest::Approx(2.262 * 3.0276503540974917 / std::sqrt(10.0)));
    CHECK(stats.ci95_half >= 0.0);
}

TEST_CASE("summarize needs at least two samples")
{
    CHECK_THROWS_AS(summarize({ 1.0 }), Error);
    CHECK_THROWS_AS(summarize({}), Error);
}

TEST_CASE("t table spot checks")
{
    CHECK(t_critical_975(1) == doctest::Approx(12.706));
    CHECK(t_critical_975(9) == doctest::Approx(2.262));
    CHECK(t_critical_975(30) == doctest::Approx(2.042));
    CHECK(t_critical_975(1000) == doctest::Approx(1.960));
}

TEST_CASE("report CSV round trips exactly")
{
    BenchReport report;
    report.dataset_label = "synth-10x3";
    report.n_rows = 10;
    report.n_features = 3;
    report.rows.push_back({ "scalar/1", { 5, 1.2345678901234567, 0.1, 0.08, 1.1, 1.4 } });
    report.rows.push_back({ "vector/1", { 5, 0.3333333333333333, 0.01, 0.009, 0.32, 0.35 } });
    report.rows.push_back({ "vector/4", { 5, 0.25, 0.0, 0.0, 0.25, 0.25 } });

    const BenchReport reloaded = report_from_csv(report_to_csv(report));
    CHECK(reloaded == report);
}

TEST_CASE("self-speedup is exactly one")
{
    BenchReport report;
    report.rows.push_back({ "a", { 2, 123.456, 0, 0, 123, 124 } });
    CHECK(report.speedup(0, 0) == 1.0);
}

TEST_CASE("speedup is the ratio of means")
{
    BenchReport report;
    report.rows.push_back({ "scalar/1", { 2, 1000.0, 0, 0, 0, 0 } });
    report.rows.push_back({ "vector/1", { 2, 10.0, 0, 0, 0, 0 } });
    CHECK(report.speedup(0, 1) == 100.0);
}

TEST_CASE("markdown report prints the speedup lines")
{
    BenchReport report;
    report.dataset_label = "kepler.csv";
    report.n_rows = 9;
    report.n_features = 2;
    report.rows.push_back({ "scalar/1", { 2, 2.0, 0, 0, 2, 2 } });
    report.rows.push_back({ "vector/1", { 2, 1.0, 0, 0, 1, 1 } });
    const std::string md = report_to_markdown(report);
    CHECK(md.find("kepler.csv") != std::string::npos);
    CHECK(md.find("18 data points") != std::string::npos);
    CHECK(md.find("speedup scalar/1 / vector/1 = 2.00x") != std::string::npos);
}

TEST_CASE("benchmark_run wall-times real runs with derived per-repetition seeds")
{
    test::TempDir dir("bench-run");
    Config config;
    config.tree_pop_max = 6;
    config.tournament_size = 2;
    config.generation_max = 2;
    config.kernel.kind = KernelKind::regression;
    config.archive_dir = dir.str();
    validate_config(config);

    const ColumnStore store = synth_dataset(20, 2, { KernelKind::regression, 0 }, 9);
    const BenchStats stats = benchmark_run(config, store, 3, 1234);
    CHECK(stats.n == 3);
    CHECK(stats.mean > 0.0);
    CHECK(stats.min <= stats.mean);
    CHECK(stats.mean <= stats.max);
    CHECK_THROWS_AS(benchmark_run(config, store, 1, 1234), Error);
}

TEST_CASE("compare_backends reports all configurations with the dataset label")
{
    test::TempDir dir("bench-cmp");
    Config config;
    config.tree_pop_max = 6;
    config.tournament_size = 2;
    config.generation_max = 2;
    config.kernel.kind = KernelKind::regression;
    config.rng_seed = 5;
    config.archive_dir = dir.str();
    validate_config(config);

    const ColumnStore kepler = load_csv(test::data_file("kepler.csv"));
    const BenchReport report = compare_backends(config, kepler, "kepler-9x2-18pts", 2);
    CHECK(report.dataset_label == "kepler-9x2-18pts");
    CHECK(report.n_rows * report.n_features == 18);
    REQUIRE(report.rows.size() >= 2);
    CHECK(report.rows[0].label == "scalar/1");
    CHECK(report.rows[1].label == "vector/1");
    for (const BenchRow& row : report.rows)
        CHECK(row.stats.n == 2);
}
