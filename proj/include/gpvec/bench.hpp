#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpvec/config.hpp"
#include "gpvec/data.hpp"

namespace gpvec {

// Summary statistics over wall-time samples: mean, sample standard deviation
// and the 95% confidence half-width (Student-t, n-1 degrees of freedom).
struct BenchStats {
    int n = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double ci95_half = 0.0;
    double min = 0.0;
    double max = 0.0;

    bool operator==(const BenchStats&) const = default;
};

BenchStats summarize(const std::vector<double>& samples);

// Two-sided 97.5% Student-t critical value for the given degrees of freedom.
double t_critical_975(int dof);

struct BenchRow {
    std::string label; // e.g. "scalar/1", "vector/4"
    BenchStats stats;

    bool operator==(const BenchRow&) const = default;
};

// Per-dataset benchmark report. Speedups are ratios of means, derived from
// the rows rather than stored.
struct BenchReport {
    std::string dataset_label;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::vector<BenchRow> rows;

    [[nodiscard]] double speedup(std::size_t numerator, std::size_t denominator) const
    {
        return rows[numerator].stats.mean / rows[denominator].stats.mean;
    }

    bool operator==(const BenchReport&) const = default;
};

// Runs the full evolution `repetitions` times and summarizes the wall times.
// Each repetition gets a distinct seed derived from master_seed, so the suite
// explores the solution space yet replays exactly from one seed. Wall time is
// the run's own boundary: generation-1 construction to final archive flush;
// dataset loading is excluded. Repetitions run strictly sequentially.
BenchStats benchmark_run(const Config& config, const ColumnStore& store,
    int repetitions, std::uint64_t master_seed);

// Benchmarks scalar/1-worker, vector/1-worker and vector/N-workers on one
// dataset and reports the speedup of each vector configuration over scalar.
BenchReport compare_backends(const Config& config, const ColumnStore& store,
    const std::string& dataset_label, int repetitions);

// Machine-readable report; parsing the emitted CSV reproduces the report
// exactly (shortest round-trip reals).
std::string report_to_csv(const BenchReport& report);
BenchReport report_from_csv(const std::string& text);

// Human-readable table with the speedup lines.
std::string report_to_markdown(const BenchReport& report);

} // namespace gpvec
