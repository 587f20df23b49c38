#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpvec/config.hpp"

namespace gpvec {

// The dataset transposed to column-major form: one contiguous vector per
// feature plus the solution vector. Immutable after load; shared read-only by
// evaluator workers.
struct ColumnStore {
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> columns; // columns[f][row]
    std::vector<double> solution;
    std::size_t n_rows = 0;

    [[nodiscard]] std::size_t n_features() const noexcept { return columns.size(); }
    [[nodiscard]] std::size_t data_points() const noexcept { return n_features() * n_rows; }
};

// Loads a CSV whose header ends in the solution column `s`, transposing the
// row-major file into column vectors. UTF-8, comma delimiter, LF or CRLF,
// decimal-point reals, no quoting, no missing cells.
ColumnStore load_csv(const std::string& path);
ColumnStore parse_csv(const std::string& text, const std::string& origin = "<string>");

// Writes the store back in the same format (shortest round-trip reals).
std::string to_csv(const ColumnStore& store);
void save_csv(const ColumnStore& store, const std::string& path);

// Deterministic synthetic dataset: features uniform in [-1, 1]. Regression
// solution is x0*x0 + 0.5*x1 - x2 truncated to the first min(3, n_features)
// features; classification labels cycle 0..n_classes-1, balanced to within 1.
ColumnStore synth_dataset(std::size_t n_rows, std::size_t n_features, Kernel kind, std::uint64_t seed);

struct TrainTestSplit {
    ColumnStore train;
    std::optional<ColumnStore> test; // absent when train_fraction == 1
};

// Row-wise partition by seeded shuffle; every input row lands in exactly one
// of the two parts.
TrainTestSplit split_train_test(const ColumnStore& store, double train_fraction, std::uint64_t seed);

// Content hash of names, columns and solution (FNV-1a over the raw bytes),
// recorded in run manifests so archives pin the exact dataset.
std::string dataset_fingerprint(const ColumnStore& store);

// Number of distinct labels in the solution column; validates that every
// label is a nonnegative integer. Used to resolve Classification n_classes.
int count_distinct_labels(const ColumnStore& store);

} // namespace gpvec
