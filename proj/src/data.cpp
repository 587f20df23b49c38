#include "gpvec/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "gpvec/errors.hpp"
#include "gpvec/rng.hpp"

namespace gpvec {

namespace {

    bool valid_identifier(const std::string& name)
    {
        if (name.empty())
            return false;
        if (std::isdigit(static_cast<unsigned char>(name[0])))
            return false;
        return std::all_of(name.begin(), name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
        });
    }

    std::vector<std::string> split_fields(const std::string& line)
    {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        return fields;
    }

    double parse_cell(const std::string& cell, std::size_t row, std::size_t col, const std::string& origin)
    {
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || ptr != cell.data() + cell.size())
            throw Error(Errc::non_numeric_cell,
                origin + ": non-numeric cell '" + cell + "' at data row " + std::to_string(row + 1)
                    + ", column " + std::to_string(col + 1));
        return value;
    }

    std::string format_value(double v)
    {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return { buf, ptr };
    }

    ColumnStore take_rows(const ColumnStore& store, const std::vector<std::size_t>& rows)
    {
        ColumnStore out;
        out.feature_names = store.feature_names;
        out.n_rows = rows.size();
        out.columns.resize(store.n_features());
        for (std::size_t f = 0; f < store.n_features(); ++f) {
            out.columns[f].reserve(rows.size());
            for (std::size_t r : rows)
                out.columns[f].push_back(store.columns[f][r]);
        }
        out.solution.reserve(rows.size());
        for (std::size_t r : rows)
            out.solution.push_back(store.solution[r]);
        return out;
    }

} // namespace

ColumnStore parse_csv(const std::string& text, const std::string& origin)
{
    std::istringstream in(text);
    std::string line;

    if (!std::getline(in, line))
        throw Error(Errc::empty_file, origin + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    std::vector<std::string> headers = split_fields(line);
    if (headers.empty() || headers.back() != "s")
        throw Error(Errc::missing_solution_column,
            origin + ": last column header must be 's', got '" + (headers.empty() ? "" : headers.back()) + "'");

    ColumnStore store;
    store.feature_names.assign(headers.begin(), headers.end() - 1);
    const std::size_t n_cols = headers.size();

    std::set<std::string> seen;
    for (const std::string& name : store.feature_names) {
        if (!valid_identifier(name))
            throw Error(Errc::invalid_feature_name, origin + ": feature name '" + name + "' is not a valid identifier");
        if (!seen.insert(name).second)
            throw Error(Errc::invalid_feature_name, origin + ": duplicate feature name '" + name + "'");
    }

    store.columns.resize(store.feature_names.size());

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::vector<std::string> cells = split_fields(line);
        if (cells.size() != n_cols)
            throw Error(Errc::ragged_row,
                origin + ": data row " + std::to_string(row + 1) + " has " + std::to_string(cells.size())
                    + " fields, header has " + std::to_string(n_cols));
        for (std::size_t c = 0; c + 1 < n_cols; ++c)
            store.columns[c].push_back(parse_cell(cells[c], row, c, origin));
        store.solution.push_back(parse_cell(cells[n_cols - 1], row, n_cols - 1, origin));
        ++row;
    }

    if (row == 0)
        throw Error(Errc::empty_file, origin + ": no data rows");
    store.n_rows = row;
    return store;
}

ColumnStore load_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io_failure, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), path);
}

std::string to_csv(const ColumnStore& store)
{
    std::ostringstream out;
    for (const std::string& name : store.feature_names)
        out << name << ',';
    out << "s\n";
    for (std::size_t r = 0; r < store.n_rows; ++r) {
        for (std::size_t f = 0; f < store.n_features(); ++f)
            out << format_value(store.columns[f][r]) << ',';
        out << format_value(store.solution[r]) << '\n';
    }
    return out.str();
}

void save_csv(const ColumnStore& store, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::io_failure, "cannot open '" + path + "' for writing");
    out << to_csv(store);
    out.flush();
    if (!out)
        throw Error(Errc::io_failure, "write to '" + path + "' failed");
}

ColumnStore synth_dataset(std::size_t n_rows, std::size_t n_features, Kernel kind, std::uint64_t seed)
{
    if (n_rows < 1 || n_features < 1)
        throw Error(Errc::invalid_shape,
            "invalid shape " + std::to_string(n_rows) + "x" + std::to_string(n_features));
    if (kind.kind == KernelKind::classification && kind.n_classes < 2)
        throw Error(Errc::invalid_shape, "classification needs at least 2 classes");

    ColumnStore store;
    store.n_rows = n_rows;
    store.columns.resize(n_features);
    store.feature_names.resize(n_features);

    Rng rng(derive_seed(seed, "synth"));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t f = 0; f < n_features; ++f) {
        store.feature_names[f] = "x" + std::to_string(f);
        store.columns[f].resize(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r)
            store.columns[f][r] = unit(rng);
    }

    store.solution.resize(n_rows);
    if (kind.kind == KernelKind::classification) {
        // round-robin labels: balanced to within one row
        for (std::size_t r = 0; r < n_rows; ++r)
            store.solution[r] = static_cast<double>(r % static_cast<std::size_t>(kind.n_classes));
    } else {
        // s = x0*x0 + 0.5*x1 - x2, truncated to the available features
        for (std::size_t r = 0; r < n_rows; ++r) {
            double s = store.columns[0][r] * store.columns[0][r];
            if (n_features >= 2)
                s += 0.5 * store.columns[1][r];
            if (n_features >= 3)
                s -= store.columns[2][r];
            store.solution[r] = s;
        }
    }
    return store;
}

TrainTestSplit split_train_test(const ColumnStore& store, double train_fraction, std::uint64_t seed)
{
    if (!(train_fraction > 0.0) || train_fraction > 1.0)
        throw Error(Errc::invalid_fraction,
            "train_fraction must be in (0, 1], got " + format_value(train_fraction));

    if (train_fraction == 1.0)
        return { store, std::nullopt };

    std::vector<std::size_t> order(store.n_rows);
    std::iota(order.begin(), order.end(), std::size_t{ 0 });
    Rng rng(derive_seed(seed, "split"));
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_train = static_cast<std::size_t>(
        std::clamp<long long>(std::llround(train_fraction * static_cast<double>(store.n_rows)),
            1, static_cast<long long>(store.n_rows)));

    std::vector<std::size_t> train_rows(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test_rows(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());

    TrainTestSplit split;
    split.train = take_rows(store, train_rows);
    if (!test_rows.empty())
        split.test = take_rows(store, test_rows);
    return split;
}

std::string dataset_fingerprint(const ColumnStore& store)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix_bytes = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const std::string& name : store.feature_names)
        mix_bytes(name.data(), name.size() + 1); // include NUL so names cannot run together
    for (const auto& column : store.columns)
        mix_bytes(column.data(), column.size() * sizeof(double));
    mix_bytes(store.solution.data(), store.solution.size() * sizeof(double));

    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int count_distinct_labels(const ColumnStore& store)
{
    std::set<double> labels;
    for (double v : store.solution) {
        if (!(std::floor(v) == v) || v < 0.0)
            throw Error(Errc::label_out_of_range,
                "solution value " + format_value(v) + " is not a nonnegative integer label");
        labels.insert(v);
    }
    return static_cast<int>(labels.size());
}

} // namespace gpvec
