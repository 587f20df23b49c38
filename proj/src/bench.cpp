#include "gpvec/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gpvec/backends.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/evolve.hpp"
#include "gpvec/rng.hpp"

namespace gpvec {

namespace {

    std::string format_value(double v)
    {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return { buf, ptr };
    }

    double parse_value(const std::string& text)
    {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw Error(Errc::non_numeric_cell, "bad report value '" + text + "'");
        return v;
    }

    std::vector<std::string> split(const std::string& line, char sep)
    {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (true) {
            const std::size_t at = line.find(sep, start);
            if (at == std::string::npos) {
                out.push_back(line.substr(start));
                return out;
            }
            out.push_back(line.substr(start, at - start));
            start = at + 1;
        }
    }

} // namespace

double t_critical_975(int dof)
{
    // standard two-sided 95% table
    static constexpr double table[] = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042
    };
    if (dof < 1)
        throw Error(Errc::invalid_value, "t critical value needs dof >= 1");
    if (dof <= 30)
        return table[dof - 1];
    if (dof <= 40)
        return 2.021;
    if (dof <= 60)
        return 2.000;
    if (dof <= 120)
        return 1.980;
    return 1.960;
}

BenchStats summarize(const std::vector<double>& samples)
{
    if (samples.size() < 2)
        throw Error(Errc::invalid_value,
            "need at least 2 samples for a confidence interval, got " + std::to_string(samples.size()));

    BenchStats stats;
    stats.n = static_cast<int>(samples.size());
    stats.mean = 0.0;
    for (double s : samples)
        stats.mean += s;
    stats.mean /= static_cast<double>(stats.n);

    double ss = 0.0;
    for (double s : samples)
        ss += (s - stats.mean) * (s - stats.mean);
    stats.stddev = std::sqrt(ss / static_cast<double>(stats.n - 1));
    stats.ci95_half = t_critical_975(stats.n - 1) * stats.stddev / std::sqrt(static_cast<double>(stats.n));
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    stats.min = *lo;
    stats.max = *hi;
    return stats;
}

BenchStats benchmark_run(const Config& config, const ColumnStore& store,
    int repetitions, std::uint64_t master_seed)
{
    if (repetitions < 2)
        throw Error(Errc::invalid_value, "repetitions must be >= 2");

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(repetitions));
    for (int rep = 0; rep < repetitions; ++rep) {
        Config rep_config = config;
        rep_config.rng_seed = derive_seed(master_seed, "bench-rep", static_cast<std::uint64_t>(rep));
        const RunResult result = run_evolution(rep_config, store);
        samples.push_back(result.elapsed_seconds);
    }
    return summarize(samples);
}

BenchReport compare_backends(const Config& config, const ColumnStore& store,
    const std::string& dataset_label, int repetitions)
{
    const std::uint64_t master = config.rng_seed ? *config.rng_seed : random_master_seed();
    const int hw = resolve_workers(0);

    struct Setup {
        Backend backend;
        int workers;
    };
    std::vector<Setup> setups = {
        { Backend::scalar, 1 },
        { Backend::vector, 1 },
    };
    if (hw > 1)
        setups.push_back({ Backend::vector, hw });

    BenchReport report;
    report.dataset_label = dataset_label;
    report.n_rows = store.n_rows;
    report.n_features = store.n_features();

    for (const Setup& setup : setups) {
        Config run_config = config;
        run_config.backend = setup.backend;
        run_config.workers = setup.workers;
        BenchRow row;
        row.label = std::string(backend_name(setup.backend)) + "/" + std::to_string(setup.workers);
        row.stats = benchmark_run(run_config, store, repetitions, master);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string report_to_csv(const BenchReport& report)
{
    std::ostringstream out;
    out << "dataset,n_rows,n_features\n";
    out << report.dataset_label << ',' << report.n_rows << ',' << report.n_features << '\n';
    out << "label,n,mean_s,std_s,ci95_s,min_s,max_s\n";
    for (const BenchRow& row : report.rows) {
        out << row.label << ',' << row.stats.n << ',' << format_value(row.stats.mean) << ','
            << format_value(row.stats.stddev) << ',' << format_value(row.stats.ci95_half) << ','
            << format_value(row.stats.min) << ',' << format_value(row.stats.max) << '\n';
    }
    return out.str();
}

BenchReport report_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    BenchReport report;

    if (!std::getline(in, line) || split(line, ',') != std::vector<std::string>{ "dataset", "n_rows", "n_features" })
        throw Error(Errc::non_numeric_cell, "bad report header");
    if (!std::getline(in, line))
        throw Error(Errc::empty_file, "truncated report");
    {
        const auto fields = split(line, ',');
        if (fields.size() != 3)
            throw Error(Errc::ragged_row, "bad dataset row");
        report.dataset_label = fields[0];
        report.n_rows = static_cast<std::size_t>(parse_value(fields[1]));
        report.n_features = static_cast<std::size_t>(parse_value(fields[2]));
    }
    if (!std::getline(in, line))
        throw Error(Errc::empty_file, "truncated report");

    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto fields = split(line, ',');
        if (fields.size() != 7)
            throw Error(Errc::ragged_row, "bad report row '" + line + "'");
        BenchRow row;
        row.label = fields[0];
        row.stats.n = static_cast<int>(parse_value(fields[1]));
        row.stats.mean = parse_value(fields[2]);
        row.stats.stddev = parse_value(fields[3]);
        row.stats.ci95_half = parse_value(fields[4]);
        row.stats.min = parse_value(fields[5]);
        row.stats.max = parse_value(fields[6]);
        report.rows.push_back(std::move(row));
    }
    return report;
}

std::string report_to_markdown(const BenchReport& report)
{
    std::ostringstream out;
    out << "# Benchmark: " << report.dataset_label << " (" << report.n_rows << " x "
        << report.n_features << ", " << report.n_rows * report.n_features << " data points)\n\n";
    out << "| configuration | n | mean (s) | std (s) | 95% CI (s) | min (s) | max (s) |\n";
    out << "|---|---|---|---|---|---|---|\n";
    char buf[64];
    for (const BenchRow& row : report.rows) {
        out << "| " << row.label << " | " << row.stats.n;
        const double values[] = { row.stats.mean, row.stats.stddev, row.stats.ci95_half,
            row.stats.min, row.stats.max };
        for (double v : values) {
            std::snprintf(buf, sizeof(buf), "%.4f", v);
            out << " | " << buf;
        }
        out << " |\n";
    }
    out << '\n';
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.2f", report.speedup(0, i));
        out << "speedup " << report.rows[0].label << " / " << report.rows[i].label
            << " = " << buf << "x\n";
    }
    return out.str();
}

} // namespace gpvec
