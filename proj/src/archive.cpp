#include "gpvec/archive.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpvec/compile.hpp"
#include "gpvec/errors.hpp"

namespace fs = std::filesystem;

namespace gpvec {

namespace {

    std::string timestamp_now()
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        std::tm tm{};
#if defined(_WIN32)
        localtime_s(&tm, &t);
#else
        localtime_r(&t, &tm);
#endif
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
        return buf;
    }

    void write_manifest(const RunArchive& archive)
    {
        const std::string path = archive.root_dir + "/manifest.txt";
        std::ofstream out(path, std::ios::trunc);
        if (!out)
            throw Error(Errc::io_failure, "cannot write '" + path + "'");
        out << "run_id=" << archive.run_id << '\n';
        out << "started=" << archive.started << '\n';
        out << "ended=" << archive.ended << '\n';
        out << "dataset_fingerprint=" << archive.dataset_fingerprint << '\n';
        out << "backend=" << backend_name(archive.backend) << '\n';
        out << "seed=" << archive.seed << '\n';
        out.flush();
        if (!out)
            throw Error(Errc::io_failure, "write to '" + path + "' failed");
    }

    std::string quote_csv(const std::string& field)
    {
        std::string out = "\"";
        for (char c : field) {
            out += c;
            if (c == '"')
                out += '"';
        }
        out += '"';
        return out;
    }

} // namespace

RunArchive init_run_dir(const Config& config, const std::string& dataset_fingerprint, std::uint64_t seed)
{
    RunArchive archive;
    archive.dataset_fingerprint = dataset_fingerprint;
    archive.backend = config.backend;
    archive.seed = seed;
    archive.started = timestamp_now();

    std::error_code ec;
    fs::create_directories(config.archive_dir, ec);
    if (ec)
        throw Error(Errc::io_failure, "cannot create archive directory '" + config.archive_dir + "': " + ec.message());

    // timestamped run id; suffix -2, -3, ... keeps same-second runs distinct
    const std::string base = timestamp_now();
    std::string run_id = base;
    fs::path dir = fs::path(config.archive_dir) / run_id;
    for (int suffix = 2; fs::exists(dir); ++suffix) {
        run_id = base + "-" + std::to_string(suffix);
        dir = fs::path(config.archive_dir) / run_id;
    }
    fs::create_directory(dir, ec);
    if (ec)
        throw Error(Errc::io_failure, "cannot create run directory '" + dir.string() + "': " + ec.message());

    archive.run_id = run_id;
    archive.root_dir = dir.string();
    archive.config_file = (dir / "config.txt").string();
    save_config(config, archive.config_file);
    write_manifest(archive);
    return archive;
}

void write_generation(RunArchive& archive, const Population& population, int precision)
{
    char name[32];
    std::snprintf(name, sizeof(name), "gen_%03d.csv", population.generation);
    const std::string path = archive.root_dir + "/" + name;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(Errc::io_failure, "cannot write '" + path + "'");

    out << "id,birth_gen,depth,node_count,fitness,expression\n";
    char fitness_buf[64];
    for (const Tree& tree : population.trees) {
        std::snprintf(fitness_buf, sizeof(fitness_buf), "%.*f", precision,
            tree.fitness.value_or(0.0));
        out << tree.id << ',' << tree.birth_generation << ',' << tree.depth << ','
            << tree.node_count() << ',' << fitness_buf << ','
            << quote_csv(render_expression(tree)) << '\n';
    }
    out.flush();
    if (!out)
        throw Error(Errc::io_failure, "write to '" + path + "' failed");
    archive.generation_files.push_back(path);
}

void finalize_run(RunArchive& archive)
{
    archive.ended = timestamp_now();
    write_manifest(archive);
}

std::vector<ArchivedTree> read_generation_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::io_failure, "cannot open '" + path + "'");

    std::vector<ArchivedTree> rows;
    std::string line;
    if (!std::getline(in, line))
        throw Error(Errc::empty_file, path + ": empty generation file");

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        ArchivedTree row;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        auto read_int = [&](int& value) {
            auto [ptr, ec] = std::from_chars(p, end, value);
            if (ec != std::errc{} || ptr == end || *ptr != ',')
                throw Error(Errc::non_numeric_cell, path + ": malformed row '" + line + "'");
            p = ptr + 1;
        };
        int node_count = 0;
        read_int(row.id);
        read_int(row.birth_generation);
        read_int(row.depth);
        read_int(node_count);
        row.node_count = node_count;
        auto [ptr, ec] = std::from_chars(p, end, row.fitness);
        if (ec != std::errc{} || ptr == end || *ptr != ',')
            throw Error(Errc::non_numeric_cell, path + ": malformed fitness in '" + line + "'");
        p = ptr + 1;
        // expression field: quoted, embedded quotes doubled
        if (p == end || *p != '"')
            throw Error(Errc::non_numeric_cell, path + ": expression not quoted in '" + line + "'");
        ++p;
        std::string expr;
        while (p < end) {
            if (*p == '"') {
                if (p + 1 < end && p[1] == '"') {
                    expr += '"';
                    p += 2;
                    continue;
                }
                ++p;
                break;
            }
            expr += *p++;
        }
        row.expression = std::move(expr);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace gpvec
