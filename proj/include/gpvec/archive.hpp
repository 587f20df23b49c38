#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpvec/config.hpp"
#include "gpvec/generate.hpp"

namespace gpvec {

// On-disk record of one run: <archive_dir>/<run-id>/{manifest.txt, config.txt,
// gen_001.csv .. gen_NNN.csv}. A crash leaves a valid prefix because each
// generation file is flushed as it completes.
struct RunArchive {
    std::string root_dir;
    std::string config_file;
    std::vector<std::string> generation_files;
    std::string run_id;
    std::string dataset_fingerprint;
    Backend backend = Backend::vector;
    std::uint64_t seed = 0;
    std::string started;
    std::string ended;
};

// Creates a timestamped run directory (monotonic suffix when two runs share a
// second), writes the config snapshot and the initial manifest. Fails with
// IoFailure before any evolution work if the path is unwritable.
RunArchive init_run_dir(const Config& config, const std::string& dataset_fingerprint,
    std::uint64_t seed);

// Appends gen_NNN.csv with one row per tree: id, birth generation, depth,
// node count, fitness (exactly `precision` decimals) and the rendered
// expression (quoted, embedded quotes doubled).
void write_generation(RunArchive& archive, const Population& population, int precision);

// Records the end timestamp in the manifest.
void finalize_run(RunArchive& archive);

// Row of a generation file, for re-reading archives.
struct ArchivedTree {
    int id = 0;
    int birth_generation = 0;
    int depth = 0;
    int node_count = 0;
    double fitness = 0.0;
    std::string expression;
};

std::vector<ArchivedTree> read_generation_file(const std::string& path);

} // namespace gpvec
