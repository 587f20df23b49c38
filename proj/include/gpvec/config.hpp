#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gpvec/ops.hpp"

namespace gpvec {

enum class KernelKind { regression, classification, match };

// Fitness regime. n_classes is resolved from the dataset's solution column
// before the first evaluation (0 means "not yet resolved").
struct Kernel {
    KernelKind kind = KernelKind::regression;
    int n_classes = 0;

    bool operator==(const Kernel&) const = default;
};

enum class FitnessDirection { minimize, maximize };

constexpr FitnessDirection direction_for(KernelKind kind) noexcept
{
    return kind == KernelKind::regression ? FitnessDirection::minimize : FitnessDirection::maximize;
}

enum class TreeType { full, grow, ramped_half_half };
enum class Backend { scalar, vector };

// The full run-time parameter set. Defaults are the reference configuration:
// ramped half/half, depth base and max 5, min nodes 3, population 100,
// tournament 10, 30 generations, precision 4, operators 10/20/70.
struct Config {
    Kernel kernel{ KernelKind::classification, 0 };
    TreeType tree_type = TreeType::ramped_half_half;
    int tree_depth_base = 5;
    int tree_depth_max = 5;
    int min_nodes = 3;
    int tree_pop_max = 100;
    int tournament_size = 10;
    int generation_max = 30;
    int precision = 4;
    double op_reproduction = 0.1;
    double op_mutation = 0.2;
    double op_crossover = 0.7;
    std::vector<OpCode> operator_set = default_operator_set();
    std::optional<std::uint64_t> rng_seed;
    Backend backend = Backend::vector;
    std::string archive_dir = "archive";

    // evaluation tuning
    int workers = 0;        // 0 = hardware concurrency, resolved at use
    int chunk_rows = 8192;  // vector-backend row chunk
    bool tree_parallel = false;

    // documented defaults, adjustable through the config file
    double grow_bias = 0.5;           // P(operator) at each grow step
    double point_mutation_bias = 0.5; // P(point mutation) vs branch mutation

    bool operator==(const Config&) const = default;
};

// Checks every invariant, throwing ConfigError naming the offending field.
// Operator fractions within 1e-9 of summing to 1 are normalized in place so
// the sum is exactly 1; anything further off is rejected.
void validate_config(Config& config);

// Plain-text key=value round trip. The saved form reloads to an equal Config.
std::string config_to_text(const Config& config);
Config config_from_text(const std::string& text);
void save_config(const Config& config, const std::string& path);
Config load_config(const std::string& path);

const char* kernel_letter(KernelKind kind) noexcept;
const char* tree_type_letter(TreeType type) noexcept;
const char* backend_name(Backend backend) noexcept;
KernelKind kernel_from_letter(const std::string& letter);
TreeType tree_type_from_letter(const std::string& letter);
Backend backend_from_name(const std::string& name);

} // namespace gpvec
