#include "gpvec/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gpvec/errors.hpp"

namespace gpvec {

namespace {

    std::string format_double(double v)
    {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
        return { buf, ptr };
    }

    double parse_double_field(const std::string& field, const std::string& text)
    {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw ConfigError(field, "not a real number: '" + text + "'");
        return v;
    }

    long long parse_int_field(const std::string& field, const std::string& text)
    {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw ConfigError(field, "not an integer: '" + text + "'");
        return v;
    }

} // namespace

void validate_config(Config& config)
{
    if (config.tree_depth_base < 1)
        throw ConfigError("tree_depth_base", "must be >= 1");
    if (config.tree_depth_max < config.tree_depth_base)
        throw ConfigError("tree_depth_max", "must be >= tree_depth_base");
    if (config.min_nodes < 1)
        throw ConfigError("min_nodes", "must be >= 1");
    if (config.tree_pop_max < 2)
        throw ConfigError("tree_pop_max", "must be >= 2");
    if (config.tournament_size < 1 || config.tournament_size > config.tree_pop_max)
        throw ConfigError("tournament_size", "must be in [1, tree_pop_max]");
    if (config.generation_max < 1)
        throw ConfigError("generation_max", "must be >= 1");
    if (config.precision < 0)
        throw ConfigError("precision", "must be >= 0");
    if (config.op_reproduction < 0.0 || config.op_mutation < 0.0 || config.op_crossover < 0.0)
        throw ConfigError("op_fractions", "operator fractions must be nonnegative");

    const double sum = config.op_reproduction + config.op_mutation + config.op_crossover;
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("op_fractions", "reproduction + mutation + crossover must sum to 1, got " + format_double(sum));
    config.op_reproduction /= sum;
    config.op_mutation /= sum;
    config.op_crossover = 1.0 - config.op_reproduction - config.op_mutation;

    if (config.operator_set.empty())
        throw ConfigError("operator_set", "must not be empty");
    if (config.kernel.kind == KernelKind::classification && config.kernel.n_classes != 0 && config.kernel.n_classes < 2)
        throw ConfigError("kernel", "classification needs at least 2 classes");
    if (config.workers < 0)
        throw ConfigError("workers", "must be >= 0 (0 = hardware concurrency)");
    if (config.chunk_rows < 1)
        throw ConfigError("chunk_rows", "must be >= 1");
    if (config.grow_bias <= 0.0 || config.grow_bias > 1.0)
        throw ConfigError("grow_bias", "must be in (0, 1]");
    if (config.point_mutation_bias < 0.0 || config.point_mutation_bias > 1.0)
        throw ConfigError("point_mutation_bias", "must be in [0, 1]");
}

const char* kernel_letter(KernelKind kind) noexcept
{
    switch (kind) {
    case KernelKind::regression: return "r";
    case KernelKind::classification: return "c";
    case KernelKind::match: return "m";
    }
    return "?";
}

const char* tree_type_letter(TreeType type) noexcept
{
    switch (type) {
    case TreeType::full: return "f";
    case TreeType::grow: return "g";
    case TreeType::ramped_half_half: return "r";
    }
    return "?";
}

const char* backend_name(Backend backend) noexcept
{
    return backend == Backend::scalar ? "scalar" : "vector";
}

KernelKind kernel_from_letter(const std::string& letter)
{
    if (letter == "r")
        return KernelKind::regression;
    if (letter == "c")
        return KernelKind::classification;
    if (letter == "m")
        return KernelKind::match;
    throw ConfigError("kernel", "expected r, c or m, got '" + letter + "'");
}

TreeType tree_type_from_letter(const std::string& letter)
{
    if (letter == "f")
        return TreeType::full;
    if (letter == "g")
        return TreeType::grow;
    if (letter == "r")
        return TreeType::ramped_half_half;
    throw ConfigError("tree_type", "expected f, g or r, got '" + letter + "'");
}

Backend backend_from_name(const std::string& name)
{
    if (name == "scalar")
        return Backend::scalar;
    if (name == "vector")
        return Backend::vector;
    throw ConfigError("backend", "expected scalar or vector, got '" + name + "'");
}

std::string config_to_text(const Config& config)
{
    std::ostringstream out;
    out << "kernel=" << kernel_letter(config.kernel.kind) << '\n';
    out << "tree_type=" << tree_type_letter(config.tree_type) << '\n';
    out << "depth_base=" << config.tree_depth_base << '\n';
    out << "depth_max=" << config.tree_depth_max << '\n';
    out << "min_nodes=" << config.min_nodes << '\n';
    out << "pop=" << config.tree_pop_max << '\n';
    out << "tourn=" << config.tournament_size << '\n';
    out << "gens=" << config.generation_max << '\n';
    out << "precision=" << config.precision << '\n';
    out << "repro=" << format_double(config.op_reproduction) << '\n';
    out << "mutate=" << format_double(config.op_mutation) << '\n';
    out << "cross=" << format_double(config.op_crossover) << '\n';
    out << "operators=" << operator_set_to_string(config.operator_set) << '\n';
    if (config.rng_seed)
        out << "seed=" << *config.rng_seed << '\n';
    out << "backend=" << backend_name(config.backend) << '\n';
    out << "archive=" << config.archive_dir << '\n';
    out << "workers=" << config.workers << '\n';
    out << "chunk_rows=" << config.chunk_rows << '\n';
    out << "tree_parallel=" << (config.tree_parallel ? 1 : 0) << '\n';
    out << "grow_bias=" << format_double(config.grow_bias) << '\n';
    out << "point_mutation_bias=" << format_double(config.point_mutation_bias) << '\n';
    return out.str();
}

Config config_from_text(const std::string& text)
{
    Config config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no), "expected key=value, got '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);

        if (key == "kernel")
            config.kernel.kind = kernel_from_letter(value);
        else if (key == "tree_type")
            config.tree_type = tree_type_from_letter(value);
        else if (key == "depth_base")
            config.tree_depth_base = static_cast<int>(parse_int_field(key, value));
        else if (key == "depth_max")
            config.tree_depth_max = static_cast<int>(parse_int_field(key, value));
        else if (key == "min_nodes")
            config.min_nodes = static_cast<int>(parse_int_field(key, value));
        else if (key == "pop")
            config.tree_pop_max = static_cast<int>(parse_int_field(key, value));
        else if (key == "tourn")
            config.tournament_size = static_cast<int>(parse_int_field(key, value));
        else if (key == "gens")
            config.generation_max = static_cast<int>(parse_int_field(key, value));
        else if (key == "precision")
            config.precision = static_cast<int>(parse_int_field(key, value));
        else if (key == "repro")
            config.op_reproduction = parse_double_field(key, value);
        else if (key == "mutate")
            config.op_mutation = parse_double_field(key, value);
        else if (key == "cross")
            config.op_crossover = parse_double_field(key, value);
        else if (key == "operators")
            config.operator_set = operator_set_from_string(value);
        else if (key == "seed")
            config.rng_seed = static_cast<std::uint64_t>(parse_int_field(key, value));
        else if (key == "backend")
            config.backend = backend_from_name(value);
        else if (key == "archive")
            config.archive_dir = value;
        else if (key == "workers")
            config.workers = static_cast<int>(parse_int_field(key, value));
        else if (key == "chunk_rows")
            config.chunk_rows = static_cast<int>(parse_int_field(key, value));
        else if (key == "tree_parallel")
            config.tree_parallel = parse_int_field(key, value) != 0;
        else if (key == "grow_bias")
            config.grow_bias = parse_double_field(key, value);
        else if (key == "point_mutation_bias")
            config.point_mutation_bias = parse_double_field(key, value);
        else
            throw ConfigError(key, "unknown configuration key");
    }
    validate_config(config);
    return config;
}

void save_config(const Config& config, const std::string& path)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw Error(Errc::io_failure, "cannot open '" + path + "' for writing");
    out << config_to_text(config);
    out.flush();
    if (!out)
        throw Error(Errc::io_failure, "write to '" + path + "' failed");
}

Config load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::io_failure, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_text(buffer.str());
}

} // namespace gpvec
