#include "gpvec/cli.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gpvec/bench.hpp"
#include "gpvec/compile.hpp"
#include "gpvec/errors.hpp"
#include "gpvec/rng.hpp"

namespace gpvec {

namespace {

    constexpr const char* app_description
        = "Tree-based genetic programming engine with scalar and vectorized "
          "evaluation backends and a backend comparison benchmark.";

    std::vector<std::uint64_t> parse_synth_shape(const std::string& text)
    {
        std::vector<std::uint64_t> parts;
        std::size_t start = 0;
        while (start <= text.size()) {
            const std::size_t at = text.find('x', start);
            const std::string token = text.substr(start, at == std::string::npos ? std::string::npos : at - start);
            std::uint64_t value = 0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size())
                throw Error(Errc::invalid_value, "--synth: bad shape '" + text + "', expected ROWSxCOLS[xCLASSES]");
            parts.push_back(value);
            if (at == std::string::npos)
                break;
            start = at + 1;
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw Error(Errc::invalid_value, "--synth: bad shape '" + text + "', expected ROWSxCOLS[xCLASSES]");
        return parts;
    }

    std::string fitness_text(double value, int precision)
    {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
        return buf;
    }

    void print_summary(std::ostream& out, const EvolutionEngine& engine)
    {
        const Tree& best = engine.best_tree();
        out << "best tree " << best.id << " (gen " << engine.population().generation
            << "): fitness " << fitness_text(*best.fitness, engine.config().precision) << '\n';
        out << "  " << render_expression(best) << '\n';
    }

    void print_result(std::ostream& out, const RunResult& result, int precision)
    {
        const Tree* best = nullptr;
        const FitnessDirection direction = direction_for(result.kernel.kind);
        for (const Tree& tree : result.population.trees) {
            if (!best || (direction == FitnessDirection::minimize ? *tree.fitness < *best->fitness
                                                                  : *tree.fitness > *best->fitness))
                best = &tree;
        }
        char elapsed[32];
        std::snprintf(elapsed, sizeof(elapsed), "%.3f", result.elapsed_seconds);
        out << "run complete: " << result.history.size() << " generations in " << elapsed
            << " s, archive " << result.archive.root_dir << '\n';
        if (best) {
            out << "best: fitness " << fitness_text(*best->fitness, precision)
                << "  " << render_expression(*best) << '\n';
        }
    }

} // namespace

DisplayMode display_mode_from_name(const std::string& name)
{
    if (name == "silent")
        return DisplayMode::silent;
    if (name == "minimal")
        return DisplayMode::minimal;
    if (name == "full")
        return DisplayMode::full;
    if (name == "debug")
        return DisplayMode::debug;
    if (name == "timer")
        return DisplayMode::timer;
    throw Error(Errc::invalid_value,
        "--display: expected silent|minimal|full|debug|timer, got '" + name + "'");
}

const char* display_mode_name(DisplayMode mode) noexcept
{
    switch (mode) {
    case DisplayMode::silent: return "silent";
    case DisplayMode::minimal: return "minimal";
    case DisplayMode::full: return "full";
    case DisplayMode::debug: return "debug";
    case DisplayMode::timer: return "timer";
    }
    return "?";
}

CliCommand parse_args(const std::vector<std::string>& args)
{
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("gpvec");
    for (const std::string& a : args)
        argv.push_back(a.c_str());
    return parse_args(static_cast<int>(argv.size()), argv.data());
}

CliCommand parse_args(int argc, const char* const* argv)
{
    CLI::App app{ app_description, "gpvec" };
    app.get_formatter()->column_width(26);

    std::string config_file, kernel, tree_type, backend, data, synth, display;
    int depth_base = 0, depth_max = 0, min_nodes = 0, pop = 0, tourn = 0, gens = 0,
        precision = 0, workers = 0, runs = 10;
    double repro = 0, mutate = 0, cross = 0, train_frac = 1.0;
    std::uint64_t seed = 0;
    std::string archive_dir;
    bool interactive = false;

    app.add_option("--config", config_file, "key=value configuration file (flags override it)");
    app.add_option("--kernel", kernel, "fitness kernel: r(egression), c(lassify), m(atch)");
    app.add_option("--tree-type", tree_type, "initial trees: f(ull), g(row), r(amped half/half)");
    app.add_option("--depth-base", depth_base, "initial tree depth");
    app.add_option("--depth-max", depth_max, "evolved tree depth ceiling");
    app.add_option("--min-nodes", min_nodes, "minimum nodes per tree");
    app.add_option("--pop", pop, "trees per generation");
    app.add_option("--tourn", tourn, "tournament size");
    app.add_option("--gens", gens, "number of generations");
    app.add_option("--precision", precision, "fitness decimal places");
    app.add_option("--repro", repro, "reproduction fraction");
    app.add_option("--mutate", mutate, "mutation fraction");
    app.add_option("--cross", cross, "crossover fraction");
    app.add_option("--data", data, "CSV dataset (last column must be 's')");
    app.add_option("--synth", synth, "synthetic dataset ROWSxCOLS[xCLASSES]");
    app.add_option("--train-frac", train_frac, "train on this row fraction (default 1 = all rows)");
    app.add_option("--seed", seed, "master random seed (unseeded when absent)");
    app.add_option("--backend", backend, "evaluation backend: scalar or vector");
    app.add_option("--workers", workers, "vector-backend worker threads (0 = hardware)");
    app.add_option("--archive", archive_dir, "archive directory");
    app.add_option("--display", display, "display mode: silent|minimal|full|debug|timer");
    app.add_flag("--interactive", interactive, "text-menu desktop mode");

    CLI::App* bench = app.add_subcommand("bench", "compare backend wall times on one dataset");
    bench->fallthrough();
    bench->add_option("--runs", runs, "repetitions per configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        CliCommand command;
        command.mode = CliMode::help;
        command.help_text = app.help();
        return command;
    } catch (const CLI::ExtrasError& e) {
        throw Error(Errc::unknown_flag, e.what());
    } catch (const CLI::ParseError& e) {
        throw Error(Errc::invalid_value, e.what());
    }

    CliCommand command;
    try {
        if (app.count("--config") > 0)
            command.config = load_config(config_file);

        Config& cfg = command.config;
        if (app.count("--kernel") > 0)
            cfg.kernel = Kernel{ kernel_from_letter(kernel), 0 };
        if (app.count("--tree-type") > 0)
            cfg.tree_type = tree_type_from_letter(tree_type);
        if (app.count("--depth-base") > 0)
            cfg.tree_depth_base = depth_base;
        if (app.count("--depth-max") > 0)
            cfg.tree_depth_max = depth_max;
        if (app.count("--min-nodes") > 0)
            cfg.min_nodes = min_nodes;
        if (app.count("--pop") > 0)
            cfg.tree_pop_max = pop;
        if (app.count("--tourn") > 0)
            cfg.tournament_size = tourn;
        if (app.count("--gens") > 0)
            cfg.generation_max = gens;
        if (app.count("--precision") > 0)
            cfg.precision = precision;
        if (app.count("--repro") > 0)
            cfg.op_reproduction = repro;
        if (app.count("--mutate") > 0)
            cfg.op_mutation = mutate;
        if (app.count("--cross") > 0)
            cfg.op_crossover = cross;
        if (app.count("--seed") > 0)
            cfg.rng_seed = seed;
        if (app.count("--backend") > 0)
            cfg.backend = backend_from_name(backend);
        if (app.count("--workers") > 0)
            cfg.workers = workers;
        if (app.count("--archive") > 0)
            cfg.archive_dir = archive_dir;
        validate_config(cfg);
    } catch (const ConfigError& e) {
        throw Error(Errc::invalid_value, e.what());
    }

    if (app.count("--display") > 0)
        command.display = display_mode_from_name(display);
    command.train_fraction = train_frac;
    if (!(train_frac > 0.0) || train_frac > 1.0)
        throw Error(Errc::invalid_value, "--train-frac: must be in (0, 1]");

    command.data_path = data;
    if (app.count("--synth") > 0) {
        parse_synth_shape(synth); // reject malformed shapes at parse time
        command.synth_shape = synth;
    }
    if (!data.empty() && command.synth_shape)
        throw Error(Errc::invalid_value, "--data and --synth are mutually exclusive");

    const bool bench_mode = bench->parsed();
    if (bench_mode && interactive)
        throw Error(Errc::invalid_value, "bench and --interactive are mutually exclusive");
    command.mode = bench_mode ? CliMode::bench : (interactive ? CliMode::interactive : CliMode::run);
    command.runs = runs;

    if (data.empty() && !command.synth_shape)
        throw Error(Errc::missing_data, "no dataset: pass --data FILE or --synth ROWSxCOLS[xCLASSES]");

    return command;
}

ColumnStore resolve_dataset(const CliCommand& command)
{
    if (!command.synth_shape)
        return load_csv(command.data_path);

    const auto shape = parse_synth_shape(*command.synth_shape);
    Kernel kind{ KernelKind::regression, 0 };
    if (shape.size() == 3)
        kind = Kernel{ KernelKind::classification, static_cast<int>(shape[2]) };
    const std::uint64_t seed = command.config.rng_seed.value_or(0);
    return synth_dataset(shape[0], shape[1], kind, seed);
}

std::string dataset_label(const CliCommand& command)
{
    if (command.synth_shape)
        return "synth-" + *command.synth_shape;
    return std::filesystem::path(command.data_path).filename().string();
}

void report_generation(std::ostream& out, const EvolutionEngine& engine,
    const GenerationStats& stats, DisplayMode mode)
{
    const int precision = engine.config().precision;
    char buf[160];
    switch (mode) {
    case DisplayMode::silent:
        return;
    case DisplayMode::minimal:
        std::snprintf(buf, sizeof(buf), "gen %3d  best %s  mean %s", stats.generation,
            fitness_text(stats.best_fitness, precision).c_str(),
            fitness_text(stats.mean_fitness, precision).c_str());
        out << buf << '\n';
        return;
    case DisplayMode::timer:
        std::snprintf(buf, sizeof(buf), "gen %3d  %.3f s", stats.generation, stats.wall_seconds);
        out << buf << '\n';
        return;
    case DisplayMode::full: {
        out << "gen " << stats.generation << '\n';
        out << "  id  birth  depth  nodes  fitness\n";
        for (const Tree& tree : engine.population().trees) {
            std::snprintf(buf, sizeof(buf), "  %-4d %-6d %-6d %-6zu %s", tree.id,
                tree.birth_generation, tree.depth, tree.node_count(),
                fitness_text(tree.fitness.value_or(0.0), precision).c_str());
            out << buf << '\n';
        }
        return;
    }
    case DisplayMode::debug: {
        std::snprintf(buf, sizeof(buf), "gen %3d  best %s  mean %s", stats.generation,
            fitness_text(stats.best_fitness, precision).c_str(),
            fitness_text(stats.mean_fitness, precision).c_str());
        out << buf << '\n';
        const Tree& best = engine.best_tree();
        out << "best tree " << best.id << ": " << render_expression(best) << '\n';
        out << dump_plan(compile_tree(best, engine.kernel(), engine.store().feature_names));
        return;
    }
    }
}

RunResult interactive_loop(const Config& config, const ColumnStore& store,
    std::istream& in, std::ostream& out, DisplayMode display)
{
    EvolutionEngine engine(config, store);
    DisplayMode mode = display;
    report_generation(out, engine, engine.start(), mode);

    int pending = 0;       // generations to advance before pausing; -1 = run out
    bool auto_run = false; // terminal gone: behave like a server-mode run
    bool quit = false;

    while (!quit) {
        if (pending != 0 && !engine.done()) {
            report_generation(out, engine, engine.step(), mode);
            if (pending > 0)
                --pending;
            continue;
        }
        pending = 0;
        if (engine.done() && auto_run)
            break;

        out << "[gen " << engine.population().generation << "/" << engine.config().generation_max
            << "] c [N] continue | g N gens | t N tourn | f R M C fractions | d MODE display"
               " | b best | q quit\n> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) {
            auto_run = true; // degrade: run the remaining generations and stop
            pending = -1;
            continue;
        }
        std::istringstream cmd(line);
        std::string word;
        if (!(cmd >> word))
            continue;

        try {
            if (word == "c") {
                if (engine.done()) {
                    out << "generation max reached; raise it with g N or quit\n";
                    continue;
                }
                int n = -1;
                if (cmd >> n) {
                    if (n < 1) {
                        out << "continue count must be >= 1\n";
                        continue;
                    }
                    pending = n;
                } else {
                    pending = -1;
                }
            } else if (word == "g") {
                int n = 0;
                if (cmd >> n)
                    engine.set_generation_max(n);
                else
                    out << "usage: g N\n";
            } else if (word == "t") {
                int n = 0;
                if (cmd >> n)
                    engine.set_tournament_size(n);
                else
                    out << "usage: t N\n";
            } else if (word == "f") {
                double r = 0, m = 0, c = 0;
                if (cmd >> r >> m >> c)
                    engine.set_operator_fractions(r, m, c);
                else
                    out << "usage: f R M C\n";
            } else if (word == "d") {
                std::string name;
                if (cmd >> name)
                    mode = display_mode_from_name(name);
                else
                    out << "display mode is " << display_mode_name(mode) << '\n';
            } else if (word == "b") {
                print_summary(out, engine);
            } else if (word == "q") {
                quit = true;
            } else {
                out << "unknown command '" << word << "'\n";
            }
        } catch (const Error& e) {
            out << "rejected: " << e.what() << '\n';
        }
    }

    RunResult result = engine.finalize();
    print_result(out, result, config.precision);
    return result;
}

namespace {

    int do_run(const CliCommand& command, const ColumnStore& store, std::ostream& out)
    {
        EvolutionEngine engine(command.config, store);
        report_generation(out, engine, engine.start(), command.display);
        while (!engine.done())
            report_generation(out, engine, engine.step(), command.display);
        const RunResult result = engine.finalize();
        print_result(out, result, command.config.precision);
        return 0;
    }

    int do_bench(const CliCommand& command, const ColumnStore& store, std::ostream& out)
    {
        const BenchReport report = compare_backends(command.config, store,
            dataset_label(command), command.runs);

        std::filesystem::create_directories(command.config.archive_dir);
        const std::string csv_path = command.config.archive_dir + "/report.csv";
        const std::string md_path = command.config.archive_dir + "/report.md";
        {
            std::ofstream csv(csv_path, std::ios::trunc);
            csv << report_to_csv(report);
            if (!csv)
                throw Error(Errc::io_failure, "cannot write '" + csv_path + "'");
        }
        const std::string markdown = report_to_markdown(report);
        {
            std::ofstream md(md_path, std::ios::trunc);
            md << markdown;
            if (!md)
                throw Error(Errc::io_failure, "cannot write '" + md_path + "'");
        }
        out << markdown;
        out << "report written to " << csv_path << " and " << md_path << '\n';
        return 0;
    }

} // namespace

int exit_code_for(Errc code) noexcept
{
    switch (code) {
    case Errc::unknown_flag:
    case Errc::invalid_value:
    case Errc::missing_data:
    case Errc::invalid_config_field:
        return 1;
    case Errc::missing_solution_column:
    case Errc::ragged_row:
    case Errc::non_numeric_cell:
    case Errc::empty_file:
    case Errc::invalid_shape:
    case Errc::invalid_fraction:
    case Errc::invalid_feature_name:
    case Errc::label_out_of_range:
        return 2;
    default:
        return 3;
    }
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err)
{
    try {
        const CliCommand command = parse_args(argc, argv);
        if (command.mode == CliMode::help) {
            out << command.help_text;
            return 0;
        }

        ColumnStore store = resolve_dataset(command);
        if (command.train_fraction < 1.0) {
            const std::uint64_t seed = command.config.rng_seed.value_or(random_master_seed());
            TrainTestSplit split = split_train_test(store, command.train_fraction, seed);
            out << "training on " << split.train.n_rows << " of " << store.n_rows << " rows\n";
            store = std::move(split.train);
        }

        switch (command.mode) {
        case CliMode::run:
            return do_run(command, store, out);
        case CliMode::bench:
            return do_bench(command, store, out);
        case CliMode::interactive:
            interactive_loop(command.config, store, in, out, command.display);
            return 0;
        default:
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace gpvec
