#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpvec/config.hpp"
#include "gpvec/data.hpp"
#include "gpvec/evolve.hpp"

namespace gpvec {

enum class CliMode { run, bench, interactive, help };

// The five display verbosities of the desktop interface.
enum class DisplayMode { silent, minimal, full, debug, timer };

DisplayMode display_mode_from_name(const std::string& name);
const char* display_mode_name(DisplayMode mode) noexcept;

struct CliCommand {
    CliMode mode = CliMode::run;
    Config config;
    std::string data_path;                  // CSV dataset, xor synth_shape
    std::optional<std::string> synth_shape; // "ROWSxCOLS" or "ROWSxCOLSxCLASSES"
    double train_fraction = 1.0;
    int runs = 10; // bench repetitions
    DisplayMode display = DisplayMode::minimal;
    std::string help_text; // filled when mode == help
};

// Parses command-line arguments into a validated command. Every argv either
// yields a CliCommand or a named error: UnknownFlag, InvalidValue (naming the
// flag) or MissingData. Defaults are the reference configuration.
CliCommand parse_args(const std::vector<std::string>& args);
CliCommand parse_args(int argc, const char* const* argv);

// Loads --data or builds --synth.
ColumnStore resolve_dataset(const CliCommand& command);
std::string dataset_label(const CliCommand& command);

// Per-generation reporting for the chosen display mode.
void report_generation(std::ostream& out, const EvolutionEngine& engine,
    const GenerationStats& stats, DisplayMode mode);

// Text-menu front end: pauses between generations for continue/adjust/
// inspect/quit. Stream-based so it is scriptable; I/O failure degrades to a
// straight server-mode run. Zero edits leave results identical to run mode.
RunResult interactive_loop(const Config& config, const ColumnStore& store,
    std::istream& in, std::ostream& out, DisplayMode display = DisplayMode::minimal);

// Full program body; returns the process exit code
// (0 ok, 1 usage, 2 data, 3 runtime).
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

int exit_code_for(Errc code) noexcept;

} // namespace gpvec
