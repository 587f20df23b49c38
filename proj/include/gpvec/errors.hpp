#pragma once

#include <stdexcept>
#include <string>

namespace gpvec {

// Every failure the engine can report, one code per named error condition.
enum class Errc {
    // config
    invalid_config_field,
    // data
    missing_solution_column,
    ragged_row,
    non_numeric_cell,
    empty_file,
    invalid_shape,
    invalid_fraction,
    invalid_feature_name,
    // expression parsing
    syntax_error,
    unknown_identifier,
    unknown_operator,
    // evaluation / scoring
    feature_mismatch,
    length_mismatch,
    label_out_of_range,
    // generation / evolution
    retry_exhausted,
    unscored_population,
    // archive
    io_failure,
    // cli
    unknown_flag,
    invalid_value,
    missing_data,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message)
        : std::runtime_error(std::move(message))
        , code_(code)
    {
    }

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Config violations carry the offending field so each field rejects distinctly.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(Errc::invalid_config_field, field + ": " + message)
        , field_(std::move(field))
    {
    }

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Expression errors are annotated with the byte offset into the source string.
class ParseError : public Error {
public:
    ParseError(Errc code, std::size_t position, const std::string& message)
        : Error(code, message + " at position " + std::to_string(position))
        , position_(position)
    {
    }

    [[nodiscard]] std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace gpvec
