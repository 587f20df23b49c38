#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gpvec/errors.hpp"

namespace gpvec {

enum class OpCode {
    add,
    sub,
    mul,
    div, // protected: x/y is 0 when |y| < div_epsilon
    neg, // unary minus
};

// Denominators below this magnitude divide to 0 instead of overflowing.
inline constexpr double div_epsilon = 1e-12;

struct OpInfo {
    OpCode code;
    std::string_view symbol;
    int arity;
};

inline constexpr std::array<OpInfo, 5> operator_table{{
    { OpCode::add, "+", 2 },
    { OpCode::sub, "-", 2 },
    { OpCode::mul, "*", 2 },
    { OpCode::div, "/", 2 },
    { OpCode::neg, "-", 1 },
}};

constexpr const OpInfo& op_info(OpCode code) noexcept
{
    return operator_table[static_cast<std::size_t>(code)];
}

constexpr int op_arity(OpCode code) noexcept { return op_info(code).arity; }
constexpr std::string_view op_symbol(OpCode code) noexcept { return op_info(code).symbol; }

inline std::optional<OpCode> binary_op_from_symbol(std::string_view sym) noexcept
{
    for (const auto& info : operator_table)
        if (info.arity == 2 && info.symbol == sym)
            return info.code;
    return std::nullopt;
}

// The default operator set: the four protected arithmetic binaries.
inline std::vector<OpCode> default_operator_set()
{
    return { OpCode::add, OpCode::sub, OpCode::mul, OpCode::div };
}

inline std::string operator_set_to_string(const std::vector<OpCode>& ops)
{
    std::string out;
    for (OpCode op : ops) {
        if (!out.empty())
            out += ',';
        out += op_symbol(op);
        if (op == OpCode::neg)
            out += "u"; // disambiguate unary minus from binary '-'
    }
    return out;
}

inline std::vector<OpCode> operator_set_from_string(std::string_view text)
{
    std::vector<OpCode> ops;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        std::string_view tok = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        if (tok == "-u") {
            ops.push_back(OpCode::neg);
        } else if (auto op = binary_op_from_symbol(tok)) {
            ops.push_back(*op);
        } else {
            throw Error(Errc::unknown_operator, "unknown operator '" + std::string(tok) + "'");
        }
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return ops;
}

} // namespace gpvec
