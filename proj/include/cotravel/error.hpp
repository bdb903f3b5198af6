#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cotravel {

enum class error_kind {
    parse,        // malformed input row, column or date
    config,       // invalid threshold or generator configuration
    capacity,     // group too large for pair enumeration
    consistency,  // internal invariant violated
    missing,      // missing input or ground-truth entry
};

const char* to_string(error_kind kind);

class error : public std::runtime_error {
public:
    error(error_kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}

    error_kind kind() const { return kind_; }

private:
    error_kind kind_;
};

/// Input error tied to a 1-based line of the source file.
class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& message)
        : error(error_kind::parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace cotravel
