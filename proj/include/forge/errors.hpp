#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace forge {

enum class ErrorKind {
    Parse,
    NegativeValue,
    UnknownCode,
    InvalidArgument,
    Validation,
    MissingArtifact,
    Io,
    EmptyTrade,
    MissingYear,
    MissingConcordance,
    UnknownSector,
    EmptyRegion,
    NoExternalSupply,
    UniverseMismatch,
    Computation,
};

const char* to_string(ErrorKind kind);

// True for errors caused by bad inputs or configuration rather than by a
// computation on well-formed inputs. The CLI maps these to exit code 1.
bool is_validation_error(ErrorKind kind);

class ForgeError : public std::runtime_error {
public:
    ForgeError(ErrorKind kind, const std::string& message, std::size_t line = 0)
        : std::runtime_error(message), kind_(kind), line_(line) {}

    ErrorKind kind() const noexcept { return kind_; }

    // 1-based line number for parse errors, 0 when not applicable.
    std::size_t line() const noexcept { return line_; }

private:
    ErrorKind kind_;
    std::size_t line_;
};

} // namespace forge
