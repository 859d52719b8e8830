#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace finpot {

/// Domain error carrying a stable machine-readable code.
///
/// Codes used across the library:
///   variable_mismatch, domain_error, certificate_failure, noncommuting_tails,
///   not_invertible, undecidable_placement, window_exhausted, precondition,
///   not_block_aligned, no_common_core, compatibility_violated,
///   structural_failure, factorization_limit
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(detail), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Malformed textual or JSON input.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& detail) : Error("parse_error", detail) {}
};

[[noreturn]] inline void fail(const std::string& code, const std::string& detail) {
    throw Error(code, detail);
}

}  // namespace finpot
