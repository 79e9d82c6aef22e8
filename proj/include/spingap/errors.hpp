#pragma once

#include <stdexcept>
#include <string>

namespace spingap {

// Base class for every error the toolkit raises. The exit code is what the
// command-line front end returns when the error escapes a subcommand.
class Error : public std::runtime_error {
public:
    Error(const std::string& what, int exit_code)
        : std::runtime_error(what), exit_code_(exit_code) {}

    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

// Bad flags, unknown subcommands, malformed option values.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(what, 2) {}
};

// An enumeration or matrix size limit would be exceeded.
class CapExceeded : public Error {
public:
    explicit CapExceeded(const std::string& what) : Error(what, 3) {}
};

// Inputs that violate a precondition: infeasible pinnings, out-of-domain
// parameters, malformed documents.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what, 4) {}
};

// Line-numbered parse failure of an edge-list or config document.
class ParseError : public InvalidInput {
public:
    ParseError(const std::string& what, std::size_t line)
        : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace spingap
