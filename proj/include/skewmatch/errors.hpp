#ifndef SKEWMATCH_ERRORS_HPP
#define SKEWMATCH_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace skewmatch {

/// Base class of every error the library throws. `exit_code` is the process
/// status the command-line tool reports for this error family.
class Error : public std::runtime_error {
public:
    Error(const std::string& what, int exit_code)
        : std::runtime_error(what), exit_code_(exit_code) {}

    [[nodiscard]] int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

/// Input violates a precondition (not a tree, vertex out of range, bad target).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what, 1) {}
};

/// Malformed text input. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what, 3), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Unreadable input or output stream.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what, 3) {}
};

/// Iterative solver gave up. Carries the residual log of every attempt.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> trace)
        : Error(what, 2), trace_(std::move(trace)) {}

    [[nodiscard]] const std::vector<double>& trace() const noexcept { return trace_; }

private:
    std::vector<double> trace_;
};

} // namespace skewmatch

#endif // SKEWMATCH_ERRORS_HPP
