#ifndef REWET_ERRORS_HPP
#define REWET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rewet {

/// Bad physical or numerical parameter (also covers malformed config input).
class InvalidParameterError : public std::runtime_error {
public:
    explicit InvalidParameterError(const std::string& msg)
        : std::runtime_error(msg) {}
};

/// Unknown preset or scenario name.
class NotFoundError : public std::runtime_error {
public:
    explicit NotFoundError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite value produced during RHS assembly; carries the offending cell.
class NumericalFailureError : public std::runtime_error {
public:
    NumericalFailureError(const std::string& msg, int cell_index)
        : std::runtime_error(msg + " (cell " + std::to_string(cell_index) + ")"),
          cell(cell_index) {}
    int cell;
};

/// Time integration could not continue (step underflow or Newton breakdown).
class SolverFailureError : public std::runtime_error {
public:
    SolverFailureError(const std::string& msg, double t_fail)
        : std::runtime_error(msg + " at t = " + std::to_string(t_fail)),
          t(t_fail) {}
    double t;
};

class InsufficientDataError : public std::runtime_error {
public:
    explicit InsufficientDataError(const std::string& msg)
        : std::runtime_error(msg) {}
};

class InvalidGridError : public std::runtime_error {
public:
    explicit InvalidGridError(const std::string& msg)
        : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rewet

#endif
