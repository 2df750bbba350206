#pragma once

#include <stdexcept>
#include <string>

namespace fsosec
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

// Scenario or call is missing a required ingredient, or violates an invariant.
class ConfigError : public Error
{
public:
    using Error::Error;
};

class NumericalError : public Error
{
public:
    using Error::Error;
};

// Iterative method ran out of budget; carries the best estimate reached.
class ConvergenceError : public NumericalError
{
public:
    ConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : NumericalError(what), best_estimate_(best_estimate), error_estimate_(error_estimate)
    {
    }

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

class ParseError : public Error
{
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                               std::to_string(column) + ")"
                         : what),
          line_(line), column_(column)
    {
    }

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace fsosec
