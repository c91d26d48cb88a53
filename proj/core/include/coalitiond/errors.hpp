#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace coalitiond {

/// Malformed arguments: out-of-range agents, dimension mismatches, bad configs.
class InputError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// The request is well-formed but exceeds an enumeration or memory cap.
class CapabilityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// CSV / JSON ingestion failure. `row()` is the 1-based file line, 0 if unknown.
class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string& what, std::size_t row = 0)
        : std::runtime_error(row == 0 ? what : "row " + std::to_string(row) + ": " + what)
        , row_(row)
    {
    }

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// An iterative method hit its iteration cap. Carries the last iterate.
class ConvergenceError : public std::runtime_error
{
public:
    ConvergenceError(const std::string& what, Eigen::MatrixXd best, double residual)
        : std::runtime_error(what)
        , best_(std::move(best))
        , residual_(residual)
    {
    }

    const Eigen::MatrixXd& best_iterate() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    Eigen::MatrixXd best_;
    double residual_;
};

} // namespace coalitiond
