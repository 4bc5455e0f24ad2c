#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plap {

// Base of every error the library throws. `kind()` is a stable identifier
// that reports serialize.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Bad arguments: wrong dimension, non-positive extents, mismatched domains.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("InvalidArgument", what) {}
};

// Iteration budget exhausted. Carries the residual history.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::vector<double> history)
        : Error("NonConvergence", what), history_(std::move(history)) {}

    const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

class DegenerateGradient : public Error {
public:
    explicit DegenerateGradient(const std::string& what) : Error("DegenerateGradient", what) {}
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& what) : Error("DegenerateInput", what) {}
};

class SegmentDegenerate : public Error {
public:
    explicit SegmentDegenerate(const std::string& what) : Error("SegmentDegenerate", what) {}
};

// Fixed-point iterate left the ball of radius 1/2 in the gradient sup norm.
class BallEscape : public Error {
public:
    BallEscape(const std::string& what, int iteration, double grad_norm)
        : Error("BallEscape", what), iteration_(iteration), grad_norm_(grad_norm) {}

    int iteration() const noexcept { return iteration_; }
    double grad_norm() const noexcept { return grad_norm_; }

private:
    int iteration_;
    double grad_norm_;
};

class DivisionByZeroConstantTerm : public Error {
public:
    explicit DivisionByZeroConstantTerm(const std::string& what)
        : Error("DivisionByZeroConstantTerm", what) {}
};

// Math domain violation in jet or expression evaluation (log of a
// non-positive value, fractional power of a negative base, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("DomainError", what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset, std::vector<std::string> expected)
        : Error("ParseError", what), offset_(offset), expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class TangentialDegenerate : public Error {
public:
    explicit TangentialDegenerate(const std::string& what) : Error("TangentialDegenerate", what) {}
};

class NormalGradientZero : public Error {
public:
    explicit NormalGradientZero(const std::string& what) : Error("NormalGradientZero", what) {}
};

class IllConditioned : public Error {
public:
    IllConditioned(const std::string& what, int order, double condition)
        : Error("IllConditioned", what), order_(order), condition_(condition) {}

    int order() const noexcept { return order_; }
    double condition() const noexcept { return condition_; }

private:
    int order_;
    double condition_;
};

}  // namespace plap
