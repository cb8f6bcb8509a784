#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epsnet {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax or name-resolution failure while parsing expression text.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected = {});

    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Evaluation outside the domain of a sub-expression (log of a non-positive value,
/// division by zero, ...). `subexpression()` is the printed offending node.
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::string subexpression);
    const std::string& subexpression() const { return subexpression_; }

private:
    std::string subexpression_;
};

/// Attempt to use a pierced (origin-excluding) object where the origin is reachable.
class PiercedViolation : public Error {
public:
    using Error::Error;
};

class CBoundednessViolation : public Error {
public:
    CBoundednessViolation(const std::string& message, double eps, std::vector<double> point);
    double eps() const { return eps_; }
    const std::vector<double>& point() const { return point_; }

private:
    double eps_;
    std::vector<double> point_;
};

class PreconditionViolated : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace epsnet
