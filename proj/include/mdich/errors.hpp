#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdich {

/// Broad classes of failure. The CLI maps them onto its exit codes.
enum class ErrorCategory {
    Usage,         ///< bad parameters or malformed input
    Cap,           ///< a configured size cap would be exceeded
    Verification,  ///< a result failed its own certificate check
    Domain,        ///< the input violates a mathematical precondition
};

/// Base of every error thrown by the library. `name()` is a stable
/// identifier such as "TriangleViolation" that tests and scripts match on.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string & message,
          ErrorCategory category = ErrorCategory::Domain);

    const std::string & name() const noexcept { return name_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string name_;
    ErrorCategory category_;
};

class UsageError : public Error {
public:
    UsageError(std::string name, const std::string & message)
        : Error(std::move(name), message, ErrorCategory::Usage) {}
};

class CapExceeded : public Error {
public:
    CapExceeded(std::string name, const std::string & message)
        : Error(std::move(name), message, ErrorCategory::Cap) {}
};

class VerificationFailure : public Error {
public:
    explicit VerificationFailure(const std::string & message)
        : Error("VerificationFailure", message, ErrorCategory::Verification) {}
};

/// An error that points at a specific tuple of points.
template <std::size_t N>
class PointTupleError : public Error {
public:
    PointTupleError(std::string name, std::array<std::size_t, N> points, const std::string & message)
        : Error(std::move(name), message), points_(points) {}

    const std::array<std::size_t, N> & points() const noexcept { return points_; }

private:
    std::array<std::size_t, N> points_;
};

using TriangleViolation = PointTupleError<3>;
using TripleTooFlat = PointTupleError<3>;
using FourPointViolation = PointTupleError<4>;

}  // namespace mdich
