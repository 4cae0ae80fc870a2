#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace rankagg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on arguments (shape, range, finiteness) was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A label (or aggregated label) has no discordant pair, so the AUC is undefined.
class DegenerateLabel : public Error {
public:
    explicit DegenerateLabel(std::string what, std::optional<std::size_t> label = std::nullopt)
        : Error(std::move(what)), label_(label) {}

    /// Index of the offending label, when the failure is attributable to one.
    std::optional<std::size_t> label() const noexcept { return label_; }

private:
    std::optional<std::size_t> label_;
};

/// Costs do not admit the closed-form multipartite scorer.
class InvalidCosts : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::string what, std::uint64_t requested)
        : Error(std::move(what)), requested_(requested) {}

    /// Number of hypotheses the caller asked for (saturated at UINT64_MAX).
    std::uint64_t requested() const noexcept { return requested_; }

private:
    std::uint64_t requested_;
};

/// Instance set too large for exhaustive weak-order search.
class TooLarge : public Error {
public:
    using Error::Error;
};

/// Table scorers carry no parameters and cannot be trained.
class NotTrainable : public Error {
public:
    using Error::Error;
};

/// Every label is deterministic on some instance pair; the normal approximation has no variance.
class DegenerateVariance : public Error {
public:
    using Error::Error;
};

/// Malformed input data (CSV schema, non-binary labels, ...).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace rankagg
