#pragma once

#include <stdexcept>
#include <string>

namespace robinbd {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Superlevel set requested above the maximum of the profile.
class EmptyLevelSet : public DomainError {
public:
    using DomainError::DomainError;
};

/// An iterative method failed to converge or an integration broke down.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    [[nodiscard]] double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// The eigenvalue scan reached its upper limit without a bracket.
class SearchExhausted : public NumericalError {
public:
    SearchExhausted(const std::string& what, double lambda_min, double lambda_max)
        : NumericalError(what), lambda_min_(lambda_min), lambda_max_(lambda_max) {}

    [[nodiscard]] double lambda_min() const noexcept { return lambda_min_; }
    [[nodiscard]] double lambda_max() const noexcept { return lambda_max_; }

private:
    double lambda_min_;
    double lambda_max_;
};

/// Requested configuration is outside what an operation supports.
class Unsupported : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace robinbd
