#pragma once

#include <stdexcept>
#include <string>

namespace parex {

/// Failure categories. The CLI maps each to a distinct exit status.
enum class ErrorCategory {
    config = 2,            // rejected input, bad parameter combination
    domain = 3,            // argument outside the physical domain (R <= 0, ...)
    io = 4,
    insufficient_data = 5, // too few extrema for a growth fit, ...
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

/// epsilon1 + epsilon2 == 0: the image factor has a surface-plasmon pole.
class SurfacePlasmonPole : public DomainError {
public:
    explicit SurfacePlasmonPole(const std::string& what) : DomainError(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what)
        : Error(ErrorCategory::insufficient_data, what) {}
};

}  // namespace parex
