#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssvm {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed svmlight token. Carries the 1-based line number.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

/// Structurally valid tokens that break an ordering rule (non-increasing feature ids).
class FormatError : public ParseError {
  public:
    using ParseError::ParseError;
};

/// Label that the active label policy cannot map onto {+1, -1}.
class LabelError : public ParseError {
  public:
    using ParseError::ParseError;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

/// Input that violates a documented precondition (empty store, single-class data...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// The optimizer hit its iteration cap, or stalled, while KKT violators remain.
class NonConvergenceError : public Error {
  public:
    NonConvergenceError(const std::string& what, double beta_up, double beta_low, std::size_t iterations)
        : Error(what), beta_up_(beta_up), beta_low_(beta_low), iterations_(iterations) {}

    [[nodiscard]] double beta_up() const noexcept { return beta_up_; }
    [[nodiscard]] double beta_low() const noexcept { return beta_low_; }
    [[nodiscard]] std::size_t iterations() const noexcept { return iterations_; }

  private:
    double beta_up_;
    double beta_low_;
    std::size_t iterations_;
};

/// A trained solution without support vectors cannot classify anything.
class DegenerateModelError : public Error {
  public:
    using Error::Error;
};

class ModelLoadError : public Error {
  public:
    using Error::Error;
};

}  // namespace ssvm
