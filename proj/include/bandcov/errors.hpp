#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace bandcov {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter combinations the estimator cannot honour (b, a, r, fold counts, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Not enough subjects to estimate some patch quantity. Carries the 1-based
/// patch number and, for pairwise estimation, the 1-based grid cell.
class InsufficientDataError : public Error {
 public:
  InsufficientDataError(std::string what, int patch,
                        std::optional<std::pair<int, int>> cell = std::nullopt)
      : Error(std::move(what)), patch_(patch), cell_(cell) {}

  int patch() const noexcept { return patch_; }
  const std::optional<std::pair<int, int>>& cell() const noexcept { return cell_; }

 private:
  int patch_;
  std::optional<std::pair<int, int>> cell_;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

/// Query outside the domain of a function (no extrapolation).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace bandcov
