#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mg1tail {

/// Argument outside the mathematical domain of an operation (negative x, u outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The operation is not defined for the given model variant (e.g. an MGF for a Pareto tail).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A lattice computation would exceed its configured cell budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t required, std::size_t budget)
      : std::runtime_error(what + " (required " + std::to_string(required) + " cells, budget " +
                           std::to_string(budget) + ")"),
        required_(required),
        budget_(budget) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

/// The heavy-traffic and heavy-tail curves do not cross in the searched range.
class NoCrossingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mg1tail
