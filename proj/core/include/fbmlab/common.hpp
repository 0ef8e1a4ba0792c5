#pragma once

#include <stdexcept>
#include <string>

namespace fbmlab {

inline constexpr const char* kVersion = "0.1.0";

// Gram matrix could not be factorized even after jitter escalation.
class FactorizationError : public std::runtime_error {
 public:
  explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

// A requested computation exceeds a hard size/cost budget.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A ladder point has too few survivors to enter an exponent fit.
class SurvivorError : public std::runtime_error {
 public:
  explicit SurvivorError(const std::string& what) : std::runtime_error(what) {}
};

// Shortest round-trip decimal formatting for all numeric output.
std::string fmt_double(double x);

}  // namespace fbmlab
