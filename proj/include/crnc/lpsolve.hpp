#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crnc/linalg.hpp"

namespace crnc {

enum class Relation { LessEqual, Equal, GreaterEqual };
enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearConstraint {
  RationalVector coeffs;
  Relation relation = Relation::LessEqual;
  Rational rhs;
};

// default is x >= 0
struct VariableBounds {
  std::optional<Rational> lower = Rational(0);
  std::optional<Rational> upper;
  static VariableBounds free() { return {std::nullopt, std::nullopt}; }
};

struct LinearProgram {
  explicit LinearProgram(std::size_t n = 0);

  std::size_t variables = 0;
  Sense sense = Sense::Minimize;
  RationalVector objective;
  std::vector<LinearConstraint> constraints;
  std::vector<VariableBounds> bounds;

  void add(RationalVector coeffs, Relation rel, Rational rhs);
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Rational objective;
  RationalVector x;
  std::size_t pivots = 0;
  std::size_t phase1_pivots = 0;
};

// two-phase dense tableau simplex with Bland's rule, exact over Q
LpResult solve(const LinearProgram& lp);
std::string dump(const LinearProgram& lp);
const char* to_string(LpStatus s);

enum class KernelSide { Right, Left };
// a vector with all entries >= 1 in ker A (right) or ker A^T (left), if one exists
std::optional<RationalVector> positive_point_in_kernel(const RationalMatrix& a, KernelSide side);

}  // namespace crnc
