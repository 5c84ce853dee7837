#pragma once

#include <vector>

#include "gromov/rational.hpp"

namespace gromov {

enum class LpRelation { kEq, kGe, kLe };

struct LpRow {
  std::vector<Rat> coeffs;  // dense over all variables
  LpRelation rel = LpRelation::kGe;
  Rat rhs;
};

// max objective . x  subject to the rows, x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<Rat> objective;
  std::vector<LpRow> rows;
};

enum class LpStatus { kOptimal, kUnbounded, kInfeasible };

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Rat objective_value;
  std::vector<Rat> x;
};

// Two-phase dense-tableau simplex over exact rationals with Bland's
// anti-cycling pivot rule. Fully deterministic.
LpSolution maximize(const LinearProgram& lp);

}  // namespace gromov
