#include "gromov/simplex.hpp"

#include <algorithm>

#include "gromov/errors.hpp"

namespace gromov {

namespace {

class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp) : num_structural_(lp.num_vars) {
    const int m = static_cast<int>(lp.rows.size());
    // Column layout: structural | one slack or surplus per row | artificials
    // | rhs. Rows are sign-normalized so every right-hand side is
    // nonnegative; <= rows start basic on their slack, the rest on an
    // artificial.
    std::vector<LpRelation> rel(m);
    std::vector<Rat> sign(m, Rat(1));
    int artificials = 0;
    for (int i = 0; i < m; ++i) {
      rel[i] = lp.rows[i].rel;
      if (lp.rows[i].rhs < 0) {
        sign[i] = -1;
        if (rel[i] == LpRelation::kGe) rel[i] = LpRelation::kLe;
        else if (rel[i] == LpRelation::kLe) rel[i] = LpRelation::kGe;
      }
      if (rel[i] != LpRelation::kLe) ++artificials;
    }

    first_artificial_ = num_structural_ + m;
    num_cols_ = first_artificial_ + artificials;
    rows_.resize(m);
    basis_.assign(m, -1);
    int next_artificial = first_artificial_;
    for (int i = 0; i < m; ++i) {
      const LpRow& in = lp.rows[i];
      Row& row = rows_[i];
      row.assign(num_cols_ + 1, Rat(0));
      for (int j = 0; j < num_structural_; ++j)
        row[j] = sign[i] * in.coeffs[j];
      row[num_cols_] = sign[i] * in.rhs;

      const int extra = num_structural_ + i;
      switch (rel[i]) {
        case LpRelation::kLe:
          row[extra] = 1;  // slack, initial basis
          basis_[i] = extra;
          break;
        case LpRelation::kGe:
          row[extra] = -1;  // surplus
          row[next_artificial] = 1;
          basis_[i] = next_artificial++;
          break;
        case LpRelation::kEq:
          row[next_artificial] = 1;
          basis_[i] = next_artificial++;
          break;
      }
    }
  }

  // Phase 1: drive the artificial variables to zero, then remove them from
  // the tableau. Returns false when the problem is infeasible.
  bool phase1() {
    if (first_artificial_ == num_cols_) return true;
    objective_.assign(num_cols_ + 1, Rat(0));
    for (int j = first_artificial_; j < num_cols_; ++j) objective_[j] = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] >= first_artificial_) subtract_row(objective_, rows_[i]);
    run();
    if (objective_[num_cols_] != 0) return false;

    // Leftover basic artificials sit at value zero. Pivot each onto some
    // non-artificial column when possible (a degenerate pivot, any sign
    // works); a row with no such column is a redundant constraint.
    std::vector<bool> redundant(rows_.size(), false);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (basis_[i] < first_artificial_) continue;
      int col = -1;
      for (int j = 0; j < first_artificial_; ++j)
        if (rows_[i][j] != 0) {
          col = j;
          break;
        }
      if (col >= 0)
        pivot(static_cast<int>(i), col);
      else
        redundant[i] = true;
    }

    std::size_t out = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (redundant[i]) continue;
      Rat rhs = std::move(rows_[i][num_cols_]);
      rows_[i].resize(first_artificial_);
      rows_[i].push_back(std::move(rhs));
      if (out != i) {
        rows_[out] = std::move(rows_[i]);
        basis_[out] = basis_[i];
      }
      ++out;
    }
    rows_.resize(out);
    basis_.resize(out);
    num_cols_ = first_artificial_;
    return true;
  }

  LpSolution phase2(const LinearProgram& lp) {
    objective_.assign(num_cols_ + 1, Rat(0));
    for (int j = 0; j < num_structural_; ++j) objective_[j] = -lp.objective[j];
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (objective_[basis_[i]] != 0) {
        const Rat factor = objective_[basis_[i]];
        for (int j = 0; j <= num_cols_; ++j)
          objective_[j] -= factor * rows_[i][j];
      }
    if (!run()) return {LpStatus::kUnbounded, Rat(0), {}};

    LpSolution sol;
    sol.status = LpStatus::kOptimal;
    sol.objective_value = objective_[num_cols_];
    sol.x.assign(num_structural_, Rat(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < num_structural_)
        sol.x[basis_[i]] = rows_[i][num_cols_];
    return sol;
  }

 private:
  using Row = std::vector<Rat>;

  static void subtract_row(Row& target, const Row& source) {
    for (std::size_t j = 0; j < target.size(); ++j) target[j] -= source[j];
  }

  // One simplex run with Bland's rule. Returns false on unboundedness.
  bool run() {
    while (true) {
      int entering = -1;
      for (int j = 0; j < num_cols_; ++j)
        if (objective_[j] < 0) {
          entering = j;
          break;
        }
      if (entering < 0) return true;

      int leaving = -1;
      Rat best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rat& a = rows_[i][entering];
        if (a <= 0) continue;
        Rat ratio = rows_[i][num_cols_] / a;
        if (leaving < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = static_cast<int>(i);
          best_ratio = ratio;
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
  }

  void pivot(int row, int col) {
    Row& p = rows_[row];
    const Rat inv = 1 / p[col];
    if (inv != 1)
      for (int j = 0; j <= num_cols_; ++j)
        if (p[j] != 0) p[j] *= inv;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == row) continue;
      eliminate(rows_[i], p, col);
    }
    eliminate(objective_, p, col);
    basis_[row] = col;
  }

  void eliminate(Row& target, const Row& pivot_row, int col) {
    const Rat factor = target[col];
    if (factor == 0) return;
    for (int j = 0; j <= num_cols_; ++j)
      if (pivot_row[j] != 0) target[j] -= factor * pivot_row[j];
  }

  int num_structural_;
  int num_cols_ = 0;
  int first_artificial_ = 0;
  std::vector<Row> rows_;
  std::vector<int> basis_;
  Row objective_;
};

}  // namespace

LpSolution maximize(const LinearProgram& lp) {
  for (const LpRow& row : lp.rows)
    if (static_cast<int>(row.coeffs.size()) != lp.num_vars)
      throw ValidationError("LP row width does not match variable count");
  if (static_cast<int>(lp.objective.size()) != lp.num_vars)
    throw ValidationError("LP objective width does not match variable count");

  Tableau tableau(lp);
  if (!tableau.phase1()) return {LpStatus::kInfeasible, Rat(0), {}};
  return tableau.phase2(lp);
}

}  // namespace gromov
