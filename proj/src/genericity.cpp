#include "gromov/genericity.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "gromov/enumerate.hpp"
#include "gromov/errors.hpp"

namespace gromov {

int FeasibilityProblem::slot_index(int node, NodePair pair) const {
  for (std::size_t v = 0; v < slots.size(); ++v)
    if (slots[v].node == node && slots[v].pair == pair)
      return static_cast<int>(v);
  throw InternalDefect("no slot for the requested Gromov product");
}

namespace {

// Slot numbering shared by every problem of the same point count: node-major,
// pairs ascending.
std::vector<DeltaSlot> make_slots(int n) {
  std::vector<DeltaSlot> slots;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (j == i) continue;
      for (int k = j + 1; k <= n; ++k)
        if (k != i) slots.push_back({i, NodePair(j, k)});
    }
  return slots;
}

int slot_of(int n, int node, NodePair pair) {
  // Inverse of make_slots without a lookup table; mirrors GromovTensor's
  // dense pair indexing, minus the slots owned by the node itself.
  int index = 0;
  for (int i = 1; i < node; ++i) index += (n - 1) * (n - 2) / 2;
  int pair_rank = 0;
  for (int j = 1; j <= n; ++j) {
    if (j == node) continue;
    for (int k = j + 1; k <= n; ++k) {
      if (k == node) continue;
      if (j == pair.lo && k == pair.hi) return index + pair_rank;
      ++pair_rank;
    }
  }
  throw InternalDefect("pair touches the node that owns the slot");
}

}  // namespace

FeasibilityProblem build_problem(const GromovStructure& s) {
  const AllowabilityVerdict verdict = is_allowable(s);
  if (!verdict.allowable) throw NotAllowable(verdict.description());

  const int n = s.size();
  FeasibilityProblem p;
  p.n = n;
  p.structure = s;
  p.slots = make_slots(n);
  p.num_delta_vars = static_cast<int>(p.slots.size());

  // Distances reconstructed from any two nodes' products must agree for
  // every choice of the third point: anchor each pair at its smallest
  // witness and equate the rest.
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int k0 = 0;
      for (int k = 1; k <= n && k0 == 0; ++k)
        if (k != i && k != j) k0 = k;
      for (int k = k0 + 1; k <= n; ++k) {
        if (k == i || k == j) continue;
        SparseRow row;
        row.rhs = 0;
        row.terms = {{slot_of(n, i, NodePair(j, k)), Rat(1)},
                     {slot_of(n, j, NodePair(i, k)), Rat(1)},
                     {slot_of(n, i, NodePair(j, k0)), Rat(-1)},
                     {slot_of(n, j, NodePair(i, k0)), Rat(-1)}};
        p.equalities.push_back(std::move(row));
      }
    }

  const int t_var = p.num_delta_vars;
  for (int v = 0; v < p.num_delta_vars; ++v) {
    SparseRow row;
    row.rhs = 0;
    row.terms = {{v, Rat(1)}, {t_var, Rat(-1)}};
    p.positivity.push_back(std::move(row));
  }

  for (int a = 1; a <= n; ++a) {
    const int picked = slot_of(n, a, s.pick(a));
    for (int v = 0; v < p.num_delta_vars; ++v) {
      if (p.slots[v].node != a || v == picked) continue;
      SparseRow row;
      row.rhs = 0;
      row.terms = {{v, Rat(1)}, {picked, Rat(-1)}, {t_var, Rat(-1)}};
      p.minimality.push_back(std::move(row));
    }
  }

  p.normalization.rhs = 1;
  for (int v = 0; v < p.num_delta_vars; ++v)
    p.normalization.terms.emplace_back(v, Rat(1));
  return p;
}

namespace {

// Affine form over the reduced variable set: value = terms . y + constant.
struct AffineForm {
  std::vector<Rat> coeffs;
  Rat constant;
};

// Exact Gauss-Jordan elimination of the compatibility equalities plus the
// normalization. Everything here depends only on the point count, so the
// result is cached: each delta variable becomes an affine form over the
// surviving variables (kept variables map to themselves).
struct EliminationCache {
  int n = 0;
  int num_delta_vars = 0;
  std::vector<int> kept;              // reduced index -> delta variable
  std::vector<AffineForm> expansion;  // delta variable -> form over kept
};

EliminationCache build_elimination(int n) {
  const std::vector<DeltaSlot> slots = make_slots(n);
  const int num_vars = static_cast<int>(slots.size());

  // Rebuild the structure-independent equality rows (same construction as
  // build_problem) plus the normalization, as dense rows | rhs.
  std::vector<std::vector<Rat>> rows;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int k0 = 0;
      for (int k = 1; k <= n && k0 == 0; ++k)
        if (k != i && k != j) k0 = k;
      for (int k = k0 + 1; k <= n; ++k) {
        if (k == i || k == j) continue;
        std::vector<Rat> row(num_vars + 1, Rat(0));
        row[slot_of(n, i, NodePair(j, k))] += 1;
        row[slot_of(n, j, NodePair(i, k))] += 1;
        row[slot_of(n, i, NodePair(j, k0))] -= 1;
        row[slot_of(n, j, NodePair(i, k0))] -= 1;
        rows.push_back(std::move(row));
      }
    }
  {
    std::vector<Rat> row(num_vars + 1, Rat(0));
    for (int v = 0; v < num_vars; ++v) row[v] = 1;
    row[num_vars] = 1;  // rhs
    rows.push_back(std::move(row));
  }

  std::vector<int> pivot_col(rows.size(), -1);
  std::vector<bool> eliminated(num_vars, false);
  std::size_t rank = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    int col = -1;
    for (int v = 0; v < num_vars; ++v)
      if (!eliminated[v] && rows[r][v] != 0) {
        col = v;
        break;
      }
    if (col < 0) {
      if (rows[r][num_vars] != 0)
        throw InternalDefect("inconsistent compatibility system");
      continue;  // dependent row
    }
    const Rat inv = 1 / rows[r][col];
    for (auto& value : rows[r]) value *= inv;
    for (std::size_t r2 = 0; r2 < rows.size(); ++r2) {
      if (r2 == r || rows[r2][col] == 0) continue;
      const Rat factor = rows[r2][col];
      for (int v = 0; v <= num_vars; ++v)
        rows[r2][v] -= factor * rows[r][v];
    }
    pivot_col[r] = col;
    eliminated[col] = true;
    ++rank;
  }

  EliminationCache cache;
  cache.n = n;
  cache.num_delta_vars = num_vars;
  std::vector<int> reduced_index(num_vars, -1);
  for (int v = 0; v < num_vars; ++v)
    if (!eliminated[v]) {
      reduced_index[v] = static_cast<int>(cache.kept.size());
      cache.kept.push_back(v);
    }
  const int kept_count = static_cast<int>(cache.kept.size());

  cache.expansion.resize(num_vars);
  for (int v = 0; v < num_vars; ++v) {
    AffineForm& form = cache.expansion[v];
    form.coeffs.assign(kept_count, Rat(0));
    if (!eliminated[v]) {
      form.coeffs[reduced_index[v]] = 1;
      continue;
    }
    // Pivot row: v + sum(coeff * kept) = rhs  =>  v = rhs - sum(...).
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (pivot_col[r] != v) continue;
      form.constant = rows[r][num_vars];
      for (int w = 0; w < num_vars; ++w)
        if (w != v && rows[r][w] != 0)
          form.coeffs[reduced_index[w]] -= rows[r][w];
      break;
    }
  }
  return cache;
}

const EliminationCache& elimination_cache(int n) {
  static std::mutex mutex;
  static std::map<int, EliminationCache> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_elimination(n)).first;
  return it->second;
}

// A sparse row over delta variables and t, rewritten over the reduced
// variables (kept deltas then t).
void substitute(const SparseRow& row, const EliminationCache& cache,
                std::vector<Rat>& out, Rat& constant) {
  const int kept_count = static_cast<int>(cache.kept.size());
  std::fill(out.begin(), out.end(), Rat(0));
  constant = 0;
  for (const auto& [var, coeff] : row.terms) {
    if (var == cache.num_delta_vars) {  // t
      out[kept_count] += coeff;
      continue;
    }
    const AffineForm& form = cache.expansion[var];
    for (int w = 0; w < kept_count; ++w)
      if (form.coeffs[w] != 0) out[w] += coeff * form.coeffs[w];
    constant += coeff * form.constant;
  }
}

}  // namespace

GenericityVerdict solve(const FeasibilityProblem& p) {
  const EliminationCache& cache = elimination_cache(p.n);
  const int kept_count = static_cast<int>(cache.kept.size());

  // Reduced program over (kept deltas, t), all nonnegative. Nonnegativity
  // is not a restriction: every feasible point has t >= 0 available (the
  // uniform tensor with t = 0) and all deltas >= t via the positivity rows,
  // so the optimum is unchanged.
  LinearProgram lp;
  lp.num_vars = kept_count + 1;
  lp.objective.assign(lp.num_vars, Rat(0));
  lp.objective[kept_count] = 1;  // maximize t

  std::vector<Rat> coeffs(lp.num_vars);
  Rat constant;
  auto add_rows = [&](const std::vector<SparseRow>& rows) {
    for (const SparseRow& row : rows) {
      substitute(row, cache, coeffs, constant);
      LpRow out;
      out.coeffs = coeffs;
      out.rel = LpRelation::kGe;
      out.rhs = row.rhs - constant;
      lp.rows.push_back(std::move(out));
    }
  };
  add_rows(p.positivity);
  add_rows(p.minimality);

  // The equalities and the normalization are satisfied identically by the
  // substitution; check the structure-dependent assumption that the problem
  // was built against the same compatibility system.
  for (const SparseRow& row : p.equalities) {
    substitute(row, cache, coeffs, constant);
    for (const Rat& c : coeffs)
      if (c != 0) throw InternalDefect("equality row survived elimination");
    if (constant != row.rhs)
      throw InternalDefect("equality row inconsistent with elimination");
  }
  {
    substitute(p.normalization, cache, coeffs, constant);
    for (const Rat& c : coeffs)
      if (c != 0)
        throw InternalDefect("normalization row survived elimination");
    if (constant != p.normalization.rhs)
      throw InternalDefect("normalization inconsistent with elimination");
  }

  const LpSolution sol = maximize(lp);
  if (sol.status != LpStatus::kOptimal)
    throw InternalDefect("margin program must be feasible and bounded");

  GenericityVerdict verdict;
  verdict.margin = sol.objective_value;
  verdict.generic = verdict.margin > 0;
  if (!verdict.generic) return verdict;

  GromovTensor witness(p.n);
  for (int v = 0; v < p.num_delta_vars; ++v) {
    const AffineForm& form = cache.expansion[v];
    Rat value = form.constant;
    for (int w = 0; w < kept_count; ++w)
      if (form.coeffs[w] != 0) value += form.coeffs[w] * sol.x[w];
    witness.at(p.slots[v].node, p.slots[v].pair) = value;
  }

  // Solver postconditions: the witness satisfies every row at margin t*.
  const Rat& t = verdict.margin;
  Rat total = 0;
  for (int v = 0; v < p.num_delta_vars; ++v) {
    const Rat& value = witness.at(p.slots[v].node, p.slots[v].pair);
    if (value < t) throw InternalDefect("witness violates positivity margin");
    total += value;
  }
  if (total != 1) throw InternalDefect("witness violates normalization");
  for (int a = 1; a <= p.n; ++a) {
    const Rat& picked = witness.at(a, p.structure.pick(a));
    for (const NodePair pair : witness.pairs_at(a))
      if (!(pair == p.structure.pick(a)) &&
          witness.at(a, pair) - picked < t)
        throw InternalDefect("witness violates minimality margin");
  }
  if (!verify_gromov_identities(witness).ok)
    throw InternalDefect("witness violates compatibility identities");

  verdict.witness = std::move(witness);
  return verdict;
}

GenericityVerdict decide_generic(const GromovStructure& s) {
  return solve(build_problem(s));
}

DistanceMatrix distances_of_tensor(const GromovTensor& t) {
  const int n = t.size();
  std::vector<Rat> entries(static_cast<std::size_t>(n) * n, Rat(0));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      int k0 = 0;
      for (int k = 1; k <= n && k0 == 0; ++k)
        if (k != i && k != j) k0 = k;
      const Rat d =
          t.at(i, NodePair(j, k0)) + t.at(j, NodePair(i, k0));
      entries[(i - 1) * n + (j - 1)] = d;
      entries[(j - 1) * n + (i - 1)] = d;
    }
  return DistanceMatrix(n, std::move(entries));
}

DistanceMatrix realize_metric(const GromovStructure& s,
                              const GenericityVerdict& verdict) {
  if (!verdict.generic || !verdict.witness)
    throw NotGeneric("structure " + serialize(s) +
                     " has no delta-generic metric");
  const DistanceMatrix raw = distances_of_tensor(*verdict.witness);
  const int n = raw.size();

  // Rescale to the smallest integer-valued metric.
  Int lcm = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Int den = raw.at(i, j).get_den();
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
    }
  Int gcd = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      Rat scaled = raw.at(i, j) * Rat(lcm);
      mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(),
              scaled.get_num().get_mpz_t());
    }
  const Rat factor = gcd == 0 ? Rat(1) : Rat(lcm) / Rat(gcd);
  DistanceMatrix result = raw.scaled(factor);

  if (structure_of_metric(result) != s)
    throw InternalDefect("realized metric does not reproduce its structure");
  return result;
}

DistanceMatrix realize_metric(const GromovStructure& s) {
  return realize_metric(s, decide_generic(s));
}

}  // namespace gromov
