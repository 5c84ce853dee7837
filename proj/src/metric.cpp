#include "gromov/metric.hpp"

#include <fstream>
#include <sstream>

#include "gromov/errors.hpp"

namespace gromov {

DistanceMatrix::DistanceMatrix(int n, std::vector<Rat> entries)
    : n_(n), d_(std::move(entries)) {
  if (n_ < 3 || n_ > kMaxPoints) throw UnsupportedN(n_);
  if (d_.size() != static_cast<std::size_t>(n_) * n_)
    throw ValidationError("distance matrix has wrong entry count");
  for (Rat& value : d_) value.canonicalize();  // callers may pass raw p/q
  for (int i = 1; i <= n_; ++i) {
    if (at(i, i) != 0)
      throw ValidationError("distance matrix diagonal entry (" +
                            std::to_string(i) + "," + std::to_string(i) +
                            ") is not zero");
    for (int j = i + 1; j <= n_; ++j) {
      if (at(i, j) != at(j, i))
        throw ValidationError("distance matrix not symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ")");
      if (at(i, j) <= 0)
        throw ValidationError("distance (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is not positive");
    }
  }
}

DistanceMatrix DistanceMatrix::scaled(const Rat& factor) const {
  std::vector<Rat> entries(d_.size());
  for (std::size_t i = 0; i < d_.size(); ++i) entries[i] = d_[i] * factor;
  return DistanceMatrix(n_, std::move(entries));
}

DistanceMatrix DistanceMatrix::relabeled(const Permutation& p) const {
  if (p.size() != n_) throw LengthMismatch(n_, p.size());
  std::vector<Rat> entries(d_.size());
  for (int i = 1; i <= n_; ++i)
    for (int j = 1; j <= n_; ++j)
      entries[(p.image(i) - 1) * n_ + (p.image(j) - 1)] = at(i, j);
  return DistanceMatrix(n_, std::move(entries));
}

GromovTensor::GromovTensor(int n) : n_(n) {
  if (n < 3 || n > kMaxPoints) throw UnsupportedN(n);
  values_.assign(static_cast<std::size_t>(n) * n * (n + 1) / 2, Rat(0));
}

int GromovTensor::index(int i, NodePair jk) const {
  // Dense (node, pair) layout over all C(n,2) global pairs; slots whose pair
  // touches the node are simply unused.
  const int pair_index = (jk.lo - 1) * n_ - (jk.lo * (jk.lo - 1)) / 2 +
                         (jk.hi - jk.lo - 1);
  return (i - 1) * (n_ * (n_ - 1) / 2) + pair_index;
}

std::vector<NodePair> GromovTensor::pairs_at(int i) const {
  std::vector<NodePair> pairs;
  for (int j = 1; j <= n_; ++j) {
    if (j == i) continue;
    for (int k = j + 1; k <= n_; ++k)
      if (k != i) pairs.emplace_back(j, k);
  }
  return pairs;
}

int WeightedGraph::edge_count() const {
  int count = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (has_edge(i, j)) ++count;
  return count;
}

GromovTensor gromov_products(const DistanceMatrix& d) {
  const int n = d.size();
  GromovTensor t(n);
  for (int i = 1; i <= n; ++i)
    for (const NodePair jk : t.pairs_at(i))
      t.at(i, jk) = (d.at(i, jk.lo) + d.at(i, jk.hi) - d.at(jk.lo, jk.hi)) / 2;
  return t;
}

MetricVerdict is_metric(const DistanceMatrix& d) {
  const GromovTensor t = gromov_products(d);
  MetricVerdict v;
  for (int i = 1; i <= d.size(); ++i)
    for (const NodePair jk : t.pairs_at(i))
      if (t.at(i, jk) < 0) {
        v.is_metric = false;
        v.node = i;
        v.pair = jk;
        v.delta = t.at(i, jk);
        return v;
      }
  v.is_metric = true;
  return v;
}

GenericityCheck check_delta_generic(const DistanceMatrix& d) {
  const int n = d.size();
  const GromovTensor t = gromov_products(d);
  GenericityCheck out;
  std::vector<std::array<int, 3>> picks;
  for (int i = 1; i <= n; ++i) {
    std::vector<NodePair> minima;
    Rat best;
    for (const NodePair jk : t.pairs_at(i)) {
      const Rat& v = t.at(i, jk);
      if (minima.empty() || v < best) {
        best = v;
        minima = {jk};
      } else if (v == best) {
        minima.push_back(jk);
      }
    }
    if (minima.size() != 1) {
      out.tied_node = i;
      out.tied_pairs = minima;
      return out;
    }
    picks.push_back({i, minima[0].lo, minima[0].hi});
  }
  out.structure = make_structure(n, picks);
  return out;
}

GromovStructure structure_of_metric(const DistanceMatrix& d) {
  GenericityCheck check = check_delta_generic(d);
  if (!check.structure)
    throw NotDeltaGeneric(check.tied_node, std::move(check.tied_pairs));
  return *check.structure;
}

namespace {

struct Slot {
  int node;
  NodePair pair;
};

// The four-term chains relating products around a pick, phrased as three
// pairwise equalities each. Both chains are algebraic consequences of the
// defining formula, so any tensor that comes from distances satisfies them.
IdentityReport check_quadruple(const GromovTensor& t, int a, int b, int c,
                               int i) {
  const auto dv = [&](int x, int y, int z) { return t.at(x, NodePair(y, z)); };
  const Rat base_a = dv(a, b, i) - dv(a, b, c);
  const Rat base_b = dv(a, c, i) - dv(a, b, c);
  const struct {
    Rat lhs, rhs;
    const char* text;
  } relations[] = {
      {base_a, dv(c, b, i) - dv(c, a, i), "D(a,bi)-D(a,bc) = D(c,bi)-D(c,ai)"},
      {base_a, dv(i, a, c) - dv(i, b, c), "D(a,bi)-D(a,bc) = D(i,ac)-D(i,bc)"},
      {base_a, dv(b, a, c) - dv(b, a, i), "D(a,bi)-D(a,bc) = D(b,ac)-D(b,ai)"},
      {base_b, dv(b, c, i) - dv(b, a, i), "D(a,ci)-D(a,bc) = D(b,ci)-D(b,ai)"},
      {base_b, dv(i, a, b) - dv(i, b, c), "D(a,ci)-D(a,bc) = D(i,ab)-D(i,bc)"},
      {base_b, dv(c, a, b) - dv(c, a, i), "D(a,ci)-D(a,bc) = D(c,ab)-D(c,ai)"},
  };
  for (const auto& rel : relations) {
    if (rel.lhs != rel.rhs) {
      IdentityReport report;
      report.ok = false;
      report.violation = IdentityViolation{a, b, c, i, rel.text, rel.lhs,
                                           rel.rhs};
      return report;
    }
  }
  return {};
}

}  // namespace

IdentityReport verify_gromov_identities(const GromovTensor& t) {
  const int n = t.size();
  for (int a = 1; a <= n; ++a)
    for (int b = 1; b <= n; ++b)
      for (int c = 1; c <= n; ++c)
        for (int i = 1; i <= n; ++i) {
          if (a == b || a == c || a == i || b == c || b == i || c == i)
            continue;
          IdentityReport report = check_quadruple(t, a, b, c, i);
          if (!report.ok) return report;
        }
  return {};
}

WeightedGraph pendant_free_reduction(const DistanceMatrix& d) {
  const GromovStructure s = structure_of_metric(d);
  const int n = d.size();
  const GromovTensor t = gromov_products(d);

  std::vector<Rat> min_product(n + 1);
  for (int i = 1; i <= n; ++i) min_product[i] = t.at(i, s.pick(i));

  WeightedGraph g;
  g.n = n;
  g.present.assign(static_cast<std::size_t>(n) * n, 0);
  g.weight.assign(static_cast<std::size_t>(n) * n, Rat(0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      g.present[(i - 1) * n + (j - 1)] = 1;
      g.weight[(i - 1) * n + (j - 1)] =
          d.at(i, j) - min_product[i] - min_product[j];
    }
  for (const NodePair e : s.image()) {
    g.present[(e.lo - 1) * n + (e.hi - 1)] = 0;
    g.present[(e.hi - 1) * n + (e.lo - 1)] = 0;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      if (g.has_edge(i, j) && g.weight_of(i, j) < 0)
        throw InternalDefect("pendant-free reduction produced negative weight");
  return g;
}

namespace {

[[noreturn]] void fail_at(int line, int column, const std::string& what) {
  throw IoError("distance matrix, line " + std::to_string(line) + ", entry " +
                std::to_string(column) + ": " + what);
}

}  // namespace

DistanceMatrix read_distance_matrix(std::istream& in) {
  std::string line;
  int line_no = 0;
  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    try {
      n = std::stoi(tok);
    } catch (...) {
      fail_at(line_no, 1, "expected point count, got \"" + tok + "\"");
    }
    break;
  }
  if (n < 3 || n > kMaxPoints)
    throw IoError("distance matrix: point count " + std::to_string(n) +
                  " is outside the supported range");

  std::vector<Rat> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  int rows = 0;
  while (rows < n && std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    int col = 0;
    while (ls >> tok) {
      ++col;
      if (col > n) fail_at(line_no, col, "row has more than n entries");
      try {
        entries.push_back(parse_rat(tok));
      } catch (const NumberFormatError&) {
        fail_at(line_no, col, "cannot parse \"" + tok + "\"");
      }
    }
    if (col == 0) continue;  // blank line between rows
    if (col < n) fail_at(line_no, col, "row has fewer than n entries");
    ++rows;
  }
  if (rows < n)
    throw IoError("distance matrix: expected " + std::to_string(n) +
                  " rows, got " + std::to_string(rows));
  try {
    return DistanceMatrix(n, std::move(entries));
  } catch (const ValidationError& e) {
    throw IoError(std::string("distance matrix: ") + e.what());
  }
}

DistanceMatrix read_distance_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_distance_matrix(in);
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& d) {
  out << d.size() << "\n";
  for (int i = 1; i <= d.size(); ++i) {
    for (int j = 1; j <= d.size(); ++j) {
      if (j > 1) out << ' ';
      out << rat_to_string(d.at(i, j));
    }
    out << "\n";
  }
}

void write_distance_matrix_file(const std::string& path,
                                const DistanceMatrix& d) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_distance_matrix(out, d);
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace gromov
