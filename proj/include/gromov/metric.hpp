#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gromov/rational.hpp"
#include "gromov/structure.hpp"

namespace gromov {

// Symmetric exact-rational distance data with zero diagonal and positive
// off-diagonal entries. Validated on construction.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(int n, std::vector<Rat> entries);  // row-major n*n

  int size() const { return n_; }
  const Rat& at(int i, int j) const { return d_[(i - 1) * n_ + (j - 1)]; }

  DistanceMatrix scaled(const Rat& factor) const;
  DistanceMatrix relabeled(const Permutation& p) const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<Rat> d_;
};

// All Gromov products of an n-point space: delta(i, {j,k}) for every node i
// and unordered pair {j,k} of other nodes. n(n-1)(n-2)/2 values.
class GromovTensor {
 public:
  GromovTensor() = default;
  explicit GromovTensor(int n);

  int size() const { return n_; }
  int value_count() const { return n_ * (n_ - 1) * (n_ - 2) / 2; }

  const Rat& at(int i, NodePair jk) const { return values_[index(i, jk)]; }
  Rat& at(int i, NodePair jk) { return values_[index(i, jk)]; }

  // All pairs {j,k} with j,k != i, ascending.
  std::vector<NodePair> pairs_at(int i) const;

 private:
  int index(int i, NodePair jk) const;

  int n_ = 0;
  std::vector<Rat> values_;
};

// A graph on 1..n with exact-rational weights on its present edges.
struct WeightedGraph {
  int n = 0;
  std::vector<std::uint8_t> present;  // indexed like a row-major matrix
  std::vector<Rat> weight;

  bool has_edge(int i, int j) const { return present[(i - 1) * n + (j - 1)]; }
  const Rat& weight_of(int i, int j) const {
    return weight[(i - 1) * n + (j - 1)];
  }
  int edge_count() const;
};

struct MetricVerdict {
  bool is_metric = false;
  // On failure: the triple (node; pair) with negative Gromov product.
  int node = 0;
  NodePair pair;
  Rat delta;
};

struct IdentityViolation {
  int a = 0, b = 0, c = 0, i = 0;
  std::string relation;  // the equality that failed, rendered as text
  Rat lhs, rhs;
};

struct IdentityReport {
  bool ok = true;
  std::optional<IdentityViolation> violation;
};

struct GenericityCheck {
  std::optional<GromovStructure> structure;  // set iff delta-generic
  // On ties: the node with a non-unique minimum and all minimizing pairs.
  int tied_node = 0;
  std::vector<NodePair> tied_pairs;
};

// delta(i,{j,k}) = (d_ij + d_ik - d_jk) / 2, exactly.
GromovTensor gromov_products(const DistanceMatrix& d);

// True iff every Gromov product is >= 0 (equivalent to all triangle
// inequalities).
MetricVerdict is_metric(const DistanceMatrix& d);

// The minimal-pair map, when every node has a unique minimum.
GenericityCheck check_delta_generic(const DistanceMatrix& d);

struct NotDeltaGeneric : Error {
  int node;
  std::vector<NodePair> tied;
  NotDeltaGeneric(int node_, std::vector<NodePair> tied_)
      : Error("metric is not delta-generic: minimum at node " +
              std::to_string(node_) + " attained by " +
              std::to_string(tied_.size()) + " pairs"),
        node(node_),
        tied(std::move(tied_)) {}
};

// Throwing form of check_delta_generic.
GromovStructure structure_of_metric(const DistanceMatrix& d);

// Exhaustive check of the four-term difference identities relating products
// at different nodes; holds for any tensor built from a distance matrix.
IdentityReport verify_gromov_identities(const GromovTensor& t);

// One-shot reduction: every edge {i,j} shrinks by the minimal products of
// its endpoints, and each picked pair's edge is deleted. All removals and
// offsets are computed from the original metric.
WeightedGraph pendant_free_reduction(const DistanceMatrix& d);

// Distance-matrix file: first line n, then n rows of n whitespace-separated
// rationals ("3/2") or decimals. Strict shape validation with line/column
// positions in error messages.
DistanceMatrix read_distance_matrix(std::istream& in);
DistanceMatrix read_distance_matrix_file(const std::string& path);
void write_distance_matrix(std::ostream& out, const DistanceMatrix& d);
void write_distance_matrix_file(const std::string& path,
                                const DistanceMatrix& d);

}  // namespace gromov
