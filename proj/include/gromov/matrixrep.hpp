#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gromov/structure.hpp"

namespace gromov {

// The 0/1 pick-indicator matrix of a structure: g(i,j) = 1 iff j is in
// picks(i). Every row sums to 2. h is the symmetric part (mutual picks).
struct StructureMatrix {
  int n = 0;
  std::vector<std::int64_t> g;  // row-major n*n
  std::vector<std::int64_t> h;

  std::int64_t gat(int i, int j) const { return g[(i - 1) * n + (j - 1)]; }
  std::int64_t hat(int i, int j) const { return h[(i - 1) * n + (j - 1)]; }
};

enum class ComponentKind : std::uint8_t { kChain, kCycle };

// One component of the mutual-selection graph: a simple path (chain) or a
// simple cycle. A chain of length 1 is an isolated point.
struct ChainComponent {
  ComponentKind kind = ComponentKind::kChain;
  std::vector<int> nodes;  // path order, or cycle order starting at min node

  int size() const { return static_cast<int>(nodes.size()); }
};

struct RoleCounts {
  int isolated = 0;
  int end = 0;
  int interior = 0;

  auto operator<=>(const RoleCounts&) const = default;
};

struct ChainDecomposition {
  int n = 0;
  std::vector<ChainComponent> components;  // size desc, cycles first at ties
  RoleCounts roles;
  std::string type_label;  // e.g. "5+2 (Chain)", "4+1+1 (Cycle)", "3+3"
};

// Permutation-invariant fingerprint of a structure.
struct InvariantVector {
  int n = 0;
  std::string type_label;
  RoleCounts roles;
  int removed_edges = 0;            // distinct picked pairs
  int rank = 0;                     // rank of g over the rationals
  std::vector<std::int64_t> trace_powers;  // tr(g^k) for k = 2..n
  bool irreducible = false;

  auto operator<=>(const InvariantVector&) const = default;
};

struct IrreducibilityResult {
  bool irreducible = false;
  // Columns of sum_{i=0..n} g^i with no zero entry; equals n iff irreducible.
  int largest_block = 0;
};

// A proper closed subset together with the structure induced on it.
struct ClosedSubset {
  std::vector<int> nodes;       // ascending original labels
  std::vector<int> index_map;   // index_map[k] = original label of new node k+1
  GromovStructure restriction;  // on |nodes| points, labels compacted
};

StructureMatrix structure_matrix(const GromovStructure& s);

ChainDecomposition chain_decomposition(const GromovStructure& s);

// Label convention: component sizes descending joined by "+". A structure
// containing a cycle gets " (Cycle)"; an all-chain structure whose largest
// component has 4 or more points gets " (Chain)" since such a component could
// otherwise be a cycle. Two or more cycles (possible only for n >= 8) mark
// each cycle size with a "c" suffix.
std::string type_label(const std::vector<ChainComponent>& components);

// Matrix irreducibility via the power-sum test, cross-checked internally
// against strong connectivity of the pick digraph.
IrreducibilityResult is_irreducible(const StructureMatrix& m);

InvariantVector invariants(const StructureMatrix& m, const GromovStructure& s);
InvariantVector invariants(const GromovStructure& s);

// All proper nonempty subsets T with picks(a) inside T for every a in T,
// each with the compacted restriction. Empty iff the structure is
// irreducible. Sorted by (size, nodes).
std::vector<ClosedSubset> closed_subsets(const GromovStructure& s);

}  // namespace gromov
