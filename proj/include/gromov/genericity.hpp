#pragma once

#include <optional>
#include <vector>

#include "gromov/metric.hpp"
#include "gromov/simplex.hpp"
#include "gromov/structure.hpp"

namespace gromov {

// One Gromov-product unknown.
struct DeltaSlot {
  int node = 0;
  NodePair pair;
};

struct SparseRow {
  std::vector<std::pair<int, Rat>> terms;  // (variable, coefficient)
  Rat rhs;
};

// The margin-maximization feasibility problem for a structure: one unknown
// per Gromov-product slot plus a margin t, the pairwise compatibility
// equalities that make the products come from distances, positivity and
// strict-minimality rows with margin t, and a sum normalization. Variable
// indices 0..num_delta_vars-1 are the slots, num_delta_vars is t.
struct FeasibilityProblem {
  int n = 0;
  GromovStructure structure;
  std::vector<DeltaSlot> slots;       // variable index -> slot
  int num_delta_vars = 0;

  std::vector<SparseRow> equalities;  // rhs 0
  std::vector<SparseRow> positivity;  // delta_v - t >= 0
  std::vector<SparseRow> minimality;  // delta(a,p) - delta(a,pick(a)) - t >= 0
  SparseRow normalization;            // sum of all deltas = 1

  int slot_index(int node, NodePair pair) const;
};

struct GenericityVerdict {
  bool generic = false;
  Rat margin;                           // optimal t*, always >= 0
  std::optional<GromovTensor> witness;  // present iff generic
};

// Requires is_allowable(s); throws NotAllowable otherwise.
FeasibilityProblem build_problem(const GromovStructure& s);

// Exact maximization of the margin. Generic iff the optimum is strictly
// positive. Deterministic; the witness is checked against all problem
// invariants before being returned.
GenericityVerdict solve(const FeasibilityProblem& p);

GenericityVerdict decide_generic(const GromovStructure& s);

// Smallest integer-valued metric realizing s, from the solver witness.
// Throws NotGeneric when the structure has no delta-generic metric.
DistanceMatrix realize_metric(const GromovStructure& s);
DistanceMatrix realize_metric(const GromovStructure& s,
                              const GenericityVerdict& verdict);

// Distances reconstructed from any identity-satisfying tensor.
DistanceMatrix distances_of_tensor(const GromovTensor& t);

}  // namespace gromov
