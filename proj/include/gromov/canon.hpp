#pragma once

#include <string>

#include "gromov/matrixrep.hpp"
#include "gromov/structure.hpp"

namespace gromov {

// Hashable permutation-invariant key; equal for equivalent structures,
// allowed to collide across inequivalent ones.
struct InvariantKey {
  int n = 0;
  std::string type_label;
  RoleCounts roles;
  int removed_edges = 0;
  int rank = 0;
  std::vector<std::int64_t> trace_powers;
  bool irreducible = false;

  auto operator<=>(const InvariantKey&) const = default;
  std::string to_string() const;
};

struct CanonicalForm {
  GromovStructure structure;  // the orbit-minimal relabeling
  std::string text;           // its serialization
  Permutation witness;        // a permutation carrying the input onto it
};

InvariantKey invariant_key(const GromovStructure& s);
InvariantKey invariant_key(const InvariantVector& inv);

// Lexicographically minimal serialization over the full relabeling orbit,
// found by backtracking over label assignments with prefix pruning. Always
// equals the brute-force minimum over all n! permutations.
CanonicalForm canonical_form(const GromovStructure& s);

// Cheap variant when only the canonical structure is needed.
GromovStructure canonical_structure(const GromovStructure& s);

// True iff the structures are in the same relabeling orbit. Throws
// SizeMismatch on different point counts.
bool equivalent(const GromovStructure& a, const GromovStructure& b);

}  // namespace gromov
