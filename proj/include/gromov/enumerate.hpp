#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gromov/structure.hpp"

namespace gromov {

// One "this pick is forbidden at that node" consequence of a fixed pick.
struct Forbid {
  int node = 0;
  NodePair pair;

  auto operator<=>(const Forbid&) const = default;
};

// Forbidden picks per node, with multiplicity so consequences of individual
// picks can be added and retracted independently.
class ExclusionSet {
 public:
  explicit ExclusionSet(int n);

  void add(const Forbid& f);
  void remove(const Forbid& f);
  bool forbids(int node, NodePair pair) const;
  std::vector<Forbid> entries() const;

 private:
  int index(int node, NodePair pair) const;

  int n_;
  std::vector<std::uint16_t> counts_;
};

// The consequences of "node a picks {b,c} minimally": b may no longer pick
// any pair containing c, c none containing b, and every other node loses
// {a,b} and {a,c}. Sorted.
std::vector<Forbid> exclusions_of(int a, NodePair pair, int n);

struct AllowabilityVerdict {
  bool allowable = true;
  // On failure, one violated instance: the pick that generated the rule and
  // the pick that broke it.
  int source_node = 0;
  NodePair source_pair;
  int violating_node = 0;
  NodePair violating_pair;

  std::string description() const;
};

// True iff no pick lies in the union of exclusions generated by the others.
AllowabilityVerdict is_allowable(const GromovStructure& s);

enum class EnumerationMode {
  kFull,         // depth-first over all pick assignments with pruning
  kChainSeeded,  // longest-chain canonical prefixes; cross-check only
};

// Streams every allowable structure on n points exactly once (kFull), or a
// superset-by-class representative stream (kChainSeeded, which emits each
// allowable structure whose longest mutual chain is laid out on an initial
// segment; every equivalence class is still hit). workers > 1 splits the
// search forest at the first two nodes' choices.
void enumerate_allowable(int n, EnumerationMode mode,
                         const std::function<void(const GromovStructure&)>& sink,
                         int workers = 1);

// Convenience collector.
std::vector<GromovStructure> collect_allowable(
    int n, EnumerationMode mode = EnumerationMode::kFull, int workers = 1);

// Total size of the raw search space, C(n-1,2)^n.
std::int64_t raw_candidate_count(int n);

}  // namespace gromov
