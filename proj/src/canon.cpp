#include "gromov/canon.hpp"

#include <algorithm>

#include "gromov/errors.hpp"

namespace gromov {

std::string InvariantKey::to_string() const {
  std::string out = "n=" + std::to_string(n) + " type=" + type_label +
                    " roles=" + std::to_string(roles.isolated) + "/" +
                    std::to_string(roles.end) + "/" +
                    std::to_string(roles.interior) +
                    " removed=" + std::to_string(removed_edges) +
                    " rank=" + std::to_string(rank) + " tr=";
  for (std::size_t i = 0; i < trace_powers.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(trace_powers[i]);
  }
  out += irreducible ? " irreducible" : " reducible";
  return out;
}

InvariantKey invariant_key(const InvariantVector& inv) {
  return InvariantKey{inv.n,    inv.type_label,   inv.roles,
                      inv.removed_edges, inv.rank, inv.trace_powers,
                      inv.irreducible};
}

InvariantKey invariant_key(const GromovStructure& s) {
  return invariant_key(invariants(s));
}

namespace {

// Backtracking minimization of the serialized token sequence over all
// relabelings. Labels are assigned in order 1..n; at each depth the best
// possible completion of the visible prefix is compared against the best
// full sequence found so far, and branches that can no longer win are cut.
class CanonSearch {
 public:
  explicit CanonSearch(const GromovStructure& s) : s_(s), n_(s.size()) {}

  CanonicalForm run() {
    descend(0);
    std::vector<std::array<int, 3>> picks;
    for (int i = 1; i <= n_; ++i)
      picks.push_back({i, best_seq_[2 * (i - 1)], best_seq_[2 * (i - 1) + 1]});
    CanonicalForm out;
    out.structure = make_structure(n_, picks);
    out.text = serialize(out.structure);
    std::vector<int> images(n_);
    for (int o = 1; o <= n_; ++o) images[o - 1] = best_old_to_new_[o];
    out.witness = Permutation(images);
    return out;
  }

 private:
  // Best-case token of owner slot `i` (1-based) given the current partial
  // assignment of `depth` labels.
  std::pair<int, int> optimistic_token(int i, int depth) const {
    const NodePair p = s_.pick(new_to_old_[i]);
    const int vb = old_to_new_[p.lo];
    const int vc = old_to_new_[p.hi];
    if (vb && vc) return std::minmax(vb, vc);
    if (vb) return {vb, depth + 1};
    if (vc) return {vc, depth + 1};
    return {depth + 1, depth + 2};
  }

  // -1: prefix can still beat or equal best; +1: prefix already lost.
  int compare_prefix(int depth) const {
    for (int i = 1; i <= depth; ++i) {
      const auto [lo, hi] = optimistic_token(i, depth);
      const int bl = best_seq_[2 * (i - 1)];
      const int bh = best_seq_[2 * (i - 1) + 1];
      if (lo != bl) return lo < bl ? -1 : +1;
      if (hi != bh) return hi < bh ? -1 : +1;
    }
    return -1;
  }

  void descend(int depth) {
    if (depth == n_) {
      std::array<int, 2 * kMaxPoints> seq{};
      for (int i = 1; i <= n_; ++i) {
        const auto [lo, hi] = optimistic_token(i, depth);  // exact at a leaf
        seq[2 * (i - 1)] = lo;
        seq[2 * (i - 1) + 1] = hi;
      }
      const bool better =
          !have_best_ ||
          std::lexicographical_compare(seq.begin(), seq.begin() + 2 * n_,
                                       best_seq_.begin(),
                                       best_seq_.begin() + 2 * n_);
      if (better) {
        have_best_ = true;
        best_seq_ = seq;
        best_old_to_new_ = old_to_new_;
      }
      return;
    }

    // Candidates for the next label, most promising first.
    std::array<std::pair<std::pair<int, int>, int>, kMaxPoints> order;
    int count = 0;
    for (int o = 1; o <= n_; ++o) {
      if (old_to_new_[o]) continue;
      new_to_old_[depth + 1] = o;
      order[count++] = {optimistic_token(depth + 1, depth), o};
    }
    std::sort(order.begin(), order.begin() + count);

    for (int idx = 0; idx < count; ++idx) {
      const int o = order[idx].second;
      new_to_old_[depth + 1] = o;
      old_to_new_[o] = depth + 1;
      if (!have_best_ || compare_prefix(depth + 1) < 0) descend(depth + 1);
      old_to_new_[o] = 0;
    }
  }

  const GromovStructure& s_;
  int n_;
  std::array<int, kMaxPoints + 1> new_to_old_{};
  std::array<int, kMaxPoints + 1> old_to_new_{};
  bool have_best_ = false;
  std::array<int, 2 * kMaxPoints> best_seq_{};
  std::array<int, kMaxPoints + 1> best_old_to_new_{};
};

}  // namespace

CanonicalForm canonical_form(const GromovStructure& s) {
  return CanonSearch(s).run();
}

GromovStructure canonical_structure(const GromovStructure& s) {
  return CanonSearch(s).run().structure;
}

bool equivalent(const GromovStructure& a, const GromovStructure& b) {
  if (a.size() != b.size()) throw SizeMismatch(a.size(), b.size());
  if (invariant_key(a) != invariant_key(b)) return false;
  return canonical_structure(a) == canonical_structure(b);
}

}  // namespace gromov
