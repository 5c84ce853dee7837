#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gromov/errors.hpp"

namespace gromov {

// Largest point count the compact single-digit token notation can express.
inline constexpr int kMaxPoints = 9;

// Point counts the enumeration/classification pipeline accepts. Structures
// themselves go down to 3 points so that closed-subset restrictions stay
// representable.
inline constexpr int kMinStructurePoints = 3;
inline constexpr int kMinCatalogPoints = 4;
inline constexpr int kMaxCatalogPoints = 8;

// An unordered pair of nodes, stored with lo < hi.
struct NodePair {
  std::uint8_t lo = 0;
  std::uint8_t hi = 0;

  NodePair() = default;
  NodePair(int a, int b)
      : lo(static_cast<std::uint8_t>(a < b ? a : b)),
        hi(static_cast<std::uint8_t>(a < b ? b : a)) {}

  bool contains(int node) const { return lo == node || hi == node; }
  // The element of the pair that is not `node`; pair must contain `node`.
  int other(int node) const { return lo == node ? hi : lo; }

  auto operator<=>(const NodePair&) const = default;
};

// The map node -> unordered pair of other nodes that records, for each point,
// which pair realizes its minimal Gromov product. Immutable after
// construction; all five invariants (one pick per node, elements distinct
// and distinct from the owner, pairs order-normalized) hold by construction.
class GromovStructure {
 public:
  GromovStructure() = default;

  int size() const { return n_; }
  NodePair pick(int node) const { return picks_[node]; }

  // The set of distinct picked pairs, sorted.
  std::vector<NodePair> image() const;

  auto operator<=>(const GromovStructure&) const = default;

 private:
  friend GromovStructure make_structure(
      int n, const std::vector<std::array<int, 3>>& picks);
  friend struct std::hash<GromovStructure>;

  std::uint8_t n_ = 0;
  std::array<NodePair, kMaxPoints + 1> picks_{};  // 1-based; slot 0 unused
};

// A bijection on 1..n. image(a) is the node that a maps to.
class Permutation {
 public:
  Permutation() = default;
  // Validates that `images` (1-based values) is a bijection on 1..n.
  explicit Permutation(const std::vector<int>& images);

  static Permutation identity(int n);

  int size() const { return n_; }
  int image(int node) const { return images_[node]; }

  Permutation inverse() const;
  // (first * second)(x) = first(second(x))
  friend Permutation operator*(const Permutation& first,
                               const Permutation& second);

  auto operator<=>(const Permutation&) const = default;

 private:
  std::uint8_t n_ = 0;
  std::array<std::uint8_t, kMaxPoints + 1> images_{};
};

// Validates and order-normalizes a structure given as (owner, b, c) triples.
// Throws IndexOutOfRange, PairContainsOwner or DuplicateNode, naming the
// offending node.
GromovStructure make_structure(int n,
                               const std::vector<std::array<int, 3>>& picks);

// Relabels: node p(a) picks {p(b_a), p(c_a)}. Throws LengthMismatch.
GromovStructure apply_permutation(const GromovStructure& s,
                                  const Permutation& p);

// Compact text notation: one token "abc" per node a (ascending, b < c),
// joined by commas. "124,213,324,413" is the unique 4-point structure.
std::string serialize(const GromovStructure& s);

// Accepts compact tokens separated by commas and/or whitespace, and the long
// form "a:b,c" (whitespace-separated) for point counts beyond one digit.
// Throws MalformedToken / WrongTokenCount / the make_structure errors.
GromovStructure parse(const std::string& text, int n);

// All permutations of 1..n in lexicographic order. n <= kMaxPoints.
std::vector<Permutation> all_permutations(int n);

}  // namespace gromov

template <>
struct std::hash<gromov::GromovStructure> {
  std::size_t operator()(const gromov::GromovStructure& s) const noexcept {
    // FNV-1a over the fixed-size pick array; unused slots are zeroed.
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint8_t byte) {
      h ^= byte;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint8_t>(s.n_));
    for (const auto& p : s.picks_) {
      mix(p.lo);
      mix(p.hi);
    }
    return h;
  }
};
