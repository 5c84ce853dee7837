#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "gromov/canon.hpp"

using namespace gromov;

namespace {

GromovStructure random_structure(int n, std::mt19937_64& rng) {
  std::vector<std::array<int, 3>> picks;
  for (int a = 1; a <= n; ++a) {
    int b = 0, c = 0;
    do {
      b = static_cast<int>(rng() % n) + 1;
      c = static_cast<int>(rng() % n) + 1;
    } while (b == a || c == a || b == c);
    picks.push_back({a, b, c});
  }
  return make_structure(n, picks);
}

Permutation random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> images(n);
  for (int i = 0; i < n; ++i) images[i] = i + 1;
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(images);
}

std::string brute_force_minimum(const GromovStructure& s) {
  std::string best;
  for (const Permutation& p : all_permutations(s.size())) {
    std::string text = serialize(apply_permutation(s, p));
    if (best.empty() || text < best) best = std::move(text);
  }
  return best;
}

}  // namespace

TEST_CASE("canonical form of the 4-point structure, against brute force") {
  const GromovStructure s = parse("124,213,324,413", 4);
  const CanonicalForm canon = canonical_form(s);
  CHECK(canon.text == brute_force_minimum(s));
  CHECK(canon.text == "123,214,314,423");
  // The witness permutation actually carries s onto the canonical form.
  CHECK(apply_permutation(s, canon.witness) == canon.structure);
  CHECK(serialize(canon.structure) == canon.text);
}

TEST_CASE("pruned search equals the exhaustive minimum on random structures") {
  std::mt19937_64 rng(41);
  for (int round = 0; round < 50; ++round) {
    const GromovStructure s = random_structure(6, rng);
    CHECK(canonical_form(s).text == brute_force_minimum(s));
  }
}

TEST_CASE("canonical form is constant on orbits") {
  std::mt19937_64 rng(43);
  for (int round = 0; round < 100; ++round) {
    const int n = 6 + static_cast<int>(rng() % 2);
    const GromovStructure s = random_structure(n, rng);
    const Permutation p = random_permutation(n, rng);
    CHECK(canonical_form(apply_permutation(s, p)).text ==
          canonical_form(s).text);
  }
}

TEST_CASE("canonicalizing a canonical form is a fixed point") {
  std::mt19937_64 rng(47);
  for (int round = 0; round < 50; ++round) {
    const GromovStructure canon =
        canonical_structure(random_structure(7, rng));
    CHECK(canonical_structure(canon) == canon);
  }
}

TEST_CASE("the three five-point classes have distinct canonical forms") {
  std::set<std::string> forms{
      canonical_form(parse("125,213,324,435,514", 5)).text,
      canonical_form(parse("124,213,324,435,524", 5)).text,
      canonical_form(parse("124,213,324,413,513", 5)).text};
  CHECK(forms.size() == 3);
}

TEST_CASE("equivalence matches brute-force orbit membership at small sizes") {
  std::mt19937_64 rng(53);
  for (int round = 0; round < 40; ++round) {
    const int n = 4 + static_cast<int>(rng() % 2);
    const GromovStructure a = random_structure(n, rng);
    const GromovStructure b = random_structure(n, rng);
    bool in_orbit = false;
    for (const Permutation& p : all_permutations(n))
      if (apply_permutation(a, p) == b) in_orbit = true;
    CHECK(equivalent(a, b) == in_orbit);
  }
}

TEST_CASE("equivalent structures never differ in invariant key") {
  std::mt19937_64 rng(59);
  for (int round = 0; round < 60; ++round) {
    const int n = 5 + static_cast<int>(rng() % 3);
    const GromovStructure s = random_structure(n, rng);
    const Permutation p = random_permutation(n, rng);
    CHECK(invariant_key(s) == invariant_key(apply_permutation(s, p)));
  }
}

TEST_CASE("keys can separate: the A and B five-point classes") {
  const InvariantKey a = invariant_key(parse("125,213,324,435,514", 5));
  const InvariantKey b = invariant_key(parse("124,213,324,435,524", 5));
  CHECK(a != b);
  CHECK(a.removed_edges == 5);
  CHECK(b.removed_edges == 3);
}

TEST_CASE("equivalence testing across classes and within orbits") {
  const GromovStructure b = parse("124,213,324,435,524", 5);
  const GromovStructure c = parse("124,213,324,413,513", 5);
  CHECK_FALSE(equivalent(b, c));
  std::mt19937_64 rng(61);
  const Permutation p = random_permutation(5, rng);
  CHECK(equivalent(b, apply_permutation(b, p)));
  CHECK_THROWS_AS(equivalent(b, parse("124,213,324,413", 4)), SizeMismatch);
}

TEST_CASE("two distinct seven-point census rows are inequivalent") {
  const GromovStructure chain1 = parse("124,213,324,435,546,657,716", 7);
  const GromovStructure chain2 = parse("125,213,324,435,546,657,716", 7);
  CHECK_FALSE(equivalent(chain1, chain2));
}
