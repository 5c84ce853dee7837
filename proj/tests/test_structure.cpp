#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "gromov/structure.hpp"

using namespace gromov;

namespace {

GromovStructure x4() { return parse("124,213,324,413", 4); }

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

}  // namespace

TEST_CASE("the unique 4-point structure builds and serializes") {
  const GromovStructure s =
      make_structure(4, {{1, 2, 4}, {2, 1, 3}, {3, 2, 4}, {4, 1, 3}});
  CHECK(serialize(s) == "124,213,324,413");
  CHECK(s.pick(1) == NodePair(4, 2));  // order-normalized
  CHECK(s.pick(1).lo == 2);
  CHECK(s.image().size() == 2);
}

TEST_CASE("pick containing its owner is rejected") {
  try {
    make_structure(4, {{1, 1, 2}, {2, 1, 3}, {3, 2, 4}, {4, 1, 3}});
    FAIL("expected PairContainsOwner");
  } catch (const PairContainsOwner& e) {
    CHECK(e.node == 1);
  }
}

TEST_CASE("owner appearing twice is rejected with the node named") {
  try {
    make_structure(4, {{1, 2, 4}, {1, 2, 3}, {3, 2, 4}, {4, 1, 3}});
    FAIL("expected DuplicateNode");
  } catch (const DuplicateNode& e) {
    CHECK(e.node == 1);
  }
}

TEST_CASE("out-of-range indices are rejected") {
  CHECK_THROWS_AS(
      make_structure(4, {{1, 2, 5}, {2, 1, 3}, {3, 2, 4}, {4, 1, 3}}),
      IndexOutOfRange);
}

TEST_CASE("the five-point A-class structure is valid") {
  const GromovStructure s = make_structure(
      5, {{1, 2, 5}, {2, 1, 3}, {3, 2, 4}, {4, 3, 5}, {5, 1, 4}});
  CHECK(serialize(s) == "125,213,324,435,514");
  CHECK(s.image().size() == 5);
}

TEST_CASE("parse accepts commas, whitespace and the long form") {
  CHECK(parse("127 213 324 435 546 657 716", 7) ==
        parse("127,213,324,435,546,657,716", 7));
  CHECK(parse("1:2,4 2:1,3 3:2,4 4:1,3", 4) == x4());
  CHECK_THROWS_AS(parse("124,213", 4), WrongTokenCount);
  CHECK_THROWS_AS(parse("12x,213,324,413", 4), MalformedToken);
  CHECK_THROWS_AS(parse("1244,213,324,413", 4), MalformedToken);
}

TEST_CASE("serialize then parse is the identity") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 200; ++round) {
    const int n = 4 + static_cast<int>(rng() % 5);
    const GromovStructure s = random_structure(n, rng);
    CHECK(parse(serialize(s), n) == s);
  }
}

TEST_CASE("identity permutation fixes every structure") {
  const GromovStructure s = x4();
  CHECK(apply_permutation(s, Permutation::identity(4)) == s);
}

TEST_CASE("the 4-rotation fixes the 4-point structure") {
  // images: 1->2, 2->3, 3->4, 4->1
  const Permutation rot(std::vector<int>{2, 3, 4, 1});
  CHECK(apply_permutation(x4(), rot) == x4());
}

TEST_CASE("orbit of the 4-point structure under all 24 permutations") {
  std::set<std::string> orbit;
  for (const Permutation& p : all_permutations(4))
    orbit.insert(serialize(apply_permutation(x4(), p)));
  // The mutual 4-cycle has 8 automorphisms, so the orbit has 24/8 = 3
  // members.
  CHECK(orbit.size() == 3);
  CHECK(orbit.count("124,213,324,413") == 1);
}

TEST_CASE("permutations act as a group action") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const GromovStructure s = random_structure(n, rng);
    const Permutation p = random_permutation(n, rng);
    const Permutation q = random_permutation(n, rng);
    CHECK(apply_permutation(apply_permutation(s, p), p.inverse()) == s);
    CHECK(apply_permutation(apply_permutation(s, p), q) ==
          apply_permutation(s, q * p));
  }
}

TEST_CASE("permutation length must match") {
  CHECK_THROWS_AS(apply_permutation(x4(), Permutation::identity(5)),
                  LengthMismatch);
}

TEST_CASE("serialized tokens always order the pair ascending") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 100; ++round) {
    const GromovStructure s = random_structure(6, rng);
    const Permutation p = random_permutation(6, rng);
    const std::string text = serialize(apply_permutation(s, p));
    for (std::size_t i = 0; i + 2 < text.size(); i += 4)
      CHECK(text[i + 1] < text[i + 2]);
  }
}
