#include "doctest.h"

#include <random>
#include <sstream>

#include "gromov/metric.hpp"

using namespace gromov;

namespace {

DistanceMatrix from_upper(int n, const std::vector<Rat>& upper) {
  std::vector<Rat> entries(static_cast<std::size_t>(n) * n, Rat(0));
  std::size_t k = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      entries[(i - 1) * n + (j - 1)] = upper[k];
      entries[(j - 1) * n + (i - 1)] = upper[k];
      ++k;
    }
  return DistanceMatrix(n, entries);
}

// Entries in [1, 2) always satisfy every triangle inequality strictly.
DistanceMatrix random_metric(int n, std::mt19937_64& rng) {
  std::vector<Rat> upper;
  for (int i = 0; i < n * (n - 1) / 2; ++i)
    upper.push_back(Rat(1) + make_rat(static_cast<long>(rng() % 997), 1000));
  return from_upper(n, upper);
}

Permutation random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> images(n);
  for (int i = 0; i < n; ++i) images[i] = i + 1;
  std::shuffle(images.begin(), images.end(), rng);
  return Permutation(images);
}

// d(1,2)=5 d(1,3)=6 d(1,4)=9 d(2,3)=10 d(2,4)=11 d(3,4)=7: a delta-generic
// 4-point metric whose structure is the mutual 4-cycle 2-1-3-4.
DistanceMatrix generic4() {
  return from_upper(4, {Rat(5), Rat(6), Rat(9), Rat(10), Rat(11), Rat(7)});
}

}  // namespace

TEST_CASE("products of a small 3-point metric") {
  const DistanceMatrix d = from_upper(3, {Rat(1), Rat(2), Rat(1)});
  const GromovTensor t = gromov_products(d);
  CHECK(t.value_count() == 3);
  CHECK(t.at(1, NodePair(2, 3)) == 1);
  CHECK(t.at(2, NodePair(1, 3)) == 0);
  CHECK(t.at(3, NodePair(1, 2)) == 1);
}

TEST_CASE("equilateral products are all one half") {
  const DistanceMatrix d =
      from_upper(4, std::vector<Rat>(6, Rat(1)));
  const GromovTensor t = gromov_products(d);
  for (int i = 1; i <= 4; ++i)
    for (const NodePair p : t.pairs_at(i)) CHECK(t.at(i, p) == Rat(1, 2));
}

TEST_CASE("tensor size formula") {
  std::mt19937_64 rng(1);
  for (int n = 4; n <= 8; ++n) {
    const GromovTensor t = gromov_products(random_metric(n, rng));
    CHECK(t.value_count() == n * (n - 1) * (n - 2) / 2);
    int slots = 0;
    for (int i = 1; i <= n; ++i) slots += static_cast<int>(t.pairs_at(i).size());
    CHECK(slots == t.value_count());
  }
}

TEST_CASE("a broken triangle is rejected with the violating triple") {
  const DistanceMatrix d = from_upper(3, {Rat(1), Rat(1), Rat(3)});
  const MetricVerdict v = is_metric(d);
  CHECK_FALSE(v.is_metric);
  CHECK(v.node == 1);
  CHECK(v.pair == NodePair(2, 3));
  CHECK(v.delta == Rat(-1, 2));
}

TEST_CASE("line metrics satisfy the triangle inequalities") {
  // Points at 0, 1, 3, 7 on the real line.
  const std::vector<long> xs{0, 1, 3, 7};
  std::vector<Rat> upper;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      upper.push_back(Rat(xs[j] - xs[i]));
  CHECK(is_metric(from_upper(4, upper)).is_metric);
}

TEST_CASE("the fully symmetric metric has tied minima everywhere") {
  const DistanceMatrix d = from_upper(4, std::vector<Rat>(6, Rat(1)));
  const GenericityCheck check = check_delta_generic(d);
  CHECK_FALSE(check.structure.has_value());
  CHECK(check.tied_node == 1);
  CHECK(check.tied_pairs.size() == 3);
  CHECK_THROWS_AS(structure_of_metric(d), NotDeltaGeneric);
}

TEST_CASE("structure of a concrete delta-generic metric") {
  const GromovStructure s = structure_of_metric(generic4());
  CHECK(serialize(s) == "123,214,314,423");
}

TEST_CASE("scaling never changes the structure") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const DistanceMatrix d = random_metric(n, rng);
    const GenericityCheck check = check_delta_generic(d);
    if (!check.structure) continue;
    const Rat lambda = make_rat(static_cast<long>(1 + rng() % 60), 7);
    CHECK(structure_of_metric(d.scaled(lambda)) == *check.structure);
    // Homogeneity of the products themselves.
    const GromovTensor t = gromov_products(d);
    const GromovTensor ts = gromov_products(d.scaled(lambda));
    for (int i = 1; i <= n; ++i)
      for (const NodePair p : t.pairs_at(i))
        CHECK(ts.at(i, p) == lambda * t.at(i, p));
  }
}

TEST_CASE("relabeling commutes with taking the structure") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int round = 0; round < 80; ++round) {
    const int n = 4 + static_cast<int>(rng() % 4);
    const DistanceMatrix d = random_metric(n, rng);
    const GenericityCheck check = check_delta_generic(d);
    if (!check.structure) continue;
    const Permutation p = random_permutation(n, rng);
    CHECK(structure_of_metric(d.relabeled(p)) ==
          apply_permutation(*check.structure, p));
    ++checked;
  }
  CHECK(checked > 50);  // random [1,2) metrics are almost always generic
}

TEST_CASE("products reconstruct the distances") {
  std::mt19937_64 rng(9);
  for (int n = 5; n <= 7; ++n) {
    const DistanceMatrix d = random_metric(n, rng);
    const GromovTensor t = gromov_products(d);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        for (int k = 1; k <= n; ++k) {
          if (k == i || k == j) continue;
          CHECK(t.at(i, NodePair(j, k)) + t.at(j, NodePair(i, k)) ==
                d.at(i, j));
        }
      }
  }
}

TEST_CASE("difference identities hold for random metrics") {
  std::mt19937_64 rng(13);
  for (int n = 5; n <= 7; ++n)
    for (int round = 0; round < 10; ++round)
      CHECK(verify_gromov_identities(gromov_products(random_metric(n, rng)))
                .ok);
}

TEST_CASE("perturbing one product breaks an identity naming that slot") {
  std::mt19937_64 rng(15);
  GromovTensor t = gromov_products(random_metric(5, rng));
  t.at(3, NodePair(1, 4)) += 1;
  const IdentityReport report = verify_gromov_identities(t);
  REQUIRE_FALSE(report.ok);
  REQUIRE(report.violation.has_value());
  const auto& v = *report.violation;
  // The perturbed slot appears among the four nodes of the violated
  // relation.
  const bool involved = v.a == 3 || v.b == 3 || v.c == 3 || v.i == 3;
  CHECK(involved);
}

TEST_CASE("pendant-free reduction of the concrete 4-point metric") {
  const DistanceMatrix d = generic4();
  const WeightedGraph g = pendant_free_reduction(d);
  // Structure 123,214,314,423 picks the pairs {2,3} and {1,4} twice each.
  CHECK(g.edge_count() == 4);
  CHECK_FALSE(g.has_edge(2, 3));
  CHECK_FALSE(g.has_edge(1, 4));
  // Minimal products: 1/2, 7/2, 2, 4.
  CHECK(g.weight_of(1, 2) == Rat(5) - Rat(1, 2) - Rat(7, 2));
  CHECK(g.weight_of(1, 3) == Rat(6) - Rat(1, 2) - Rat(2));
  CHECK(g.weight_of(2, 4) == Rat(11) - Rat(7, 2) - Rat(4));
  CHECK(g.weight_of(3, 4) == Rat(7) - Rat(2) - Rat(4));
}

TEST_CASE("reduction removes one edge per distinct picked pair") {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 40; ++round) {
    const int n = 5 + static_cast<int>(rng() % 3);
    const DistanceMatrix d = random_metric(n, rng);
    const GenericityCheck check = check_delta_generic(d);
    if (!check.structure) continue;
    const WeightedGraph g = pendant_free_reduction(d);
    const int removed = static_cast<int>(check.structure->image().size());
    CHECK(g.edge_count() == n * (n - 1) / 2 - removed);
    // The picked pair sticks together exactly at each node.
    const GromovTensor t = gromov_products(d);
    for (int a = 1; a <= n; ++a) {
      const NodePair bc = check.structure->pick(a);
      const Rat ma = t.at(a, bc);
      const Rat mb = t.at(bc.lo, check.structure->pick(bc.lo));
      const Rat mc = t.at(bc.hi, check.structure->pick(bc.hi));
      const Rat reduced_ab = d.at(a, bc.lo) - ma - mb;
      const Rat reduced_ac = d.at(a, bc.hi) - ma - mc;
      const Rat reduced_bc = d.at(bc.lo, bc.hi) - mb - mc;
      CHECK(reduced_ab + reduced_ac - reduced_bc == 0);
    }
  }
}

TEST_CASE("distance matrix file round trip with rationals and decimals") {
  const std::string text =
      "4\n"
      "0 3/2 2 0.25\n"
      "3/2 0 1 1\n"
      "2 1 0 1.5\n"
      "0.25 1 1.5 0\n";
  std::istringstream in(text);
  const DistanceMatrix d = read_distance_matrix(in);
  CHECK(d.at(1, 4) == Rat(1, 4));
  CHECK(d.at(1, 2) == Rat(3, 2));
  CHECK(d.at(3, 4) == Rat(3, 2));
  std::ostringstream out;
  write_distance_matrix(out, d);
  std::istringstream in2(out.str());
  CHECK(read_distance_matrix(in2) == d);
}

TEST_CASE("file errors carry the position") {
  std::istringstream bad_entry("3\n0 1 1\n1 0 zebra\n1 1 0\n");
  CHECK_THROWS_WITH_AS(read_distance_matrix(bad_entry),
                       doctest::Contains("line 3"), IoError);
  std::istringstream asym("3\n0 1 1\n2 0 1\n1 1 0\n");
  CHECK_THROWS_WITH_AS(read_distance_matrix(asym),
                       doctest::Contains("not symmetric"), IoError);
  std::istringstream diag("3\n1 1 1\n1 0 1\n1 1 0\n");
  CHECK_THROWS_WITH_AS(read_distance_matrix(diag),
                       doctest::Contains("diagonal"), IoError);
  std::istringstream short_row("3\n0 1 1\n1 0\n1 1 0\n");
  CHECK_THROWS_AS(read_distance_matrix(short_row), IoError);
}
