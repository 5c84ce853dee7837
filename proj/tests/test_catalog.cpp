#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gromov/catalog.hpp"

using namespace gromov;

namespace {

const std::string kFixtureDir = std::string(GROMOV_SOURCE_DIR) + "/fixtures";

const NameMap& names() {
  static const NameMap map = NameMap::load_file(kFixtureDir +
                                                "/class_names.txt");
  return map;
}

// Catalogs 4..6 are shared across the test cases below; building 6 takes a
// few seconds.
const CatalogSet& catalogs6() {
  static const CatalogSet set = [] {
    ClassifyOptions options;
    options.names = &names();
    return build_catalogs(6, options);
  }();
  return set;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/gromov_test_") + name;
}

}  // namespace

TEST_CASE("four points: one class with the right stage counts") {
  const Catalog& c = catalogs6().at(4);
  CHECK(c.counts.raw == 81);
  CHECK(c.counts.allowable == 3);
  CHECK(c.counts.canonical == 1);
  CHECK(c.counts.generic == 1);
  REQUIRE(c.records.size() == 1);
  CHECK(c.records[0].canonical_text ==
        canonical_form(parse("124,213,324,413", 4)).text);
  CHECK(c.records[0].name == "X4");
  CHECK(c.records[0].contains.empty());
}

TEST_CASE("five points: the three classes") {
  const Catalog& c = catalogs6().at(5);
  CHECK(c.counts.raw == 7776);
  CHECK(c.counts.generic == 3);
  REQUIRE(c.records.size() == 3);
  std::set<std::string> got, expected;
  for (const ClassRecord& rec : c.records) got.insert(rec.canonical_text);
  for (const char* text :
       {"125,213,324,435,514", "124,213,324,435,524", "124,213,324,413,513"})
    expected.insert(canonical_form(parse(text, 5)).text);
  CHECK(got == expected);
  std::set<std::string> class_names;
  for (const ClassRecord& rec : c.records) class_names.insert(rec.name);
  CHECK(class_names == std::set<std::string>{"X5A", "X5B", "X5C"});
  // The reducible class contains the 4-point class.
  for (const ClassRecord& rec : c.records) {
    if (rec.name != "X5C") continue;
    REQUIRE(rec.contains.size() == 1);
    CHECK(rec.contains[0].size == 4);
    CHECK(rec.contains[0].label == "X4");
  }
}

TEST_CASE("six points: twenty-six classes, stages strictly decreasing") {
  const Catalog& c = catalogs6().at(6);
  CHECK(c.counts.generic == 26);
  CHECK(c.counts.raw > c.counts.allowable);
  CHECK(c.counts.allowable > c.counts.canonical);
  CHECK(c.counts.canonical > c.counts.generic);
  CHECK(c.records.size() == 26);
  int irreducible = 0;
  for (const ClassRecord& rec : c.records) {
    CHECK((canonical_structure(rec.canonical) == rec.canonical));
    if (rec.inv.irreducible) ++irreducible;
  }
  CHECK(irreducible == 17);  // I_1 .. I_17
}

TEST_CASE("records carry verified witnesses and margins") {
  for (int n = 4; n <= 6; ++n)
    for (const ClassRecord& rec : catalogs6().at(n).records) {
      CHECK(rec.margin > 0);
      CHECK(canonical_form(structure_of_metric(rec.witness)).text ==
            rec.canonical_text);
    }
}

TEST_CASE("identify maps witnesses and their relabelings to their record") {
  std::mt19937_64 rng(101);
  const Catalog& c = catalogs6().at(6);
  for (int id = 1; id <= 5; ++id) {
    const ClassRecord* rec = c.find_by_id(id);
    REQUIRE(rec != nullptr);
    CHECK(identify(c, rec->witness).id == id);
    std::vector<int> images(6);
    for (int i = 0; i < 6; ++i) images[i] = i + 1;
    std::shuffle(images.begin(), images.end(), rng);
    CHECK(identify(c, rec->witness.relabeled(Permutation(images))).id == id);
  }
}

TEST_CASE("identify rejects ties") {
  const Catalog& c = catalogs6().at(4);
  std::vector<Rat> ones(16, Rat(1));
  for (int i = 0; i < 4; ++i) ones[i * 4 + i] = 0;
  CHECK_THROWS_AS(identify(c, DistanceMatrix(4, ones)), NotDeltaGeneric);
}

TEST_CASE("substructure classification follows the containment chain") {
  const GromovStructure s = parse("124,213,324,413,513,613,713", 7);
  const auto contains = classify_substructures(catalogs6(), s);
  REQUIRE(contains.size() == 7);
  CHECK(contains[0].size == 4);
  CHECK(contains[0].label == "X4");
  std::set<std::string> labels;
  for (const auto& sub : contains) labels.insert(sub.label);
  CHECK(labels == std::set<std::string>{"X4", "X5C", "R_1"});
}

TEST_CASE("catalog save and load round trip") {
  const Catalog& c = catalogs6().at(5);
  const std::string path = temp_path("catalog5.json");
  save_catalog(c, path);
  const Catalog back = load_catalog(path, /*verify_witnesses=*/true);
  CHECK(back.n == c.n);
  CHECK(back.counts.raw == c.counts.raw);
  CHECK(back.counts.generic == c.counts.generic);
  REQUIRE(back.records.size() == c.records.size());
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    CHECK(back.records[i].canonical_text == c.records[i].canonical_text);
    CHECK(back.records[i].name == c.records[i].name);
    CHECK(back.records[i].inv == c.records[i].inv);
    CHECK(back.records[i].margin == c.records[i].margin);
    CHECK(back.records[i].witness == c.records[i].witness);
    CHECK(back.records[i].contains == c.records[i].contains);
  }
  std::remove(path.c_str());
}

TEST_CASE("tampered catalogs are rejected") {
  const std::string path = temp_path("catalog5_tampered.json");
  save_catalog(catalogs6().at(5), path);
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  // Swap two digits inside the first canonical form.
  const auto pos = text.find("\"canonical_form\": \"");
  REQUIRE(pos != std::string::npos);
  text[pos + 20] = text[pos + 20] == '2' ? '3' : '2';
  std::ofstream(path) << text;
  CHECK_THROWS_AS(load_catalog(path), Error);
  std::remove(path.c_str());
}

TEST_CASE("wrong schema version is reported as such") {
  const std::string path = temp_path("catalog5_schema.json");
  save_catalog(catalogs6().at(5), path);
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  const auto pos = text.find("\"schema_version\": 1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 19, "\"schema_version\": 9");
  std::ofstream(path) << text;
  CHECK_THROWS_AS(load_catalog(path), SchemaVersionMismatch);
  std::remove(path.c_str());
}

TEST_CASE("fixture files parse with their metadata") {
  const Fixture f = load_fixture_file(kFixtureDir + "/catalog6.txt");
  CHECK(f.n == 6);
  CHECK(f.tables.size() == 12);
  CHECK(f.row_count() == 26);
  CHECK(f.tables[0].name == "6+0 (Cycle)");
  CHECK(f.tables[0].types == std::vector<std::string>{"6 (Cycle)"});
  REQUIRE(f.tables[0].roles.has_value());
  CHECK(*f.tables[0].roles == RoleCounts{0, 0, 6});
  CHECK(f.tables[1].rows.size() == 4);
  CHECK(f.tables[1].rows[0].attrs.at("label") == "I_7");
  CHECK(f.tables[1].rows[0].attrs.at("removed") == "4");
}

TEST_CASE("the six-point catalog verifies against its fixture") {
  VerifyOptions options;
  options.smaller = &catalogs6();
  options.names = &names();
  options.recheck_genericity = false;  // the pipeline already solved these
  const auto fixtures = load_fixture_dir(kFixtureDir, 6);
  const VerificationReport report =
      verify_fixtures(catalogs6().at(6), fixtures, options);
  for (const std::string& line : report.lines)
    if (line.rfind("FAIL", 0) == 0) FAIL(line);
  CHECK(report.ok);
  CHECK(report.matched == 26);
  CHECK(report.missing == 0);
}

TEST_CASE("the four- and five-point catalogs verify against their fixtures") {
  VerifyOptions options;
  options.smaller = &catalogs6();
  options.names = &names();
  for (int n = 4; n <= 5; ++n) {
    const VerificationReport report = verify_fixtures(
        catalogs6().at(n), load_fixture_dir(kFixtureDir, n), options);
    CHECK(report.ok);
    CHECK(report.matched == (n == 4 ? 1 : 3));
  }
}

TEST_CASE("verification notices a missing class") {
  // Drop one record and the report must flag the catalog/fixture mismatch.
  Catalog pruned = catalogs6().at(6);
  pruned.records.pop_back();
  pruned.counts.generic = 25;
  VerifyOptions options;
  options.smaller = &catalogs6();
  options.recheck_genericity = false;
  const VerificationReport report =
      verify_fixtures(pruned, load_fixture_dir(kFixtureDir, 6), options);
  CHECK_FALSE(report.ok);
}

TEST_CASE("the shipped reference catalogs load and agree with fresh builds") {
  const std::string data_dir = std::string(GROMOV_SOURCE_DIR) + "/data";
  for (int n = 4; n <= 6; ++n) {
    const Catalog shipped =
        load_catalog(data_dir + "/catalog" + std::to_string(n) + ".json",
                     /*verify_witnesses=*/true);
    const Catalog& fresh = catalogs6().at(n);
    REQUIRE(shipped.records.size() == fresh.records.size());
    for (std::size_t i = 0; i < fresh.records.size(); ++i) {
      CHECK(shipped.records[i].canonical_text ==
            fresh.records[i].canonical_text);
      CHECK(shipped.records[i].margin == fresh.records[i].margin);
      CHECK(shipped.records[i].witness == fresh.records[i].witness);
    }
  }
  // The seven-point reference catalog: the 431 published classes plus the
  // two additional ones the engine finds (each with a stored witness).
  const Catalog seven =
      load_catalog(data_dir + "/catalog7.json", /*verify_witnesses=*/true);
  CHECK(seven.records.size() == 433);
  int irreducible = 0;
  for (const ClassRecord& rec : seven.records)
    if (rec.inv.irreducible) ++irreducible;
  CHECK(irreducible == 288);
}

TEST_CASE("chain-seeded and full modes build identical catalogs") {
  ClassifyOptions seeded;
  seeded.mode = EnumerationMode::kChainSeeded;
  const Catalog via_seeds = classify_all(5, seeded);
  const Catalog& full = catalogs6().at(5);
  REQUIRE(via_seeds.records.size() == full.records.size());
  for (std::size_t i = 0; i < full.records.size(); ++i)
    CHECK(via_seeds.records[i].canonical_text ==
          full.records[i].canonical_text);
}

TEST_CASE("worker count does not change the catalog") {
  ClassifyOptions parallel;
  parallel.workers = 4;
  const Catalog four = classify_all(5, parallel);
  const Catalog& one = catalogs6().at(5);
  REQUIRE(four.records.size() == one.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    CHECK(four.records[i].canonical_text == one.records[i].canonical_text);
    CHECK(four.records[i].margin == one.records[i].margin);
  }
}

TEST_CASE("unsupported point counts are refused") {
  CHECK_THROWS_AS(classify_all(3), UnsupportedN);
  CHECK_THROWS_AS(classify_all(9), UnsupportedN);
}
