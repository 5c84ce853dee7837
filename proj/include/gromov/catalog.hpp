#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gromov/canon.hpp"
#include "gromov/enumerate.hpp"
#include "gromov/genericity.hpp"
#include "gromov/metric.hpp"

namespace gromov {

// Display names for classes (X4, X5A..X5C, I_1..I_17, R_1..R_9), keyed by
// canonical structure.
class NameMap {
 public:
  void add(const GromovStructure& representative, const std::string& label);
  std::optional<std::string> name_of(const GromovStructure& canonical) const;

  // File of lines "<label> <structure text>"; '#' starts a comment.
  static NameMap load_file(const std::string& path);

 private:
  std::map<GromovStructure, std::string> names_;
};

// One closed-subset classification of a reducible class.
struct Containment {
  int size = 0;
  std::string label;       // display name of the restriction's class
  int class_id = 0;        // id in the smaller catalog
  std::vector<int> nodes;  // original labels, ascending

  bool operator==(const Containment&) const = default;
};

struct ClassRecord {
  int id = 0;  // ordinal in canonical-form order, 1-based
  GromovStructure canonical;
  std::string canonical_text;
  std::string name;  // empty when the class has no published label
  InvariantVector inv;
  bool generic = true;
  Rat margin;              // optimal margin t*
  DistanceMatrix witness;  // smallest integer-valued realizing metric
  std::vector<Containment> contains;

  std::string display_name() const;
};

struct StageCounts {
  std::int64_t raw = 0;        // full assignment space
  std::int64_t allowable = 0;  // structures surviving the exclusion rules
  std::int64_t canonical = 0;  // distinct classes among them
  std::int64_t generic = 0;    // classes with a delta-generic metric
};

struct Catalog {
  int n = 0;
  StageCounts counts;
  std::vector<ClassRecord> records;  // sorted by canonical form, only generic

  const ClassRecord* find(const GromovStructure& canonical) const;
  const ClassRecord* find_by_id(int id) const;
};

// Catalogs for several point counts; substructure classification of an
// n-point class needs all of 4..n-1.
struct CatalogSet {
  std::map<int, Catalog> by_n;

  bool has(int n) const { return by_n.count(n) > 0; }
  const Catalog& at(int n) const;
};

struct ClassifyOptions {
  int workers = 1;
  EnumerationMode mode = EnumerationMode::kFull;
  const NameMap* names = nullptr;
};

// The four-stage pipeline: enumerate allowable structures, quotient by
// relabeling via canonical forms, decide genericity exactly, and assemble
// sorted records with witnesses and substructure classifications.
// `smaller` may be null, in which case the needed catalogs are built on the
// fly. Output is deterministic regardless of worker count.
Catalog classify_all(int n, const ClassifyOptions& options = {},
                     const CatalogSet* smaller = nullptr);

// Builds catalogs for 4..max_n in order, reusing each for the next.
CatalogSet build_catalogs(int max_n, const ClassifyOptions& options = {});

// Classifies a metric against a catalog. Throws NotDeltaGeneric for tied
// minima and NotFound when the class is absent (a catalog defect).
const ClassRecord& identify(const Catalog& c, const DistanceMatrix& d);

// Closed-subset classification against smaller catalogs. Throws
// LookupFailure when a restriction is missing from its catalog.
std::vector<Containment> classify_substructures(const CatalogSet& smaller,
                                                const GromovStructure& s);

// ---- Catalog persistence -------------------------------------------------

// JSON, schema-versioned. Load revalidates structural invariants and, when
// verify_witnesses is set, re-derives each witness's structure.
void save_catalog(const Catalog& c, const std::string& path);
Catalog load_catalog(const std::string& path, bool verify_witnesses = false);

// ---- Fixtures ------------------------------------------------------------

struct FixtureRow {
  GromovStructure structure;
  std::string text;                              // tokens as transcribed
  std::map<std::string, std::string> attrs;      // label=, kind=, removed=
  int line = 0;                                  // source line number
};

struct FixtureTable {
  std::string id;
  std::string name;
  std::vector<std::string> types;  // allowed type labels, when stated
  std::string heading;             // contained-class label (reducible tables)
  std::optional<RoleCounts> roles;
  std::vector<FixtureRow> rows;
};

struct Fixture {
  int n = 0;
  std::string path;
  std::vector<FixtureTable> tables;

  std::size_t row_count() const;
};

// Directive-per-line text format; see fixtures/ for the shipped files.
Fixture load_fixture_file(const std::string& path);

// All fixture files for the given point count in a directory
// (catalog<n>*.txt).
std::vector<Fixture> load_fixture_dir(const std::string& dir, int n);

struct VerificationReport {
  bool ok = true;
  std::vector<std::string> lines;
  int matched = 0;
  int missing = 0;  // catalog classes absent from the fixtures
  int failures = 0;

  void fail(const std::string& line);
  void note(const std::string& line);
};

struct VerifyOptions {
  bool recheck_genericity = true;  // run the margin program per fixture row
  const CatalogSet* smaller = nullptr;  // for containment checks
  const NameMap* names = nullptr;
};

// Checks a computed catalog against fixture transcriptions: every row
// parses, is allowable and generic, rows are pairwise inequivalent, rows and
// catalog classes biject, per-table type labels and role/edge attributes
// match, and reducible tables' rows contain their heading class.
VerificationReport verify_fixtures(const Catalog& c,
                                   const std::vector<Fixture>& fixtures,
                                   const VerifyOptions& options = {});

}  // namespace gromov
