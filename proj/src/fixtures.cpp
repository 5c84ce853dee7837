#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "gromov/catalog.hpp"
#include "gromov/errors.hpp"

namespace gromov {

std::size_t Fixture::row_count() const {
  std::size_t count = 0;
  for (const FixtureTable& t : tables) count += t.rows.size();
  return count;
}

void VerificationReport::fail(const std::string& line) {
  ok = false;
  ++failures;
  lines.push_back("FAIL: " + line);
}

void VerificationReport::note(const std::string& line) {
  lines.push_back("ok:   " + line);
}

namespace {

std::string strip(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fixture_error(const std::string& path, int line,
                                const std::string& what) {
  throw IoError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Fixture load_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  Fixture fixture;
  fixture.path = path;
  FixtureTable* table = nullptr;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    const std::string line = strip(raw);
    if (line.empty()) continue;

    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    std::string rest = strip(line.substr(keyword.size()));

    if (keyword == "points") {
      fixture.n = std::stoi(rest);
      if (fixture.n < kMinCatalogPoints || fixture.n > kMaxCatalogPoints)
        fixture_error(path, line_no, "unsupported point count");
    } else if (keyword == "table") {
      fixture.tables.emplace_back();
      table = &fixture.tables.back();
      table->id = rest;
    } else if (table == nullptr) {
      fixture_error(path, line_no, "directive before any table");
    } else if (keyword == "name") {
      table->name = rest;
    } else if (keyword == "type") {
      table->types.push_back(rest);
    } else if (keyword == "heading") {
      table->heading = rest;
    } else if (keyword == "roles") {
      std::istringstream rs(rest);
      RoleCounts roles;
      if (!(rs >> roles.isolated >> roles.end >> roles.interior))
        fixture_error(path, line_no, "roles needs three numbers");
      table->roles = roles;
    } else if (keyword == "row") {
      if (fixture.n == 0)
        fixture_error(path, line_no, "row before the points directive");
      FixtureRow row;
      row.line = line_no;
      std::string structure_text;
      std::istringstream rs(rest);
      std::string word;
      while (rs >> word) {
        const auto eq = word.find('=');
        if (eq != std::string::npos && eq > 0 &&
            !std::isdigit(static_cast<unsigned char>(word[0]))) {
          row.attrs[word.substr(0, eq)] = word.substr(eq + 1);
        } else {
          if (!structure_text.empty()) structure_text += ' ';
          structure_text += word;
        }
      }
      row.text = structure_text;
      try {
        row.structure = parse(structure_text, fixture.n);
      } catch (const Error& e) {
        fixture_error(path, line_no, e.what());
      }
      table->rows.push_back(std::move(row));
    } else {
      fixture_error(path, line_no, "unknown directive \"" + keyword + "\"");
    }
  }
  if (fixture.n == 0) throw IoError(path + ": missing points directive");
  return fixture;
}

std::vector<Fixture> load_fixture_dir(const std::string& dir, int n) {
  namespace fs = std::filesystem;
  std::vector<std::string> paths;
  if (!fs::is_directory(dir)) throw IoError(dir + " is not a directory");
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("catalog" + std::to_string(n), 0) == 0 &&
        entry.path().extension() == ".txt")
      paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());
  std::vector<Fixture> fixtures;
  for (const std::string& path : paths) {
    Fixture f = load_fixture_file(path);
    if (f.n != n)
      throw IoError(path + ": declares " + std::to_string(f.n) +
                    " points, expected " + std::to_string(n));
    fixtures.push_back(std::move(f));
  }
  if (fixtures.empty())
    throw IoError("no catalog" + std::to_string(n) + "*.txt fixtures in " +
                  dir);
  return fixtures;
}

namespace {

std::string where(const Fixture& f, const FixtureTable& t,
                  const FixtureRow& r) {
  return f.path + ":" + std::to_string(r.line) + " [" + t.id + "] " + r.text;
}

int attr_int(const FixtureRow& row, const std::string& key, int fallback) {
  const auto it = row.attrs.find(key);
  if (it == row.attrs.end()) return fallback;
  return std::stoi(it->second);
}

}  // namespace

VerificationReport verify_fixtures(const Catalog& c,
                                   const std::vector<Fixture>& fixtures,
                                   const VerifyOptions& options) {
  VerificationReport report;
  std::unordered_map<GromovStructure, std::string> seen;  // canon -> where
  std::set<GromovStructure> fixture_canon;
  std::size_t rows_total = 0;

  for (const Fixture& f : fixtures) {
    if (f.n != c.n) {
      report.fail(f.path + ": fixture is for " + std::to_string(f.n) +
                  " points, catalog for " + std::to_string(c.n));
      continue;
    }
    for (const FixtureTable& table : f.tables) {
      for (const FixtureRow& row : table.rows) {
        ++rows_total;
        const GromovStructure& s = row.structure;

        const AllowabilityVerdict allow = is_allowable(s);
        if (!allow.allowable) {
          report.fail(where(f, table, row) + ": " + allow.description());
          continue;
        }

        if (options.recheck_genericity && !decide_generic(s).generic)
          report.fail(where(f, table, row) + ": margin program rejects it");

        const GromovStructure canon = canonical_structure(s);
        const auto [it, inserted] = seen.emplace(canon, where(f, table, row));
        if (!inserted)
          report.fail(where(f, table, row) + ": equivalent to " + it->second);
        fixture_canon.insert(canon);

        const ClassRecord* rec = c.find(canon);
        if (rec == nullptr) {
          report.fail(where(f, table, row) + ": class missing from catalog");
          continue;
        }
        ++report.matched;

        const InvariantVector& inv = rec->inv;
        if (!table.types.empty() &&
            std::find(table.types.begin(), table.types.end(),
                      inv.type_label) == table.types.end())
          report.fail(where(f, table, row) + ": computed type " +
                      inv.type_label + " not among the table's types");
        if (table.roles && inv.roles != *table.roles)
          report.fail(where(f, table, row) + ": computed roles " +
                      std::to_string(inv.roles.isolated) + "/" +
                      std::to_string(inv.roles.end) + "/" +
                      std::to_string(inv.roles.interior) +
                      " disagree with the table");

        if (const auto kind = row.attrs.find("kind");
            kind != row.attrs.end()) {
          const bool expect_irreducible = kind->second == "I";
          if (inv.irreducible != expect_irreducible)
            report.fail(where(f, table, row) + ": computed " +
                        (inv.irreducible ? "irreducible" : "reducible") +
                        ", table says " + kind->second);
        }
        if (const int removed = attr_int(row, "removed", -1);
            removed >= 0 && removed != inv.removed_edges)
          report.fail(where(f, table, row) + ": computed removed-edge count " +
                      std::to_string(inv.removed_edges) + ", table says " +
                      std::to_string(removed));
        if (const auto label = row.attrs.find("label");
            label != row.attrs.end() && options.names) {
          const auto mapped = options.names->name_of(canon);
          if (!mapped || *mapped != label->second)
            report.fail(where(f, table, row) + ": name map gives " +
                        (mapped ? *mapped : std::string("<none>")) +
                        ", table says " + label->second);
        }

        if (!table.heading.empty()) {
          if (options.smaller == nullptr) {
            report.fail(where(f, table, row) +
                        ": no smaller catalogs to check the heading against");
          } else {
            const auto contains =
                classify_substructures(*options.smaller, s);
            const bool found =
                std::any_of(contains.begin(), contains.end(),
                            [&](const Containment& sub) {
                              return sub.label == table.heading;
                            });
            if (!found)
              report.fail(where(f, table, row) + ": contains list lacks " +
                          table.heading);
          }
        }
      }
    }
  }

  // The catalog must not hold classes the fixtures do not mention.
  for (const ClassRecord& rec : c.records)
    if (!fixture_canon.count(rec.canonical)) {
      ++report.missing;
      report.fail("catalog class " + std::to_string(rec.id) + " (" +
                  rec.canonical_text + ") missing from the fixtures");
    }

  // Seven-point reducible census: rows grouped by their smallest closed
  // subset must split 24 / 27 / 93 across core sizes 4 / 5 / 6.
  if (c.n == 7 && options.smaller != nullptr) {
    std::map<int, int> by_core;
    bool any_reducible = false;
    for (const Fixture& f : fixtures)
      for (const FixtureTable& table : f.tables)
        for (const FixtureRow& row : table.rows) {
          if (table.heading.empty()) continue;
          any_reducible = true;
          const auto subs = closed_subsets(row.structure);
          if (!subs.empty())
            ++by_core[static_cast<int>(subs.front().nodes.size())];
        }
    if (any_reducible) {
      const std::map<int, int> expected{{4, 24}, {5, 27}, {6, 93}};
      if (by_core == expected)
        report.note("reducible rows group 24/27/93 by smallest closed core");
      else {
        std::string got;
        for (const auto& [size, count] : by_core)
          got += std::to_string(size) + ":" + std::to_string(count) + " ";
        report.fail("reducible grouping by smallest core is " + got +
                    "(expected 4:24 5:27 6:93)");
      }
    }
  }

  report.note(std::to_string(report.matched) + "/" +
              std::to_string(rows_total) + " fixture rows matched, " +
              std::to_string(c.records.size()) + " catalog classes, " +
              std::to_string(report.missing) + " unmatched classes");
  return report;
}

}  // namespace gromov
