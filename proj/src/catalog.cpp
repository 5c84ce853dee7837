#include "gromov/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "gromov/errors.hpp"
#include "json.hpp"

namespace gromov {

using nlohmann::json;

void NameMap::add(const GromovStructure& representative,
                  const std::string& label) {
  names_[canonical_structure(representative)] = label;
}

std::optional<std::string> NameMap::name_of(
    const GromovStructure& canonical) const {
  const auto it = names_.find(canonical);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

NameMap NameMap::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  NameMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto space = line.find(' ', first);
    if (space == std::string::npos)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": expected \"<label> <structure>\"");
    const std::string label = line.substr(first, space - first);
    const std::string text = line.substr(space + 1);
    int tokens = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      const bool sep = text[i] == ',' || std::isspace(
          static_cast<unsigned char>(text[i]));
      const bool prev_sep = i == 0 || text[i - 1] == ',' ||
                            std::isspace(static_cast<unsigned char>(text[i - 1]));
      if (!sep && prev_sep) ++tokens;
    }
    map.add(parse(text, tokens), label);
  }
  return map;
}

std::string ClassRecord::display_name() const {
  if (!name.empty()) return name;
  return "X" + std::to_string(inv.n) + "#" + std::to_string(id);
}

const ClassRecord* Catalog::find(const GromovStructure& canonical) const {
  const auto it = std::lower_bound(
      records.begin(), records.end(), canonical,
      [](const ClassRecord& r, const GromovStructure& s) {
        return r.canonical < s;
      });
  if (it == records.end() || !(it->canonical == canonical)) return nullptr;
  return &*it;
}

const ClassRecord* Catalog::find_by_id(int id) const {
  if (id < 1 || id > static_cast<int>(records.size())) return nullptr;
  return &records[id - 1];
}

const Catalog& CatalogSet::at(int n) const {
  const auto it = by_n.find(n);
  if (it == by_n.end())
    throw LookupFailure("no catalog for " + std::to_string(n) + " points");
  return it->second;
}

namespace {

// Index-parallel map with first-exception propagation.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto run = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int thread_count =
      std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  for (int w = 0; w < thread_count; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<Containment> classify_substructures(const CatalogSet& smaller,
                                                const GromovStructure& s) {
  std::vector<Containment> out;
  for (const ClosedSubset& sub : closed_subsets(s)) {
    const int size = static_cast<int>(sub.nodes.size());
    if (!smaller.has(size))
      throw LookupFailure("restriction of size " + std::to_string(size) +
                          " has no catalog to classify against");
    const GromovStructure canon = canonical_structure(sub.restriction);
    const ClassRecord* rec = smaller.at(size).find(canon);
    if (!rec)
      throw LookupFailure("restriction " + serialize(canon) +
                          " is missing from the " + std::to_string(size) +
                          "-point catalog");
    out.push_back({size, rec->display_name(), rec->id, sub.nodes});
  }
  return out;
}

Catalog classify_all(int n, const ClassifyOptions& options,
                     const CatalogSet* smaller) {
  if (n < kMinCatalogPoints || n > kMaxCatalogPoints) throw UnsupportedN(n);

  CatalogSet local;
  if (smaller == nullptr && n > kMinCatalogPoints) {
    for (int m = kMinCatalogPoints; m < n; ++m) {
      Catalog built = classify_all(m, options, &local);
      local.by_n.emplace(m, std::move(built));
    }
    smaller = &local;
  }

  Catalog cat;
  cat.n = n;
  cat.counts.raw = raw_candidate_count(n);

  // Stage 2+3: stream allowable structures, quotient on the fly. Structures
  // are canonicalized before the merge lock, so workers scale.
  std::unordered_map<GromovStructure, std::int64_t> classes;
  std::int64_t allowable = 0;
  {
    std::mutex merge;
    enumerate_allowable(
        n, options.mode,
        [&](const GromovStructure& s) {
          const GromovStructure canon = canonical_structure(s);
          std::scoped_lock lock(merge);
          ++allowable;
          ++classes[canon];
        },
        options.workers);
  }
  cat.counts.allowable = allowable;
  cat.counts.canonical = static_cast<std::int64_t>(classes.size());

  std::vector<GromovStructure> reps;
  reps.reserve(classes.size());
  for (const auto& [s, count] : classes) reps.push_back(s);
  std::sort(reps.begin(), reps.end());

  // Stage 4: the margin program decides genericity per class.
  std::vector<std::optional<ClassRecord>> built(reps.size());
  parallel_for(reps.size(), options.workers, [&](std::size_t i) {
    const GromovStructure& s = reps[i];
    const GenericityVerdict verdict = decide_generic(s);
    if (!verdict.generic) return;
    ClassRecord rec;
    rec.canonical = s;
    rec.canonical_text = serialize(s);
    rec.inv = invariants(s);
    rec.generic = true;
    rec.margin = verdict.margin;
    rec.witness = realize_metric(s, verdict);
    if (!rec.inv.irreducible)
      rec.contains = classify_substructures(*smaller, s);
    if (rec.contains.empty() != rec.inv.irreducible)
      throw InternalDefect(
          "closed-subset list disagrees with the irreducibility flag");
    built[i] = std::move(rec);
  });

  for (auto& slot : built) {
    if (!slot) continue;
    slot->id = static_cast<int>(cat.records.size()) + 1;
    if (options.names)
      if (const auto label = options.names->name_of(slot->canonical))
        slot->name = *label;
    cat.records.push_back(std::move(*slot));
  }
  cat.counts.generic = static_cast<std::int64_t>(cat.records.size());
  return cat;
}

CatalogSet build_catalogs(int max_n, const ClassifyOptions& options) {
  CatalogSet set;
  for (int m = kMinCatalogPoints; m <= max_n; ++m) {
    Catalog built = classify_all(m, options, &set);
    set.by_n.emplace(m, std::move(built));
  }
  return set;
}

const ClassRecord& identify(const Catalog& c, const DistanceMatrix& d) {
  if (d.size() != c.n) throw SizeMismatch(c.n, d.size());
  const MetricVerdict mv = is_metric(d);
  if (!mv.is_metric)
    throw ValidationError(
        "not a metric: negative Gromov product at node " +
        std::to_string(mv.node) + ", pair {" + std::to_string(mv.pair.lo) +
        "," + std::to_string(mv.pair.hi) + "}");
  const GromovStructure canon = canonical_structure(structure_of_metric(d));
  const ClassRecord* rec = c.find(canon);
  if (!rec)
    throw NotFound("generic structure " + serialize(canon) +
                   " is missing from the catalog; the catalog is inconsistent");
  return *rec;
}

// ---- persistence ----------------------------------------------------------

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kFormatTag = "gromov-catalog";

json roles_to_json(const RoleCounts& roles) {
  return json{{"isolated", roles.isolated},
              {"end", roles.end},
              {"interior", roles.interior}};
}

RoleCounts roles_from_json(const json& j) {
  return RoleCounts{j.at("isolated").get<int>(), j.at("end").get<int>(),
                    j.at("interior").get<int>()};
}

json witness_to_json(const DistanceMatrix& d) {
  json rows = json::array();
  for (int i = 1; i <= d.size(); ++i) {
    json row = json::array();
    for (int j = 1; j <= d.size(); ++j) {
      const Rat& v = d.at(i, j);
      if (v.get_den() != 1)
        throw InternalDefect("witness metric entry is not an integer");
      const Int num = v.get_num();
      if (num.fits_slong_p())
        row.push_back(static_cast<std::int64_t>(num.get_si()));
      else
        row.push_back(num.get_str());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

DistanceMatrix witness_from_json(const json& j, int n) {
  std::vector<Rat> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  if (static_cast<int>(j.size()) != n)
    throw CorruptRecord("witness metric has wrong row count");
  for (const auto& row : j) {
    if (static_cast<int>(row.size()) != n)
      throw CorruptRecord("witness metric has wrong column count");
    for (const auto& cell : row) {
      if (cell.is_string())
        entries.push_back(Rat(Int(cell.get<std::string>())));
      else
        entries.push_back(Rat(static_cast<long>(cell.get<std::int64_t>())));
    }
  }
  return DistanceMatrix(n, std::move(entries));
}

}  // namespace

void save_catalog(const Catalog& c, const std::string& path) {
  json j;
  j["format"] = kFormatTag;
  j["schema_version"] = kSchemaVersion;
  j["n"] = c.n;
  j["stage_counts"] = {{"raw_candidates", c.counts.raw},
                       {"allowable", c.counts.allowable},
                       {"canonical_classes", c.counts.canonical},
                       {"generic_classes", c.counts.generic}};
  json classes = json::array();
  for (const ClassRecord& rec : c.records) {
    json item;
    item["id"] = rec.id;
    item["canonical_form"] = rec.canonical_text;
    if (!rec.name.empty()) item["name"] = rec.name;
    item["type"] = rec.inv.type_label;
    item["roles"] = roles_to_json(rec.inv.roles);
    item["removed_edges"] = rec.inv.removed_edges;
    item["rank"] = rec.inv.rank;
    item["trace_powers"] = rec.inv.trace_powers;
    item["irreducible"] = rec.inv.irreducible;
    item["generic"] = rec.generic;
    item["margin"] = rat_to_string(rec.margin);
    item["witness_metric"] = witness_to_json(rec.witness);
    json contains = json::array();
    for (const Containment& sub : rec.contains)
      contains.push_back(json{{"size", sub.size},
                              {"label", sub.label},
                              {"class_id", sub.class_id},
                              {"nodes", sub.nodes}});
    item["contains"] = std::move(contains);
    classes.push_back(std::move(item));
  }
  j["classes"] = std::move(classes);

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(1) << "\n";
  if (!out) throw IoError("failed writing " + path);
}

Catalog load_catalog(const std::string& path, bool verify_witnesses) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CorruptRecord(path + ": " + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormatTag)
      throw CorruptRecord(path + ": not a catalog file");
    if (j.at("schema_version").get<int>() != kSchemaVersion)
      throw SchemaVersionMismatch(
          path + ": schema version " +
          std::to_string(j.at("schema_version").get<int>()) +
          " (expected " + std::to_string(kSchemaVersion) + ")");

    Catalog c;
    c.n = j.at("n").get<int>();
    if (c.n < kMinCatalogPoints || c.n > kMaxCatalogPoints)
      throw CorruptRecord(path + ": unsupported point count");
    const json& counts = j.at("stage_counts");
    c.counts.raw = counts.at("raw_candidates").get<std::int64_t>();
    c.counts.allowable = counts.at("allowable").get<std::int64_t>();
    c.counts.canonical = counts.at("canonical_classes").get<std::int64_t>();
    c.counts.generic = counts.at("generic_classes").get<std::int64_t>();

    for (const json& item : j.at("classes")) {
      ClassRecord rec;
      rec.id = item.at("id").get<int>();
      rec.canonical_text = item.at("canonical_form").get<std::string>();
      try {
        rec.canonical = parse(rec.canonical_text, c.n);
      } catch (const Error& e) {
        throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                            ": " + e.what());
      }
      if (!(canonical_structure(rec.canonical) == rec.canonical))
        throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                            " canonical form is not self-canonical");
      rec.name = item.value("name", "");
      rec.inv = invariants(rec.canonical);
      // Stored invariants must agree with the recomputation.
      if (item.at("type").get<std::string>() != rec.inv.type_label ||
          roles_from_json(item.at("roles")) != rec.inv.roles ||
          item.at("removed_edges").get<int>() != rec.inv.removed_edges ||
          item.at("rank").get<int>() != rec.inv.rank ||
          item.at("trace_powers").get<std::vector<std::int64_t>>() !=
              rec.inv.trace_powers ||
          item.at("irreducible").get<bool>() != rec.inv.irreducible)
        throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                            " stored invariants disagree with the structure");
      rec.generic = item.at("generic").get<bool>();
      rec.margin = parse_rat(item.at("margin").get<std::string>());
      if (!rec.generic || rec.margin <= 0)
        throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                            " is not a generic record");
      try {
        rec.witness = witness_from_json(item.at("witness_metric"), c.n);
        if (verify_witnesses &&
            !(structure_of_metric(rec.witness) == rec.canonical))
          throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                              " witness does not realize the class");
      } catch (const CorruptRecord&) {
        throw;
      } catch (const Error& e) {
        throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                            " witness: " + e.what());
      }
      for (const json& sub : item.at("contains"))
        rec.contains.push_back(Containment{
            sub.at("size").get<int>(), sub.at("label").get<std::string>(),
            sub.at("class_id").get<int>(),
            sub.at("nodes").get<std::vector<int>>()});
      if (rec.contains.empty() != rec.inv.irreducible)
        throw CorruptRecord(path + ": class " + std::to_string(rec.id) +
                            " containment list disagrees with irreducibility");
      c.records.push_back(std::move(rec));
    }

    for (std::size_t i = 0; i < c.records.size(); ++i) {
      if (c.records[i].id != static_cast<int>(i) + 1)
        throw CorruptRecord(path + ": class ids are not sequential");
      if (i > 0 && !(c.records[i - 1].canonical < c.records[i].canonical))
        throw CorruptRecord(path + ": classes are not sorted");
    }
    if (c.counts.generic != static_cast<std::int64_t>(c.records.size()))
      throw CorruptRecord(path + ": stage counts disagree with the records");
    return c;
  } catch (const json::exception& e) {
    throw CorruptRecord(path + ": " + e.what());
  }
}

}  // namespace gromov
