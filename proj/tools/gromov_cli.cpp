// Command-line surface over the classification pipeline: build catalogs,
// verify them against the bundled census transcriptions, classify metrics,
// realize witness metrics and inspect individual structures.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "gromov/catalog.hpp"
#include "json.hpp"

namespace {

using namespace gromov;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDefect = 70;

std::string default_catalog_dir() {
  if (const char* dir = std::getenv("GROMOV_CATALOG_DIR")) return dir;
  return ".";
}

std::string catalog_path(const std::string& dir, int n) {
  return dir + "/catalog" + std::to_string(n) + ".json";
}

int worker_default() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

NameMap load_names_or_empty(const std::string& path) {
  if (!std::filesystem::exists(path)) return {};
  return NameMap::load_file(path);
}

// Count structure tokens so users do not have to pass n explicitly.
int infer_points(const std::string& text) {
  int tokens = 0;
  bool in_token = false;
  for (const char ch : text) {
    const bool sep = ch == ',' || std::isspace(static_cast<unsigned char>(ch));
    if (!sep && !in_token) ++tokens;
    in_token = !sep;
  }
  return tokens;
}

// Catalogs below n, loaded from files when present, rebuilt otherwise.
CatalogSet smaller_catalogs(int n, const std::string& dir,
                            const ClassifyOptions& options) {
  CatalogSet set;
  for (int m = kMinCatalogPoints; m < n; ++m) {
    const std::string path = catalog_path(dir, m);
    if (std::filesystem::exists(path)) {
      set.by_n.emplace(m, load_catalog(path));
    } else {
      Catalog built = classify_all(m, options, &set);
      set.by_n.emplace(m, std::move(built));
    }
  }
  return set;
}

std::string diagram(const GromovStructure& s) {
  const ChainDecomposition dec = chain_decomposition(s);
  std::string out;
  for (const ChainComponent& comp : dec.components) {
    if (!out.empty()) out += "   ";
    if (comp.size() == 1) {
      const NodePair p = s.pick(comp.nodes[0]);
      out += "∘" + std::to_string(p.lo) + "—•" +
             std::to_string(comp.nodes[0]) + "—∘" +
             std::to_string(p.hi);
      continue;
    }
    const int first = comp.nodes.front();
    const int last = comp.nodes.back();
    int head = 0, tail = 0;
    if (comp.kind == ComponentKind::kCycle) {
      head = last;
      tail = first;
    } else {
      head = s.pick(first).other(comp.nodes[1]);
      tail = s.pick(last).other(comp.nodes[comp.size() - 2]);
    }
    out += "∘" + std::to_string(head);
    for (const int v : comp.nodes) out += "—•" + std::to_string(v);
    out += "—∘" + std::to_string(tail);
  }
  return out;
}

json record_to_json(const ClassRecord& rec) {
  json j;
  j["id"] = rec.id;
  j["canonical_form"] = rec.canonical_text;
  if (!rec.name.empty()) j["name"] = rec.name;
  j["type"] = rec.inv.type_label;
  j["roles"] = {{"isolated", rec.inv.roles.isolated},
                {"end", rec.inv.roles.end},
                {"interior", rec.inv.roles.interior}};
  j["removed_edges"] = rec.inv.removed_edges;
  j["rank"] = rec.inv.rank;
  j["irreducible"] = rec.inv.irreducible;
  j["margin"] = rat_to_string(rec.margin);
  return j;
}

void print_record(const ClassRecord& rec) {
  std::cout << "class:     #" << rec.id << " (" << rec.display_name() << ")\n"
            << "canonical: " << rec.canonical_text << "\n"
            << "type:      " << rec.inv.type_label << "\n"
            << "roles:     isolated " << rec.inv.roles.isolated << ", end "
            << rec.inv.roles.end << ", interior " << rec.inv.roles.interior
            << "\n"
            << "removed:   " << rec.inv.removed_edges << "\n"
            << "rank:      " << rec.inv.rank << "\n"
            << (rec.inv.irreducible ? "irreducible\n" : "reducible\n");
  for (const Containment& sub : rec.contains) {
    std::cout << "contains:  " << sub.label << " on {";
    for (std::size_t i = 0; i < sub.nodes.size(); ++i)
      std::cout << (i ? "," : "") << sub.nodes[i];
    std::cout << "}\n";
  }
}

// ---- subcommands -----------------------------------------------------------

struct CommonFlags {
  std::string dir = default_catalog_dir();
  std::string names_path = "fixtures/class_names.txt";
  int workers = worker_default();
  bool json_output = false;
};

int run_classify(int n, const std::string& out_path, const std::string& mode,
                 const CommonFlags& flags) {
  const NameMap names = load_names_or_empty(flags.names_path);
  ClassifyOptions options;
  options.workers = flags.workers;
  options.names = &names;
  options.mode = mode == "chain-seeded" ? EnumerationMode::kChainSeeded
                                        : EnumerationMode::kFull;
  const CatalogSet smaller = smaller_catalogs(n, flags.dir, options);
  const Catalog catalog = classify_all(n, options, &smaller);
  const std::string path =
      out_path.empty() ? catalog_path(flags.dir, n) : out_path;
  save_catalog(catalog, path);
  if (flags.json_output) {
    json j;
    j["n"] = n;
    j["raw_candidates"] = catalog.counts.raw;
    j["allowable"] = catalog.counts.allowable;
    j["canonical_classes"] = catalog.counts.canonical;
    j["classes"] = catalog.counts.generic;
    j["path"] = path;
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "raw candidates:    " << catalog.counts.raw << "\n"
              << "allowable:         " << catalog.counts.allowable << "\n"
              << "canonical classes: " << catalog.counts.canonical << "\n"
              << "classes: " << catalog.counts.generic << "\n"
              << "written: " << path << "\n";
  }
  return kExitOk;
}

int run_verify(int n, std::string catalog_file, const std::string& fixture_dir,
               bool fast, const CommonFlags& flags) {
  if (catalog_file.empty()) catalog_file = catalog_path(flags.dir, n);
  const Catalog catalog = load_catalog(catalog_file);
  if (catalog.n != n)
    throw ValidationError("catalog file is for " + std::to_string(catalog.n) +
                          " points, not " + std::to_string(n));
  const NameMap names = load_names_or_empty(flags.names_path);
  ClassifyOptions coptions;
  coptions.workers = flags.workers;
  coptions.names = &names;
  const CatalogSet smaller = smaller_catalogs(n, flags.dir, coptions);

  VerifyOptions options;
  options.recheck_genericity = !fast;
  options.smaller = &smaller;
  options.names = &names;
  const VerificationReport report =
      verify_fixtures(catalog, load_fixture_dir(fixture_dir, n), options);
  if (flags.json_output) {
    json j;
    j["ok"] = report.ok;
    j["matched"] = report.matched;
    j["failures"] = report.failures;
    j["lines"] = report.lines;
    std::cout << j.dump(1) << "\n";
  } else {
    for (const std::string& line : report.lines) std::cout << line << "\n";
  }
  return report.ok ? kExitOk : kExitMismatch;
}

int run_identify(const std::string& metric_path, std::string catalog_file,
                 const CommonFlags& flags) {
  const DistanceMatrix d = read_distance_matrix_file(metric_path);
  if (catalog_file.empty()) catalog_file = catalog_path(flags.dir, d.size());
  const Catalog catalog = load_catalog(catalog_file);
  try {
    const ClassRecord& rec = identify(catalog, d);
    if (flags.json_output)
      std::cout << record_to_json(rec).dump(1) << "\n";
    else
      print_record(rec);
  } catch (const NotDeltaGeneric& e) {
    std::cout << "not delta-generic: minimum at node " << e.node
              << " is attained by " << e.tied.size() << " pairs\n";
    return kExitMismatch;
  }
  return kExitOk;
}

int run_realize(const std::string& text, const std::string& out_path) {
  const int n = infer_points(text);
  const GromovStructure s = parse(text, n);
  const DistanceMatrix d = realize_metric(s);
  if (out_path.empty()) {
    write_distance_matrix(std::cout, d);
  } else {
    write_distance_matrix_file(out_path, d);
    std::cout << "written: " << out_path << "\n";
  }
  return kExitOk;
}

int run_inspect(const std::string& text, const CommonFlags& flags) {
  const int n = infer_points(text);
  const GromovStructure s = parse(text, n);
  const InvariantVector inv = invariants(s);
  const AllowabilityVerdict allow = is_allowable(s);
  const CanonicalForm canon = canonical_form(s);

  json j;
  j["structure"] = serialize(s);
  j["canonical_form"] = canon.text;
  j["type"] = inv.type_label;
  j["roles"] = {{"isolated", inv.roles.isolated},
                {"end", inv.roles.end},
                {"interior", inv.roles.interior}};
  j["removed_edges"] = inv.removed_edges;
  j["rank"] = inv.rank;
  j["trace_powers"] = inv.trace_powers;
  j["irreducible"] = inv.irreducible;
  j["allowable"] = allow.allowable;
  if (!allow.allowable) j["violation"] = allow.description();

  if (!flags.json_output) {
    std::cout << "structure: " << serialize(s) << "\n"
              << "canonical: " << canon.text << "\n"
              << "chains:    " << diagram(s) << "\n"
              << "type:      " << inv.type_label << "\n"
              << "roles:     isolated " << inv.roles.isolated << ", end "
              << inv.roles.end << ", interior " << inv.roles.interior << "\n"
              << "removed:   " << inv.removed_edges << "\n"
              << "rank:      " << inv.rank << "\n"
              << "traces:    ";
    for (std::size_t i = 0; i < inv.trace_powers.size(); ++i)
      std::cout << (i ? ", " : "") << "k=" << i + 2 << ":"
                << inv.trace_powers[i];
    std::cout << "\n"
              << (inv.irreducible ? "irreducible" : "reducible") << "\n";
  }

  if (allow.allowable) {
    const GenericityVerdict verdict = decide_generic(s);
    j["generic"] = verdict.generic;
    j["margin"] = rat_to_string(verdict.margin);
    if (!flags.json_output) {
      std::cout << "allowable\n";
      if (verdict.generic)
        std::cout << "generic (margin " << rat_to_string(verdict.margin)
                  << ")\n";
      else
        std::cout << "not generic: the margin program peaks at zero\n";
    }
  } else if (!flags.json_output) {
    std::cout << allow.description() << "\n";
  }
  if (flags.json_output) std::cout << j.dump(1) << "\n";
  return kExitOk;
}

int run_check_paper(int max_n, const CommonFlags& flags) {
  const NameMap names = load_names_or_empty(flags.names_path);
  ClassifyOptions options;
  options.workers = flags.workers;
  options.names = &names;
  const std::map<int, std::int64_t> expected{{4, 1}, {5, 3}, {6, 26},
                                             {7, 431}};
  CatalogSet set;
  bool ok = true;
  json j = json::array();
  for (int n = kMinCatalogPoints; n <= max_n; ++n) {
    Catalog catalog = classify_all(n, options, &set);
    const std::int64_t want = expected.at(n);
    const bool match = catalog.counts.generic == want;
    ok = ok && match;
    if (flags.json_output)
      j.push_back({{"n", n},
                   {"classes", catalog.counts.generic},
                   {"expected", want},
                   {"match", match}});
    else
      std::cout << "n=" << n << ": " << catalog.counts.generic
                << " classes (reference " << want << ") "
                << (match ? "ok" : "MISMATCH") << "\n";
    set.by_n.emplace(n, std::move(catalog));
  }
  if (flags.json_output) std::cout << j.dump(1) << "\n";
  if (!flags.json_output)
    std::cout << (ok ? "scoreboard: all counts match\n"
                     : "scoreboard: MISMATCH\n");
  return ok ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta-equivalence decomposition of finite metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  CommonFlags flags;
  app.add_option("--catalog-dir", flags.dir,
                 "directory for catalog files (env GROMOV_CATALOG_DIR)");
  app.add_option("--names", flags.names_path, "class-name fixture file");
  app.add_option("--workers,-j", flags.workers, "worker thread count");
  app.add_flag("--json", flags.json_output, "machine-readable output");

  auto* classify = app.add_subcommand("classify", "build a catalog");
  int classify_n = 0;
  std::string classify_out, classify_mode = "full";
  classify->add_option("--n,-n", classify_n, "point count (4..8)")
      ->required();
  classify->add_option("--out,-o", classify_out, "output catalog file");
  classify->add_option("--mode", classify_mode, "full or chain-seeded")
      ->check(CLI::IsMember({"full", "chain-seeded"}));

  auto* verify = app.add_subcommand(
      "verify", "check a catalog against the bundled census fixtures");
  int verify_n = 0;
  std::string verify_catalog, verify_fixdir = "fixtures";
  bool verify_fast = false;
  verify->add_option("--n,-n", verify_n, "point count")->required();
  verify->add_option("--catalog", verify_catalog, "catalog file to verify");
  verify->add_option("--fixtures", verify_fixdir, "fixture directory");
  verify->add_flag("--fast", verify_fast,
                   "skip the per-row margin recheck");

  auto* identify =
      app.add_subcommand("identify", "classify a distance-matrix file");
  std::string identify_metric, identify_catalog;
  identify->add_option("metric", identify_metric, "distance matrix file")
      ->required();
  identify->add_option("--catalog", identify_catalog, "catalog file");

  auto* realize = app.add_subcommand(
      "realize", "produce an integer metric realizing a structure");
  std::string realize_text, realize_out;
  realize->add_option("structure", realize_text, "structure text")
      ->required();
  realize->add_option("--out,-o", realize_out, "output metric file");

  auto* inspect = app.add_subcommand(
      "inspect", "invariants, chain diagram and verdicts for a structure");
  std::string inspect_text;
  inspect->add_option("structure", inspect_text, "structure text")
      ->required();

  auto* check =
      app.add_subcommand("check-paper", "reproduce the reference census");
  int check_max_n = 7;
  check->add_option("--max-n", check_max_n, "largest point count to run")
      ->check(CLI::Range(4, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify->parsed())
      return run_classify(classify_n, classify_out, classify_mode, flags);
    if (verify->parsed())
      return run_verify(verify_n, verify_catalog, verify_fixdir, verify_fast,
                        flags);
    if (identify->parsed())
      return run_identify(identify_metric, identify_catalog, flags);
    if (realize->parsed()) return run_realize(realize_text, realize_out);
    if (inspect->parsed()) return run_inspect(inspect_text, flags);
    if (check->parsed()) return run_check_paper(check_max_n, flags);
  } catch (const InternalDefect& e) {
    std::cerr << "internal defect: " << e.what() << "\n";
    return kExitDefect;
  } catch (const NotFound& e) {
    std::cerr << "internal defect: " << e.what() << "\n";
    return kExitDefect;
  } catch (const LookupFailure& e) {
    std::cerr << "internal defect: " << e.what() << "\n";
    return kExitDefect;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  }
  return kExitUsage;
}
