#include "gromov/enumerate.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

#include "gromov/errors.hpp"
#include "gromov/matrixrep.hpp"

namespace gromov {

namespace {

int pair_count(int n) { return n * (n - 1) / 2; }

int pair_id(NodePair p, int n) {
  return (p.lo - 1) * n - (p.lo * (p.lo - 1)) / 2 + (p.hi - p.lo - 1);
}

std::vector<NodePair> all_pairs(int n) {
  std::vector<NodePair> pairs;
  pairs.reserve(pair_count(n));
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

}  // namespace

ExclusionSet::ExclusionSet(int n) : n_(n) {
  counts_.assign(static_cast<std::size_t>(n + 1) * pair_count(n), 0);
}

int ExclusionSet::index(int node, NodePair pair) const {
  return node * pair_count(n_) + pair_id(pair, n_);
}

void ExclusionSet::add(const Forbid& f) { ++counts_[index(f.node, f.pair)]; }

void ExclusionSet::remove(const Forbid& f) {
  --counts_[index(f.node, f.pair)];
}

bool ExclusionSet::forbids(int node, NodePair pair) const {
  return counts_[index(node, pair)] > 0;
}

std::vector<Forbid> ExclusionSet::entries() const {
  std::vector<Forbid> out;
  const auto pairs = all_pairs(n_);
  for (int node = 1; node <= n_; ++node)
    for (const NodePair p : pairs)
      if (forbids(node, p)) out.push_back({node, p});
  return out;
}

std::vector<Forbid> exclusions_of(int a, NodePair pair, int n) {
  const int b = pair.lo;
  const int c = pair.hi;
  std::vector<Forbid> out;
  out.reserve(4 * n);
  // At b, every pair containing c is out (this covers {a,c}); symmetrically
  // at c every pair containing b. Every bystander loses {a,b} and {a,c}.
  for (int i = 1; i <= n; ++i) {
    if (i != b && i != c) out.push_back({b, NodePair(c, i)});
    if (i != b && i != c) out.push_back({c, NodePair(b, i)});
    if (i != a && i != b && i != c) {
      out.push_back({i, NodePair(a, b)});
      out.push_back({i, NodePair(a, c)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string AllowabilityVerdict::description() const {
  if (allowable) return "allowable";
  return "not allowable: node " + std::to_string(violating_node) + " pick {" +
         std::to_string(violating_pair.lo) + "," +
         std::to_string(violating_pair.hi) + "} conflicts with node " +
         std::to_string(source_node) + " pick {" +
         std::to_string(source_pair.lo) + "," +
         std::to_string(source_pair.hi) + "}";
}

AllowabilityVerdict is_allowable(const GromovStructure& s) {
  const int n = s.size();
  for (int a = 1; a <= n; ++a) {
    for (const Forbid& f : exclusions_of(a, s.pick(a), n)) {
      if (s.pick(f.node) == f.pair) {
        AllowabilityVerdict v;
        v.allowable = false;
        v.source_node = a;
        v.source_pair = s.pick(a);
        v.violating_node = f.node;
        v.violating_pair = f.pair;
        return v;
      }
    }
  }
  return {};
}

namespace {

// Precomputed per-n tables for the backtracking search.
struct SearchTables {
  int n = 0;
  std::vector<NodePair> pairs;                    // by pair id
  std::vector<std::vector<int>> node_candidates;  // [node] -> pair ids
  // [node][pair id] -> consequences as (node, pair id)
  std::vector<std::vector<std::vector<std::pair<int, int>>>> consequences;

  explicit SearchTables(int n_in) : n(n_in), pairs(all_pairs(n_in)) {
    node_candidates.resize(n + 1);
    consequences.assign(n + 1,
                        std::vector<std::vector<std::pair<int, int>>>(
                            pairs.size()));
    for (int a = 1; a <= n; ++a)
      for (std::size_t pid = 0; pid < pairs.size(); ++pid) {
        if (pairs[pid].contains(a)) continue;
        node_candidates[a].push_back(static_cast<int>(pid));
        for (const Forbid& f : exclusions_of(a, pairs[pid], n))
          consequences[a][pid].emplace_back(f.node, pair_id(f.pair, n));
      }
  }
};

class Dfs {
 public:
  Dfs(const SearchTables& tables,
      const std::vector<std::vector<int>>& candidates,
      const std::function<void(const GromovStructure&)>& sink)
      : t_(tables),
        candidates_(candidates),
        sink_(sink),
        forbidden_(static_cast<std::size_t>(t_.n + 1) * t_.pairs.size(), 0),
        chosen_(t_.n + 1, -1) {}

  // Fixes node a to pair id pid if consistent; returns false on conflict.
  bool push(int a, int pid) {
    if (forbidden_[a * t_.pairs.size() + pid]) return false;
    for (const auto& [x, q] : t_.consequences[a][pid])
      if (chosen_[x] == q) return false;
    for (const auto& [x, q] : t_.consequences[a][pid])
      ++forbidden_[x * t_.pairs.size() + q];
    chosen_[a] = pid;
    return true;
  }

  void pop(int a) {
    const int pid = chosen_[a];
    chosen_[a] = -1;
    for (const auto& [x, q] : t_.consequences[a][pid])
      --forbidden_[x * t_.pairs.size() + q];
  }

  void run(int a) {
    if (a > t_.n) {
      emit();
      return;
    }
    for (const int pid : candidates_[a]) {
      if (!push(a, pid)) continue;
      run(a + 1);
      pop(a);
    }
  }

 private:
  void emit() {
    std::vector<std::array<int, 3>> picks;
    picks.reserve(t_.n);
    for (int a = 1; a <= t_.n; ++a) {
      const NodePair p = t_.pairs[chosen_[a]];
      picks.push_back({a, p.lo, p.hi});
    }
    sink_(make_structure(t_.n, picks));
  }

  const SearchTables& t_;
  const std::vector<std::vector<int>>& candidates_;
  const std::function<void(const GromovStructure&)>& sink_;
  std::vector<std::uint16_t> forbidden_;
  std::vector<int> chosen_;
};

// Runs one search over the given per-node candidate lists, splitting the
// forest at nodes 1 and 2 across workers.
void run_search(const SearchTables& tables,
                const std::vector<std::vector<int>>& candidates,
                const std::function<void(const GromovStructure&)>& sink,
                int workers) {
  struct Root {
    int pid1, pid2;
  };
  std::vector<Root> roots;
  for (const int pid1 : candidates[1])
    for (const int pid2 : candidates[2]) roots.push_back({pid1, pid2});

  auto process = [&](const Root& root,
                     const std::function<void(const GromovStructure&)>& out) {
    Dfs dfs(tables, candidates, out);
    if (!dfs.push(1, root.pid1)) return;
    if (dfs.push(2, root.pid2)) {
      dfs.run(3);
      dfs.pop(2);
    }
    dfs.pop(1);
  };

  if (workers <= 1) {
    for (const Root& root : roots) process(root, sink);
    return;
  }

  std::mutex sink_mutex;
  std::atomic<std::size_t> next{0};
  auto guarded = [&](const GromovStructure& s) {
    std::scoped_lock lock(sink_mutex);
    sink(s);
  };
  std::vector<std::thread> pool;
  const int thread_count = std::min<int>(workers, static_cast<int>(roots.size()));
  pool.reserve(thread_count);
  for (int w = 0; w < thread_count; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= roots.size()) break;
        process(roots[i], guarded);
      }
    });
  for (auto& th : pool) th.join();
}

// Candidate lists for the seeded search with the longest mutual chain laid
// out on nodes 1..length in order.
std::vector<std::vector<int>> seeded_candidates(const SearchTables& tables,
                                                int length) {
  const int n = tables.n;
  std::vector<std::vector<int>> candidates(n + 1);
  for (int a = 1; a <= n; ++a) {
    for (const int pid : tables.node_candidates[a]) {
      const NodePair p = tables.pairs[pid];
      bool keep = true;
      if (length >= 2) {
        if (a == 1) keep = p.contains(2);
        else if (a < length) keep = p == NodePair(a - 1, a + 1);
        else if (a == length) keep = p.contains(length - 1);
      }
      if (keep) candidates[a].push_back(pid);
    }
  }
  return candidates;
}

int longest_component(const GromovStructure& s) {
  int longest = 0;
  for (const ChainComponent& comp : chain_decomposition(s).components)
    longest = std::max(longest, comp.size());
  return longest;
}

}  // namespace

void enumerate_allowable(
    int n, EnumerationMode mode,
    const std::function<void(const GromovStructure&)>& sink, int workers) {
  if (n < kMinCatalogPoints || n > kMaxCatalogPoints) throw UnsupportedN(n);
  const SearchTables tables(n);

  if (mode == EnumerationMode::kFull) {
    std::vector<std::vector<int>> candidates(n + 1);
    for (int a = 1; a <= n; ++a) candidates[a] = tables.node_candidates[a];
    run_search(tables, candidates, sink, workers);
    return;
  }

  // Chain-seeded: one pass per longest-component length. Lengths partition
  // the classes, so the union hits every class; the exact-length filter
  // keeps the passes disjoint.
  for (int length = n; length >= 1; --length) {
    auto filtered = [&](const GromovStructure& s) {
      if (longest_component(s) == length) sink(s);
    };
    run_search(tables, seeded_candidates(tables, length), filtered, workers);
  }
}

std::vector<GromovStructure> collect_allowable(int n, EnumerationMode mode,
                                               int workers) {
  std::vector<GromovStructure> out;
  std::mutex m;
  enumerate_allowable(
      n, mode,
      [&](const GromovStructure& s) {
        std::scoped_lock lock(m);
        out.push_back(s);
      },
      workers);
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t raw_candidate_count(int n) {
  const std::int64_t per_node = static_cast<std::int64_t>(n - 1) * (n - 2) / 2;
  std::int64_t total = 1;
  for (int a = 0; a < n; ++a) total *= per_node;
  return total;
}

}  // namespace gromov
