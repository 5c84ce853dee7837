#include "gromov/matrixrep.hpp"

#include <algorithm>
#include <numeric>

#include "gromov/errors.hpp"
#include "gromov/rational.hpp"

namespace gromov {

StructureMatrix structure_matrix(const GromovStructure& s) {
  const int n = s.size();
  StructureMatrix m;
  m.n = n;
  m.g.assign(static_cast<std::size_t>(n) * n, 0);
  m.h.assign(static_cast<std::size_t>(n) * n, 0);
  for (int a = 1; a <= n; ++a) {
    const NodePair p = s.pick(a);
    m.g[(a - 1) * n + (p.lo - 1)] = 1;
    m.g[(a - 1) * n + (p.hi - 1)] = 1;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.h[i * n + j] = (m.g[i * n + j] == 1 && m.g[j * n + i] == 1) ? 1 : 0;
  return m;
}

namespace {

std::vector<std::int64_t> mat_mul(const std::vector<std::int64_t>& a,
                                  const std::vector<std::int64_t>& b, int n) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const std::int64_t aik = a[i * n + k];
      if (aik == 0) continue;
      for (int j = 0; j < n; ++j) c[i * n + j] += aik * b[k * n + j];
    }
  return c;
}

std::int64_t trace(const std::vector<std::int64_t>& a, int n) {
  std::int64_t t = 0;
  for (int i = 0; i < n; ++i) t += a[i * n + i];
  return t;
}

// Rank over the rationals by fraction-free (Bareiss) elimination; entries of
// a structure matrix are tiny, so int64 never overflows here.
int rational_rank(std::vector<std::int64_t> a, int n) {
  int rank = 0;
  std::int64_t prev = 1;
  for (int col = 0; col < n && rank < n; ++col) {
    int pivot = -1;
    for (int r = rank; r < n; ++r)
      if (a[r * n + col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < n; ++j)
      std::swap(a[pivot * n + j], a[rank * n + j]);
    const std::int64_t piv = a[rank * n + col];
    for (int r = 0; r < n; ++r) {
      if (r == rank) continue;
      const std::int64_t factor = a[r * n + col];
      for (int j = 0; j < n; ++j)
        a[r * n + j] = (piv * a[r * n + j] - factor * a[rank * n + j]) / prev;
    }
    prev = piv;
    ++rank;
  }
  return rank;
}

// Digraph strong connectivity of a -> picks(a), by bitmask reachability.
bool strongly_connected(const GromovStructure& s) {
  const int n = s.size();
  std::array<unsigned, kMaxPoints + 1> reach{};
  for (int a = 1; a <= n; ++a) {
    unsigned r = 1u << a;
    bool grew = true;
    while (grew) {
      grew = false;
      for (int v = 1; v <= n; ++v) {
        if (!(r & (1u << v))) continue;
        const NodePair p = s.pick(v);
        const unsigned add = (1u << p.lo) | (1u << p.hi);
        if ((r | add) != r) {
          r |= add;
          grew = true;
        }
      }
    }
    reach[a] = r;
  }
  const unsigned full = ((1u << n) - 1u) << 1;
  for (int a = 1; a <= n; ++a)
    if (reach[a] != full) return false;
  return true;
}

}  // namespace

std::string type_label(const std::vector<ChainComponent>& components) {
  int cycles = 0;
  int largest = 0;
  for (const auto& comp : components) {
    if (comp.kind == ComponentKind::kCycle) ++cycles;
    largest = std::max(largest, comp.size());
  }
  std::string label;
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i > 0) label += '+';
    label += std::to_string(components[i].size());
    if (cycles >= 2 && components[i].kind == ComponentKind::kCycle)
      label += 'c';
  }
  if (cycles == 1)
    label += " (Cycle)";
  else if (cycles == 0 && largest >= 4)
    label += " (Chain)";
  return label;
}

ChainDecomposition chain_decomposition(const GromovStructure& s) {
  const int n = s.size();
  // Mutual-selection adjacency; max degree is 2 because each node picks
  // exactly two others.
  std::array<std::vector<int>, kMaxPoints + 1> adj;
  for (int a = 1; a <= n; ++a) {
    const NodePair p = s.pick(a);
    for (const int b : {static_cast<int>(p.lo), static_cast<int>(p.hi)})
      if (s.pick(b).contains(a)) adj[a].push_back(b);
  }

  ChainDecomposition dec;
  dec.n = n;
  std::array<bool, kMaxPoints + 1> used{};
  for (int start = 1; start <= n; ++start) {
    if (used[start]) continue;
    // Collect the component.
    std::vector<int> comp{start};
    used[start] = true;
    for (std::size_t i = 0; i < comp.size(); ++i)
      for (const int b : adj[comp[i]])
        if (!used[b]) {
          used[b] = true;
          comp.push_back(b);
        }

    ChainComponent out;
    const bool cycle =
        std::all_of(comp.begin(), comp.end(),
                    [&](int v) { return adj[v].size() == 2; }) &&
        comp.size() >= 3;
    if (comp.size() == 1) {
      out.kind = ComponentKind::kChain;
      out.nodes = comp;
    } else if (cycle) {
      out.kind = ComponentKind::kCycle;
      // Start at the minimal node, walk toward its smaller neighbor.
      const int first = *std::min_element(comp.begin(), comp.end());
      int prev = first;
      int cur = std::min(adj[first][0], adj[first][1]);
      out.nodes = {first};
      while (cur != first) {
        out.nodes.push_back(cur);
        const int next = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
      }
    } else {
      out.kind = ComponentKind::kChain;
      std::vector<int> ends;
      for (const int v : comp)
        if (adj[v].size() == 1) ends.push_back(v);
      const int first = *std::min_element(ends.begin(), ends.end());
      int prev = 0;
      int cur = first;
      while (true) {
        out.nodes.push_back(cur);
        int next = 0;
        for (const int b : adj[cur])
          if (b != prev) next = b;
        if (next == 0) break;
        prev = cur;
        cur = next;
      }
    }
    dec.components.push_back(std::move(out));
  }

  std::sort(dec.components.begin(), dec.components.end(),
            [](const ChainComponent& a, const ChainComponent& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              if (a.kind != b.kind) return a.kind == ComponentKind::kCycle;
              return a.nodes < b.nodes;
            });

  for (int v = 1; v <= n; ++v) {
    switch (adj[v].size()) {
      case 0: ++dec.roles.isolated; break;
      case 1: ++dec.roles.end; break;
      default: ++dec.roles.interior; break;
    }
  }
  dec.type_label = type_label(dec.components);
  return dec;
}

IrreducibilityResult is_irreducible(const StructureMatrix& m) {
  const int n = m.n;
  // sum = I + g + g^2 + ... + g^n
  std::vector<std::int64_t> sum(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::int64_t> power(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) power[i * n + i] = 1;
  for (int k = 0; k <= n; ++k) {
    for (int i = 0; i < n * n; ++i) sum[i] += power[i];
    if (k < n) power = mat_mul(power, m.g, n);
  }
  IrreducibilityResult res;
  for (int j = 0; j < n; ++j) {
    bool nonzero = true;
    for (int i = 0; i < n; ++i)
      if (sum[i * n + j] == 0) nonzero = false;
    if (nonzero) ++res.largest_block;
  }
  res.irreducible = res.largest_block == n;

  // Rebuild the structure from g for the connectivity cross-check.
  std::vector<std::array<int, 3>> picks;
  for (int i = 1; i <= n; ++i) {
    std::array<int, 3> t{i, 0, 0};
    for (int j = 1; j <= n; ++j)
      if (m.gat(i, j) == 1) (t[1] == 0 ? t[1] : t[2]) = j;
    picks.push_back(t);
  }
  if (strongly_connected(make_structure(n, picks)) != res.irreducible)
    throw InternalDefect(
        "power-sum irreducibility disagrees with strong connectivity");
  return res;
}

InvariantVector invariants(const StructureMatrix& m,
                           const GromovStructure& s) {
  const int n = m.n;
  InvariantVector inv;
  inv.n = n;
  const ChainDecomposition dec = chain_decomposition(s);
  inv.type_label = dec.type_label;
  inv.roles = dec.roles;
  inv.removed_edges = static_cast<int>(s.image().size());
  inv.rank = rational_rank(m.g, n);
  std::vector<std::int64_t> power = m.g;
  for (int k = 2; k <= n; ++k) {
    power = mat_mul(power, m.g, n);
    inv.trace_powers.push_back(trace(power, n));
  }
  inv.irreducible = is_irreducible(m).irreducible;
  return inv;
}

InvariantVector invariants(const GromovStructure& s) {
  return invariants(structure_matrix(s), s);
}

std::vector<ClosedSubset> closed_subsets(const GromovStructure& s) {
  const int n = s.size();
  std::vector<ClosedSubset> out;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    bool closed = true;
    for (int a = 1; a <= n && closed; ++a) {
      if (!(mask & (1u << (a - 1)))) continue;
      const NodePair p = s.pick(a);
      if (!(mask & (1u << (p.lo - 1))) || !(mask & (1u << (p.hi - 1))))
        closed = false;
    }
    if (!closed) continue;

    ClosedSubset sub;
    std::array<int, kMaxPoints + 1> compact{};
    for (int a = 1; a <= n; ++a)
      if (mask & (1u << (a - 1))) {
        sub.nodes.push_back(a);
        sub.index_map.push_back(a);
        compact[a] = static_cast<int>(sub.nodes.size());
      }
    std::vector<std::array<int, 3>> picks;
    for (const int a : sub.nodes) {
      const NodePair p = s.pick(a);
      picks.push_back({compact[a], compact[p.lo], compact[p.hi]});
    }
    sub.restriction = make_structure(static_cast<int>(sub.nodes.size()), picks);
    out.push_back(std::move(sub));
  }
  std::sort(out.begin(), out.end(),
            [](const ClosedSubset& a, const ClosedSubset& b) {
              if (a.nodes.size() != b.nodes.size())
                return a.nodes.size() < b.nodes.size();
              return a.nodes < b.nodes;
            });
  return out;
}

}  // namespace gromov
