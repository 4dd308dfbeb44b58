#pragma once

// Random regular graphs and their local tree-like geometry.
//
// The sampler is the pairing (configuration) model with a full restart on the
// first self-loop or multi-edge. Restarting on the first defect is an exact
// rejection step, so accepted graphs are uniform over simple d-regular graphs
// on n labeled vertices. The acceptance rate is asymptotically
// exp(-(d-1)/2 - (d-1)^2/4), which is ~0.135 for d=3 and ~1.5e-7 for d=8 —
// tolerable for desk-scale n, and the reason `below()` uses Lemire rejection.
//
// Ball convention used throughout: B_k(x) contains the vertices at distance
// at most k from x and the edges incident to a vertex at distance strictly
// less than k. Under this convention B_1(x) is always a star, so the acyclic
// radius satisfies R(x) >= 1 on every simple graph; frontier-to-frontier
// edges at depth k belong to B_{k+1}, not B_k.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "rng.hpp"

namespace regspec {

using json = nlohmann::ordered_json;

struct regular_graph {
  int n = 0;
  int d = 0;
  std::vector<int> adj;  // n*d, sorted within each vertex block

  int nb(int x, int k) const { return adj[(std::size_t)x * d + k]; }

  bool has_edge(int u, int v) const {
    const int* b = &adj[(std::size_t)u * d];
    return std::binary_search(b, b + d, v);
  }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> e;
    e.reserve((std::size_t)n * d / 2);
    for (int u = 0; u < n; ++u)
      for (int k = 0; k < d; ++k)
        if (u < nb(u, k)) e.emplace_back(u, nb(u, k));
    std::sort(e.begin(), e.end());
    return e;
  }

  void validate() const {
    require(d >= 3, "regular_graph: d must be >= 3");
    require(n > d, "regular_graph: n must exceed d");
    require((std::int64_t)n * d % 2 == 0, "regular_graph: n*d must be even");
    require((int)adj.size() == n * d, "regular_graph: adjacency size mismatch");
    for (int u = 0; u < n; ++u) {
      for (int k = 0; k < d; ++k) {
        int v = nb(u, k);
        require(v >= 0 && v < n && v != u, "regular_graph: bad neighbor");
        require(k == 0 || nb(u, k - 1) < v,
                "regular_graph: neighbors not sorted/distinct");
        require(has_edge(v, u), "regular_graph: adjacency not symmetric");
      }
    }
  }
};

inline regular_graph graph_from_edges(int n, int d,
                                      const std::vector<std::pair<int, int>>& edges) {
  regular_graph g;
  g.n = n;
  g.d = d;
  g.adj.assign((std::size_t)n * d, -1);
  std::vector<int> fill(n, 0);
  for (auto [u, v] : edges) {
    require(u >= 0 && u < n && v >= 0 && v < n && u != v,
            "graph_from_edges: bad edge");
    require(fill[u] < d && fill[v] < d, "graph_from_edges: degree overflow");
    g.adj[(std::size_t)u * d + fill[u]++] = v;
    g.adj[(std::size_t)v * d + fill[v]++] = u;
  }
  for (int u = 0; u < n; ++u) {
    require(fill[u] == d, "graph_from_edges: degree deficit");
    std::sort(g.adj.begin() + (std::size_t)u * d,
              g.adj.begin() + (std::size_t)(u + 1) * d);
  }
  g.validate();
  return g;
}

struct sample_stats {
  std::uint64_t attempts = 0;    // pairings started (restarts + 1)
  std::uint64_t pair_draws = 0;  // stub pairs drawn in total
};

// Uniform simple d-regular graph via pairing with full restart.
inline regular_graph sample_regular_graph(int n, int d, std::uint64_t seed,
                                          sample_stats* stats = nullptr,
                                          std::uint64_t max_attempts = 50000000ull) {
  require(d >= 3, "sample_regular_graph: d must be >= 3");
  require(n > d, "sample_regular_graph: n must exceed d");
  require((std::int64_t)n * d % 2 == 0, "sample_regular_graph: n*d must be even");

  rng gen(derive_seed(seed, 0x5a3c, (std::uint64_t)n, (std::uint64_t)d));
  const int stubs_total = n * d;
  std::vector<int> stubs(stubs_total);
  std::vector<int> deg(n);
  regular_graph g;
  g.n = n;
  g.d = d;
  g.adj.assign((std::size_t)n * d, -1);
  sample_stats local;

  for (;;) {
    if (++local.attempts > max_attempts)
      throw budget_exceeded("sample_regular_graph: restart cap exceeded (" +
                            std::to_string(max_attempts) + " attempts)");
    for (int s = 0; s < stubs_total; ++s) stubs[s] = s / d;
    std::fill(deg.begin(), deg.end(), 0);
    int remaining = stubs_total;
    bool ok = true;
    while (remaining > 0) {
      ++local.pair_draws;
      int i = (int)gen.below(remaining);
      int u = stubs[i];
      stubs[i] = stubs[--remaining];
      int j = (int)gen.below(remaining);
      int v = stubs[j];
      stubs[j] = stubs[--remaining];
      if (u == v) {  // self-loop: reject the whole pairing
        ok = false;
        break;
      }
      bool dup = false;  // multi-edge: scan u's current neighbors (<= d)
      const int* nu = &g.adj[(std::size_t)u * d];
      for (int k = 0; k < deg[u]; ++k)
        if (nu[k] == v) {
          dup = true;
          break;
        }
      if (dup) {
        ok = false;
        break;
      }
      g.adj[(std::size_t)u * d + deg[u]++] = v;
      g.adj[(std::size_t)v * d + deg[v]++] = u;
    }
    if (ok) break;
  }
  for (int u = 0; u < n; ++u)
    std::sort(g.adj.begin() + (std::size_t)u * d,
              g.adj.begin() + (std::size_t)(u + 1) * d);
  if (stats) *stats = local;
  g.validate();
  return g;
}

struct radius_result {
  int r = 0;       // max k such that B_k(x) is acyclic
  int r_star = 0;  // r rounded down to odd
};

// BFS from x. A non-tree edge whose endpoints sit at levels (lu, lv) first
// enters the ball at B_{min(lu,lv)+1} (the edge needs an endpoint strictly
// inside), so R = min over non-tree edges of min(lu, lv); if the component is
// acyclic R is the eccentricity. `max_level` caps the search: the return is
// then min(R, max_level), which is all tree_like_fraction needs.
inline radius_result acyclic_radius(const regular_graph& g, int x,
                                    int max_level = std::numeric_limits<int>::max()) {
  require(x >= 0 && x < g.n, "acyclic_radius: vertex out of range");
  std::vector<int> level(g.n, -1), parent(g.n, -1);
  std::vector<int> queue;
  queue.reserve(64);
  queue.push_back(x);
  level[x] = 0;
  int best = std::numeric_limits<int>::max();
  int ecc = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    int lv = level[v];
    if (lv >= max_level || lv >= best) break;
    for (int k = 0; k < g.d; ++k) {
      int w = g.nb(v, k);
      if (w == parent[v]) continue;  // unique in a simple graph
      if (level[w] < 0) {
        level[w] = lv + 1;
        parent[w] = v;
        ecc = std::max(ecc, lv + 1);
        queue.push_back(w);
      } else {
        best = std::min(best, std::min(lv, level[w]));
      }
    }
  }
  radius_result res;
  res.r = (best == std::numeric_limits<int>::max()) ? ecc : best;
  if (max_level != std::numeric_limits<int>::max())
    res.r = std::min(res.r, max_level);
  require(res.r >= 1, "acyclic_radius: R >= 1 must hold on simple graphs");
  res.r_star = (res.r % 2 == 1) ? res.r : res.r - 1;
  return res;
}

inline double tree_like_fraction(const regular_graph& g, int k) {
  require(k >= 1, "tree_like_fraction: k must be >= 1");
  int count = 0;
  for (int x = 0; x < g.n; ++x)
    if (acyclic_radius(g, x, k).r >= k) ++count;
  return (double)count / g.n;
}

struct cycle_census_result {
  int kmax = 0;
  std::vector<long long> counts;  // counts[k] for k = 3..kmax

  long long at(int k) const {
    require(k >= 3 && k <= kmax, "cycle_census: k out of range");
    return counts[k - 3];
  }
};

namespace detail {

inline void census_dfs(const regular_graph& g, int root, int v, int first,
                       int depth, int kmax, std::vector<char>& on_path,
                       std::vector<long long>& counts, work_budget& budget) {
  budget.charge(1, "cycle_census");
  for (int k = 0; k < g.d; ++k) {
    int w = g.nb(v, k);
    if (w == root) {
      // Closing edge: count once per undirected cycle by requiring the
      // first step to be the smaller endpoint of the two root neighbors.
      if (depth >= 2 && first < v) counts[depth + 1 - 3] += 1;
      continue;
    }
    if (w < root || on_path[w]) continue;
    if (depth + 1 > kmax - 1) continue;
    on_path[w] = 1;
    census_dfs(g, root, w, first, depth + 1, kmax, on_path, counts, budget);
    on_path[w] = 0;
  }
}

}  // namespace detail

// Exact cycle counts for lengths 3..kmax. Each cycle is enumerated exactly
// once: rooted at its minimum vertex and oriented toward the smaller of the
// root's two cycle neighbors.
inline cycle_census_result cycle_census(const regular_graph& g, int kmax,
                                        work_budget* budget = nullptr) {
  require(kmax >= 3 && kmax <= 20, "cycle_census: kmax must be in [3, 20]");
  work_budget own;
  work_budget& b = budget ? *budget : own;
  cycle_census_result res;
  res.kmax = kmax;
  res.counts.assign(kmax - 2, 0);
  std::vector<char> on_path(g.n, 0);
  for (int root = 0; root < g.n; ++root) {
    on_path[root] = 1;
    for (int k = 0; k < g.d; ++k) {
      int v = g.nb(root, k);
      if (v < root) continue;
      on_path[v] = 1;
      detail::census_dfs(g, root, v, v, 1, kmax, on_path, res.counts, b);
      on_path[v] = 0;
    }
    on_path[root] = 0;
  }
  return res;
}

struct truncated_tree {
  int d = 0;
  int depth = 0;
  bool rooted = false;  // false: root has d children; true: d-1 children
  int n = 0;
  std::vector<int> parent;       // parent[0] = -1
  std::vector<int> level;        // BFS depth
  std::vector<int> first_child;  // children are contiguous in BFS order
  std::vector<int> child_count;
};

inline std::int64_t truncated_tree_size(int d, int depth, bool rooted) {
  std::int64_t total = 1, shell = rooted ? d - 1 : d;
  for (int l = 1; l <= depth; ++l) {
    total += shell;
    shell *= (d - 1);
    if (total > (std::int64_t)1 << 40) return total;  // caller guards
  }
  return total;
}

inline truncated_tree build_truncated_tree(int d, int depth, bool rooted = false,
                                           std::int64_t max_vertices = 10000000) {
  require(d >= 3, "build_truncated_tree: d must be >= 3");
  require(depth >= 0, "build_truncated_tree: depth must be >= 0");
  std::int64_t size = truncated_tree_size(d, depth, rooted);
  if (size > max_vertices)
    throw budget_exceeded("build_truncated_tree: " + std::to_string(size) +
                          " vertices exceed the cap of " +
                          std::to_string(max_vertices));
  truncated_tree t;
  t.d = d;
  t.depth = depth;
  t.rooted = rooted;
  t.n = (int)size;
  t.parent.assign(t.n, -1);
  t.level.assign(t.n, 0);
  t.first_child.assign(t.n, 0);
  t.child_count.assign(t.n, 0);
  int next = 1;
  for (int u = 0; u < t.n; ++u) {
    int want = (t.level[u] >= depth) ? 0
               : (u == 0 ? (rooted ? d - 1 : d) : d - 1);
    t.first_child[u] = next;
    t.child_count[u] = want;
    for (int c = 0; c < want; ++c) {
      t.parent[next] = u;
      t.level[next] = t.level[u] + 1;
      ++next;
    }
  }
  require(next == t.n, "build_truncated_tree: layout mismatch");
  return t;
}

// Universal-cover projection, truncated at `depth`: tree vertex u (a
// non-backtracking walk from x) maps to the walk's endpoint image[u]. The
// children of u enumerate the sorted neighbors of image[u] minus the parent
// image. On B_{R(x)} this is the graph/tree isomorphism; beyond R it wraps
// around cycles, which is exactly what pulled-back potentials need.
struct covering_map_result {
  truncated_tree tree;
  std::vector<int> image;
};

inline covering_map_result covering_map(const regular_graph& g, int x, int depth) {
  covering_map_result cm;
  cm.tree = build_truncated_tree(g.d, depth, /*rooted=*/false);
  cm.image.assign(cm.tree.n, -1);
  cm.image[0] = x;
  for (int u = 0; u < cm.tree.n; ++u) {
    if (cm.tree.child_count[u] == 0) continue;
    int gu = cm.image[u];
    int avoid = (u == 0) ? -1 : cm.image[cm.tree.parent[u]];
    int c = cm.tree.first_child[u];
    for (int k = 0; k < g.d; ++k) {
      int w = g.nb(gu, k);
      if (w == avoid) {
        avoid = -2;  // skip exactly one occurrence (simple graph: unique)
        continue;
      }
      cm.image[c++] = w;
    }
    require(c == cm.tree.first_child[u] + cm.tree.child_count[u],
            "covering_map: child count mismatch");
  }
  return cm;
}

inline std::vector<int> ball_vertices(const regular_graph& g, int x, int r) {
  require(x >= 0 && x < g.n && r >= 0, "ball_vertices: bad arguments");
  std::vector<int> level(g.n, -1);
  std::vector<int> out{x};
  level[x] = 0;
  for (std::size_t head = 0; head < out.size(); ++head) {
    int v = out[head];
    if (level[v] >= r) continue;
    for (int k = 0; k < g.d; ++k) {
      int w = g.nb(v, k);
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Interchange format: {"n": int, "d": int, "edges": [[u,v], ...]} with u < v
// and edges sorted lexicographically.
inline json graph_to_json(const regular_graph& g) {
  json j;
  j["n"] = g.n;
  j["d"] = g.d;
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back(json::array({u, v}));
  j["edges"] = std::move(edges);
  return j;
}

inline regular_graph graph_from_json(const json& j) {
  require(j.contains("n") && j.contains("d") && j.contains("edges"),
          "graph_from_json: missing fields");
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j["edges"])
    edges.emplace_back((int)e.at(0), (int)e.at(1));
  return graph_from_edges((int)j["n"], (int)j["d"], edges);
}

}  // namespace regspec
