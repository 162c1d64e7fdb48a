#include "dynmatch/oracles.hpp"

#include <algorithm>
#include <deque>
#include <vector>

namespace dynmatch {

bool is_bipartite(const DynamicGraph& g, std::vector<int>* color_out) {
  std::vector<int> color(g.n(), -1);
  for (int s = 0; s < g.n(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int y : g.neighbors(x)) {
        if (color[y] == -1) {
          color[y] = 1 - color[x];
          queue.push_back(y);
        } else if (color[y] == color[x]) {
          return false;
        }
      }
    }
  }
  if (color_out) *color_out = std::move(color);
  return true;
}

namespace {

// Layered BFS + DFS augmentation on the side-0 vertices. Standard scheme:
// each phase augments a maximal set of disjoint shortest paths.
struct BipartiteSolver {
  const DynamicGraph& g;
  const std::vector<int>& color;
  std::vector<int> mate;
  std::vector<int> dist;
  static constexpr int kInf = 1 << 29;

  explicit BipartiteSolver(const DynamicGraph& graph, const std::vector<int>& col)
      : g(graph), color(col), mate(graph.n(), -1), dist(graph.n(), kInf) {}

  bool bfs() {
    std::deque<int> queue;
    bool reachable_free = false;
    for (int v = 0; v < g.n(); ++v) {
      dist[v] = kInf;
      if (color[v] == 0 && mate[v] == -1) {
        dist[v] = 0;
        queue.push_back(v);
      }
    }
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int y : g.neighbors(x)) {
        if (mate[y] == -1) {
          reachable_free = true;
        } else if (dist[mate[y]] == kInf) {
          dist[mate[y]] = dist[x] + 1;
          queue.push_back(mate[y]);
        }
      }
    }
    return reachable_free;
  }

  bool dfs(int x) {
    for (int y : g.neighbors(x)) {
      int z = mate[y];
      if (z == -1 || (dist[z] == dist[x] + 1 && dfs(z))) {
        mate[x] = y;
        mate[y] = x;
        return true;
      }
    }
    dist[x] = kInf;
    return false;
  }

  int solve() {
    int size = 0;
    while (bfs()) {
      for (int v = 0; v < g.n(); ++v)
        if (color[v] == 0 && mate[v] == -1 && dfs(v)) ++size;
    }
    return size;
  }
};

struct ExhaustiveSolver {
  std::vector<Edge> edges;
  std::vector<char> used;
  int best = 0;

  void run(size_t idx, int size) {
    best = std::max(best, size);
    // Even matching every remaining edge cannot beat the incumbent.
    if (size + static_cast<int>(edges.size() - idx) <= best) return;
    if (idx == edges.size()) return;
    const Edge& e = edges[idx];
    if (!used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = 1;
      run(idx + 1, size + 1);
      used[e.u] = used[e.v] = 0;
    }
    run(idx + 1, size);
  }
};

struct ExhaustiveWeightedSolver {
  std::vector<Edge> edges;
  std::vector<Rational> weights;
  std::vector<Rational> suffix;  // total weight of edges idx..end
  std::vector<char> used;
  Rational best = 0;

  void run(size_t idx, const Rational& value) {
    if (value > best) best = value;
    if (idx == edges.size()) return;
    if (value + suffix[idx] <= best) return;
    const Edge& e = edges[idx];
    if (weights[idx] > 0 && !used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = 1;
      run(idx + 1, value + weights[idx]);
      used[e.u] = used[e.v] = 0;
    }
    run(idx + 1, value);
  }
};

std::vector<int> subgraph_degrees(int n, const std::set<Edge>& edges) {
  std::vector<int> deg(n, 0);
  for (const Edge& e : edges) {
    ++deg.at(e.u);
    ++deg.at(e.v);
  }
  return deg;
}

}  // namespace

int max_matching_bipartite(const DynamicGraph& g, const OracleLimits& limits) {
  if (g.n() > limits.max_n_bipartite)
    throw TooLarge("bipartite oracle limited to n <= " +
                   std::to_string(limits.max_n_bipartite));
  std::vector<int> color;
  if (!is_bipartite(g, &color))
    throw std::invalid_argument("graph is not bipartite");
  BipartiteSolver solver(g, color);
  return solver.solve();
}

int max_matching_exhaustive(const DynamicGraph& g, const OracleLimits& limits) {
  if (g.m() > limits.max_edges_exhaustive)
    throw TooLarge("exhaustive oracle limited to m <= " +
                   std::to_string(limits.max_edges_exhaustive));
  ExhaustiveSolver solver;
  solver.edges.assign(g.edges().begin(), g.edges().end());
  solver.used.assign(g.n(), 0);
  solver.run(0, 0);
  return solver.best;
}

int exact_max_matching(const DynamicGraph& g, const OracleLimits& limits) {
  if (is_bipartite(g) && g.n() <= limits.max_n_bipartite)
    return max_matching_bipartite(g, limits);
  return max_matching_exhaustive(g, limits);
}

namespace {

struct WitnessSolver {
  std::vector<Edge> edges;
  std::vector<char> used;
  std::vector<Edge> chosen;
  std::vector<Edge> best;

  void run(size_t idx) {
    if (chosen.size() > best.size()) best = chosen;
    if (chosen.size() + (edges.size() - idx) <= best.size()) return;
    if (idx == edges.size()) return;
    const Edge& e = edges[idx];
    if (!used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = 1;
      chosen.push_back(e);
      run(idx + 1);
      chosen.pop_back();
      used[e.u] = used[e.v] = 0;
    }
    run(idx + 1);
  }
};

}  // namespace

Matching max_matching_witness(const DynamicGraph& g,
                              const OracleLimits& limits) {
  if (g.m() > limits.max_edges_exhaustive)
    throw TooLarge("exhaustive oracle limited to m <= " +
                   std::to_string(limits.max_edges_exhaustive));
  WitnessSolver solver;
  solver.edges.assign(g.edges().begin(), g.edges().end());
  solver.used.assign(g.n(), 0);
  solver.run(0);
  Matching m(g.n());
  for (const Edge& e : solver.best) m.add(e);
  return m;
}

Rational exact_mwm(const DynamicGraph& g, const std::map<Edge, Rational>& w,
                   const OracleLimits& limits) {
  if (g.m() > limits.max_edges_exhaustive)
    throw TooLarge("exhaustive oracle limited to m <= " +
                   std::to_string(limits.max_edges_exhaustive));
  ExhaustiveWeightedSolver solver;
  for (const Edge& e : g.edges()) {
    solver.edges.push_back(e);
    auto it = w.find(e);
    solver.weights.push_back(it == w.end() ? Rational(0) : it->second);
  }
  solver.suffix.assign(solver.edges.size() + 1, Rational(0));
  for (size_t i = solver.edges.size(); i-- > 0;)
    solver.suffix[i] = solver.suffix[i + 1] + solver.weights[i];
  solver.used.assign(g.n(), 0);
  solver.run(0, Rational(0));
  return solver.best;
}

Rational kernel_witness_value(int n, const std::set<Edge>& h_edges,
                              const Matching& mstar, const Rational& d) {
  if (d <= 0) throw std::invalid_argument("d must be positive");
  std::vector<int> deg = subgraph_degrees(n, h_edges);
  std::vector<Rational> vertex_total(n, Rational(0));
  Rational value = 0;
  for (const Edge& e : h_edges) {
    Rational f;
    if (mstar.contains(e)) {
      f = Rational(1) - Rational(deg[e.u] + deg[e.v] - 2) / d;
      if (f < 0) f = 0;
    } else {
      f = Rational(1) / d;
    }
    value += f;
    vertex_total[e.u] += f;
    vertex_total[e.v] += f;
  }
  for (int v = 0; v < n; ++v) {
    if (vertex_total[v] > 1)
      throw InfeasibleWitness("witness mass " + format_rational(vertex_total[v]) +
                              " > 1 at vertex " + std::to_string(v));
  }
  return value;
}

namespace {
DynamicGraph subgraph_of(const DynamicGraph& g, const std::set<Edge>& edges) {
  DynamicGraph h(g.n());
  for (const Edge& e : edges) {
    if (!g.has_edge(e))
      throw std::invalid_argument("subgraph edge " + to_string(e) +
                                  " is not an edge of g");
    h.insert_edge(e);
  }
  return h;
}
}  // namespace

bool verify_kernel_matching_bound(const DynamicGraph& g,
                                  const std::set<Edge>& h_edges,
                                  const Rational& c, const Rational& d,
                                  const OracleLimits& limits) {
  DynamicGraph h = subgraph_of(g, h_edges);
  Rational mu_h = exact_max_matching(h, limits);
  Rational mu_g = exact_max_matching(g, limits);
  // mu(H) >= mu(G) / (2c(1+1/d))
  return mu_h * 2 * c * (1 + Rational(1) / d) >= mu_g;
}

bool fractional_value_bound(const DynamicGraph& g,
                            const std::map<Edge, Rational>& w,
                            const Rational& c, const Rational& d,
                            const OracleLimits& limits) {
  Rational total = 0;
  for (const auto& [e, we] : w) {
    (void)e;
    total += we;
  }
  Rational mu_g = exact_max_matching(g, limits);
  Rational denom = c > d ? c : d;
  return total * 2 * denom >= mu_g;
}

int greedy_maximal_matching(const DynamicGraph& g) {
  std::vector<char> used(g.n(), 0);
  int size = 0;
  for (const Edge& e : g.edges()) {
    if (!used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = 1;
      ++size;
    }
  }
  return size;
}

}  // namespace dynmatch
