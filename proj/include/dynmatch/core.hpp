#pragma once

#include <compare>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynmatch {

struct InvalidVertex : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SelfLoop : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DuplicateEdge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingEdge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/**
 * Undirected edge with endpoints stored in sorted order, so {3,7} and {7,3}
 * compare equal and can key ordered containers.
 */
struct Edge {
  int u = -1;
  int v = -1;

  Edge() = default;
  Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

  auto operator<=>(const Edge&) const = default;

  bool touches(int x) const { return u == x || v == x; }
  int other(int x) const { return u == x ? v : u; }
};

std::string to_string(const Edge& e);

/**
 * Simple undirected graph on a fixed vertex set {0, ..., n-1} supporting
 * edge insertion and deletion. Neighbor sets are ordered so that iteration
 * is deterministic.
 */
class DynamicGraph {
 public:
  explicit DynamicGraph(int n);

  int n() const { return static_cast<int>(adj_.size()); }
  int m() const { return static_cast<int>(edges_.size()); }

  void insert_edge(Edge e);
  void delete_edge(Edge e);

  bool has_edge(Edge e) const;
  int degree(int v) const;
  const std::set<int>& neighbors(int v) const;
  const std::set<Edge>& edges() const { return edges_; }

  void check_vertex(int v) const;

 private:
  std::vector<std::set<int>> adj_;
  std::set<Edge> edges_;
};

/**
 * Matching on {0, ..., n-1}: an edge set in which no vertex appears twice,
 * with O(1) mate lookup. add() rejects conflicting edges.
 */
class Matching {
 public:
  explicit Matching(int n) : mate_(n, -1) {}

  int n() const { return static_cast<int>(mate_.size()); }
  int size() const { return static_cast<int>(edges_.size()); }
  bool empty() const { return edges_.empty(); }

  bool covers(int v) const { return mate_.at(v) != -1; }
  int mate(int v) const { return mate_.at(v); }
  bool contains(Edge e) const { return edges_.count(e) != 0; }

  void add(Edge e);
  void remove(Edge e);
  void clear();

  const std::set<Edge>& edges() const { return edges_; }

 private:
  std::vector<int> mate_;
  std::set<Edge> edges_;
};

// True iff every edge of m is an edge of g and no two edges share a vertex.
bool matching_is_valid(const DynamicGraph& g, const Matching& m);

}  // namespace dynmatch
