#pragma once

#include <map>
#include <optional>
#include <set>

#include "dynmatch/core.hpp"
#include "dynmatch/rational.hpp"

namespace dynmatch {

struct TooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InfeasibleWitness : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  int max_edges_exhaustive = 24;  // branch-and-bound ceiling for general graphs
  int max_n_bipartite = 5000;     // augmenting-path ceiling for bipartite graphs
};

// Two-colorability; the certificate side sets are used by the bipartite solver.
bool is_bipartite(const DynamicGraph& g, std::vector<int>* color = nullptr);

// Maximum matching size of a bipartite graph via repeated layered augmentation.
// Throws TooLarge past limits.max_n_bipartite and std::invalid_argument when
// the graph is not bipartite.
int max_matching_bipartite(const DynamicGraph& g, const OracleLimits& limits = {});

// Maximum matching size via exhaustive branch and bound over the edge list.
// Throws TooLarge past limits.max_edges_exhaustive.
int max_matching_exhaustive(const DynamicGraph& g, const OracleLimits& limits = {});

// Dispatches to the bipartite solver when the graph is two-colorable, else to
// the exhaustive one. The reference value everything else is tested against.
int exact_max_matching(const DynamicGraph& g, const OracleLimits& limits = {});

// An actual maximum matching (not just its size), found exhaustively; ties
// broken by edge order. Throws TooLarge past limits.max_edges_exhaustive.
Matching max_matching_witness(const DynamicGraph& g,
                              const OracleLimits& limits = {});

// Maximum total weight over all matchings; edges without a weight entry count
// as weight 0. Exhaustive; throws TooLarge past limits.max_edges_exhaustive.
Rational exact_mwm(const DynamicGraph& g, const std::map<Edge, Rational>& w,
                   const OracleLimits& limits = {});

// Value of the fractional matching built from a degree-bounded subgraph H and
// a maximum matching mstar: edges of H outside mstar carry 1/d, edges of H
// inside mstar carry max{1 - (deg_H(u)+deg_H(v)-2)/d, 0}. Throws
// InfeasibleWitness when some vertex total exceeds 1 (bad preconditions).
Rational kernel_witness_value(int n, const std::set<Edge>& h_edges,
                              const Matching& mstar, const Rational& d);

// True iff mu(H) >= mu(G) / (2c(1+1/d)), both sides exact.
bool verify_kernel_matching_bound(const DynamicGraph& g,
                                  const std::set<Edge>& h_edges,
                                  const Rational& c, const Rational& d,
                                  const OracleLimits& limits = {});

// True iff sum of w_e >= mu(G) / (2 max{c, d}).
bool fractional_value_bound(const DynamicGraph& g,
                            const std::map<Edge, Rational>& w,
                            const Rational& c, const Rational& d,
                            const OracleLimits& limits = {});

// Size of the greedy maximal matching (edges in sorted order); mu(G) is at
// most twice this, which run-mode oracles use when exact sizes are infeasible.
int greedy_maximal_matching(const DynamicGraph& g);

}  // namespace dynmatch
