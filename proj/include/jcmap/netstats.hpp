#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jcmap/graph.hpp"

namespace jcmap {

struct NetworkStats {
  std::int64_t n_nodes = 0;
  std::int64_t n_links = 0;  // directed arcs
  double density = 0.0;      // n_links / (n * (n-1))
  double average_total_degree = 0.0;
  double average_out_degree = 0.0;
  double clustering_coefficient = 0.0;
  bool density_warning = false;  // set when n < 2
};

// Global transitivity ratio on the unweighted symmetrized graph:
// (number of closed wedges) / (number of wedges), i.e. 3T / sum_i C(deg_i, 2).
// Returns 0 when the graph has no wedge at all.
inline double clustering_coefficient(const SymmetricGraph& g) {
  const NodeId n = g.node_count();
  double wedges = 0.0;
  for (NodeId u = 1; u <= n; ++u) {
    const double d = static_cast<double>(g.neighbors(u).size());
    wedges += d * (d - 1.0) / 2.0;
  }
  if (wedges == 0.0) return 0.0;

  // Sum over edges of |N(u) ∩ N(v)| counts every triangle three times.
  double closed = 0.0;
  for (const Edge& e : g.edges()) {
    auto a = g.neighbors(e.u);
    auto b = g.neighbors(e.v);
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      if (a[i] == b[j]) {
        ++closed;
        ++i;
        ++j;
      } else if (a[i] < b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }
  return closed / wedges;
}

// Descriptive statistics of a loop-free citation graph. Density uses the
// ordered-pair denominator n(n-1); degrees are unweighted arc counts, so the
// average total degree is exactly twice the average out-degree.
inline NetworkStats network_stats(const CitationGraph& g) {
  if (g.has_loops())
    throw std::invalid_argument("network_stats requires a loop-free graph; run remove_loops first");
  NetworkStats s;
  s.n_nodes = g.node_count();
  s.n_links = static_cast<std::int64_t>(g.arc_count());
  if (s.n_nodes < 2) {
    s.density = 0.0;
    s.density_warning = true;
  } else {
    s.density = static_cast<double>(s.n_links) /
                (static_cast<double>(s.n_nodes) * static_cast<double>(s.n_nodes - 1));
  }
  if (s.n_nodes > 0) {
    s.average_out_degree = static_cast<double>(s.n_links) / static_cast<double>(s.n_nodes);
    s.average_total_degree = 2.0 * s.average_out_degree;
  }
  s.clustering_coefficient = clustering_coefficient(symmetrize(g));
  return s;
}

}  // namespace jcmap
