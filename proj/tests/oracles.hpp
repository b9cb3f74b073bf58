// Independent test oracles: direct double-loop evaluations of the quality
// functions and exhaustive set-partition enumeration. Deliberately written
// against the formulas rather than the library's aggregated implementations.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/partition.hpp"
#include "jcmap/rng.hpp"

namespace oracles {

// Dense ordered-pair adjacency of a symmetric graph.
inline std::vector<std::vector<double>> adjacency(const jcmap::SymmetricGraph& g) {
  const int n = g.node_count();
  std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (const auto& e : g.edges()) {
    a[static_cast<std::size_t>(e.u - 1)][static_cast<std::size_t>(e.v - 1)] =
        static_cast<double>(e.weight);
    a[static_cast<std::size_t>(e.v - 1)][static_cast<std::size_t>(e.u - 1)] =
        static_cast<double>(e.weight);
  }
  return a;
}

// Q = (1/2m) sum_{i,j} [w_ij - gamma k_i k_j / 2m] delta(c_i, c_j), with the
// i = j pairs kept in the null term (w_ii = 0).
inline double naive_modularity(const jcmap::SymmetricGraph& g, const std::vector<int>& comm,
                               double gamma) {
  const int n = g.node_count();
  const auto a = adjacency(g);
  std::vector<double> k(static_cast<std::size_t>(n), 0.0);
  double two_m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      k[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      two_m += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  double q = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (comm[static_cast<std::size_t>(i)] != comm[static_cast<std::size_t>(j)]) continue;
      q += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
           gamma * k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)] / two_m;
    }
  return q / two_m;
}

// VOS quality: modularity of the association-strength matrix
// s_ij = 2m w_ij / (k_i k_j), using the s-matrix's own degrees and total.
inline double naive_vos_quality(const jcmap::SymmetricGraph& g, const std::vector<int>& comm,
                                double gamma) {
  const int n = g.node_count();
  const auto a = adjacency(g);
  std::vector<double> k(static_cast<std::size_t>(n), 0.0);
  double two_m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      k[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      two_m += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  std::vector<std::vector<double>> s(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0.0)
        s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            two_m * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] /
            (k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)]);

  std::vector<double> ks(static_cast<std::size_t>(n), 0.0);
  double two_ms = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ks[static_cast<std::size_t>(i)] += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      two_ms += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (comm[static_cast<std::size_t>(i)] != comm[static_cast<std::size_t>(j)]) continue;
      v += s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
           gamma * ks[static_cast<std::size_t>(i)] * ks[static_cast<std::size_t>(j)] / two_ms;
    }
  return v / two_ms;
}

// Enumerates every set partition of n elements as restricted growth strings,
// invoking fn with the 0-based labeling. Bell(8) = 4140.
inline void for_each_partition(int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  if (n == 0) {
    fn(labels);
    return;
  }
  auto rec = [&](auto&& self, int i, int max_label) -> void {
    if (i == n) {
      fn(labels);
      return;
    }
    for (int c = 0; c <= max_label + 1; ++c) {
      labels[static_cast<std::size_t>(i)] = c;
      self(self, i + 1, std::max(max_label, c));
    }
  };
  rec(rec, 1, 0);
}

// Exhaustive optimum of a quality function over all set partitions.
inline double best_partition_quality(
    int n, const std::function<double(const std::vector<int>&)>& quality) {
  double best = -1e300;
  for_each_partition(n, [&](const std::vector<int>& labels) {
    best = std::max(best, quality(labels));
  });
  return best;
}

// Adjusted Rand index between two labelings of the same node set. Used as a
// second, independent agreement measure next to Cramer's V.
inline double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  const auto n = a.size();
  int ka = 0, kb = 0;
  for (int x : a) ka = std::max(ka, x + 1);
  for (int x : b) kb = std::max(kb, x + 1);
  std::vector<std::vector<double>> table(static_cast<std::size_t>(ka),
                                         std::vector<double>(static_cast<std::size_t>(kb), 0.0));
  for (std::size_t i = 0; i < n; ++i)
    table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])] += 1.0;
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cells = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (int i = 0; i < ka; ++i) {
    double row = 0.0;
    for (int j = 0; j < kb; ++j) {
      sum_cells += choose2(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      row += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    sum_rows += choose2(row);
  }
  for (int j = 0; j < kb; ++j) {
    double col = 0.0;
    for (int i = 0; i < ka; ++i) col += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    sum_cols += choose2(col);
  }
  const double total = choose2(static_cast<double>(n));
  const double expected = sum_rows * sum_cols / total;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;  // both trivial partitions
  return (sum_cells - expected) / (maximum - expected);
}

// Random loop-free directed graph; regenerates until every node has at least
// one incident arc and the graph has at least one arc.
inline jcmap::CitationGraph random_connected_citation(int n, double p, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    jcmap::SplitMix64 rng(seed + attempt * 1000003ULL);
    std::vector<jcmap::Arc> arcs;
    for (jcmap::NodeId i = 1; i <= n; ++i)
      for (jcmap::NodeId j = 1; j <= n; ++j)
        if (i != j && rng.next_double() < p)
          arcs.push_back(jcmap::Arc{i, j, static_cast<jcmap::Weight>(1 + rng.next_below(4))});
    std::vector<char> touched(static_cast<std::size_t>(n), 0);
    for (const auto& a : arcs) {
      touched[static_cast<std::size_t>(a.source - 1)] = 1;
      touched[static_cast<std::size_t>(a.target - 1)] = 1;
    }
    bool all = !arcs.empty();
    for (char t : touched) all = all && t != 0;
    if (!all) continue;
    std::vector<std::string> labels;
    for (int i = 1; i <= n; ++i) labels.push_back("n" + std::to_string(i));
    return jcmap::CitationGraph(std::move(labels), std::move(arcs));
  }
}

}  // namespace oracles
