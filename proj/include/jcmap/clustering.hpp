#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/partition.hpp"
#include "jcmap/rng.hpp"

namespace jcmap {

enum class Method { louvain, vos };

inline const char* method_name(Method m) {
  return m == Method::louvain ? "louvain" : "vos";
}

inline Method parse_method(const std::string& name) {
  if (name == "louvain") return Method::louvain;
  if (name == "vos") return Method::vos;
  throw std::invalid_argument("unknown clustering method '" + name + "'");
}

struct QualityScore {
  Method method = Method::louvain;
  double value = 0.0;
  double resolution = 1.0;
};

struct ClusterConfig {
  Method method = Method::louvain;
  std::uint64_t seed = 1;
  double resolution = 1.0;          // gamma; scales the null model
  int local_moving_restarts = 1;    // independent runs; best partition kept
  double min_improvement = 1e-12;   // gain threshold for accepting a move

  void validate() const {
    if (resolution <= 0.0) throw std::invalid_argument("resolution must be > 0");
    if (min_improvement <= 0.0) throw std::invalid_argument("min-improvement must be > 0");
    if (local_moving_restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  }
};

// Newman-Girvan modularity with resolution gamma:
//   Q = (1/2m) * sum over ordered pairs (i,j) of
//       [w_ij - gamma * k_i * k_j / (2m)] * delta(c_i, c_j),
// the i = j pairs contributing only to the null term (w_ii = 0 here).
// Evaluated through the per-cluster aggregates W_C (ordered intra weight)
// and K_C (summed degree): Q = sum_C [ W_C/2m - gamma * (K_C/2m)^2 ].
inline double modularity(const SymmetricGraph& g, const Partition& p, double resolution = 1.0) {
  if (p.size() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  const double m = g.total_weight();
  if (g.node_count() == 0 || m == 0.0)
    throw std::invalid_argument("empty graph has no modularity");

  const int k = p.cluster_count();
  std::vector<double> intra(static_cast<std::size_t>(k), 0.0);
  std::vector<double> degree_sum(static_cast<std::size_t>(k), 0.0);
  for (const Edge& e : g.edges()) {
    const int cu = p.cluster_of(e.u);
    const int cv = p.cluster_of(e.v);
    if (cu == cv) intra[static_cast<std::size_t>(cu - 1)] += 2.0 * static_cast<double>(e.weight);
  }
  for (NodeId i = 1; i <= g.node_count(); ++i)
    degree_sum[static_cast<std::size_t>(p.cluster_of(i) - 1)] += g.degree(i);

  const double two_m = 2.0 * m;
  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    const double share = degree_sum[static_cast<std::size_t>(c)] / two_m;
    q += intra[static_cast<std::size_t>(c)] / two_m - resolution * share * share;
  }
  return q;
}

namespace detail {

// Undirected working graph for the optimization engine. May carry self-loop
// weight (aggregated intra-cluster mass); adjacency lists are sorted by
// neighbor so every traversal order is reproducible. Node ids are 0-based
// inside the engine.
struct WorkGraph {
  int n = 0;
  std::vector<std::size_t> off;  // n+1
  std::vector<int> adj;
  std::vector<double> w;       // pair weight A_ij per direction
  std::vector<double> self_w;  // A_ii (full ordered intra weight)
  std::vector<double> strength;  // k_i = self_w[i] + sum_j A_ij
  double two_m = 0.0;            // sum_i k_i
};

inline WorkGraph work_from_pairs(int n, const std::vector<int>& us, const std::vector<int>& vs,
                                 const std::vector<double>& ws) {
  WorkGraph g;
  g.n = n;
  g.off.assign(static_cast<std::size_t>(n) + 1, 0);
  g.self_w.assign(static_cast<std::size_t>(n), 0.0);
  for (std::size_t i = 0; i < us.size(); ++i) {
    ++g.off[static_cast<std::size_t>(us[i]) + 1];
    ++g.off[static_cast<std::size_t>(vs[i]) + 1];
  }
  for (std::size_t i = 1; i < g.off.size(); ++i) g.off[i] += g.off[i - 1];
  g.adj.resize(us.size() * 2);
  g.w.resize(us.size() * 2);
  std::vector<std::size_t> cursor(g.off.begin(), g.off.end() - 1);
  for (std::size_t i = 0; i < us.size(); ++i) {
    g.adj[cursor[static_cast<std::size_t>(us[i])]] = vs[i];
    g.w[cursor[static_cast<std::size_t>(us[i])]++] = ws[i];
    g.adj[cursor[static_cast<std::size_t>(vs[i])]] = us[i];
    g.w[cursor[static_cast<std::size_t>(vs[i])]++] = ws[i];
  }
  for (int u = 0; u < n; ++u) {
    const auto b = static_cast<std::ptrdiff_t>(g.off[static_cast<std::size_t>(u)]);
    const auto e = static_cast<std::ptrdiff_t>(g.off[static_cast<std::size_t>(u) + 1]);
    std::vector<std::pair<int, double>> nb;
    nb.reserve(static_cast<std::size_t>(e - b));
    for (auto i = b; i != e; ++i) nb.emplace_back(g.adj[static_cast<std::size_t>(i)], g.w[static_cast<std::size_t>(i)]);
    std::sort(nb.begin(), nb.end());
    for (auto i = b; i != e; ++i) {
      g.adj[static_cast<std::size_t>(i)] = nb[static_cast<std::size_t>(i - b)].first;
      g.w[static_cast<std::size_t>(i)] = nb[static_cast<std::size_t>(i - b)].second;
    }
  }
  g.strength.assign(static_cast<std::size_t>(n), 0.0);
  for (int u = 0; u < n; ++u) {
    double s = g.self_w[static_cast<std::size_t>(u)];
    for (auto i = g.off[static_cast<std::size_t>(u)]; i < g.off[static_cast<std::size_t>(u) + 1]; ++i)
      s += g.w[i];
    g.strength[static_cast<std::size_t>(u)] = s;
  }
  g.two_m = std::accumulate(g.strength.begin(), g.strength.end(), 0.0);
  return g;
}

inline WorkGraph work_from_symmetric(const SymmetricGraph& g) {
  std::vector<int> us, vs;
  std::vector<double> ws;
  us.reserve(g.edge_count());
  vs.reserve(g.edge_count());
  ws.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    us.push_back(e.u - 1);
    vs.push_back(e.v - 1);
    ws.push_back(static_cast<double>(e.weight));
  }
  return work_from_pairs(g.node_count(), us, vs, ws);
}

// Association-strength reweighting: s_ij = 2m * w_ij / (k_i * k_j). The VOS
// quality is the modularity of this transformed graph (see vos_quality).
inline WorkGraph work_from_association(const SymmetricGraph& g) {
  for (NodeId i = 1; i <= g.node_count(); ++i)
    if (g.degree(i) == 0.0)
      throw std::invalid_argument("isolated node " + std::to_string(i) +
                                  " has undefined association strength");
  const double two_m = 2.0 * g.total_weight();
  std::vector<int> us, vs;
  std::vector<double> ws;
  us.reserve(g.edge_count());
  vs.reserve(g.edge_count());
  ws.reserve(g.edge_count());
  for (const Edge& e : g.edges()) {
    us.push_back(e.u - 1);
    vs.push_back(e.v - 1);
    ws.push_back(two_m * static_cast<double>(e.weight) / (g.degree(e.u) * g.degree(e.v)));
  }
  return work_from_pairs(g.node_count(), us, vs, ws);
}

// Modularity of an engine graph under a 0-based dense community labeling.
inline double work_modularity(const WorkGraph& g, const std::vector<int>& comm,
                              double resolution) {
  int k = 0;
  for (int c : comm) k = std::max(k, c + 1);
  std::vector<double> intra(static_cast<std::size_t>(k), 0.0);
  std::vector<double> degree_sum(static_cast<std::size_t>(k), 0.0);
  for (int u = 0; u < g.n; ++u) {
    const int cu = comm[static_cast<std::size_t>(u)];
    degree_sum[static_cast<std::size_t>(cu)] += g.strength[static_cast<std::size_t>(u)];
    intra[static_cast<std::size_t>(cu)] += g.self_w[static_cast<std::size_t>(u)];
    for (auto i = g.off[static_cast<std::size_t>(u)]; i < g.off[static_cast<std::size_t>(u) + 1]; ++i)
      if (comm[static_cast<std::size_t>(g.adj[i])] == cu) intra[static_cast<std::size_t>(cu)] += g.w[i];
  }
  double q = 0.0;
  for (int c = 0; c < k; ++c) {
    const double share = degree_sum[static_cast<std::size_t>(c)] / g.two_m;
    q += intra[static_cast<std::size_t>(c)] / g.two_m - resolution * share * share;
  }
  return q;
}

// Renumbers community labels to the dense range 0..k-1 in order of first
// appearance. Returns k.
inline int renumber_communities(std::vector<int>& comm) {
  std::vector<int> remap(comm.size(), -1);
  int next = 0;
  for (int& c : comm) {
    if (remap[static_cast<std::size_t>(c)] < 0) remap[static_cast<std::size_t>(c)] = next++;
    c = remap[static_cast<std::size_t>(c)];
  }
  return next;
}

// One local-moving phase: repeated passes over the nodes in a seed-shuffled
// order, moving each node to the candidate with the largest quality gain as
// long as the gain exceeds eps. Candidates are the clusters of the node's
// neighbors plus a fresh empty cluster (detaching into a singleton can also
// improve quality). Ties keep the current cluster; among distinct candidates
// the lowest cluster id wins. Returns whether any node moved.
inline bool local_moving(const WorkGraph& g, std::vector<int>& comm, SplitMix64& rng,
                         double resolution, double eps) {
  const int n = g.n;
  if (n == 0) return false;
  int k = 1 + *std::max_element(comm.begin(), comm.end());
  // Community degree sums; communities may go empty and be reused for detaches.
  std::vector<double> comm_strength(static_cast<std::size_t>(n), 0.0);
  std::vector<int> comm_size(static_cast<std::size_t>(n), 0);
  for (int u = 0; u < n; ++u) {
    comm_strength[static_cast<std::size_t>(comm[static_cast<std::size_t>(u)])] +=
        g.strength[static_cast<std::size_t>(u)];
    ++comm_size[static_cast<std::size_t>(comm[static_cast<std::size_t>(u)])];
  }
  std::vector<int> free_ids;
  for (int c = k; c < n; ++c) free_ids.push_back(c);
  std::sort(free_ids.rbegin(), free_ids.rend());  // pop lowest first

  std::vector<double> affinity(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  const double inv_m = 2.0 / g.two_m;        // 1/m with m = two_m/2
  const double inv_two_m_sq = 2.0 / (g.two_m * g.two_m);

  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    shuffle(order, rng);
    for (int idx = 0; idx < n; ++idx) {
      const int u = order[static_cast<std::size_t>(idx)];
      const int cu = comm[static_cast<std::size_t>(u)];
      const double ku = g.strength[static_cast<std::size_t>(u)];

      touched.clear();
      for (auto i = g.off[static_cast<std::size_t>(u)]; i < g.off[static_cast<std::size_t>(u) + 1]; ++i) {
        const int c = comm[static_cast<std::size_t>(g.adj[i])];
        if (affinity[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        affinity[static_cast<std::size_t>(c)] += g.w[i];
      }

      const double aff_cu = affinity[static_cast<std::size_t>(cu)];
      const double strength_cu_rest = comm_strength[static_cast<std::size_t>(cu)] - ku;
      // Gain of moving u from cu to d (d's sums exclude u):
      //   (aff_d - aff_cu)/m - gamma*ku*(K_d - K_cu\u)/(2m^2)
      auto gain_to = [&](double aff_d, double strength_d) {
        return (aff_d - aff_cu) * inv_m -
               resolution * ku * (strength_d - strength_cu_rest) * inv_two_m_sq;
      };

      // Candidates ascend by id, so the first candidate reaching the maximal
      // gain is the lowest-id one; staying requires no gain at all.
      int best = cu;
      double best_gain = 0.0;
      std::sort(touched.begin(), touched.end());
      for (int d : touched) {
        if (d == cu) continue;
        const double gain =
            gain_to(affinity[static_cast<std::size_t>(d)], comm_strength[static_cast<std::size_t>(d)]);
        if (gain > best_gain + eps) {
          best_gain = gain;
          best = d;
        }
      }
      // Detaching into a fresh singleton: affinity 0, community strength 0.
      // Considered last, so an existing cluster wins an equal-gain tie.
      if (comm_size[static_cast<std::size_t>(cu)] > 1 && !free_ids.empty()) {
        const double gain = gain_to(0.0, 0.0);
        if (gain > best_gain + eps) {
          best = -1;  // marker: allocate a free community id
          best_gain = gain;
        }
      }

      if (best != cu && best_gain > eps) {
        int target = best;
        if (target == -1) {
          target = free_ids.back();
          free_ids.pop_back();
        }
        comm[static_cast<std::size_t>(u)] = target;
        comm_strength[static_cast<std::size_t>(cu)] -= ku;
        comm_strength[static_cast<std::size_t>(target)] += ku;
        --comm_size[static_cast<std::size_t>(cu)];
        ++comm_size[static_cast<std::size_t>(target)];
        if (comm_size[static_cast<std::size_t>(cu)] == 0) {
          free_ids.push_back(cu);
          std::sort(free_ids.rbegin(), free_ids.rend());
        }
        moved = true;
        any_move = true;
      }

      for (int c : touched) affinity[static_cast<std::size_t>(c)] = 0.0;
    }
  }
  return any_move;
}

// Collapses communities into super-nodes; comm must be dense 0..k-1.
inline WorkGraph aggregate(const WorkGraph& g, const std::vector<int>& comm, int k) {
  std::vector<double> self(static_cast<std::size_t>(k), 0.0);
  // Deterministic accumulation: scan nodes in order, bucket by (cu, cv).
  std::vector<std::vector<std::pair<int, double>>> buckets(static_cast<std::size_t>(k));
  for (int u = 0; u < g.n; ++u) {
    const int cu = comm[static_cast<std::size_t>(u)];
    self[static_cast<std::size_t>(cu)] += g.self_w[static_cast<std::size_t>(u)];
    for (auto i = g.off[static_cast<std::size_t>(u)]; i < g.off[static_cast<std::size_t>(u) + 1]; ++i) {
      const int v = g.adj[i];
      const int cv = comm[static_cast<std::size_t>(v)];
      if (cu == cv) {
        self[static_cast<std::size_t>(cu)] += g.w[i];  // each direction once => ordered intra weight
      } else if (cu < cv) {
        buckets[static_cast<std::size_t>(cu)].emplace_back(cv, g.w[i]);
      }
    }
  }
  std::vector<int> us, vs;
  std::vector<double> ws;
  for (int c = 0; c < k; ++c) {
    auto& b = buckets[static_cast<std::size_t>(c)];
    std::sort(b.begin(), b.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < b.size();) {
      std::size_t j = i;
      double sum = 0.0;
      while (j < b.size() && b[j].first == b[i].first) sum += b[j++].second;
      us.push_back(c);
      vs.push_back(b[i].first);
      ws.push_back(sum);
      i = j;
    }
  }
  WorkGraph out = work_from_pairs(k, us, vs, ws);
  out.self_w = std::move(self);
  // strengths must include the self weight
  for (int c = 0; c < k; ++c) {
    double s = out.self_w[static_cast<std::size_t>(c)];
    for (auto i = out.off[static_cast<std::size_t>(c)]; i < out.off[static_cast<std::size_t>(c) + 1]; ++i)
      s += out.w[i];
    out.strength[static_cast<std::size_t>(c)] = s;
  }
  out.two_m = std::accumulate(out.strength.begin(), out.strength.end(), 0.0);
  return out;
}

// Full local-moving + aggregation cycle (Blondel et al. style), iterated
// until neither a node-level pass over the base graph nor the aggregation
// ladder can improve the quality. The final flat labeling is therefore
// locally optimal under single-node moves on the base graph.
inline std::vector<int> optimize(const WorkGraph& base, SplitMix64& rng, double resolution,
                                 double eps) {
  std::vector<int> flat(static_cast<std::size_t>(base.n));
  std::iota(flat.begin(), flat.end(), 0);

  bool outer_changed = true;
  while (outer_changed) {
    outer_changed = false;

    if (local_moving(base, flat, rng, resolution, eps)) outer_changed = true;
    int k = renumber_communities(flat);
    if (k == base.n && !outer_changed) break;

    WorkGraph level = aggregate(base, flat, k);
    while (level.n > 1) {
      std::vector<int> comm(static_cast<std::size_t>(level.n));
      std::iota(comm.begin(), comm.end(), 0);
      if (!local_moving(level, comm, rng, resolution, eps)) break;
      outer_changed = true;
      const int k2 = renumber_communities(comm);
      for (int& c : flat) c = comm[static_cast<std::size_t>(c)];
      level = aggregate(level, comm, k2);
    }
  }
  return flat;
}

}  // namespace detail

// Quality of a partition under the association-strength normalization: the
// modularity of the graph reweighted by s_ij = 2m * w_ij / (k_i * k_j), using
// the reweighted graph's own degrees and total weight. On a regular graph the
// reweighting is a uniform scaling, so this collapses to plain modularity.
// The exact form is pinned by the brute-force oracle tests.
inline double vos_quality(const SymmetricGraph& g, const Partition& p, double resolution = 1.0) {
  if (p.size() != g.node_count())
    throw std::invalid_argument("partition does not cover the graph");
  if (g.node_count() == 0 || g.total_weight() == 0.0)
    throw std::invalid_argument("empty graph has no quality");
  for (NodeId i = 1; i <= g.node_count(); ++i)
    if (g.degree(i) == 0.0)
      throw std::invalid_argument("isolated node " + std::to_string(i) +
                                  " has undefined association strength");

  const double two_m = 2.0 * g.total_weight();
  const int k = p.cluster_count();
  std::vector<double> s_degree(static_cast<std::size_t>(g.node_count()), 0.0);
  std::vector<double> intra(static_cast<std::size_t>(k), 0.0);
  std::vector<double> degree_sum(static_cast<std::size_t>(k), 0.0);
  double s_total = 0.0;
  for (const Edge& e : g.edges()) {
    const double s = two_m * static_cast<double>(e.weight) / (g.degree(e.u) * g.degree(e.v));
    s_degree[static_cast<std::size_t>(e.u - 1)] += s;
    s_degree[static_cast<std::size_t>(e.v - 1)] += s;
    s_total += s;
    if (p.cluster_of(e.u) == p.cluster_of(e.v))
      intra[static_cast<std::size_t>(p.cluster_of(e.u) - 1)] += 2.0 * s;
  }
  for (NodeId i = 1; i <= g.node_count(); ++i)
    degree_sum[static_cast<std::size_t>(p.cluster_of(i) - 1)] +=
        s_degree[static_cast<std::size_t>(i - 1)];

  const double s_two_m = 2.0 * s_total;
  double v = 0.0;
  for (int c = 0; c < k; ++c) {
    const double share = degree_sum[static_cast<std::size_t>(c)] / s_two_m;
    v += intra[static_cast<std::size_t>(c)] / s_two_m - resolution * share * share;
  }
  return v;
}

// Seeded community detection: local moving over a shuffled node order plus
// aggregation into super-node graphs, repeated until no move improves the
// quality by more than cfg.min_improvement. Both methods share this engine;
// the VOS method runs it on the association-strength reweighted graph.
// Identical (graph, config) inputs always produce the identical partition.
// Disconnected inputs are fine: nodes of different components never share a
// cluster because moves only target neighboring clusters.
inline std::pair<Partition, QualityScore> cluster(const SymmetricGraph& g,
                                                  const ClusterConfig& cfg) {
  cfg.validate();
  if (g.node_count() == 0) throw std::invalid_argument("cannot cluster an empty graph");

  detail::WorkGraph base = cfg.method == Method::vos ? detail::work_from_association(g)
                                                     : detail::work_from_symmetric(g);
  if (base.two_m == 0.0) throw std::invalid_argument("cannot cluster a graph without edges");

  std::vector<int> best;
  double best_q = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.local_moving_restarts; ++r) {
    SplitMix64 rng(cfg.seed + static_cast<std::uint64_t>(r));
    std::vector<int> flat = detail::optimize(base, rng, cfg.resolution, cfg.min_improvement);
    const double q = detail::work_modularity(base, flat, cfg.resolution);
    if (q > best_q + cfg.min_improvement) {
      best_q = q;
      best = std::move(flat);
    }
  }

  Partition p = Partition::from_assignment(std::move(best));
  const double value = cfg.method == Method::vos ? vos_quality(g, p, cfg.resolution)
                                                 : modularity(g, p, cfg.resolution);
  return {std::move(p), QualityScore{cfg.method, value, cfg.resolution}};
}

}  // namespace jcmap
