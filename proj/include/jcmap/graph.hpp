#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jcmap/partition.hpp"

namespace jcmap {

using Weight = std::int64_t;  // citation counts are integers

struct Arc {
  NodeId source = 0;
  NodeId target = 0;
  Weight weight = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

struct Edge {
  NodeId u = 0;  // u < v
  NodeId v = 0;
  Weight weight = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed weighted journal-journal citation graph. Nodes are the contiguous
// id range 1..n with one label each; at most one arc per ordered pair, all
// weights >= 1. Arcs are kept sorted by (source, target) so serialization is
// canonical. Values are immutable once built; the cleaning operations below
// return new graphs.
class CitationGraph {
 public:
  CitationGraph() = default;

  CitationGraph(std::vector<std::string> labels, std::vector<Arc> arcs)
      : labels_(std::move(labels)), arcs_(std::move(arcs)) {
    const NodeId n = static_cast<NodeId>(labels_.size());
    std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
      return std::pair(a.source, a.target) < std::pair(b.source, b.target);
    });
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
      const Arc& a = arcs_[i];
      if (a.source < 1 || a.source > n || a.target < 1 || a.target > n)
        throw std::invalid_argument("arc endpoint " + std::to_string(a.source) + "->" +
                                    std::to_string(a.target) + " out of node range 1.." +
                                    std::to_string(n));
      if (a.weight < 1)
        throw std::invalid_argument("arc weight must be a positive integer");
      if (i > 0 && arcs_[i - 1].source == a.source && arcs_[i - 1].target == a.target)
        throw std::invalid_argument("duplicate arc (" + std::to_string(a.source) + "," +
                                    std::to_string(a.target) + ")");
    }
    build_index();
  }

  NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }
  std::size_t arc_count() const { return arcs_.size(); }

  const std::string& label(NodeId id) const {
    return labels_.at(static_cast<std::size_t>(id - 1));
  }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Arc>& arcs() const { return arcs_; }

  // Arcs leaving `id`, sorted by target.
  std::span<const Arc> out_arcs(NodeId id) const {
    const auto b = out_offsets_.at(static_cast<std::size_t>(id - 1));
    const auto e = out_offsets_.at(static_cast<std::size_t>(id));
    return {arcs_.data() + b, e - b};
  }

  bool has_loops() const {
    return std::any_of(arcs_.begin(), arcs_.end(),
                       [](const Arc& a) { return a.source == a.target; });
  }

  Weight total_arc_weight() const {
    Weight w = 0;
    for (const Arc& a : arcs_) w += a.weight;
    return w;
  }

  friend bool operator==(const CitationGraph& a, const CitationGraph& b) {
    return a.labels_ == b.labels_ && a.arcs_ == b.arcs_;
  }

 private:
  void build_index() {
    out_offsets_.assign(labels_.size() + 1, 0);
    for (const Arc& a : arcs_) ++out_offsets_[static_cast<std::size_t>(a.source)];
    for (std::size_t i = 1; i < out_offsets_.size(); ++i)
      out_offsets_[i] += out_offsets_[i - 1];
  }

  std::vector<std::string> labels_;
  std::vector<Arc> arcs_;                // sorted by (source, target)
  std::vector<std::size_t> out_offsets_; // size n+1, into arcs_
};

// Undirected weighted graph obtained by symmetrizing a citation graph:
// w{u,v} = w(u->v) + w(v->u). Carries the total edge weight m and the
// weighted degree k_i of every node, the two quantities both quality
// functions are built from. No self-edges.
class SymmetricGraph {
 public:
  SymmetricGraph() = default;

  SymmetricGraph(std::vector<std::string> labels, std::vector<Edge> edges)
      : labels_(std::move(labels)), edges_(std::move(edges)) {
    const NodeId n = static_cast<NodeId>(labels_.size());
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (e.u < 1 || e.u > n || e.v < 1 || e.v > n)
        throw std::invalid_argument("edge endpoint out of node range");
      if (e.u == e.v) throw std::invalid_argument("self-edge not allowed");
      if (e.u > e.v) throw std::invalid_argument("edge endpoints must satisfy u < v");
      if (e.weight < 1) throw std::invalid_argument("edge weight must be a positive integer");
      if (i > 0 && edges_[i - 1].u == e.u && edges_[i - 1].v == e.v)
        throw std::invalid_argument("duplicate edge (" + std::to_string(e.u) + "," +
                                    std::to_string(e.v) + ")");
    }
    build_adjacency();
  }

  NodeId node_count() const { return static_cast<NodeId>(labels_.size()); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(NodeId id) const {
    return labels_.at(static_cast<std::size_t>(id - 1));
  }
  const std::vector<Edge>& edges() const { return edges_; }

  double total_weight() const { return total_weight_; }       // m
  double degree(NodeId id) const {                            // k_i
    return degree_.at(static_cast<std::size_t>(id - 1));
  }
  const std::vector<double>& degrees() const { return degree_; }

  std::span<const NodeId> neighbors(NodeId id) const {
    const auto b = offsets_[static_cast<std::size_t>(id - 1)];
    const auto e = offsets_[static_cast<std::size_t>(id)];
    return {adj_.data() + b, e - b};
  }
  std::span<const Weight> neighbor_weights(NodeId id) const {
    const auto b = offsets_[static_cast<std::size_t>(id - 1)];
    const auto e = offsets_[static_cast<std::size_t>(id)];
    return {adj_w_.data() + b, e - b};
  }

 private:
  void build_adjacency() {
    const std::size_t n = labels_.size();
    offsets_.assign(n + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[static_cast<std::size_t>(e.u)];
      ++offsets_[static_cast<std::size_t>(e.v)];
    }
    for (std::size_t i = 1; i <= n; ++i) offsets_[i] += offsets_[i - 1];
    adj_.resize(edges_.size() * 2);
    adj_w_.resize(edges_.size() * 2);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Edge& e : edges_) {
      adj_[cursor[static_cast<std::size_t>(e.u - 1)]] = e.v;
      adj_w_[cursor[static_cast<std::size_t>(e.u - 1)]++] = e.weight;
      adj_[cursor[static_cast<std::size_t>(e.v - 1)]] = e.u;
      adj_w_[cursor[static_cast<std::size_t>(e.v - 1)]++] = e.weight;
    }
    degree_.assign(n, 0.0);
    total_weight_ = 0.0;
    for (const Edge& e : edges_) {
      degree_[static_cast<std::size_t>(e.u - 1)] += static_cast<double>(e.weight);
      degree_[static_cast<std::size_t>(e.v - 1)] += static_cast<double>(e.weight);
      total_weight_ += static_cast<double>(e.weight);
    }
  }

  std::vector<std::string> labels_;
  std::vector<Edge> edges_;  // sorted, u < v
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adj_;
  std::vector<Weight> adj_w_;
  std::vector<double> degree_;
  double total_weight_ = 0.0;
};

struct CleaningReport {
  std::size_t loops_removed = 0;
  std::size_t arcs_removed_by_threshold = 0;
  std::size_t nodes_isolated_after_cleaning = 0;
};

// Drops journal self-citation arcs (source == target).
inline std::pair<CitationGraph, std::size_t> remove_loops(const CitationGraph& g) {
  std::vector<Arc> kept;
  kept.reserve(g.arc_count());
  std::size_t removed = 0;
  for (const Arc& a : g.arcs()) {
    if (a.source == a.target)
      ++removed;
    else
      kept.push_back(a);
  }
  return {CitationGraph(g.labels(), std::move(kept)), removed};
}

// Removes arcs with weight below `threshold`; nodes are retained even if they
// become isolated (component extraction handles those).
inline std::pair<CitationGraph, std::size_t> filter_min_weight(const CitationGraph& g,
                                                               Weight threshold) {
  if (threshold < 1) throw std::invalid_argument("minimum-weight threshold must be >= 1");
  std::vector<Arc> kept;
  kept.reserve(g.arc_count());
  std::size_t removed = 0;
  for (const Arc& a : g.arcs()) {
    if (a.weight < threshold)
      ++removed;
    else
      kept.push_back(a);
  }
  return {CitationGraph(g.labels(), std::move(kept)), removed};
}

inline std::size_t count_isolated_nodes(const CitationGraph& g) {
  std::vector<char> touched(static_cast<std::size_t>(g.node_count()), 0);
  for (const Arc& a : g.arcs()) {
    touched[static_cast<std::size_t>(a.source - 1)] = 1;
    touched[static_cast<std::size_t>(a.target - 1)] = 1;
  }
  return static_cast<std::size_t>(std::count(touched.begin(), touched.end(), 0));
}

// Sums the two cells (i,j) and (j,i) into one undirected edge weight.
inline SymmetricGraph symmetrize(const CitationGraph& g) {
  if (g.has_loops())
    throw std::invalid_argument("symmetrize requires a loop-free graph; run remove_loops first");
  std::vector<Edge> edges;
  edges.reserve(g.arc_count());
  for (const Arc& a : g.arcs())
    edges.push_back(Edge{std::min(a.source, a.target), std::max(a.source, a.target), a.weight});
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  std::vector<Edge> merged;
  merged.reserve(edges.size());
  for (const Edge& e : edges) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().weight += e.weight;
    else
      merged.push_back(e);
  }
  return SymmetricGraph(g.labels(), std::move(merged));
}

namespace detail {

// Connected components over an adjacency given as a callback enumerating the
// undirected neighbors of each node. Returns components sorted by
// (size desc, smallest original id asc); members ascending within each.
template <typename NeighborFn>
std::vector<std::vector<NodeId>> components_impl(NodeId n, NeighborFn&& neighbors_of) {
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> stack;
  for (NodeId s = 1; s <= n; ++s) {
    if (comp[static_cast<std::size_t>(s - 1)] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    comp[static_cast<std::size_t>(s - 1)] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      out[static_cast<std::size_t>(id)].push_back(u);
      neighbors_of(u, [&](NodeId v) {
        if (comp[static_cast<std::size_t>(v - 1)] < 0) {
          comp[static_cast<std::size_t>(v - 1)] = id;
          stack.push_back(v);
        }
      });
    }
  }
  for (auto& c : out) std::sort(c.begin(), c.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

}  // namespace detail

// All weakly connected components (arcs treated as undirected), largest first,
// ties by smallest contained original node id.
inline std::vector<std::vector<NodeId>> components(const CitationGraph& g) {
  std::vector<std::vector<NodeId>> und(static_cast<std::size_t>(g.node_count()));
  for (const Arc& a : g.arcs()) {
    if (a.source == a.target) continue;
    und[static_cast<std::size_t>(a.source - 1)].push_back(a.target);
    und[static_cast<std::size_t>(a.target - 1)].push_back(a.source);
  }
  return detail::components_impl(g.node_count(), [&](NodeId u, auto&& visit) {
    for (NodeId v : und[static_cast<std::size_t>(u - 1)]) visit(v);
  });
}

inline std::vector<std::vector<NodeId>> components(const SymmetricGraph& g) {
  return detail::components_impl(g.node_count(), [&](NodeId u, auto&& visit) {
    for (NodeId v : g.neighbors(u)) visit(v);
  });
}

// A node-induced subgraph together with the original ids of its nodes:
// new id i corresponds to original_ids[i-1]. Renumbering preserves the
// relative order of original ids, and labels travel with the subgraph.
template <typename GraphT>
struct Subgraph {
  GraphT graph;
  std::vector<NodeId> original_ids;
};

// Induced subgraph on `members` (original ids, must be sorted ascending).
inline Subgraph<CitationGraph> induced_subgraph(const CitationGraph& g,
                                                const std::vector<NodeId>& members) {
  std::vector<NodeId> new_id(static_cast<std::size_t>(g.node_count()) + 1, 0);
  std::vector<std::string> labels;
  labels.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    new_id[static_cast<std::size_t>(members[i])] = static_cast<NodeId>(i + 1);
    labels.push_back(g.label(members[i]));
  }
  std::vector<Arc> arcs;
  for (const Arc& a : g.arcs()) {
    const NodeId s = new_id[static_cast<std::size_t>(a.source)];
    const NodeId t = new_id[static_cast<std::size_t>(a.target)];
    if (s != 0 && t != 0) arcs.push_back(Arc{s, t, a.weight});
  }
  return {CitationGraph(std::move(labels), std::move(arcs)), members};
}

inline Subgraph<SymmetricGraph> induced_subgraph(const SymmetricGraph& g,
                                                 const std::vector<NodeId>& members) {
  std::vector<NodeId> new_id(static_cast<std::size_t>(g.node_count()) + 1, 0);
  std::vector<std::string> labels;
  labels.reserve(members.size());
  for (std::size_t i = 0; i < members.size(); ++i) {
    new_id[static_cast<std::size_t>(members[i])] = static_cast<NodeId>(i + 1);
    labels.push_back(g.label(members[i]));
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    const NodeId u = new_id[static_cast<std::size_t>(e.u)];
    const NodeId v = new_id[static_cast<std::size_t>(e.v)];
    if (u != 0 && v != 0) edges.push_back(Edge{std::min(u, v), std::max(u, v), e.weight});
  }
  return {SymmetricGraph(std::move(labels), std::move(edges)), members};
}

// Largest weakly connected component, renumbered 1..n'. An empty graph yields
// an empty result rather than an error.
template <typename GraphT>
Subgraph<GraphT> largest_component(const GraphT& g) {
  if (g.node_count() == 0) return {GraphT(), {}};
  auto comps = components(g);
  return induced_subgraph(g, comps.front());
}

// Induced subgraph on the members of one cluster of a partition covering g.
template <typename GraphT>
Subgraph<GraphT> extract_subnetwork(const GraphT& g, const Partition& p, int cluster_id) {
  if (p.size() != g.node_count())
    throw std::invalid_argument("partition covers " + std::to_string(p.size()) +
                                " nodes but the graph has " + std::to_string(g.node_count()));
  if (!p.has_cluster(cluster_id))
    throw std::invalid_argument("unknown cluster id " + std::to_string(cluster_id));
  return induced_subgraph(g, p.members(cluster_id));
}

}  // namespace jcmap
