#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jcmap/clustering.hpp"
#include "jcmap/graph.hpp"
#include "jcmap/partition.hpp"
#include "jcmap/rng.hpp"

namespace jcmap {

enum class SingletonPolicy { set_aside, keep };

enum class StopReason {
  none,            // node was split into children
  below_min_size,  // too small to decompose further
  max_depth,       // depth budget exhausted
  single_cluster,  // clustering found no decomposition
  all_singletons,  // split produced only set-aside singletons
  edgeless         // subnetwork has no edges left
};

inline const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::below_min_size: return "min-size";
    case StopReason::max_depth: return "max-depth";
    case StopReason::single_cluster: return "no-split";
    case StopReason::all_singletons: return "all-singletons";
    case StopReason::edgeless: return "edgeless";
  }
  return "?";
}

struct DecomposeConfig {
  Method method = Method::louvain;
  std::uint64_t root_seed = 1;
  double resolution = 1.0;
  NodeId min_size = 10;
  int max_depth = 5;
  SingletonPolicy singleton_policy = SingletonPolicy::set_aside;

  void validate() const {
    if (min_size < 1) throw std::invalid_argument("min-size must be >= 1");
    if (max_depth < 1) throw std::invalid_argument("max-depth must be >= 1");
    if (resolution <= 0.0) throw std::invalid_argument("resolution must be > 0");
  }
};

// One node of the classification tree. Paths follow the paper's dotted
// notation: the k-th child of a node extends the parent path with ".k"
// (top-level children are "1", "2", ...; the root path is empty). Members are
// original node ids of the decomposed graph.
struct TreeNode {
  std::string path;
  std::vector<NodeId> members;  // ascending original ids
  std::string label;            // analyst-supplied, empty until relabel()
  std::optional<QualityScore> split_quality;
  std::vector<TreeNode> children;              // ordered by decreasing size
  std::vector<NodeId> singletons_set_aside;    // members set aside at this split
  StopReason stop = StopReason::none;

  NodeId size() const { return static_cast<NodeId>(members.size()); }
};

struct ClusterTree {
  TreeNode root;
  std::vector<std::string> labels;  // labels of the source graph, node i at i-1
  std::size_t loops_removed = 0;
  int height = 0;  // depth of the deepest node; the root is depth 0
};

namespace detail {

inline void decompose_node(TreeNode& node, const CitationGraph& sub, int depth,
                           std::uint64_t node_seed, const DecomposeConfig& cfg,
                           int& height) {
  height = std::max(height, depth);
  if (depth >= cfg.max_depth) {
    node.stop = StopReason::max_depth;
    return;
  }
  // min-size gates recursion into children, never the root split itself
  if (depth > 0 && node.size() < cfg.min_size) {
    node.stop = StopReason::below_min_size;
    return;
  }
  if (sub.arc_count() == 0) {
    node.stop = StopReason::edgeless;
    return;
  }

  const SymmetricGraph sym = symmetrize(sub);
  ClusterConfig ccfg;
  ccfg.method = cfg.method;
  ccfg.seed = node_seed;
  ccfg.resolution = cfg.resolution;
  auto [part, quality] = cluster(sym, ccfg);
  node.split_quality = quality;

  if (part.cluster_count() == 1) {
    node.stop = StopReason::single_cluster;
    return;
  }

  int child_index = 0;
  for (int c = 1; c <= part.cluster_count(); ++c) {
    const std::vector<NodeId> local = part.members(c);  // ids within sub
    std::vector<NodeId> original;
    original.reserve(local.size());
    for (NodeId l : local) original.push_back(node.members[static_cast<std::size_t>(l - 1)]);

    if (local.size() == 1 && cfg.singleton_policy == SingletonPolicy::set_aside) {
      node.singletons_set_aside.push_back(original.front());
      continue;
    }

    ++child_index;
    TreeNode child;
    child.path = node.path.empty() ? std::to_string(child_index)
                                   : node.path + "." + std::to_string(child_index);
    child.members = original;

    auto extracted = induced_subgraph(sub, local);
    decompose_node(child, extracted.graph, depth + 1,
                   branch_seed(node_seed, static_cast<std::uint64_t>(child_index)), cfg,
                   height);
    node.children.push_back(std::move(child));
  }
  if (node.children.empty()) node.stop = StopReason::all_singletons;
}

}  // namespace detail

// Builds the dotted-path classification tree: removes loops, takes the
// largest weakly connected component, clusters it, and recursively re-clusters
// every sufficiently large child. Each node's clustering uses the seed
// branch_seed(parent seed, child index), folded from the root seed along the
// path, so the whole tree is reproducible and any subtree can be regenerated
// standalone from its own branch seed.
inline ClusterTree decompose(const CitationGraph& g, const DecomposeConfig& cfg) {
  cfg.validate();
  ClusterTree tree;
  tree.labels = g.labels();

  auto [clean, loops] = remove_loops(g);
  tree.loops_removed = loops;
  auto lc = largest_component(clean);

  tree.root.path = "";
  tree.root.members = lc.original_ids;
  if (tree.root.members.empty()) {
    tree.root.stop = StopReason::edgeless;
    return tree;
  }
  detail::decompose_node(tree.root, lc.graph, 0, cfg.root_seed, cfg, tree.height);
  return tree;
}

namespace detail {

template <typename Node>
Node* find_node_impl(Node* root, const std::string& path) {
  if (path.empty()) return root;
  Node* node = root;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const std::size_t dot = path.find('.', pos);
    const std::string part =
        path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (part.empty() ||
        !std::all_of(part.begin(), part.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      return nullptr;
    std::size_t index = 0;
    try {
      index = static_cast<std::size_t>(std::stoul(part));
    } catch (...) {
      return nullptr;
    }
    if (index < 1 || index > node->children.size()) return nullptr;
    node = &node->children[index - 1];
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  return node;
}

}  // namespace detail

inline const TreeNode* find_node(const ClusterTree& t, const std::string& path) {
  return detail::find_node_impl(&t.root, path);
}

// Attaches or overwrites the human label of the node at `path`. Labels are
// metadata only; membership and structure never change.
inline void relabel(ClusterTree& t, const std::string& path, std::string label) {
  TreeNode* found = detail::find_node_impl(&t.root, path);
  if (found == nullptr) throw std::invalid_argument("unknown tree path '" + path + "'");
  found->label = std::move(label);
}

// Flattens the tree at the given depth into a partition over the root's
// members (positions follow ascending original id). Nodes not decomposed that
// deep keep their shallower cluster; singletons set aside above the cut are
// their own clusters, exactly as in the split partitions they came from.
inline Partition tree_to_partition(const ClusterTree& t, int depth) {
  if (depth < 1) throw std::invalid_argument("depth must be >= 1");
  const std::vector<NodeId>& universe = t.root.members;

  std::vector<int> raw(universe.size(), 0);
  auto position = [&](NodeId original) {
    const auto it = std::lower_bound(universe.begin(), universe.end(), original);
    return static_cast<std::size_t>(it - universe.begin());
  };

  int next_cell = 0;
  auto assign = [&](auto&& self, const TreeNode& node, int remaining) -> void {
    const bool is_cut = remaining == 0 ||
                        (node.children.empty() && node.singletons_set_aside.empty());
    if (is_cut) {
      const int cell = ++next_cell;
      for (NodeId m : node.members) raw[position(m)] = cell;
      return;
    }
    for (const TreeNode& child : node.children) self(self, child, remaining - 1);
    for (NodeId s : node.singletons_set_aside) raw[position(s)] = ++next_cell;
  };
  assign(assign, t.root, depth);
  return Partition::from_assignment(std::move(raw));
}

// Overlap report between one tree node and an external category list, as in
// the paper's appendix comparison of an algorithmic cluster with a WoS
// subject category.
struct OverlapReport {
  std::vector<std::string> cluster_members;   // journal labels, sorted
  std::vector<std::string> external_members;  // the external list, deduplicated, sorted
  std::vector<std::string> intersection;
  std::vector<std::string> only_in_cluster;
  std::vector<std::string> only_in_external;
  std::vector<std::string> unmatched_external;  // external labels naming no journal at all
};

namespace detail {

// Case-insensitive (ASCII) comparison key with whitespace runs collapsed.
inline std::string normalize_label(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char ch : s) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isspace(u)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

}  // namespace detail

inline OverlapReport compare_external(const ClusterTree& t, const std::string& path,
                                      const std::vector<std::string>& external_labels) {
  const TreeNode* node = find_node(t, path);
  if (node == nullptr) throw std::invalid_argument("unknown tree path '" + path + "'");

  OverlapReport rep;

  std::vector<std::pair<std::string, std::string>> cluster_keys;  // (key, display)
  for (NodeId m : node->members) {
    const std::string& label = t.labels.at(static_cast<std::size_t>(m - 1));
    cluster_keys.emplace_back(detail::normalize_label(label), label);
    rep.cluster_members.push_back(label);
  }
  std::sort(rep.cluster_members.begin(), rep.cluster_members.end());

  std::vector<std::string> graph_keys;
  graph_keys.reserve(t.labels.size());
  for (const std::string& label : t.labels) graph_keys.push_back(detail::normalize_label(label));
  std::sort(graph_keys.begin(), graph_keys.end());

  std::vector<std::pair<std::string, std::string>> external_keys;
  for (const std::string& e : external_labels) {
    const std::string key = detail::normalize_label(e);
    const bool seen = std::any_of(external_keys.begin(), external_keys.end(),
                                  [&](const auto& p) { return p.first == key; });
    if (!seen) external_keys.emplace_back(key, e);
  }
  for (const auto& [key, display] : external_keys) rep.external_members.push_back(display);
  std::sort(rep.external_members.begin(), rep.external_members.end());

  auto in_cluster = [&](const std::string& key) {
    return std::any_of(cluster_keys.begin(), cluster_keys.end(),
                       [&](const auto& p) { return p.first == key; });
  };
  auto in_external = [&](const std::string& key) {
    return std::any_of(external_keys.begin(), external_keys.end(),
                       [&](const auto& p) { return p.first == key; });
  };

  for (const auto& [key, display] : cluster_keys) {
    if (in_external(key))
      rep.intersection.push_back(display);
    else
      rep.only_in_cluster.push_back(display);
  }
  for (const auto& [key, display] : external_keys) {
    if (!in_cluster(key)) rep.only_in_external.push_back(display);
    if (!std::binary_search(graph_keys.begin(), graph_keys.end(), key))
      rep.unmatched_external.push_back(display);
  }
  std::sort(rep.intersection.begin(), rep.intersection.end());
  std::sort(rep.only_in_cluster.begin(), rep.only_in_cluster.end());
  std::sort(rep.only_in_external.begin(), rep.only_in_external.end());
  std::sort(rep.unmatched_external.begin(), rep.unmatched_external.end());
  return rep;
}

}  // namespace jcmap
