#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace jcmap {

using NodeId = std::int32_t;  // 1-based node identifier

// Dense cluster assignment for a node set. Cluster ids are always the
// contiguous range 1..k, numbered in decreasing cluster size with ties broken
// by the smallest member id; construction canonicalizes any raw labeling into
// that form, so two partitions are equal iff their assignments compare equal.
class Partition {
 public:
  Partition() = default;

  // Builds a partition from an arbitrary integer labeling (one entry per
  // node, node i at index i-1). The raw labels only define the grouping.
  static Partition from_assignment(std::vector<int> raw) {
    Partition p;
    if (raw.empty()) return p;

    std::vector<int> labels = raw;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    struct Group {
      int raw_label;
      NodeId size = 0;
      NodeId first_member = 0;
      int new_id = 0;
    };
    std::vector<Group> groups(labels.size());
    for (std::size_t g = 0; g < labels.size(); ++g) groups[g].raw_label = labels[g];

    auto group_index = [&](int label) {
      return static_cast<std::size_t>(
          std::lower_bound(labels.begin(), labels.end(), label) - labels.begin());
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
      Group& g = groups[group_index(raw[i])];
      if (g.size == 0) g.first_member = static_cast<NodeId>(i + 1);
      ++g.size;
    }

    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (groups[a].size != groups[b].size) return groups[a].size > groups[b].size;
      return groups[a].first_member < groups[b].first_member;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank)
      groups[order[rank]].new_id = static_cast<int>(rank + 1);

    p.assignment_.resize(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
      p.assignment_[i] = groups[group_index(raw[i])].new_id;
    p.sizes_.resize(groups.size());
    for (const Group& g : groups) p.sizes_[static_cast<std::size_t>(g.new_id - 1)] = g.size;
    return p;
  }

  NodeId size() const { return static_cast<NodeId>(assignment_.size()); }
  int cluster_count() const { return static_cast<int>(sizes_.size()); }

  int cluster_of(NodeId node) const {
    if (node < 1 || node > size()) throw std::out_of_range("node id out of range");
    return assignment_[static_cast<std::size_t>(node - 1)];
  }

  const std::vector<int>& assignment() const { return assignment_; }
  const std::vector<NodeId>& cluster_sizes() const { return sizes_; }

  NodeId cluster_size(int cluster_id) const {
    check_cluster(cluster_id);
    return sizes_[static_cast<std::size_t>(cluster_id - 1)];
  }

  std::vector<NodeId> members(int cluster_id) const {
    check_cluster(cluster_id);
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < assignment_.size(); ++i)
      if (assignment_[i] == cluster_id) out.push_back(static_cast<NodeId>(i + 1));
    return out;
  }

  std::vector<int> singleton_ids() const {
    std::vector<int> out;
    for (std::size_t c = 0; c < sizes_.size(); ++c)
      if (sizes_[c] == 1) out.push_back(static_cast<int>(c + 1));
    return out;
  }

  bool has_cluster(int cluster_id) const {
    return cluster_id >= 1 && cluster_id <= cluster_count();
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.assignment_ == b.assignment_;
  }

 private:
  void check_cluster(int cluster_id) const {
    if (!has_cluster(cluster_id))
      throw std::out_of_range("unknown cluster id " + std::to_string(cluster_id));
  }

  std::vector<int> assignment_;  // index i => cluster of node i+1
  std::vector<NodeId> sizes_;    // index c => size of cluster c+1
};

}  // namespace jcmap
