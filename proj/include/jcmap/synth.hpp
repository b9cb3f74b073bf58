#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/partition.hpp"
#include "jcmap/rng.hpp"

namespace jcmap {

// Planted-partition benchmark spec. Stands in for the licensed citation data
// in tests: the generator knows the true block structure.
struct PlantedSpec {
  NodeId n_nodes = 0;
  int n_blocks = 1;
  double p_in = 0.0;
  double p_out = 0.0;
  Weight weight_min = 1;
  Weight weight_max = 1;
  std::uint64_t seed = 1;

  void validate() const {
    if (n_nodes < 1) throw std::invalid_argument("planted spec needs at least one node");
    if (n_blocks < 1 || n_blocks > n_nodes)
      throw std::invalid_argument("block count must be in 1..n");
    if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0))
      throw std::invalid_argument("probabilities must satisfy 0 <= p_out <= p_in <= 1");
    if (weight_min < 1 || weight_max < weight_min)
      throw std::invalid_argument("weight range must satisfy 1 <= min <= max");
  }
};

// Directed planted-partition graph: every ordered pair (i,j), i != j, gets an
// arc with probability p_in (same block) or p_out (different blocks); weights
// are uniform over [weight_min, weight_max]. Blocks are contiguous id ranges,
// as equal-sized as divisibility allows (earlier blocks take the remainder).
// The draw order is fixed (row-major over ordered pairs), so the graph is a
// pure function of the spec.
inline std::pair<CitationGraph, Partition> planted_partition(const PlantedSpec& spec) {
  spec.validate();
  const NodeId n = spec.n_nodes;
  const int b = spec.n_blocks;

  std::vector<int> block(static_cast<std::size_t>(n));
  {
    const NodeId base = n / b;
    const NodeId remainder = n % b;
    NodeId next = 0;
    for (int blk = 0; blk < b; ++blk) {
      const NodeId size = base + (blk < remainder ? 1 : 0);
      for (NodeId i = 0; i < size; ++i) block[static_cast<std::size_t>(next++)] = blk + 1;
    }
  }

  SplitMix64 rng(spec.seed);
  const std::uint64_t span = static_cast<std::uint64_t>(spec.weight_max - spec.weight_min) + 1;
  std::vector<Arc> arcs;
  for (NodeId i = 1; i <= n; ++i) {
    for (NodeId j = 1; j <= n; ++j) {
      if (i == j) continue;
      const double p = block[static_cast<std::size_t>(i - 1)] == block[static_cast<std::size_t>(j - 1)]
                           ? spec.p_in
                           : spec.p_out;
      if (rng.next_double() < p) {
        const Weight w = spec.weight_min + static_cast<Weight>(rng.next_below(span));
        arcs.push_back(Arc{i, j, w});
      }
    }
  }

  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (NodeId i = 1; i <= n; ++i) labels.push_back("n" + std::to_string(i));

  return {CitationGraph(std::move(labels), std::move(arcs)),
          Partition::from_assignment(std::move(block))};
}

}  // namespace jcmap
