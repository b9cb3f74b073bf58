#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/rng.hpp"
#include "jcmap/synth.hpp"

using jcmap::Arc;
using jcmap::CitationGraph;
using jcmap::NodeId;
using jcmap::Partition;
using jcmap::SymmetricGraph;

namespace {

CitationGraph make_graph(int n, std::vector<Arc> arcs) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("n" + std::to_string(i));
  return CitationGraph(std::move(labels), std::move(arcs));
}

CitationGraph random_graph(int n, double p, std::uint64_t seed) {
  jcmap::SplitMix64 rng(seed);
  std::vector<Arc> arcs;
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = 1; j <= n; ++j)
      if (rng.next_double() < p) {
        if (i == j) {
          arcs.push_back(Arc{i, i, static_cast<jcmap::Weight>(1 + rng.next_below(9))});
        } else {
          arcs.push_back(Arc{i, j, static_cast<jcmap::Weight>(1 + rng.next_below(9))});
        }
      }
  return make_graph(n, std::move(arcs));
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("graph construction validates invariants") {
  CHECK_THROWS_AS(make_graph(1, {Arc{1, 2, 1}}), std::invalid_argument);  // out of range
  CHECK_THROWS_AS(make_graph(2, {Arc{1, 2, 0}}), std::invalid_argument);  // weight < 1
  CHECK_THROWS_AS(make_graph(2, {Arc{1, 2, 1}, Arc{1, 2, 3}}), std::invalid_argument);
  const auto g = make_graph(2, {Arc{2, 1, 4}, Arc{1, 2, 3}});
  CHECK(g.arcs().front() == Arc{1, 2, 3});  // sorted canonical order
}

TEST_CASE("remove_loops drops self-citations") {
  const auto g = make_graph(2, {Arc{1, 1, 5}, Arc{1, 2, 3}});
  const auto [cleaned, removed] = remove_loops(g);
  CHECK(removed == 1);
  CHECK(cleaned.arcs() == std::vector<Arc>{Arc{1, 2, 3}});

  const auto [again, removed2] = remove_loops(cleaned);
  CHECK(removed2 == 0);
  CHECK(again == cleaned);  // idempotent
}

TEST_CASE("filter_min_weight") {
  const auto g = make_graph(3, {Arc{1, 2, 4}, Arc{2, 3, 5}});

  const auto [same, zero] = filter_min_weight(g, 1);
  CHECK(zero == 0);
  CHECK(same == g);

  const auto [reduced, removed] = filter_min_weight(g, 5);
  CHECK(removed == 1);
  CHECK(reduced.arcs() == std::vector<Arc>{Arc{2, 3, 5}});
  CHECK(reduced.node_count() == 3);  // nodes retained

  const auto [twice, removed2] = filter_min_weight(reduced, 5);
  CHECK(removed2 == 0);
  CHECK(twice == reduced);  // idempotent

  CHECK_THROWS_AS(filter_min_weight(g, 0), std::invalid_argument);
}

TEST_CASE("symmetrize sums the two cells") {
  const auto g = make_graph(2, {Arc{1, 2, 3}, Arc{2, 1, 4}});
  const auto s = symmetrize(g);
  REQUIRE(s.edge_count() == 1);
  CHECK(s.edges().front() == jcmap::Edge{1, 2, 7});
  CHECK(s.total_weight() == doctest::Approx(7.0));
  CHECK(s.degree(1) == doctest::Approx(7.0));
  CHECK(s.degree(2) == doctest::Approx(7.0));

  const auto one_sided = symmetrize(make_graph(2, {Arc{1, 2, 3}}));
  CHECK(one_sided.edges().front() == jcmap::Edge{1, 2, 3});

  // directed 3-cycle of unit weights: hand application of the rule gives a
  // unit triangle with m = 3
  const auto cycle = symmetrize(make_graph(3, {Arc{1, 2, 1}, Arc{2, 3, 1}, Arc{3, 1, 1}}));
  CHECK(cycle.edge_count() == 3);
  CHECK(cycle.total_weight() == doctest::Approx(3.0));
  for (const auto& e : cycle.edges()) CHECK(e.weight == 1);

  CHECK_THROWS_AS(symmetrize(make_graph(1, {Arc{1, 1, 2}})), std::invalid_argument);
}

TEST_CASE("symmetrize conserves total weight and degree sums") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto g = random_graph(20, 0.2, seed);
    auto [clean, n_loops] = remove_loops(g);
    const auto s = symmetrize(clean);
    CHECK(s.total_weight() == doctest::Approx(static_cast<double>(clean.total_arc_weight())));
    double degree_sum = 0.0;
    for (NodeId i = 1; i <= s.node_count(); ++i) degree_sum += s.degree(i);
    CHECK(degree_sum == doctest::Approx(2.0 * s.total_weight()));  // sum k_i = 2m
  }
}

TEST_CASE("largest_component") {
  // connected triangle: identity
  const auto tri = make_graph(3, {Arc{1, 2, 1}, Arc{2, 3, 1}, Arc{3, 1, 1}});
  const auto lc = largest_component(tri);
  CHECK(lc.graph == tri);
  CHECK(lc.original_ids == std::vector<NodeId>{1, 2, 3});

  // triangle plus isolated node
  const auto plus = make_graph(4, {Arc{1, 2, 1}, Arc{2, 3, 1}, Arc{3, 1, 1}});
  const auto lc2 = largest_component(plus);
  CHECK(lc2.graph.node_count() == 3);
  CHECK(lc2.original_ids == std::vector<NodeId>{1, 2, 3});

  // weak connectivity: arcs treated as undirected
  const auto chain = make_graph(3, {Arc{2, 1, 1}, Arc{2, 3, 1}});
  CHECK(largest_component(chain).graph.node_count() == 3);

  // tie on size: smallest original id wins
  const auto two_pairs = make_graph(4, {Arc{3, 4, 1}, Arc{1, 2, 1}});
  CHECK(largest_component(two_pairs).original_ids == std::vector<NodeId>{1, 2});

  // empty graph: empty result, not an error
  const auto empty = CitationGraph();
  CHECK(largest_component(empty).graph.node_count() == 0);
}

TEST_CASE("largest_component result is connected (BFS check)") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto g = random_graph(30, 0.05, seed);
    const auto lc = largest_component(g);
    if (lc.graph.node_count() == 0) continue;

    // independent breadth-first reachability over undirected arcs
    const auto n = static_cast<std::size_t>(lc.graph.node_count());
    std::vector<std::vector<NodeId>> und(n);
    for (const auto& a : lc.graph.arcs()) {
      if (a.source == a.target) continue;
      und[static_cast<std::size_t>(a.source - 1)].push_back(a.target);
      und[static_cast<std::size_t>(a.target - 1)].push_back(a.source);
    }
    std::vector<char> seen(n, 0);
    std::vector<NodeId> queue = {1};
    seen[0] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (NodeId v : und[static_cast<std::size_t>(queue[head] - 1)])
        if (!seen[static_cast<std::size_t>(v - 1)]) {
          seen[static_cast<std::size_t>(v - 1)] = 1;
          queue.push_back(v);
        }
    CHECK(queue.size() == n);

    // idempotent
    const auto again = largest_component(lc.graph);
    CHECK(again.graph == lc.graph);
  }
}

TEST_CASE("extract_subnetwork") {
  const auto two_tri = make_graph(6, {Arc{1, 2, 1}, Arc{2, 3, 1}, Arc{3, 1, 1},
                                      Arc{4, 5, 1}, Arc{5, 6, 1}, Arc{6, 4, 1}});
  const auto all_one = Partition::from_assignment({1, 1, 1, 1, 1, 1});
  CHECK(extract_subnetwork(two_tri, all_one, 1).graph == two_tri);

  const auto by_comp = Partition::from_assignment({1, 1, 1, 2, 2, 2});
  const auto second = extract_subnetwork(two_tri, by_comp, 2);
  CHECK(second.graph.node_count() == 3);
  CHECK(second.original_ids == std::vector<NodeId>{4, 5, 6});
  CHECK(second.graph.label(1) == "n4");  // labels travel with the subgraph
  CHECK(second.graph.arc_count() == 3);

  CHECK_THROWS_WITH_AS(extract_subnetwork(two_tri, by_comp, 7).graph.node_count(),
                       "unknown cluster id 7", std::invalid_argument);
}

TEST_CASE("extraction over all clusters partitions the node set") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = random_graph(25, 0.1, seed);
    // arbitrary 4-way split
    std::vector<int> raw;
    for (int i = 0; i < 25; ++i) raw.push_back(1 + (i * 7) % 4);
    const auto p = Partition::from_assignment(raw);
    std::size_t total = 0;
    std::set<NodeId> seen;
    for (int c = 1; c <= p.cluster_count(); ++c) {
      const auto sub = extract_subnetwork(g, p, c);
      total += static_cast<std::size_t>(sub.graph.node_count());
      for (NodeId o : sub.original_ids) seen.insert(o);
      // edges with one endpoint outside are dropped: every arc's endpoints
      // are inside by construction of the induced subgraph
      for (const auto& a : sub.graph.arcs()) {
        CHECK(a.source >= 1);
        CHECK(a.source <= sub.graph.node_count());
        CHECK(a.target <= sub.graph.node_count());
      }
    }
    CHECK(total == 25);
    CHECK(seen.size() == 25);
  }
}

TEST_CASE("extract is idempotent") {
  const auto g = random_graph(20, 0.15, 3);
  std::vector<int> raw;
  for (int i = 0; i < 20; ++i) raw.push_back(1 + i % 3);
  const auto p = Partition::from_assignment(raw);
  const auto sub = extract_subnetwork(g, p, 1);
  const auto n = sub.graph.node_count();
  std::vector<int> ones(static_cast<std::size_t>(n), 1);
  const auto again = extract_subnetwork(sub.graph, Partition::from_assignment(ones), 1);
  CHECK(again.graph == sub.graph);
}

TEST_SUITE_END();
