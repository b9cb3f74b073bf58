#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "jcmap/clustering.hpp"
#include "jcmap/graph.hpp"
#include "oracles.hpp"

using jcmap::Arc;
using jcmap::CitationGraph;
using jcmap::ClusterConfig;
using jcmap::Method;
using jcmap::NodeId;
using jcmap::Partition;
using jcmap::SymmetricGraph;

namespace {

SymmetricGraph make_sym(int n, std::vector<jcmap::Edge> edges) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("n" + std::to_string(i));
  return SymmetricGraph(std::move(labels), std::move(edges));
}

SymmetricGraph two_triangles() {
  return make_sym(6, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}, {4, 5, 1}, {4, 6, 1}, {5, 6, 1}});
}

SymmetricGraph triangle_bridge_triangle() {
  return make_sym(6, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {4, 6, 1}, {5, 6, 1}});
}

}  // namespace

TEST_SUITE_BEGIN("clustering");

TEST_CASE("partition canonicalization") {
  const auto p = Partition::from_assignment({7, 7, 2, 2, 2, 5});
  CHECK(p.cluster_count() == 3);
  // sizes non-increasing; ties by smallest member id
  CHECK(p.cluster_sizes() == std::vector<NodeId>{3, 2, 1});
  CHECK(p.assignment() == std::vector<int>{2, 2, 1, 1, 1, 3});
  CHECK(p.singleton_ids() == std::vector<int>{3});
  CHECK(p.members(2) == std::vector<NodeId>{1, 2});
}

TEST_CASE("modularity closed forms") {
  const auto tt = two_triangles();

  // single cluster: intra weight 1 cancels the null term
  CHECK(jcmap::modularity(tt, Partition::from_assignment({1, 1, 1, 1, 1, 1}), 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // the two-triangle split: 2*(3/6 - (6/12)^2) = 0.5
  const auto split = Partition::from_assignment({1, 1, 1, 2, 2, 2});
  CHECK(jcmap::modularity(tt, split, 1.0) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(jcmap::modularity(make_sym(3, {}), Partition::from_assignment({1, 1, 1}), 1.0),
                       "empty graph has no modularity", std::invalid_argument);
}

TEST_CASE("modularity and vos quality match the double-loop oracles") {
  for (std::uint64_t seed = 1; seed <= 44; ++seed) {
    // mostly tiny graphs, a few at the full 100-node audit size
    const int n = seed > 40 ? 100 : 4 + static_cast<int>(seed % 5);
    const auto g = oracles::random_connected_citation(n, seed > 40 ? 0.1 : 0.5, seed);
    const auto s = symmetrize(g);
    jcmap::SplitMix64 rng(seed * 11);
    std::vector<int> raw(static_cast<std::size_t>(n));
    for (auto& c : raw) c = static_cast<int>(rng.next_below(3));
    const auto p = Partition::from_assignment(raw);
    std::vector<int> comm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) comm[static_cast<std::size_t>(i)] = p.cluster_of(i + 1);

    for (double gamma : {0.5, 1.0, 2.0}) {
      CHECK(jcmap::modularity(s, p, gamma) ==
            doctest::Approx(oracles::naive_modularity(s, comm, gamma)).epsilon(1e-12));
      CHECK(jcmap::vos_quality(s, p, gamma) ==
            doctest::Approx(oracles::naive_vos_quality(s, comm, gamma)).epsilon(1e-12));
    }
  }
}

TEST_CASE("vos quality collapses to modularity on regular graphs") {
  // 3-regular: the cube graph
  const auto cube = make_sym(8, {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {1, 4, 1},
                                 {5, 6, 1}, {6, 7, 1}, {7, 8, 1}, {5, 8, 1},
                                 {1, 5, 1}, {2, 6, 1}, {3, 7, 1}, {4, 8, 1}});
  const auto single = Partition::from_assignment(std::vector<int>(8, 1));
  CHECK(jcmap::vos_quality(cube, single, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    jcmap::SplitMix64 rng(seed);
    std::vector<int> raw(8);
    for (auto& c : raw) c = static_cast<int>(rng.next_below(3));
    const auto p = Partition::from_assignment(raw);
    CHECK(jcmap::vos_quality(cube, p, 1.0) ==
          doctest::Approx(jcmap::modularity(cube, p, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("vos quality rejects isolated nodes") {
  const auto g = make_sym(3, {{1, 2, 1}});
  CHECK_THROWS_AS(jcmap::vos_quality(g, Partition::from_assignment({1, 1, 2}), 1.0),
                  std::invalid_argument);
}

TEST_CASE("vos prefers the separated triangles over any merge") {
  const auto tt = two_triangles();
  const std::vector<int> separated = {0, 0, 0, 1, 1, 1};
  const double best = oracles::naive_vos_quality(tt, separated, 1.0);
  int counted = 0;
  oracles::for_each_partition(6, [&](const std::vector<int>& labels) {
    ++counted;
    if (labels == separated) return;
    const double v = oracles::naive_vos_quality(tt, labels, 1.0);
    CHECK(v < best + 1e-12);
    // any labeling that merges nodes of the two triangles is strictly worse
    bool merges = false;
    for (int i = 0; i < 3; ++i)
      for (int j = 3; j < 6; ++j)
        if (labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)]) merges = true;
    if (merges) CHECK(v < best - 1e-12);
  });
  CHECK(counted == 203);  // Bell(6)
}

TEST_CASE("cluster finds the two-triangle optimum under both methods and any seed") {
  const auto tt = two_triangles();
  for (auto method : {Method::louvain, Method::vos}) {
    for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 12345ULL}) {
      ClusterConfig cfg;
      cfg.method = method;
      cfg.seed = seed;
      const auto [p, q] = jcmap::cluster(tt, cfg);
      CHECK(p.assignment() == std::vector<int>{1, 1, 1, 2, 2, 2});
      if (method == Method::louvain) CHECK(q.value == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("louvain resolves the triangle-bridge-triangle graph") {
  // exhaustive search over all 203 partitions confirms Q* = 5/14
  const auto g = triangle_bridge_triangle();
  const double best = oracles::best_partition_quality(6, [&](const std::vector<int>& labels) {
    return oracles::naive_modularity(g, labels, 1.0);
  });
  CHECK(best == doctest::Approx(5.0 / 14.0).epsilon(1e-12));

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    ClusterConfig cfg;
    cfg.seed = seed;
    const auto [p, q] = jcmap::cluster(g, cfg);
    CHECK(p.cluster_count() == 2);
    CHECK(q.value == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
  }
}

TEST_CASE("determinism: repeated runs are bit-identical") {
  const auto g = symmetrize(oracles::random_connected_citation(60, 0.1, 5));
  for (auto method : {Method::louvain, Method::vos}) {
    ClusterConfig cfg;
    cfg.method = method;
    cfg.seed = 99;
    const auto first = jcmap::cluster(g, cfg);
    for (int run = 0; run < 9; ++run) {
      const auto again = jcmap::cluster(g, cfg);
      CHECK(again.first == first.first);
      CHECK(again.second.value == first.second.value);
    }
  }
}

TEST_CASE("returned partition is locally optimal under single-node moves") {
  for (std::uint64_t seed = 1; seed <= 7; ++seed) {
    const int n = seed == 7 ? 200 : 40;  // one audit at the full stated size
    const auto g = symmetrize(oracles::random_connected_citation(n, seed == 7 ? 0.05 : 0.12, seed));
    for (auto method : {Method::louvain, Method::vos}) {
      ClusterConfig cfg;
      cfg.method = method;
      cfg.seed = seed;
      const auto [p, q] = jcmap::cluster(g, cfg);
      auto quality = [&](const Partition& part) {
        return method == Method::vos ? jcmap::vos_quality(g, part, 1.0)
                                     : jcmap::modularity(g, part, 1.0);
      };
      CHECK(quality(p) == doctest::Approx(q.value).epsilon(1e-12));

      // singleton partition never beats the result
      std::vector<int> singles(static_cast<std::size_t>(g.node_count()));
      for (std::size_t i = 0; i < singles.size(); ++i) singles[i] = static_cast<int>(i + 1);
      CHECK(q.value >= quality(Partition::from_assignment(singles)) - 1e-12);

      // exhaustive single-move audit: move each node to every other cluster
      // (and to a fresh singleton)
      for (NodeId v = 1; v <= g.node_count(); ++v) {
        for (int c = 0; c <= p.cluster_count(); ++c) {
          const int target = c == 0 ? p.cluster_count() + 1 : c;  // 0 = detach
          if (target == p.cluster_of(v)) continue;
          std::vector<int> moved = p.assignment();
          moved[static_cast<std::size_t>(v - 1)] = target;
          const double alt = quality(Partition::from_assignment(moved));
          CHECK(alt <= q.value + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("small-graph optima: heuristic reaches the exhaustive optimum") {
  int misses = 0;
  int total = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const int n = 4 + static_cast<int>(seed % 5);
    const auto g = symmetrize(oracles::random_connected_citation(n, 0.5, seed));
    for (auto method : {Method::louvain, Method::vos}) {
      auto naive = [&](const std::vector<int>& labels) {
        return method == Method::vos ? oracles::naive_vos_quality(g, labels, 1.0)
                                     : oracles::naive_modularity(g, labels, 1.0);
      };
      const double best = oracles::best_partition_quality(n, naive);
      ClusterConfig cfg;
      cfg.method = method;
      cfg.seed = seed;
      const auto [p, q] = jcmap::cluster(g, cfg);
      ++total;
      CHECK(q.value <= best + 1e-9);  // never beats the true optimum
      if (q.value < best - 1e-9) {
        ++misses;  // permitted for the heuristic, but tracked
        MESSAGE("local-optimum miss: n=", n, " seed=", seed, " method=",
                std::string(jcmap::method_name(method)), " gap=", best - q.value);
      }
    }
  }
  CHECK(misses * 20 <= total);  // miss rate capped at 5%
}

TEST_CASE("components never share a cluster") {
  // two triangles plus a separate 4-cycle, deliberately disconnected
  const auto g = make_sym(10, {{1, 2, 1}, {1, 3, 1}, {2, 3, 1},
                               {4, 5, 1}, {4, 6, 1}, {5, 6, 1},
                               {7, 8, 2}, {8, 9, 2}, {9, 10, 2}, {7, 10, 2}});
  for (auto method : {Method::louvain, Method::vos}) {
    ClusterConfig cfg;
    cfg.method = method;
    cfg.seed = 3;
    const auto [p, q] = jcmap::cluster(g, cfg);
    const auto comps = jcmap::components(g);
    for (const auto& comp : comps) {
      std::set<int> clusters_here;
      for (NodeId v : comp) clusters_here.insert(p.cluster_of(v));
      for (const auto& other : comps) {
        if (&other == &comp) continue;
        for (NodeId v : other) CHECK(clusters_here.count(p.cluster_of(v)) == 0);
      }
    }
  }
}

TEST_CASE("cluster rejects empty and edgeless graphs") {
  CHECK_THROWS_AS(jcmap::cluster(SymmetricGraph(), ClusterConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(jcmap::cluster(make_sym(3, {}), ClusterConfig{}), std::invalid_argument);
}

TEST_CASE("raising the resolution never lowers the mean cluster count") {
  const std::vector<double> gammas = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> mean_counts;
  for (double gamma : gammas) {
    double sum = 0.0;
    int n_graphs = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const auto g = symmetrize(oracles::random_connected_citation(30, 0.2, seed));
      ClusterConfig cfg;
      cfg.seed = seed;
      cfg.resolution = gamma;
      sum += jcmap::cluster(g, cfg).first.cluster_count();
      ++n_graphs;
    }
    mean_counts.push_back(sum / n_graphs);
  }
  for (std::size_t i = 1; i < mean_counts.size(); ++i)
    CHECK(mean_counts[i] >= mean_counts[i - 1] - 1e-9);
}

TEST_SUITE_END();
