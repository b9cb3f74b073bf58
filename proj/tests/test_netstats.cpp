#include <doctest.h>

#include <cmath>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/netstats.hpp"
#include "jcmap/rng.hpp"

using jcmap::Arc;
using jcmap::CitationGraph;
using jcmap::NodeId;
using jcmap::SymmetricGraph;

namespace {

CitationGraph make_graph(int n, std::vector<Arc> arcs) {
  std::vector<std::string> labels;
  for (int i = 1; i <= n; ++i) labels.push_back("n" + std::to_string(i));
  return CitationGraph(std::move(labels), std::move(arcs));
}

CitationGraph random_loopfree(int n, double p, std::uint64_t seed) {
  jcmap::SplitMix64 rng(seed);
  std::vector<Arc> arcs;
  for (NodeId i = 1; i <= n; ++i)
    for (NodeId j = 1; j <= n; ++j)
      if (i != j && rng.next_double() < p)
        arcs.push_back(Arc{i, j, static_cast<jcmap::Weight>(1 + rng.next_below(5))});
  return make_graph(n, std::move(arcs));
}

// Independent oracle: enumerate all unordered triples of distinct nodes on a
// dense adjacency matrix.
double brute_force_transitivity(const SymmetricGraph& g) {
  const int n = g.node_count();
  std::vector<std::vector<char>> adj(static_cast<std::size_t>(n),
                                     std::vector<char>(static_cast<std::size_t>(n), 0));
  for (const auto& e : g.edges()) {
    adj[static_cast<std::size_t>(e.u - 1)][static_cast<std::size_t>(e.v - 1)] = 1;
    adj[static_cast<std::size_t>(e.v - 1)][static_cast<std::size_t>(e.u - 1)] = 1;
  }
  long long triangles = 0;
  long long wedges = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c) {
        const int links = adj[a][b] + adj[b][c] + adj[a][c];
        if (links == 3) {
          ++triangles;
          wedges += 3;
        } else if (links == 2) {
          ++wedges;
        }
      }
  if (wedges == 0) return 0.0;
  return 3.0 * static_cast<double>(triangles) / static_cast<double>(wedges);
}

}  // namespace

TEST_SUITE_BEGIN("netstats");

TEST_CASE("complete directed graph has density 1") {
  std::vector<Arc> arcs;
  for (NodeId i = 1; i <= 4; ++i)
    for (NodeId j = 1; j <= 4; ++j)
      if (i != j) arcs.push_back(Arc{i, j, 1});
  const auto s = network_stats(make_graph(4, std::move(arcs)));
  CHECK(s.n_links == 12);
  CHECK(s.density == doctest::Approx(1.0));
}

TEST_CASE("directed 3-cycle") {
  const auto s = network_stats(make_graph(3, {Arc{1, 2, 1}, Arc{2, 3, 1}, Arc{3, 1, 1}}));
  CHECK(s.density == doctest::Approx(0.5));
  CHECK(s.average_total_degree == doctest::Approx(2.0));
  CHECK(s.average_out_degree == doctest::Approx(1.0));
}

TEST_CASE("stats require a loop-free graph") {
  CHECK_THROWS_AS(network_stats(make_graph(1, {Arc{1, 1, 2}})), std::invalid_argument);
}

TEST_CASE("tiny graphs set the density warning") {
  const auto s = network_stats(make_graph(1, {}));
  CHECK(s.density == 0.0);
  CHECK(s.density_warning);
}

TEST_CASE("clustering coefficient closed forms") {
  const auto triangle = symmetrize(make_graph(3, {Arc{1, 2, 1}, Arc{2, 3, 1}, Arc{3, 1, 1}}));
  CHECK(jcmap::clustering_coefficient(triangle) == doctest::Approx(1.0));

  const auto path = symmetrize(make_graph(3, {Arc{1, 2, 1}, Arc{2, 3, 1}}));
  CHECK(jcmap::clustering_coefficient(path) == doctest::Approx(0.0));

  const auto single = symmetrize(make_graph(2, {Arc{1, 2, 1}}));
  CHECK(jcmap::clustering_coefficient(single) == 0.0);  // no wedge at all
}

TEST_CASE("clustering coefficient agrees with triple enumeration") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto g = random_loopfree(18 + static_cast<int>(seed % 12), 0.15, seed);
    const auto s = symmetrize(g);
    CHECK(jcmap::clustering_coefficient(s) ==
          doctest::Approx(brute_force_transitivity(s)).epsilon(1e-12));
  }
}

TEST_CASE("stats stay in range and degrees are consistent") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = random_loopfree(30, 0.2, seed);
    const auto s = network_stats(g);
    CHECK(s.density >= 0.0);
    CHECK(s.density <= 1.0);
    CHECK(s.clustering_coefficient >= 0.0);
    CHECK(s.clustering_coefficient <= 1.0);
    CHECK(s.average_total_degree == doctest::Approx(2.0 * s.average_out_degree));
  }
}

TEST_CASE("measured density matches the generation probability") {
  // pooled over ordered pairs: ~3 standard errors of binomial sampling
  const double p = 0.1;
  const int n = 60;
  double total_links = 0;
  double total_pairs = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto g = random_loopfree(n, p, seed);
    total_links += static_cast<double>(g.arc_count());
    total_pairs += static_cast<double>(n) * (n - 1);
  }
  const double observed = total_links / total_pairs;
  const double se = std::sqrt(p * (1 - p) / total_pairs);
  CHECK(std::abs(observed - p) < 3 * se);
}

TEST_SUITE_END();
