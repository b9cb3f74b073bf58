#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <stdexcept>
#include <vector>

#include "jcmap/clustering.hpp"
#include "jcmap/partition.hpp"

namespace jcmap {

// Contingency-table association between two partitions of the same node set.
struct AssociationReport {
  std::vector<std::vector<std::int64_t>> contingency;  // r x c counts
  std::int64_t n = 0;
  double chi_square = 0.0;
  double cramers_v = 0.0;
  std::int64_t degrees_of_freedom = 0;
};

// Chi-square over the r x c contingency table with expected counts
// E_ij = rowSum_i * colSum_j / n (cells with E = 0 contribute 0), and
// Cramer's V = sqrt(chi2 / (n * (min(r,c) - 1))). No bias correction.
// When one side has a single cluster V is undefined; reported as 1 when both
// sides are the trivial partition and 0 otherwise.
inline AssociationReport association(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) {
    const auto diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    throw std::invalid_argument(
        "partitions cover different node sets (symmetric difference of size " +
        std::to_string(diff) + ")");
  }
  AssociationReport rep;
  rep.n = a.size();
  const int r = a.cluster_count();
  const int c = b.cluster_count();
  rep.degrees_of_freedom = static_cast<std::int64_t>(std::max(r - 1, 0)) *
                           static_cast<std::int64_t>(std::max(c - 1, 0));
  rep.contingency.assign(static_cast<std::size_t>(r),
                         std::vector<std::int64_t>(static_cast<std::size_t>(c), 0));
  for (NodeId i = 1; i <= a.size(); ++i)
    ++rep.contingency[static_cast<std::size_t>(a.cluster_of(i) - 1)]
                     [static_cast<std::size_t>(b.cluster_of(i) - 1)];

  if (rep.n == 0) return rep;
  std::vector<double> row_sum(static_cast<std::size_t>(r), 0.0);
  std::vector<double> col_sum(static_cast<std::size_t>(c), 0.0);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      row_sum[static_cast<std::size_t>(i)] +=
          static_cast<double>(rep.contingency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      col_sum[static_cast<std::size_t>(j)] +=
          static_cast<double>(rep.contingency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  const double n = static_cast<double>(rep.n);
  double chi2 = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      const double expected = row_sum[static_cast<std::size_t>(i)] * col_sum[static_cast<std::size_t>(j)] / n;
      if (expected == 0.0) continue;
      const double observed =
          static_cast<double>(rep.contingency[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      const double d = observed - expected;
      chi2 += d * d / expected;
    }
  rep.chi_square = chi2;
  const int min_rc = std::min(r, c);
  if (min_rc <= 1)
    rep.cramers_v = (r == 1 && c == 1) ? 1.0 : 0.0;
  else
    rep.cramers_v = std::sqrt(chi2 / (n * static_cast<double>(min_rc - 1)));
  return rep;
}

struct StabilityReport {
  Method method = Method::louvain;
  int n_runs = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> pairwise_v;  // unordered run pairs, (0,1), (0,2), ..., (r-2,r-1)
  double mean_v = 0.0;
  double sd_v = 0.0;  // sample standard deviation
  std::vector<int> cluster_counts;
};

// Clusters once per seed and reports Cramer's V over every unordered pair of
// runs: the paper's "five drawings" internal-consistency check. Runs are
// independent, so they may execute on up to max_workers threads; results are
// collected in seed order and do not depend on the schedule.
inline StabilityReport stability(const SymmetricGraph& g, Method method, double resolution,
                                 const std::vector<std::uint64_t>& seeds, int max_workers = 1) {
  if (seeds.size() < 2) throw std::invalid_argument("stability requires at least 2 seeds");
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j]) throw std::invalid_argument("stability seeds must be distinct");

  StabilityReport rep;
  rep.method = method;
  rep.n_runs = static_cast<int>(seeds.size());
  rep.seeds = seeds;

  auto run_one = [&](std::uint64_t seed) {
    ClusterConfig cfg;
    cfg.method = method;
    cfg.resolution = resolution;
    cfg.seed = seed;
    return cluster(g, cfg).first;
  };

  std::vector<Partition> runs(seeds.size());
  if (max_workers > 1) {
    std::vector<std::future<Partition>> futures(seeds.size());
    std::size_t next = 0;
    std::size_t in_flight = 0;
    std::size_t joined = 0;
    while (joined < seeds.size()) {
      while (next < seeds.size() && in_flight < static_cast<std::size_t>(max_workers)) {
        futures[next] = std::async(std::launch::async, run_one, seeds[next]);
        ++next;
        ++in_flight;
      }
      runs[joined] = futures[joined].get();
      ++joined;
      --in_flight;
    }
  } else {
    for (std::size_t i = 0; i < seeds.size(); ++i) runs[i] = run_one(seeds[i]);
  }
  for (const Partition& p : runs) rep.cluster_counts.push_back(p.cluster_count());
  for (std::size_t i = 0; i < runs.size(); ++i)
    for (std::size_t j = i + 1; j < runs.size(); ++j)
      rep.pairwise_v.push_back(association(runs[i], runs[j]).cramers_v);

  double sum = 0.0;
  for (double v : rep.pairwise_v) sum += v;
  rep.mean_v = sum / static_cast<double>(rep.pairwise_v.size());
  if (rep.pairwise_v.size() > 1) {
    double ss = 0.0;
    for (double v : rep.pairwise_v) ss += (v - rep.mean_v) * (v - rep.mean_v);
    rep.sd_v = std::sqrt(ss / static_cast<double>(rep.pairwise_v.size() - 1));
  }
  return rep;
}

}  // namespace jcmap
