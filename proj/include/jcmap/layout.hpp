#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <vector>

#include "jcmap/graph.hpp"
#include "jcmap/rng.hpp"

namespace jcmap {

enum class LayoutMethod { vos, kamada_kawai };

inline const char* layout_method_name(LayoutMethod m) {
  return m == LayoutMethod::vos ? "vos" : "kamada-kawai";
}

struct MapLayout {
  std::vector<double> x;  // node i at index i-1
  std::vector<double> y;
  double objective_value = 0.0;
  int iterations_used = 0;
  LayoutMethod method = LayoutMethod::vos;
  std::uint64_t seed = 0;
  std::vector<double> objective_trace;  // objective after every accepted step
};

namespace detail {

inline void center_layout(std::vector<double>& x, std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] -= mx;
    y[i] -= my;
  }
}

inline double mean_pairwise_distance(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sum += std::hypot(x[i] - x[j], y[i] - y[j]);
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

inline void require_connected(const SymmetricGraph& g) {
  if (components(g).size() != 1)
    throw std::invalid_argument(
        "layout requires a connected graph; extract the largest component first");
}

inline void seed_positions(std::vector<double>& x, std::vector<double>& y, NodeId n,
                           SplitMix64& rng) {
  x.resize(static_cast<std::size_t>(n));
  y.resize(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = rng.next_double();
    y[static_cast<std::size_t>(i)] = rng.next_double();
  }
}

}  // namespace detail

// VOS-style map: minimizes sum_{i<j} s_ij * |x_i - x_j|^2 with s_ij the
// association strength, subject to the mean pairwise distance being 1. The
// constraint is enforced by recentering and rescaling after every step, which
// changes raw objective values but not the argmin structure. Steps use
// gradient descent with backtracking, so the objective recorded across
// accepted iterations never increases.
inline MapLayout vos_layout(const SymmetricGraph& g, std::uint64_t seed,
                            int max_iterations = 1000) {
  const NodeId n = g.node_count();
  if (n < 2) throw std::invalid_argument("layout needs at least 2 nodes");
  detail::require_connected(g);

  // association strengths on the CSR adjacency
  const double two_m = 2.0 * g.total_weight();
  std::vector<std::vector<std::pair<NodeId, double>>> sim(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    const double s = two_m * static_cast<double>(e.weight) / (g.degree(e.u) * g.degree(e.v));
    sim[static_cast<std::size_t>(e.u - 1)].emplace_back(e.v - 1, s);
    sim[static_cast<std::size_t>(e.v - 1)].emplace_back(e.u - 1, s);
  }

  MapLayout out;
  out.method = LayoutMethod::vos;
  out.seed = seed;
  SplitMix64 rng(seed);
  detail::seed_positions(out.x, out.y, n, rng);

  auto normalize = [&](std::vector<double>& x, std::vector<double>& y) {
    detail::center_layout(x, y);
    double mean = detail::mean_pairwise_distance(x, y);
    if (mean <= 0.0) {  // all points coincide; spread deterministically
      for (std::size_t i = 0; i < x.size(); ++i) x[i] += static_cast<double>(i);
      detail::center_layout(x, y);
      mean = detail::mean_pairwise_distance(x, y);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] /= mean;
      y[i] /= mean;
    }
  };
  auto objective = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double f = 0.0;
    for (const Edge& e : g.edges()) {
      const double s = two_m * static_cast<double>(e.weight) / (g.degree(e.u) * g.degree(e.v));
      const double dx = x[static_cast<std::size_t>(e.u - 1)] - x[static_cast<std::size_t>(e.v - 1)];
      const double dy = y[static_cast<std::size_t>(e.u - 1)] - y[static_cast<std::size_t>(e.v - 1)];
      f += s * (dx * dx + dy * dy);
    }
    return f;
  };

  normalize(out.x, out.y);
  double f = objective(out.x, out.y);
  out.objective_trace.push_back(f);

  double max_sim_degree = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    double s = 0.0;
    for (const auto& [j, w] : sim[static_cast<std::size_t>(i)]) s += w;
    max_sim_degree = std::max(max_sim_degree, s);
  }
  double step = max_sim_degree > 0.0 ? 0.25 / max_sim_degree : 0.25;

  std::vector<double> gx(static_cast<std::size_t>(n)), gy(static_cast<std::size_t>(n));
  std::vector<double> tx, ty;
  int iterations = 0;
  bool converged = false;
  for (int it = 0; it < max_iterations && !converged; ++it) {
    // Gradient of the scale-invariant objective N(x)/M(x)^2 evaluated at the
    // normalized point (M = 1): the attraction term of N minus the repulsion
    // 2*N*grad(M). Without the constraint term the raw gradient is a pure
    // contraction that the rescale undoes.
    std::fill(gx.begin(), gx.end(), 0.0);
    std::fill(gy.begin(), gy.end(), 0.0);
    for (NodeId i = 0; i < n; ++i)
      for (const auto& [j, s] : sim[static_cast<std::size_t>(i)]) {
        gx[static_cast<std::size_t>(i)] +=
            2.0 * s * (out.x[static_cast<std::size_t>(i)] - out.x[static_cast<std::size_t>(j)]);
        gy[static_cast<std::size_t>(i)] +=
            2.0 * s * (out.y[static_cast<std::size_t>(i)] - out.y[static_cast<std::size_t>(j)]);
      }
    const double pair_norm = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    for (NodeId i = 0; i < n; ++i) {
      double mgx = 0.0, mgy = 0.0;
      for (NodeId j = 0; j < n; ++j) {
        if (i == j) continue;
        const double dx = out.x[static_cast<std::size_t>(i)] - out.x[static_cast<std::size_t>(j)];
        const double dy = out.y[static_cast<std::size_t>(i)] - out.y[static_cast<std::size_t>(j)];
        const double d = std::hypot(dx, dy);
        if (d > 1e-12) {
          mgx += dx / d;
          mgy += dy / d;
        }
      }
      gx[static_cast<std::size_t>(i)] -= 2.0 * f * mgx / pair_norm;
      gy[static_cast<std::size_t>(i)] -= 2.0 * f * mgy / pair_norm;
    }

    bool accepted = false;
    for (int backtrack = 0; backtrack < 40; ++backtrack) {
      tx = out.x;
      ty = out.y;
      for (std::size_t i = 0; i < tx.size(); ++i) {
        tx[i] -= step * gx[i];
        ty[i] -= step * gy[i];
      }
      normalize(tx, ty);
      const double f_new = objective(tx, ty);
      if (f_new <= f) {
        const double improvement = f - f_new;
        out.x = tx;
        out.y = ty;
        f = f_new;
        out.objective_trace.push_back(f);
        ++iterations;
        accepted = true;
        step *= 1.1;
        if (improvement < 1e-9 * std::max(std::abs(f), 1e-12)) converged = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no acceptable step left
  }

  out.iterations_used = iterations;
  out.objective_value = f;
  return out;
}

// Kamada-Kawai stress layout over unweighted shortest-path distances (edge
// weights are deliberately ignored for the distances). Initial positions come
// from classical MDS on the distance matrix (seeded power iteration), after
// which per-node majorization sweeps minimize the stress; each sweep is
// non-increasing. Output is centered; scale follows the graph distances.
inline MapLayout kamada_kawai(const SymmetricGraph& g, std::uint64_t seed,
                              int max_iterations = 1000) {
  const NodeId n = g.node_count();
  if (n < 2) throw std::invalid_argument("layout needs at least 2 nodes");
  detail::require_connected(g);

  // all-pairs BFS, row-major
  const auto nn = static_cast<std::size_t>(n);
  std::vector<std::uint16_t> dist(nn * nn, 0);
  {
    std::vector<int> level(nn);
    for (NodeId s = 1; s <= n; ++s) {
      std::fill(level.begin(), level.end(), -1);
      level[static_cast<std::size_t>(s - 1)] = 0;
      std::queue<NodeId> q;
      q.push(s);
      while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v : g.neighbors(u)) {
          if (level[static_cast<std::size_t>(v - 1)] < 0) {
            level[static_cast<std::size_t>(v - 1)] = level[static_cast<std::size_t>(u - 1)] + 1;
            q.push(v);
          }
        }
      }
      for (std::size_t j = 0; j < nn; ++j)
        dist[static_cast<std::size_t>(s - 1) * nn + j] = static_cast<std::uint16_t>(level[j]);
    }
  }
  auto ideal = [&](std::size_t i, std::size_t j) {
    return static_cast<double>(dist[i * nn + j]);
  };

  MapLayout out;
  out.method = LayoutMethod::kamada_kawai;
  out.seed = seed;
  SplitMix64 rng(seed);

  // Torgerson initialization: B = -1/2 J D^2 J; top-2 eigenpairs by
  // matrix-free power iteration with deflation.
  {
    std::vector<double> row_mean(nn, 0.0);
    double grand_mean = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      for (std::size_t j = 0; j < nn; ++j) row_mean[i] += ideal(i, j) * ideal(i, j);
      row_mean[i] /= static_cast<double>(nn);
      grand_mean += row_mean[i];
    }
    grand_mean /= static_cast<double>(nn);
    auto apply_b = [&](const std::vector<double>& v, std::vector<double>& outv) {
      for (std::size_t i = 0; i < nn; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < nn; ++j) {
          const double d2 = ideal(i, j) * ideal(i, j);
          sum += -0.5 * (d2 - row_mean[i] - row_mean[j] + grand_mean) * v[j];
        }
        outv[i] = sum;
      }
    };
    auto power_iterate = [&](const std::vector<double>* deflate, double deflate_value) {
      std::vector<double> v(nn), next(nn);
      for (auto& value : v) value = rng.next_double() - 0.5;
      double eigenvalue = 0.0;
      for (int it = 0; it < 200; ++it) {
        apply_b(v, next);
        if (deflate != nullptr) {
          double proj = 0.0;
          for (std::size_t i = 0; i < nn; ++i) proj += (*deflate)[i] * v[i];
          for (std::size_t i = 0; i < nn; ++i) next[i] -= deflate_value * proj * (*deflate)[i];
        }
        double norm = 0.0;
        for (double value : next) norm += value * value;
        norm = std::sqrt(norm);
        if (norm < 1e-30) break;  // (near-)zero eigenvalue
        for (std::size_t i = 0; i < nn; ++i) v[i] = next[i] / norm;
        eigenvalue = norm;
      }
      return std::pair(v, eigenvalue);
    };
    auto [v1, lambda1] = power_iterate(nullptr, 0.0);
    auto [v2, lambda2] = power_iterate(&v1, lambda1);
    const double s1 = std::sqrt(std::max(lambda1, 0.0));
    const double s2 = std::sqrt(std::max(lambda2, 0.0));
    out.x.resize(nn);
    out.y.resize(nn);
    const double jitter = 1e-7 * std::max(s1, 1.0);
    for (std::size_t i = 0; i < nn; ++i) {
      out.x[i] = s1 * v1[i] + jitter * (rng.next_double() - 0.5);
      out.y[i] = s2 * v2[i] + jitter * (rng.next_double() - 0.5);
    }
  }
  detail::center_layout(out.x, out.y);

  auto stress = [&]() {
    double sum = 0.0;
    for (std::size_t i = 0; i < nn; ++i)
      for (std::size_t j = i + 1; j < nn; ++j) {
        const double target = ideal(i, j);
        const double w = 1.0 / (target * target);
        const double d = std::hypot(out.x[i] - out.x[j], out.y[i] - out.y[j]);
        sum += w * (d - target) * (d - target);
      }
    return sum;
  };

  double f = stress();
  out.objective_trace.push_back(f);
  int iterations = 0;
  for (int it = 0; it < max_iterations; ++it) {
    // One sweep of per-node majorization updates, applied in place
    // (Gauss-Seidel), which keeps the stress non-increasing.
    for (std::size_t i = 0; i < nn; ++i) {
      double wx = 0.0, wy = 0.0, wsum = 0.0;
      for (std::size_t j = 0; j < nn; ++j) {
        if (i == j) continue;
        const double target = ideal(i, j);
        const double w = 1.0 / (target * target);
        const double dx = out.x[i] - out.x[j];
        const double dy = out.y[i] - out.y[j];
        const double d = std::hypot(dx, dy);
        double ux = 0.0, uy = 0.0;
        if (d > 1e-12) {
          ux = dx / d;
          uy = dy / d;
        }
        wx += w * (out.x[j] + target * ux);
        wy += w * (out.y[j] + target * uy);
        wsum += w;
      }
      out.x[i] = wx / wsum;
      out.y[i] = wy / wsum;
    }
    const double f_new = stress();
    ++iterations;
    out.objective_trace.push_back(f_new);
    const double improvement = f - f_new;
    f = f_new;
    if (improvement < 1e-9 * std::max(std::abs(f), 1e-12)) break;
  }
  detail::center_layout(out.x, out.y);

  out.iterations_used = iterations;
  out.objective_value = f;
  return out;
}

}  // namespace jcmap
