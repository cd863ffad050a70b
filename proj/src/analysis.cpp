#include "commgrow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace commgrow {

ComparisonReport compare(const DegreeTable& p, const DegreeTable& q) {
  ComparisonReport r;
  if (p.empty() && q.empty()) return r;
  r.k_lo = p.empty() ? q.first() : (q.empty() ? p.first() : std::min(p.first(), q.first()));
  r.k_hi = std::max(p.last(), q.last());
  double cdf_p = 0.0;
  double cdf_q = 0.0;
  double l1 = 0.0;
  r.per_k_abs_error.reserve(static_cast<std::size_t>(r.k_hi - r.k_lo + 1));
  for (int k = r.k_lo; k <= r.k_hi; ++k) {
    const double d = std::abs(p[k] - q[k]);
    r.per_k_abs_error.push_back(d);
    l1 += d;
    cdf_p += p[k];
    cdf_q += q[k];
    r.ks_statistic = std::max(r.ks_statistic, std::abs(cdf_p - cdf_q));
  }
  r.tv_distance = std::min(1.0, 0.5 * l1);
  r.ks_statistic = std::min(1.0, r.ks_statistic);
  return r;
}

ComparisonReport compare(const DegreeDistribution& p, const DegreeDistribution& q) {
  return compare(p.table(), q.table());
}

std::vector<std::vector<VertexId>> simple_adjacency(const MultiGraph& g) {
  std::vector<std::vector<VertexId>> adj(g.vertex_count());
  for (const auto& [u, v] : g.edges()) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& nbrs : adj) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return adj;
}

std::uint64_t triangle_count(const MultiGraph& g) {
  const auto adj = simple_adjacency(g);
  const std::size_t n = adj.size();
  // Orient each edge from lower to higher (degree, id) rank; every triangle
  // is then counted once at its lowest-ranked vertex.
  auto ranks_below = [&](VertexId a, VertexId b) {
    return adj[a].size() < adj[b].size() || (adj[a].size() == adj[b].size() && a < b);
  };
  std::vector<std::vector<VertexId>> out(n);
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w : adj[v])
      if (ranks_below(v, w)) out[v].push_back(w);
  }
  std::vector<char> mark(n, 0);
  std::uint64_t triangles = 0;
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w : out[v]) mark[w] = 1;
    for (VertexId w : out[v])
      for (VertexId x : out[w]) triangles += mark[x];
    for (VertexId w : out[v]) mark[w] = 0;
  }
  return triangles;
}

double global_clustering(const MultiGraph& g) {
  const auto adj = simple_adjacency(g);
  double wedges = 0.0;
  for (const auto& nbrs : adj) {
    const double d = static_cast<double>(nbrs.size());
    wedges += d * (d - 1.0) / 2.0;
  }
  if (wedges == 0.0) throw std::domain_error("clustering is undefined for a graph without wedges");
  return 3.0 * static_cast<double>(triangle_count(g)) / wedges;
}

double loglog_slope(const DegreeTable& d, int k_lo, int k_hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int k = std::max(k_lo, 1); k <= k_hi; ++k) {
    const double v = d[k];
    if (!(v > 0.0)) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) throw std::domain_error("log-log fit needs at least three positive points");
  const double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace commgrow
