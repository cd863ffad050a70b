#pragma once

#include <cstdint>
#include <vector>

#include "commgrow/distribution.hpp"
#include "commgrow/graph.hpp"

namespace commgrow {

struct ComparisonReport {
  double tv_distance = 0.0;
  double ks_statistic = 0.0;
  int k_lo = 0;
  int k_hi = -1;
  /// |p_k - q_k| for k = k_lo..k_hi.
  std::vector<double> per_k_abs_error;
};

/// Exact total variation and Kolmogorov-Smirnov distance over the union support.
ComparisonReport compare(const DegreeTable& p, const DegreeTable& q);
ComparisonReport compare(const DegreeDistribution& p, const DegreeDistribution& q);

/// Triangles of the simple projection (parallel edges collapsed).
std::uint64_t triangle_count(const MultiGraph& g);

/// 3·triangles / wedges on the simple projection. Throws std::domain_error
/// when the graph has no wedge.
double global_clustering(const MultiGraph& g);

/// Least-squares slope of log d_k against log k over the nonzero points in
/// [k_lo, k_hi]. Throws std::domain_error with fewer than three points.
double loglog_slope(const DegreeTable& d, int k_lo, int k_hi);
inline double loglog_slope(const DegreeDistribution& d, int k_lo, int k_hi) {
  return loglog_slope(d.table(), k_lo, k_hi);
}

/// Sorted, deduplicated neighbour lists of the simple projection.
std::vector<std::vector<VertexId>> simple_adjacency(const MultiGraph& g);

}  // namespace commgrow
