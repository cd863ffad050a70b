#include "commgrow/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace commgrow {

namespace {

void check_normalized(const DegreeDistribution& d, const char* name) {
  const double total = d.table().sum();
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument(std::string(name) + " is not normalized");
}

}  // namespace

const ModelParams& validate_params(const ModelParams& p) {
  if (!(p.gamma >= 0.0 && p.gamma <= 1.0))
    throw std::invalid_argument("gamma must lie in [0, 1]");
  if (p.n < 2) throw std::invalid_argument("n-ad size n must be at least 2");
  if (p.mu < 0) throw std::invalid_argument("mu must be non-negative");
  if (p.rn.support_min() < p.mu)
    throw std::invalid_argument("rn support starts at " + std::to_string(p.rn.support_min()) +
                                ", below mu = " + std::to_string(p.mu));
  check_normalized(p.r1, "r1");
  check_normalized(p.rn, "rn");
  return p;
}

double expected_vertices_per_step(const ModelParams& p) { return 1.0 + (p.n - 1) * p.gamma; }

double expected_edges_per_step(const ModelParams& p) {
  const double clique = p.n * (p.n - 1) / 2.0;
  return p.gamma * (p.n * p.rn.mean() + clique) + (1.0 - p.gamma) * p.r1.mean();
}

double implied_mean_degree(const ModelParams& p) {
  return 2.0 * expected_edges_per_step(p) / expected_vertices_per_step(p);
}

double normalizer_a(const ModelParams& p) {
  return p.r1.mean() * (1.0 - p.gamma) + p.gamma * p.n * p.rn.mean() -
         p.gamma * (p.n - 1) * p.mu;
}

double single_edge_rate(const ModelParams& p) {
  return p.r1.mean() * (1.0 - p.gamma) + p.gamma * p.n * p.rn.mean() - p.gamma * p.n * p.mu;
}

double arrival_rate(const ModelParams& p, int k) {
  return p.r1.prob(k) * (1.0 - p.gamma) + p.gamma * p.n * p.rn.prob(k + 1 - p.n);
}

std::pair<int, int> arrival_support(const ModelParams& p) {
  const int nad_lo = p.rn.support_min() + p.n - 1;
  const int nad_hi = p.rn.support_max() + p.n - 1;
  if (p.gamma == 0.0) return {p.r1.support_min(), p.r1.support_max()};
  if (p.gamma == 1.0) return {nad_lo, nad_hi};
  return {std::min(p.r1.support_min(), nad_lo), std::max(p.r1.support_max(), nad_hi)};
}

}  // namespace commgrow
