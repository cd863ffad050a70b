#pragma once

#include "commgrow/distribution.hpp"

namespace commgrow {

/// Parameters of the growth process. Each step adds an n-ad (a clique of n
/// new vertices) with probability gamma and a monad otherwise.
struct ModelParams {
  double gamma = 0.0;
  int n = 2;
  /// Conjugate bundles per n-ad: each bundle is one free end from every
  /// n-ad vertex, all attached to a single sampled target.
  int mu = 0;
  /// Free-edge count of a monad.
  DegreeDistribution r1;
  /// Free-edge count of each n-ad vertex (drawn independently per vertex).
  DegreeDistribution rn;
};

/// Throws std::invalid_argument naming the first violated constraint;
/// returns its argument otherwise.
const ModelParams& validate_params(const ModelParams& p);

/// 1 + (n-1)·γ.
double expected_vertices_per_step(const ModelParams& p);

/// γ·(n·m_n + n(n-1)/2) + (1-γ)·m_1, counting the n(n-1)/2 clique edges.
double expected_edges_per_step(const ModelParams& p);

/// Average degree the process converges to: 2·edges / vertices per step.
/// A calibration target must have this mean to be realizable.
double implied_mean_degree(const ModelParams& p);

/// a = m_1(1-γ) + γ·n·m_n - γ(n-1)·μ: expected number of free ends leaving
/// a layer per step per unit P_k; also the scale of ⟨f⟩ used by calibration.
double normalizer_a(const ModelParams& p);

/// b = m_1(1-γ) + γ·n·m_n - γ·n·μ: single-edge (non-bundle) free ends per step.
double single_edge_rate(const ModelParams& p);

/// R_k = (1-γ)·r1_k + γ·n·rn_{k+1-n}: expected new vertices entering
/// layer k per step.
double arrival_rate(const ModelParams& p, int k);

/// Degree range [lo, hi] of arriving vertices.
std::pair<int, int> arrival_support(const ModelParams& p);

}  // namespace commgrow
