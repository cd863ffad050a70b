#pragma once

#include <optional>
#include <vector>

#include "commgrow/distribution.hpp"
#include "commgrow/model.hpp"
#include "commgrow/preference.hpp"

namespace commgrow {

struct CalibrationWindow {
  /// Defaults to the target's support_min.
  std::optional<int> g;
  /// Defaults to the target's support_max. Set it below the support maximum
  /// when the target's top degrees are absorbing layers of a bounded f.
  std::optional<int> max_degree;
};

struct CalibrationResult {
  /// Present only when feasible.
  std::optional<PreferenceFunction> f;
  /// Raw recurrence output f_g..f_M (stops at the first infeasible degree).
  std::vector<double> weights;
  int g = 0;
  int max_degree = 0;
  double a = 0.0;
  bool feasible = false;
  std::optional<int> first_infeasible_k;
  /// Σ_k f_k Q_k over the window, which equals a for a consistent target.
  double mean_f = 0.0;
};

/// Preference weights that make the stationary distribution equal `target`,
/// with the free scale fixed by ⟨f⟩ = a:
///
///   f_k = [R_k - (1+γ(n-1))Q_k] / Q_k
///         + [b·f_{k-1}Q_{k-1} + γμ·f_{k-n}Q_{k-n}] / (a·Q_k)
///
/// Weights below g are zero. An f_k that does not exceed its propagated
/// rounding error marks the result infeasible at that degree, so layers that
/// are exactly absorbing are not mistaken for tiny positive weights. Throws std::invalid_argument when a ≤ 0 or the target
/// has a zero inside the window.
CalibrationResult calibrate(const DegreeDistribution& target, const ModelParams& p,
                            const CalibrationWindow& window = {});

/// Same relation with an explicit ⟨f⟩ in the second term's denominator:
///   f_k = [R_k - (1+γ(n-1))Q_k]/Q_k + [b·f_{k-1}Q_{k-1} + γμ·f_{k-n}Q_{k-n}]/(⟨f⟩Q_k).
/// Identical to calibrate() when mean_f = a. Returns raw weights on [g, M].
std::vector<double> calibrate_with_mean(const DegreeDistribution& target, const ModelParams& p,
                                        double mean_f, int g, int max_degree);

}  // namespace commgrow
