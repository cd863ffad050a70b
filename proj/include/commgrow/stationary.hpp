#pragma once

#include <optional>

#include "commgrow/distribution.hpp"
#include "commgrow/model.hpp"
#include "commgrow/preference.hpp"

namespace commgrow {

/// Stationary layer probabilities Q_k for a given ⟨f⟩, evaluated left to
/// right for k from the lowest arriving or attachable degree up to k_max:
///
///   Q_k = [R_k·⟨f⟩ + b·f_{k-1}Q_{k-1} + γμ·f_{k-n}Q_{k-n}]
///         / [⟨f⟩(1 + γ(n-1)) + a·f_k]
///
/// with R_k, a, b as in model.hpp. Q is zero below the start degree. The
/// result is unnormalized unless ⟨f⟩ is the fixed point.
DegreeTable q_from_recurrence(const ModelParams& p, const PreferenceFunction& f, double mean_f,
                              int k_max);

/// Monad-only special case:
///   Q_k = (r_k⟨f⟩ + m·f_{k-1}Q_{k-1}) / (⟨f⟩ + m·f_k).
DegreeTable q_gamma0(const DegreeDistribution& r1, const PreferenceFunction& f, double mean_f,
                     int k_max);

/// Dyad-only special case:
///   Q_k = (2r_{k-1}⟨f⟩ + (2m-2μ)f_{k-1}Q_{k-1} + μf_{k-2}Q_{k-2})
///         / (2⟨f⟩ + 2f_k·m - f_k·μ).
DegreeTable q_dyad(const DegreeDistribution& rn, const PreferenceFunction& f, int mu,
                   double mean_f, int k_max);

/// Largest deviation over the table's range of the per-step layer balance
///   (1+γ(n-1))·Q_k = (1-γ)Δ₁_k + γΔ₂_k,
/// where Δ₁ and Δ₂ are the expected monad and n-ad changes of |A_k| with
/// P_k = Q_k f_k / ⟨f⟩.
double balance_residual(const ModelParams& p, const PreferenceFunction& f, const DegreeTable& q,
                        double mean_f);

struct SolverOptions {
  /// Relative tolerance on |Σ f_k Q_k - ⟨f⟩| / ⟨f⟩.
  double tol = 1e-12;
  /// Fixed truncation degree; by default the table stops where the
  /// remaining mass drops below tail_cutoff, capped at k_cap.
  std::optional<int> k_max;
  double tail_cutoff = 1e-12;
  int k_cap = 1'000'000;
  /// Damping β of x ← (1-β)x + β·Σf_kQ_k(x)/ΣQ_k(x).
  double damping = 0.5;
  int max_iterations = 200;
};

struct StationarySolution {
  /// Q_k table, truncated at k_max; sums to 1 - (mass beyond k_max).
  DegreeTable q;
  double mean_f = 0.0;
  double balance_residual = 0.0;
  /// Mass the recurrence places beyond the table's last degree.
  double tail_mass_bound = 0.0;
  /// |Σ f_k Q_k - ⟨f⟩| / ⟨f⟩ at the solution (tail of Σ f_k Q_k included).
  double consistency_error = 0.0;
  int iterations = 0;
  bool used_bracketing = false;

  /// The table renormalized to a distribution.
  DegreeDistribution distribution() const { return DegreeDistribution::normalized(q); }
};

/// Finds ⟨f⟩ > 0 with ⟨f⟩ = Σ f_k Q_k(⟨f⟩) and returns the Q table there.
///
/// Damped fixed-point iteration from ⟨f⟩ = a (in units of f(g)), falling
/// back to a bracketed root search on Σf_kQ_k(x) - x·ΣQ_k(x) when the
/// iteration stalls or oscillates. For unbounded f the part of Σ f_k Q_k
/// beyond k_max is extrapolated from the power-law decay of f_kQ_k.
/// Throws ConvergenceError on failure and InfeasibleError on a negative Q_k.
StationarySolution solve_stationary(const ModelParams& p, const PreferenceFunction& f,
                                    const SolverOptions& options = {});

}  // namespace commgrow
