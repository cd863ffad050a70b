#include "commgrow/calibrate.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace commgrow {

namespace {

struct Window {
  int g;
  int m;
};

Window resolve_window(const DegreeDistribution& target, const CalibrationWindow& w) {
  Window out{w.g.value_or(target.support_min()), w.max_degree.value_or(target.support_max())};
  if (out.g < 0 || out.m < out.g) throw std::invalid_argument("calibration window is empty");
  for (int k = out.g; k <= out.m; ++k)
    if (!(target.prob(k) > 0.0))
      throw std::invalid_argument("target has zero probability at degree " + std::to_string(k) +
                                  " inside the calibration window; smooth it first");
  return out;
}

struct Recurrence {
  std::vector<double> f;
  std::optional<int> failed_at;
};

// f_k for k in [g, m] with ⟨f⟩ = a; stops after the first weight that is not
// positive beyond its rounding error. The recurrence amplifies earlier errors
// by Q_{k-1}/Q_k, so a running bound is carried alongside: layers that are
// analytically absorbing (f_k = 0) otherwise come out as ±1e-11 noise.
Recurrence run_recurrence(const DegreeDistribution& target, const ModelParams& p, Window w) {
  constexpr double kUlps = 8.0 * std::numeric_limits<double>::epsilon();
  const double a = normalizer_a(p);
  const double gamma = p.gamma;
  const int n = p.n;
  const double c = 1.0 + gamma * (n - 1);
  const double b = p.r1.mean() * (1.0 - gamma) + gamma * n * p.rn.mean() - gamma * n * p.mu;
  const double gm = gamma * p.mu;

  std::vector<double> f, err;
  f.reserve(static_cast<std::size_t>(w.m - w.g + 1));
  err.reserve(f.capacity());
  auto at = [&](const std::vector<double>& v, int k) {
    return k < w.g ? 0.0 : v[static_cast<std::size_t>(k - w.g)] * target.prob(k);
  };
  for (int k = w.g; k <= w.m; ++k) {
    const double q = target.prob(k);
    const double arrivals = p.r1.prob(k) * (1.0 - gamma) + gamma * n * p.rn.prob(k + 1 - n);
    const double first = (arrivals - c * q) / q;
    const double second = (b * at(f, k - 1) + gm * at(f, k - n)) / (a * q);
    const double fk = first + second;
    const double ek = kUlps * (arrivals / q + c + std::abs(second)) +
                      (b * at(err, k - 1) + gm * at(err, k - n)) / (a * q);
    f.push_back(fk);
    err.push_back(ek);
    if (!(fk > ek)) return {std::move(f), k};
  }
  return {std::move(f), std::nullopt};
}

}  // namespace

CalibrationResult calibrate(const DegreeDistribution& target, const ModelParams& p,
                            const CalibrationWindow& window) {
  validate_params(p);
  const double a = normalizer_a(p);
  if (!(a > 0.0)) throw std::invalid_argument("normalizer a must be positive for calibration");
  const Window w = resolve_window(target, window);

  CalibrationResult out;
  out.a = a;
  out.g = w.g;
  out.max_degree = w.m;
  auto rec = run_recurrence(target, p, w);
  out.weights = std::move(rec.f);
  out.feasible = !rec.failed_at;
  if (!out.feasible) {
    out.first_infeasible_k = rec.failed_at;
    return out;
  }
  for (int k = w.g; k <= w.m; ++k)
    out.mean_f += out.weights[static_cast<std::size_t>(k - w.g)] * target.prob(k);
  out.f = PreferenceFunction::tabulated(w.g, out.weights);
  return out;
}

std::vector<double> calibrate_with_mean(const DegreeDistribution& target, const ModelParams& p,
                                        double mean_f, int g, int max_degree) {
  validate_params(p);
  if (!(mean_f > 0.0)) throw std::invalid_argument("mean_f must be positive");
  const Window w = resolve_window(target, CalibrationWindow{g, max_degree});
  const double gamma = p.gamma;
  const double n = p.n;
  const double mu = p.mu;
  const double m1 = p.r1.mean();
  const double mn = p.rn.mean();

  std::vector<double> f(static_cast<std::size_t>(w.m - w.g + 1), 0.0);
  auto weight = [&](int k) { return k < w.g ? 0.0 : f[static_cast<std::size_t>(k - w.g)]; };
  for (int k = w.g; k <= w.m; ++k) {
    const double q_k = target.prob(k);
    const double first = (p.r1.prob(k) * (1.0 - gamma) + gamma * n * p.rn.prob(k + 1 - p.n) -
                          (1.0 + gamma * (n - 1.0)) * q_k) /
                         q_k;
    const double second = ((m1 * (1.0 - gamma) + gamma * n * mn - gamma * n * mu) * weight(k - 1) *
                               target.prob(k - 1) +
                           gamma * mu * weight(k - p.n) * target.prob(k - p.n)) /
                          (mean_f * q_k);
    f[static_cast<std::size_t>(k - w.g)] = first + second;
  }
  return f;
}

}  // namespace commgrow
