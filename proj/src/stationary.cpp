#include "commgrow/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

#include "commgrow/errors.hpp"

namespace commgrow {

namespace {

/// Coefficients of the layer recurrence shared by forward and inverse forms.
struct Rates {
  double gamma;
  int n;
  double c;   // vertices per step, 1 + γ(n-1)
  double a;   // outflow coefficient of P_k
  double b;   // single-edge inflow coefficient of P_{k-1}
  double gm;  // bundle inflow coefficient of P_{k-n}, γμ

  explicit Rates(const ModelParams& p)
      : gamma(p.gamma),
        n(p.n),
        c(expected_vertices_per_step(p)),
        a(normalizer_a(p)),
        b(single_edge_rate(p)),
        gm(p.gamma * p.mu) {}
};

/// f values divided by f_ref on demand; dividing by a reference weight makes
/// the solver's arithmetic identical for f and 2^j·f.
class ScaledWeights {
 public:
  ScaledWeights(const PreferenceFunction& f, double ref) : f_(f), ref_(ref) {}
  double operator()(int k) {
    if (k < 0) return 0.0;
    const auto idx = static_cast<std::size_t>(k);
    while (cache_.size() <= idx) cache_.push_back(f_(static_cast<int>(cache_.size())) / ref_);
    return cache_[idx];
  }

 private:
  const PreferenceFunction& f_;
  double ref_;
  std::vector<double> cache_;
};

struct Sweep {
  std::vector<double> q;  // Q_k for k = start..start+q.size()-1
  int start = 0;
  double mass = 0.0;       // Σ Q over the table
  double f_mass = 0.0;     // Σ f_k Q_k over the table
  double f_tail = 0.0;     // extrapolated Σ f_k Q_k beyond the table
  double tail_mass = 0.0;  // mass beyond the table
  bool f_divergent = false;

  int last() const { return start + static_cast<int>(q.size()) - 1; }
  double total_f() const { return f_mass + f_tail; }
  double total_mass() const { return mass + tail_mass; }
};

class Recurrence {
 public:
  Recurrence(const ModelParams& p, const PreferenceFunction& f, double ref)
      : p_(p), f_(f), rates_(p), w_(f, ref) {
    const auto [lo, hi] = arrival_support(p);
    start_ = lo;
    arrival_hi_ = hi;
  }

  int start() const { return start_; }
  int arrival_hi() const { return arrival_hi_; }

  /// Evaluates Q up to `k_max`, or when k_max < 0 up to the first degree past
  /// the arrivals where the tail mass is below `cutoff`, capped at `k_cap`.
  Sweep run(double x, int k_max, double cutoff, int k_cap) {
    Sweep s;
    s.start = start_;
    const double c = rates_.c;
    const int n = rates_.n;
    double arrived = 0.0;  // Σ R_k so far
    double window_u = 0.0; // Σ of the last n values of f_k Q_k
    const int limit = k_max >= 0 ? k_max : k_cap;
    std::vector<double> u;  // f_k Q_k
    for (int k = start_; k <= limit; ++k) {
      const double r = arrival_rate(p_, k);
      const double u1 = at(u, k - 1);
      const double un = at(u, k - n);
      const double num = r * x + rates_.b * u1 + rates_.gm * un;
      const double fk = w_(k);
      const double q = num / (x * c + rates_.a * fk);
      if (q < 0.0 || !std::isfinite(q)) {
        std::ostringstream msg;
        msg << "stationary recurrence produced Q_" << k << " = " << q;
        throw InfeasibleError(msg.str(), k);
      }
      s.q.push_back(q);
      u.push_back(fk * q);
      s.mass += q;
      s.f_mass += fk * q;
      arrived += r;
      window_u += fk * q - at(u, k - n);

      if (k_max < 0 && k >= arrival_hi_) {
        const double tail = tail_mass(x, arrived, u.back(), window_u);
        if (tail < cutoff) break;
      }
    }
    const int last = s.last();
    s.tail_mass = s.q.empty() ? 1.0 : tail_mass(x, arrived, u.back(), window_u);
    if (!f_.bounded() && !s.q.empty()) extrapolate(s, u, last);
    return s;
  }

 private:
  double at(const std::vector<double>& u, int k) const {
    if (k < start_) return 0.0;
    const auto idx = static_cast<std::size_t>(k - start_);
    return idx < u.size() ? u[idx] : 0.0;
  }

  // Mass the recurrence places beyond the table: summing the recurrence over
  // k ≤ K telescopes to xc(1 - ΣQ) = x(c - ΣR) + b·u_K + γμ·Σ_{K-n<j≤K} u_j.
  double tail_mass(double x, double arrived, double u_last, double window_u) const {
    const double c = rates_.c;
    const double t = (x * (c - arrived) + rates_.b * u_last + rates_.gm * window_u) / (x * c);
    return std::max(0.0, t);
  }

  // Σ_{k>K} f_kQ_k for f_kQ_k ≈ C·k^{-s}, with s estimated from the table.
  void extrapolate(Sweep& s, const std::vector<double>& u, int last) {
    const int floor = std::max({f_.table_end(), arrival_hi_, start_}) + 1;
    const int span = (last - floor) / 2;
    if (span < 2 * rates_.n) {
      // Too short to see the decay; fall back to the mass bound times f.
      s.f_tail = s.tail_mass * w_(last + 1);
      return;
    }
    const int k0 = last - span;
    const double u0 = at(u, k0);
    const double u1 = at(u, last);
    if (!(u1 > 0.0) || !(u0 > 0.0)) return;
    const double exponent = std::log(u0 / u1) / std::log(static_cast<double>(last) / k0);
    if (!(exponent > 1.0)) {
      s.f_divergent = true;
      s.f_tail = std::numeric_limits<double>::infinity();
      return;
    }
    const double K = last;
    s.f_tail = u1 * (K + 0.5) * std::pow(K / (K + 0.5), exponent) / (exponent - 1.0);
  }

  const ModelParams& p_;
  const PreferenceFunction& f_;
  Rates rates_;
  ScaledWeights w_;
  int start_ = 0;
  int arrival_hi_ = 0;
};

}  // namespace

DegreeTable q_from_recurrence(const ModelParams& p, const PreferenceFunction& f, double mean_f,
                              int k_max) {
  if (!(mean_f > 0.0)) throw std::invalid_argument("mean_f must be positive");
  Recurrence rec(p, f, 1.0);
  if (k_max < rec.start()) return DegreeTable(rec.start(), {});
  auto s = rec.run(mean_f, k_max, 0.0, k_max);
  return DegreeTable(s.start, std::move(s.q));
}

DegreeTable q_gamma0(const DegreeDistribution& r1, const PreferenceFunction& f, double mean_f,
                     int k_max) {
  if (!(mean_f > 0.0)) throw std::invalid_argument("mean_f must be positive");
  const double m = r1.mean();
  std::vector<double> q(static_cast<std::size_t>(std::max(k_max + 1, 0)), 0.0);
  for (int k = 0; k <= k_max; ++k) {
    const double prev = k >= 1 ? f(k - 1) * q[static_cast<std::size_t>(k - 1)] : 0.0;
    q[static_cast<std::size_t>(k)] = (r1.prob(k) * mean_f + m * prev) / (mean_f + m * f(k));
  }
  return DegreeTable(0, std::move(q));
}

DegreeTable q_dyad(const DegreeDistribution& rn, const PreferenceFunction& f, int mu,
                   double mean_f, int k_max) {
  if (!(mean_f > 0.0)) throw std::invalid_argument("mean_f must be positive");
  const double m = rn.mean();
  std::vector<double> q(static_cast<std::size_t>(std::max(k_max + 1, 0)), 0.0);
  auto fq = [&](int k) { return k >= 0 ? f(k) * q[static_cast<std::size_t>(k)] : 0.0; };
  for (int k = 0; k <= k_max; ++k) {
    const double arrivals = k >= 1 ? rn.prob(k - 1) : 0.0;
    const double num = 2.0 * arrivals * mean_f + (2.0 * m - 2.0 * mu) * fq(k - 1) + mu * fq(k - 2);
    const double den = 2.0 * mean_f + 2.0 * f(k) * m - f(k) * mu;
    q[static_cast<std::size_t>(k)] = num / den;
  }
  return DegreeTable(0, std::move(q));
}

double balance_residual(const ModelParams& p, const PreferenceFunction& f, const DegreeTable& q,
                        double mean_f) {
  const double g = p.gamma;
  const int n = p.n;
  const double mu = p.mu;
  const double m1 = p.r1.mean();
  const double mn = p.rn.mean();
  auto P = [&](int k) { return k < 0 ? 0.0 : q[k] * f(k) / mean_f; };
  double worst = 0.0;
  for (int k = q.first(); k <= q.last(); ++k) {
    const double monad = p.r1.prob(k) + m1 * P(k - 1) - m1 * P(k);
    const double nad = n * p.rn.prob(k + 1 - n) + mu * P(k - n) - mu * P(k) +
                       (n * mn - n * mu) * P(k - 1) - (n * mn - n * mu) * P(k);
    const double lhs = (1.0 + g * (n - 1)) * q[k];
    worst = std::max(worst, std::abs((1.0 - g) * monad + g * nad - lhs));
  }
  return worst;
}

StationarySolution solve_stationary(const ModelParams& p, const PreferenceFunction& f,
                                    const SolverOptions& options) {
  validate_params(p);
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(options.damping > 0.0 && options.damping <= 1.0))
    throw std::invalid_argument("damping must lie in (0, 1]");

  const double ref = f(f.g());
  Recurrence rec(p, f, ref);
  const int fixed_k = options.k_max.value_or(-1);
  if (fixed_k >= 0 && fixed_k < rec.arrival_hi())
    throw std::invalid_argument("k_max must cover the largest arriving degree");

  StationarySolution out;
  double x = normalizer_a(p);
  if (!(x > 0.0)) x = 1.0;

  // Truncation is chosen at the current estimate and then held fixed, so the
  // map x -> Σ f_k Q_k(x) stays smooth while it is being solved.
  int k_max = fixed_k >= 0 ? fixed_k : rec.run(x, -1, options.tail_cutoff, options.k_cap).last();

  auto sweep = [&](double xv) { return rec.run(xv, k_max, 0.0, k_max); };
  auto h = [&](double xv) {
    const Sweep s = sweep(xv);
    if (s.f_divergent) return std::numeric_limits<double>::infinity();
    return s.total_f() - xv * s.total_mass();
  };

  for (int round = 0; round < 4; ++round) {
    bool converged = false;
    double prev_err = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int it = 0; it < options.max_iterations; ++it) {
      ++out.iterations;
      const Sweep s = sweep(x);
      if (s.f_divergent) break;
      const double target = s.total_f() / s.total_mass();
      const double err = std::abs(target - x) / x;
      if (err < options.tol) {
        converged = true;
        break;
      }
      stalled = err > 0.95 * prev_err ? stalled + 1 : 0;
      if (stalled >= 8) break;
      prev_err = err;
      x = (1.0 - options.damping) * x + options.damping * target;
      if (!(x > 0.0) || !std::isfinite(x)) {
        x = normalizer_a(p) > 0.0 ? normalizer_a(p) : 1.0;
        break;
      }
    }
    if (!converged) {
      out.used_bracketing = true;
      // h > 0 for small x (Σ f Q large or divergent), h < 0 for large x.
      double lo = x;
      double hi = x;
      double h_lo = h(lo);
      double h_hi = h_lo;
      int guard = 0;
      if (h_lo > 0.0) {
        while (h_hi > 0.0 && guard++ < 200) {
          lo = hi;
          h_lo = h_hi;
          hi *= 2.0;
          h_hi = h(hi);
        }
      } else {
        while (h_lo <= 0.0 && guard++ < 200) {
          hi = lo;
          h_hi = h_lo;
          lo *= 0.5;
          h_lo = h(lo);
        }
      }
      if (!(h_lo > 0.0 && h_hi <= 0.0))
        throw ConvergenceError("could not bracket the mean preference value");
      // Move an infinite endpoint inward until both ends are finite.
      while (!std::isfinite(h_lo) && guard++ < 400) {
        const double mid = 0.5 * (lo + hi);
        const double h_mid = h(mid);
        if (h_mid > 0.0) {
          lo = mid;
          h_lo = h_mid;
        } else {
          hi = mid;
          h_hi = h_mid;
        }
      }
      if (h_hi == 0.0) {
        x = hi;
      } else {
        std::uintmax_t max_iter = 200;
        const auto [a_end, b_end] = boost::math::tools::toms748_solve(
            h, lo, hi, h_lo, h_hi, boost::math::tools::eps_tolerance<double>(50), max_iter);
        x = 0.5 * (a_end + b_end);
        out.iterations += static_cast<int>(max_iter);
      }
    }
    if (fixed_k >= 0) break;
    const int next = rec.run(x, -1, options.tail_cutoff, options.k_cap).last();
    if (next == k_max) break;
    k_max = next;
  }

  const Sweep s = sweep(x);
  if (s.f_divergent) throw ConvergenceError("mean preference value diverges at the solution");
  out.mean_f = x * ref;
  out.consistency_error = std::abs(s.total_f() / s.total_mass() - x) / x;
  out.tail_mass_bound = s.tail_mass;
  out.q = DegreeTable(s.start, s.q);
  out.balance_residual = balance_residual(p, f, out.q, out.mean_f);
  if (!(out.consistency_error < options.tol)) {
    std::ostringstream msg;
    msg << "fixed point not reached: relative |<f> - sum f Q| = " << out.consistency_error
        << " after " << out.iterations << " iterations";
    throw ConvergenceError(msg.str());
  }
  return out;
}

}  // namespace commgrow
