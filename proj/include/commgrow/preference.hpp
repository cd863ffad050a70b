#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace commgrow {

/// Preference weights f(k): positive on the window [g, M], zero outside.
///
/// Stored as an explicit table for degrees g..g+T-1 followed by an optional
/// affine continuation slope·k + intercept, which covers the rest of the
/// window. M may be unbounded, in which case the continuation is mandatory.
/// Only ratios of weights matter to attachment; `scaled` produces an
/// equivalent function.
class PreferenceFunction {
 public:
  struct Affine {
    double slope = 0.0;
    double intercept = 0.0;
  };

  /// Tabulated weights on [g, g + weights.size() - 1].
  static PreferenceFunction tabulated(int g, std::vector<double> weights);

  /// f(k) = slope·k + intercept on [g, M]; M = nullopt means unbounded.
  static PreferenceFunction affine(double slope, double intercept, int g,
                                   std::optional<int> max_degree = std::nullopt);

  /// f(k) = k on [g, M].
  static PreferenceFunction linear(int g = 1, std::optional<int> max_degree = std::nullopt) {
    return affine(1.0, 0.0, g, max_degree);
  }

  /// Tabulates an arbitrary callable on [g, M], e.g. log-preference.
  static PreferenceFunction from_callable(int g, int max_degree,
                                          const std::function<double(int)>& fn);

  /// General form: table on [g, g+T-1], then `tail` up to `max_degree`.
  PreferenceFunction(int g, std::vector<double> table, std::optional<Affine> tail,
                     std::optional<int> max_degree);

  double operator()(int k) const noexcept {
    if (k < g_ || (max_degree_ && k > *max_degree_)) return 0.0;
    const auto idx = static_cast<std::size_t>(k - g_);
    if (idx < table_.size()) return table_[idx];
    return tail_->slope * k + tail_->intercept;
  }

  int g() const noexcept { return g_; }
  const std::optional<int>& max_degree() const noexcept { return max_degree_; }
  bool bounded() const noexcept { return max_degree_.has_value(); }
  /// Last degree covered by the explicit table.
  int table_end() const noexcept { return g_ + static_cast<int>(table_.size()) - 1; }
  const std::vector<double>& table() const noexcept { return table_; }
  const std::optional<Affine>& tail() const noexcept { return tail_; }

  PreferenceFunction scaled(double c) const;

 private:
  int g_;
  std::vector<double> table_;
  std::optional<Affine> tail_;
  std::optional<int> max_degree_;
};

/// Text format shared with distributions: `k<TAB>f_k` rows, plus header
/// comments `# g = <int>`, `# M = <int|inf>` and optionally
/// `# tail = affine <slope> <intercept>` for a continuation past the rows.
/// Rows must cover a contiguous degree range starting at g.
PreferenceFunction read_preference(std::istream& in);
PreferenceFunction read_preference_file(const std::string& path);
/// Writes the function; affine continuations are preserved in the header,
/// finite windows are written out in full.
void write_preference(std::ostream& out, const PreferenceFunction& f);

}  // namespace commgrow
