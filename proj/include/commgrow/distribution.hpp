#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace commgrow {

/// Dense table of reals indexed by degree, starting at `first()`.
/// Reads outside the stored range return 0. Used for unnormalized
/// recurrence output and as the storage behind DegreeDistribution.
class DegreeTable {
 public:
  DegreeTable() = default;
  DegreeTable(int first, std::vector<double> values);

  int first() const noexcept { return first_; }
  /// Last stored degree; first() - 1 when empty.
  int last() const noexcept { return first_ + static_cast<int>(values_.size()) - 1; }
  bool empty() const noexcept { return values_.empty(); }
  std::size_t size() const noexcept { return values_.size(); }

  double operator[](int k) const noexcept {
    if (k < first_ || k > last()) return 0.0;
    return values_[static_cast<std::size_t>(k - first_)];
  }
  std::span<const double> values() const noexcept { return values_; }

  double sum() const noexcept;
  /// Σ k·t_k (not divided by the sum).
  double first_moment() const noexcept;

 private:
  int first_ = 0;
  std::vector<double> values_;
};

/// Probability mass function over non-negative integer degrees.
///
/// Always normalized: the constructors reject input whose mass differs from
/// one by more than the given tolerance. Probabilities may be zero inside the
/// support (gaps), but support_min() and support_max() are the extreme
/// degrees with positive mass.
class DegreeDistribution {
 public:
  /// Point mass at degree 0.
  DegreeDistribution();

  static DegreeDistribution point_mass(int k);

  /// Builds from (degree, probability) pairs in any order. Duplicate degrees,
  /// negative degrees or probabilities, and mass deviating from 1 by more
  /// than `tolerance` are rejected with std::invalid_argument. Mass within
  /// tolerance but not within 1e-12 is divided out.
  static DegreeDistribution from_pairs(std::vector<std::pair<int, double>> pairs,
                                       double tolerance = 1e-9);

  /// Empirical pmf from vertex counts per degree (counts[k] vertices of degree k).
  static DegreeDistribution from_counts(std::span<const std::uint64_t> counts);

  /// Rescales a non-negative table to unit mass.
  static DegreeDistribution normalized(const DegreeTable& table);

  double prob(int k) const noexcept { return table_[k]; }
  int support_min() const noexcept { return table_.first(); }
  int support_max() const noexcept { return table_.last(); }
  const DegreeTable& table() const noexcept { return table_; }

  double mean() const noexcept { return table_.first_moment(); }

  /// (degree, probability) for every degree with positive mass.
  std::vector<std::pair<int, double>> entries() const;

  /// Convex mixture w·a + (1-w)·b.
  static DegreeDistribution mixture(const DegreeDistribution& a, const DegreeDistribution& b,
                                    double w);

 private:
  explicit DegreeDistribution(DegreeTable table) : table_(std::move(table)) {}
  DegreeTable table_;
};

/// Mean of a distribution: Σ k·d_k.
double mean_degree_of(const DegreeDistribution& d);

/// Text format: one `k<TAB>value` pair per line (comma or spaces are also
/// accepted as separators), `#` comments, any order. A leading non-numeric
/// header row such as `k,Q_k` is skipped. Mass must be within 1e-6 of one.
DegreeDistribution read_distribution(std::istream& in);
DegreeDistribution read_distribution_file(const std::string& path);
void write_distribution(std::ostream& out, const DegreeDistribution& d);

/// Line tokenizer shared by the `k<TAB>value` formats. Comment lines are
/// handed to `on_comment` with the leading '#' and surrounding blanks removed.
std::vector<std::pair<int, double>> parse_degree_pairs(
    std::istream& in, const std::function<void(const std::string&)>& on_comment = {});

}  // namespace commgrow
