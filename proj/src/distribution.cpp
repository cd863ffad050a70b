#include "commgrow/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace commgrow {

DegreeTable::DegreeTable(int first, std::vector<double> values)
    : first_(first), values_(std::move(values)) {
  if (first < 0) throw std::invalid_argument("degree table must start at a non-negative degree");
}

namespace {

// Neumaier-compensated sum; tables can hold a million terms spanning many
// orders of magnitude.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double DegreeTable::sum() const noexcept {
  CompensatedSum s;
  for (double v : values_) s.add(v);
  return s.value();
}

double DegreeTable::first_moment() const noexcept {
  CompensatedSum s;
  for (std::size_t i = 0; i < values_.size(); ++i)
    s.add(static_cast<double>(first_ + static_cast<int>(i)) * values_[i]);
  return s.value();
}

namespace {

// Drops zero entries at both ends so first()/last() are the support bounds.
DegreeTable trimmed(int first, std::vector<double> v) {
  std::size_t lo = 0;
  while (lo < v.size() && v[lo] == 0.0) ++lo;
  std::size_t hi = v.size();
  while (hi > lo && v[hi - 1] == 0.0) --hi;
  if (lo == hi) throw std::invalid_argument("distribution has no mass");
  return DegreeTable(first + static_cast<int>(lo),
                     std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(lo),
                                         v.begin() + static_cast<std::ptrdiff_t>(hi)));
}

}  // namespace

DegreeDistribution::DegreeDistribution() : table_(0, {1.0}) {}

DegreeDistribution DegreeDistribution::point_mass(int k) {
  if (k < 0) throw std::invalid_argument("degree must be non-negative");
  return DegreeDistribution(DegreeTable(k, {1.0}));
}

DegreeDistribution DegreeDistribution::from_pairs(std::vector<std::pair<int, double>> pairs,
                                                  double tolerance) {
  if (pairs.empty()) throw std::invalid_argument("distribution is empty");
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [k, p] = pairs[i];
    if (k < 0) throw std::invalid_argument("negative degree " + std::to_string(k));
    if (!(p >= 0.0) || !std::isfinite(p))
      throw std::invalid_argument("invalid probability at degree " + std::to_string(k));
    if (i > 0 && pairs[i - 1].first == k)
      throw std::invalid_argument("duplicate degree " + std::to_string(k));
  }
  const int lo = pairs.front().first;
  const int hi = pairs.back().first;
  std::vector<double> v(static_cast<std::size_t>(hi - lo + 1), 0.0);
  double total = 0.0;
  for (const auto& [k, p] : pairs) {
    v[static_cast<std::size_t>(k - lo)] = p;
    total += p;
  }
  if (std::abs(total - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "distribution is not normalized (sum = " << total << ")";
    throw std::invalid_argument(msg.str());
  }
  if (std::abs(total - 1.0) > 1e-12)
    for (double& x : v) x /= total;
  return DegreeDistribution(trimmed(lo, std::move(v)));
}

DegreeDistribution DegreeDistribution::from_counts(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw std::invalid_argument("no vertices to count");
  std::vector<double> v(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k)
    v[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  return DegreeDistribution(trimmed(0, std::move(v)));
}

DegreeDistribution DegreeDistribution::normalized(const DegreeTable& table) {
  const double total = table.sum();
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::invalid_argument("table has no positive mass");
  std::vector<double> v(table.values().begin(), table.values().end());
  for (double& x : v) {
    if (x < 0.0) throw std::invalid_argument("table has negative entries");
    x /= total;
  }
  return DegreeDistribution(trimmed(table.first(), std::move(v)));
}

std::vector<std::pair<int, double>> DegreeDistribution::entries() const {
  std::vector<std::pair<int, double>> out;
  for (int k = support_min(); k <= support_max(); ++k)
    if (prob(k) > 0.0) out.emplace_back(k, prob(k));
  return out;
}

DegreeDistribution DegreeDistribution::mixture(const DegreeDistribution& a,
                                               const DegreeDistribution& b, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("mixture weight outside [0,1]");
  const int lo = std::min(a.support_min(), b.support_min());
  const int hi = std::max(a.support_max(), b.support_max());
  std::vector<double> v(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k)
    v[static_cast<std::size_t>(k - lo)] = w * a.prob(k) + (1.0 - w) * b.prob(k);
  return DegreeDistribution(trimmed(lo, std::move(v)));
}

double mean_degree_of(const DegreeDistribution& d) { return d.mean(); }

std::vector<std::pair<int, double>> parse_degree_pairs(
    std::istream& in, const std::function<void(const std::string&)>& on_comment) {
  std::vector<std::pair<int, double>> pairs;
  std::string line;
  int line_no = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] == '#') {
      if (on_comment) {
        auto body = line.substr(start + 1);
        const auto b = body.find_first_not_of(" \t");
        const auto e = body.find_last_not_of(" \t\r");
        on_comment(b == std::string::npos ? std::string{} : body.substr(b, e - b + 1));
      }
      continue;
    }
    std::string row = line.substr(start);
    std::replace(row.begin(), row.end(), ',', ' ');
    std::replace(row.begin(), row.end(), '\t', ' ');
    std::istringstream fields(row);
    long long k = 0;
    double value = 0.0;
    if (!(fields >> k >> value)) {
      if (!seen_row && pairs.empty()) {
        seen_row = true;  // header row such as "k,Q_k"
        continue;
      }
      throw std::invalid_argument("malformed row at line " + std::to_string(line_no) + ": " +
                                  line);
    }
    std::string extra;
    if (fields >> extra)
      throw std::invalid_argument("trailing fields at line " + std::to_string(line_no));
    if (k < 0 || k > std::numeric_limits<int>::max())
      throw std::invalid_argument("degree out of range at line " + std::to_string(line_no));
    seen_row = true;
    pairs.emplace_back(static_cast<int>(k), value);
  }
  return pairs;
}

DegreeDistribution read_distribution(std::istream& in) {
  return DegreeDistribution::from_pairs(parse_degree_pairs(in), 1e-6);
}

DegreeDistribution read_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open distribution file " + path);
  try {
    return read_distribution(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_distribution(std::ostream& out, const DegreeDistribution& d) {
  const auto old = out.precision(17);
  for (const auto& [k, p] : d.entries()) out << k << '\t' << p << '\n';
  out.precision(old);
}

}  // namespace commgrow
