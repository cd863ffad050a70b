#include "commgrow/preference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "commgrow/distribution.hpp"
#include "commgrow/errors.hpp"

namespace commgrow {

PreferenceFunction::PreferenceFunction(int g, std::vector<double> table,
                                       std::optional<Affine> tail,
                                       std::optional<int> max_degree)
    : g_(g), table_(std::move(table)), tail_(tail), max_degree_(max_degree) {
  if (g < 0) throw std::invalid_argument("preference window must start at g >= 0");
  if (max_degree_ && *max_degree_ < g)
    throw std::invalid_argument("preference window has M < g");
  if (max_degree_ && table_end() > *max_degree_)
    throw std::invalid_argument("preference table extends past M");
  const bool covered = max_degree_ && table_end() == *max_degree_;
  if (!covered && !tail_)
    throw std::invalid_argument("preference table does not cover [g, M] and has no continuation");
  if (covered) tail_.reset();

  for (std::size_t i = 0; i < table_.size(); ++i) {
    const double w = table_[i];
    const int k = g_ + static_cast<int>(i);
    if (!std::isfinite(w) || !(w > 0.0))
      throw InfeasibleError("preference weight f(" + std::to_string(k) + ") is not positive", k);
  }
  if (tail_) {
    if (!std::isfinite(tail_->slope) || !std::isfinite(tail_->intercept))
      throw std::invalid_argument("preference continuation is not finite");
    const int first = table_end() + 1;
    auto value_at = [&](int k) { return tail_->slope * k + tail_->intercept; };
    if (!(value_at(first) > 0.0))
      throw InfeasibleError("preference weight f(" + std::to_string(first) + ") is not positive",
                            first);
    if (max_degree_) {
      if (!(value_at(*max_degree_) > 0.0))
        throw InfeasibleError(
            "preference weight f(" + std::to_string(*max_degree_) + ") is not positive",
            *max_degree_);
    } else if (tail_->slope < 0.0) {
      throw InfeasibleError("unbounded preference with negative slope turns non-positive", first);
    }
  }
}

PreferenceFunction PreferenceFunction::tabulated(int g, std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("empty preference table");
  const int m = g + static_cast<int>(weights.size()) - 1;
  return PreferenceFunction(g, std::move(weights), std::nullopt, m);
}

PreferenceFunction PreferenceFunction::affine(double slope, double intercept, int g,
                                              std::optional<int> max_degree) {
  return PreferenceFunction(g, {}, Affine{slope, intercept}, max_degree);
}

PreferenceFunction PreferenceFunction::from_callable(int g, int max_degree,
                                                     const std::function<double(int)>& fn) {
  if (max_degree < g) throw std::invalid_argument("preference window has M < g");
  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(max_degree - g + 1));
  for (int k = g; k <= max_degree; ++k) w.push_back(fn(k));
  return tabulated(g, std::move(w));
}

PreferenceFunction PreferenceFunction::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("scale must be positive");
  std::vector<double> t = table_;
  for (double& w : t) w *= c;
  std::optional<Affine> tail;
  if (tail_) tail = Affine{tail_->slope * c, tail_->intercept * c};
  return PreferenceFunction(g_, std::move(t), tail, max_degree_);
}

namespace {

struct PreferenceHeader {
  std::optional<int> g;
  std::optional<int> max_degree;
  bool unbounded = false;
  std::optional<PreferenceFunction::Affine> tail;
};

void parse_header_line(const std::string& line, PreferenceHeader& h) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) return;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  std::istringstream v(value);
  if (key == "g") {
    int g = 0;
    if (!(v >> g)) throw std::invalid_argument("bad g in preference header");
    h.g = g;
  } else if (key == "M") {
    if (value == "inf") {
      h.unbounded = true;
    } else {
      int m = 0;
      if (!(v >> m)) throw std::invalid_argument("bad M in preference header");
      h.max_degree = m;
    }
  } else if (key == "tail") {
    std::string kind;
    PreferenceFunction::Affine a;
    if (!(v >> kind >> a.slope >> a.intercept) || kind != "affine")
      throw std::invalid_argument("tail must read 'affine <slope> <intercept>'");
    h.tail = a;
  }
}

}  // namespace

PreferenceFunction read_preference(std::istream& in) {
  PreferenceHeader header;
  auto pairs = parse_degree_pairs(in, [&](const std::string& c) { parse_header_line(c, header); });
  std::sort(pairs.begin(), pairs.end());
  int g = 0;
  if (!pairs.empty()) {
    g = pairs.front().first;
    if (header.g && *header.g != g)
      throw std::invalid_argument("preference rows must start at g");
  } else if (header.g) {
    g = *header.g;
  } else {
    throw std::invalid_argument("preference file has neither rows nor a g header");
  }
  std::vector<double> table;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first != g + static_cast<int>(i))
      throw std::invalid_argument("preference rows must cover consecutive degrees");
    table.push_back(pairs[i].second);
  }
  std::optional<int> m = header.max_degree;
  if (!m && !header.unbounded && !header.tail) m = g + static_cast<int>(table.size()) - 1;
  return PreferenceFunction(g, std::move(table), header.tail, m);
}

PreferenceFunction read_preference_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open preference file " + path);
  try {
    return read_preference(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_preference(std::ostream& out, const PreferenceFunction& f) {
  const auto old = out.precision(17);
  out << "# g = " << f.g() << '\n';
  if (f.max_degree())
    out << "# M = " << *f.max_degree() << '\n';
  else
    out << "# M = inf\n";
  if (f.tail() && !f.max_degree()) {
    out << "# tail = affine " << f.tail()->slope << ' ' << f.tail()->intercept << '\n';
    for (int k = f.g(); k <= f.table_end(); ++k) out << k << '\t' << f(k) << '\n';
  } else {
    for (int k = f.g(); k <= *f.max_degree(); ++k) out << k << '\t' << f(k) << '\n';
  }
  out.precision(old);
}

}  // namespace commgrow
