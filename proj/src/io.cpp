#include "commgrow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace commgrow {

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_header(std::ostream& out, const std::vector<std::string>& echo) {
  out << "# tool=" << kToolName << ' ' << kToolVersion << '\n';
  for (const auto& line : echo) out << "# " << line << '\n';
}

namespace {

std::string describe_distribution(const DegreeDistribution& d) {
  std::string s;
  for (const auto& [k, p] : d.entries()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(k) + ':' + format_real(p);
  }
  return s;
}

}  // namespace

std::vector<std::string> describe_params(const ModelParams& p) {
  return {
      "gamma=" + format_real(p.gamma),
      "n=" + std::to_string(p.n),
      "mu=" + std::to_string(p.mu),
      "r1=" + describe_distribution(p.r1),
      "rn=" + describe_distribution(p.rn),
  };
}

void write_edge_list(std::ostream& out, const MultiGraph& g, const std::vector<std::string>& echo) {
  write_header(out, echo);
  out << "# vertices=" << g.vertex_count() << '\n';
  out << "# edges=" << g.edge_count() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << '\t' << v << '\n';
}

MultiGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::size_t declared = 0;
  bool has_declared = false;
  std::size_t max_id = 0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("vertices=");
      if (pos != std::string::npos) {
        declared = std::stoull(line.substr(pos + 9));
        has_declared = true;
      }
      continue;
    }
    std::istringstream fields(line);
    unsigned long long u = 0, v = 0;
    if (!(fields >> u >> v))
      throw std::invalid_argument("malformed edge at line " + std::to_string(line_no));
    edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
    max_id = std::max<std::size_t>(max_id, std::max(u, v));
  }
  std::size_t n = has_declared ? declared : (edges.empty() ? 0 : max_id + 1);
  if (!edges.empty() && n <= max_id)
    throw std::invalid_argument("edge list references a vertex beyond the declared count");
  MultiGraph g;
  for (std::size_t i = 0; i < n; ++i) g.add_vertex();
  for (const auto& [u, v] : edges) g.add_edge(u, v);
  return g;
}

MultiGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list " + path);
  return read_edge_list(in);
}

void write_stats(std::ostream& out, const GrowthStats& s, const MultiGraph& g) {
  out << "steps=" << s.steps << '\n'
      << "monad_steps=" << s.monad_steps << '\n'
      << "nad_steps=" << s.nad_steps << '\n'
      << "realized_vertices=" << s.realized_vertices << '\n'
      << "realized_edges=" << s.realized_edges << '\n'
      << "rng_seed=" << s.rng_seed << '\n'
      << "vertex_count=" << g.vertex_count() << '\n'
      << "edge_count=" << g.edge_count() << '\n'
      << "status=" << (s.error ? "saturated" : "ok") << '\n';
  if (s.error) out << "error=" << *s.error << '\n';
}

void write_solution_csv(std::ostream& out, const StationarySolution& s,
                        const std::vector<std::string>& echo) {
  write_header(out, echo);
  out << "k,Q_k\n";
  for (int k = s.q.first(); k <= s.q.last(); ++k) out << k << ',' << format_real(s.q[k]) << '\n';
  out << "# mean_f=" << format_real(s.mean_f) << '\n'
      << "# balance_residual=" << format_real(s.balance_residual) << '\n'
      << "# tail_mass_bound=" << format_real(s.tail_mass_bound) << '\n'
      << "# consistency_error=" << format_real(s.consistency_error) << '\n';
}

void write_vdd_csv(std::ostream& out, const DegreeDistribution& d,
                   const std::vector<std::string>& echo) {
  write_header(out, echo);
  out << "k,empirical\n";
  for (int k = d.support_min(); k <= d.support_max(); ++k)
    out << k << ',' << format_real(d.prob(k)) << '\n';
}

void write_report_csv(std::ostream& out, const DegreeTable& empirical, const DegreeTable& theory,
                      const ReportSummary& summary, const std::vector<std::string>& echo) {
  write_header(out, echo);
  out << "k,empirical,theoretical,abs_error\n";
  const int lo = std::min(empirical.empty() ? theory.first() : empirical.first(),
                          theory.empty() ? empirical.first() : theory.first());
  const int hi = std::max(empirical.last(), theory.last());
  for (int k = lo; k <= hi; ++k) {
    const double e = empirical[k];
    const double t = theory[k];
    out << k << ',' << format_real(e) << ',' << format_real(t) << ','
        << format_real(std::abs(e - t)) << '\n';
  }
  out << "# tv=" << format_real(summary.tv) << '\n';
  out << "# ks=" << format_real(summary.ks) << '\n';
  out << "# slope=" << (summary.slope_defined ? format_real(summary.slope) : "nan") << '\n';
  out << "# triangles=" << summary.triangles << '\n';
  out << "# clustering="
      << (summary.clustering_defined ? format_real(summary.clustering) : "nan") << '\n';
}

}  // namespace commgrow
