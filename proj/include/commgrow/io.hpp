#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "commgrow/analysis.hpp"
#include "commgrow/graph.hpp"
#include "commgrow/model.hpp"
#include "commgrow/stationary.hpp"

namespace commgrow {

inline constexpr const char* kToolName = "commgrow";
inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal form that reads back to the same double.
std::string format_real(double x);

/// `# key=value` header lines shared by all outputs: tool version first,
/// then the given echo lines.
void write_header(std::ostream& out, const std::vector<std::string>& echo);

/// Echo lines describing the model parameters (γ, n, μ, r1, rn).
std::vector<std::string> describe_params(const ModelParams& p);

/// Edge list: header comments, then one `u<TAB>v` per line in insertion order.
void write_edge_list(std::ostream& out, const MultiGraph& g, const std::vector<std::string>& echo);

/// Reads an edge list written by write_edge_list (comments ignored). The
/// vertex count is 1 + the largest id unless `# vertices=N` is present.
MultiGraph read_edge_list(std::istream& in);
MultiGraph read_edge_list_file(const std::string& path);

/// Flat key=value stats.
void write_stats(std::ostream& out, const GrowthStats& s, const MultiGraph& g);

/// `k,Q_k` rows followed by a comment block with mean_f, residual and tail bound.
void write_solution_csv(std::ostream& out, const StationarySolution& s,
                        const std::vector<std::string>& echo);

/// `k,empirical` rows.
void write_vdd_csv(std::ostream& out, const DegreeDistribution& d,
                   const std::vector<std::string>& echo);

struct ReportSummary {
  double tv = 0.0;
  double ks = 0.0;
  double slope = 0.0;
  bool slope_defined = false;
  std::uint64_t triangles = 0;
  double clustering = 0.0;
  bool clustering_defined = false;
};

/// `k,empirical,theoretical,abs_error` rows, then summary comment lines.
void write_report_csv(std::ostream& out, const DegreeTable& empirical, const DegreeTable& theory,
                      const ReportSummary& summary, const std::vector<std::string>& echo);

}  // namespace commgrow
