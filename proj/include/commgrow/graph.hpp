#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commgrow/distribution.hpp"
#include "commgrow/model.hpp"
#include "commgrow/preference.hpp"
#include "commgrow/rng.hpp"

namespace commgrow {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Undirected multigraph with dense vertex ids in creation order.
/// Degree counts incident edge ends, so parallel edges count separately.
class MultiGraph {
 public:
  VertexId add_vertex();
  void add_edge(VertexId u, VertexId v);

  std::size_t vertex_count() const noexcept { return degrees_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  int degree(VertexId v) const { return degrees_.at(v); }
  const std::vector<int>& degrees() const noexcept { return degrees_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const MultiGraph&, const MultiGraph&) = default;

 private:
  std::vector<int> degrees_;
  std::vector<Edge> edges_;
};

/// Complete graph K_s; throws std::invalid_argument for s < 2.
MultiGraph seed_complete(int s);

/// counts[k] = number of vertices with degree k.
std::vector<std::uint64_t> degree_histogram(const MultiGraph& g);

/// Empirical degree distribution |A_k|/N; throws on an empty graph.
DegreeDistribution empirical_vdd(const MultiGraph& g);

enum class LayerSelect {
  automatic,  ///< linear scan, switching to the prefix tree past 4096 layers
  linear,
  tree,
};

/// Degree-layer index over a MultiGraph for preferential target sampling.
///
/// Vertex i is drawn with probability f(k_i)/Σ_j f(k_j) in two stages: a
/// layer k with probability f_k|A_k| / Σ_l f_l|A_l|, then a uniform member of
/// A_k. Membership is exact; the running total weight is maintained
/// incrementally and recomputed by refresh().
class LayerIndex {
 public:
  static constexpr int kTreeThreshold = 4096;

  LayerIndex(const MultiGraph& g, PreferenceFunction f,
             LayerSelect select = LayerSelect::automatic);

  void insert(VertexId v, int degree);
  void move(VertexId v, int from, int to);

  /// Draws one vertex. Throws SaturationError when total weight is zero.
  VertexId sample(Rng& rng) const;

  double total_weight() const noexcept { return total_weight_; }
  double layer_weight(int k) const;
  std::size_t layer_size(int k) const;
  std::span<const VertexId> members(int k) const;
  int max_layer() const noexcept { return static_cast<int>(layers_.size()) - 1; }
  const PreferenceFunction& preference() const noexcept { return f_; }
  bool using_tree() const noexcept { return use_tree_; }

  /// Recomputes the total weight (and the prefix tree) from layer sizes.
  void refresh();

  /// True when layer membership matches a from-scratch rebuild over `g` and
  /// the running total is within 1e-6 relative of the exact sum.
  bool consistent_with(const MultiGraph& g) const;

 private:
  double weight_of(int k) const;
  void ensure_layer(int k);
  void tree_add(int k, double delta);
  int tree_find(double u) const;
  void rebuild_tree();

  PreferenceFunction f_;
  LayerSelect select_;
  bool use_tree_ = false;
  std::vector<std::vector<VertexId>> layers_;
  std::vector<double> weight_cache_;
  std::vector<std::uint32_t> position_;  // slot of each vertex in its layer
  std::vector<double> tree_;             // Fenwick tree over layer weights
  double total_weight_ = 0.0;
};

struct GrowthStats {
  std::uint64_t steps = 0;
  std::uint64_t monad_steps = 0;
  std::uint64_t nad_steps = 0;
  std::uint64_t realized_vertices = 0;
  std::uint64_t realized_edges = 0;
  std::uint64_t rng_seed = 0;
  /// Set when growth stopped early; holds the error message.
  std::optional<std::string> error;
};

struct GrowOptions {
  /// Verify the layer index against a rebuild every this many increments
  /// (0 disables). A mismatch throws std::logic_error.
  std::uint64_t check_interval = 0;
  LayerSelect select = LayerSelect::automatic;
};

/// Owns the growing graph together with its layer index and random stream.
///
/// Every increment draws all of its attachment targets against the state
/// before the increment, then adds vertices and edges. New vertices are
/// indexed only afterwards, so they never receive their own increment's ends.
class GrowthEngine {
 public:
  GrowthEngine(MultiGraph g, ModelParams p, PreferenceFunction f, std::uint64_t seed,
               GrowOptions options = {});

  /// One monad with its edge count drawn from r1.
  void apply_monad();
  /// One monad with `free_edges` ends.
  void apply_monad_with(int free_edges);

  /// One n-ad with per-vertex free counts drawn independently from rn.
  void apply_nad();
  /// One n-ad with explicit per-vertex free counts (size n, each ≥ μ).
  void apply_nad_with(std::span<const int> free_edges);

  /// Performs `steps` increments, an n-ad with probability γ else a monad.
  /// Saturation stops the run and is reported in the returned stats.
  GrowthStats grow(std::uint64_t steps);

  const MultiGraph& graph() const noexcept { return graph_; }
  const LayerIndex& index() const noexcept { return index_; }
  const ModelParams& params() const noexcept { return params_; }
  const GrowthStats& stats() const noexcept { return stats_; }
  Rng& rng() noexcept { return rng_; }

  MultiGraph release() && { return std::move(graph_); }

 private:
  void commit_edges(std::span<const Edge> edges);
  void after_increment();

  MultiGraph graph_;
  ModelParams params_;
  LayerIndex index_;
  Rng rng_;
  DegreeSampler r1_sampler_;
  DegreeSampler rn_sampler_;
  GrowOptions options_;
  GrowthStats stats_;
  std::uint64_t increments_since_refresh_ = 0;
  VertexId index_boundary_ = 0;  // vertices below this id are indexed
  std::vector<int> scratch_counts_;
  std::vector<VertexId> scratch_targets_;
  std::vector<Edge> scratch_edges_;
};

/// Grows `g` in place for `steps` increments from `seed`.
GrowthStats grow(MultiGraph& g, const ModelParams& p, const PreferenceFunction& f,
                 std::uint64_t steps, std::uint64_t seed, GrowOptions options = {});

}  // namespace commgrow
