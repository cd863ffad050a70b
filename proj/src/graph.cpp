#include "commgrow/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "commgrow/errors.hpp"

namespace commgrow {

DegreeSampler::DegreeSampler(const DegreeDistribution& d) : first_(d.support_min()) {
  double acc = 0.0;
  for (double p : d.table().values()) {
    acc += p;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

int DegreeSampler::operator()(Rng& rng) const {
  const double u = rng.uniform01();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return first_ + static_cast<int>(it - cumulative_.begin());
}

VertexId MultiGraph::add_vertex() {
  degrees_.push_back(0);
  return static_cast<VertexId>(degrees_.size() - 1);
}

void MultiGraph::add_edge(VertexId u, VertexId v) {
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (u >= degrees_.size() || v >= degrees_.size())
    throw std::out_of_range("edge endpoint is not a vertex");
  edges_.emplace_back(u, v);
  ++degrees_[u];
  ++degrees_[v];
}

MultiGraph seed_complete(int s) {
  if (s < 2) throw std::invalid_argument("seed graph needs at least 2 vertices");
  MultiGraph g;
  for (int i = 0; i < s; ++i) g.add_vertex();
  for (int i = 0; i < s; ++i)
    for (int j = i + 1; j < s; ++j) g.add_edge(static_cast<VertexId>(i), static_cast<VertexId>(j));
  return g;
}

std::vector<std::uint64_t> degree_histogram(const MultiGraph& g) {
  std::vector<std::uint64_t> counts;
  for (int d : g.degrees()) {
    if (static_cast<std::size_t>(d) >= counts.size()) counts.resize(static_cast<std::size_t>(d) + 1);
    ++counts[static_cast<std::size_t>(d)];
  }
  return counts;
}

DegreeDistribution empirical_vdd(const MultiGraph& g) {
  if (g.vertex_count() == 0) throw std::invalid_argument("empirical VDD of an empty graph");
  return DegreeDistribution::from_counts(degree_histogram(g));
}

// ---------------------------------------------------------------------------
// LayerIndex

LayerIndex::LayerIndex(const MultiGraph& g, PreferenceFunction f, LayerSelect select)
    : f_(std::move(f)), select_(select), use_tree_(select == LayerSelect::tree) {
  position_.resize(g.vertex_count());
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const int k = g.degrees()[v];
    ensure_layer(k);
    position_[v] = static_cast<std::uint32_t>(layers_[static_cast<std::size_t>(k)].size());
    layers_[static_cast<std::size_t>(k)].push_back(static_cast<VertexId>(v));
  }
  refresh();
}

double LayerIndex::weight_of(int k) const {
  return weight_cache_[static_cast<std::size_t>(k)];
}

void LayerIndex::ensure_layer(int k) {
  if (k < static_cast<int>(layers_.size())) return;
  const auto old = layers_.size();
  auto size = std::max<std::size_t>(static_cast<std::size_t>(k) + 1, 2 * old);
  layers_.resize(size);
  weight_cache_.resize(size);
  for (std::size_t d = old; d < size; ++d) weight_cache_[d] = f_(static_cast<int>(d));
  if (select_ == LayerSelect::automatic && size > static_cast<std::size_t>(kTreeThreshold))
    use_tree_ = true;
  if (use_tree_ && old > 0) rebuild_tree();
}

double LayerIndex::layer_weight(int k) const {
  if (k < 0 || k >= static_cast<int>(layers_.size())) return 0.0;
  return weight_of(k) * static_cast<double>(layers_[static_cast<std::size_t>(k)].size());
}

std::size_t LayerIndex::layer_size(int k) const {
  if (k < 0 || k >= static_cast<int>(layers_.size())) return 0;
  return layers_[static_cast<std::size_t>(k)].size();
}

std::span<const VertexId> LayerIndex::members(int k) const {
  if (k < 0 || k >= static_cast<int>(layers_.size())) return {};
  return layers_[static_cast<std::size_t>(k)];
}

void LayerIndex::insert(VertexId v, int degree) {
  ensure_layer(degree);
  if (v >= position_.size()) position_.resize(static_cast<std::size_t>(v) + 1);
  auto& layer = layers_[static_cast<std::size_t>(degree)];
  position_[v] = static_cast<std::uint32_t>(layer.size());
  layer.push_back(v);
  const double w = weight_of(degree);
  total_weight_ += w;
  if (use_tree_) tree_add(degree, w);
}

void LayerIndex::move(VertexId v, int from, int to) {
  if (from == to) return;
  ensure_layer(to);
  auto& src = layers_[static_cast<std::size_t>(from)];
  const auto slot = position_[v];
  if (slot >= src.size() || src[slot] != v)
    throw std::logic_error("layer index out of sync with vertex degree");
  const VertexId last = src.back();
  src[slot] = last;
  position_[last] = slot;
  src.pop_back();

  auto& dst = layers_[static_cast<std::size_t>(to)];
  position_[v] = static_cast<std::uint32_t>(dst.size());
  dst.push_back(v);

  const double wf = weight_of(from);
  const double wt = weight_of(to);
  total_weight_ += wt - wf;
  if (use_tree_) {
    tree_add(from, -wf);
    tree_add(to, wt);
  }
}

void LayerIndex::refresh() {
  double total = 0.0;
  for (std::size_t k = 0; k < layers_.size(); ++k)
    total += weight_cache_[k] * static_cast<double>(layers_[k].size());
  total_weight_ = total;
  if (use_tree_) rebuild_tree();
}

void LayerIndex::rebuild_tree() {
  const std::size_t size = layers_.size();
  tree_.assign(size + 1, 0.0);
  for (std::size_t k = 0; k < size; ++k) {
    tree_[k + 1] += weight_cache_[k] * static_cast<double>(layers_[k].size());
    const std::size_t parent = (k + 1) + ((k + 1) & (~(k + 1) + 1));
    if (parent <= size) tree_[parent] += tree_[k + 1];
  }
}

void LayerIndex::tree_add(int k, double delta) {
  for (std::size_t i = static_cast<std::size_t>(k) + 1; i < tree_.size(); i += i & (~i + 1))
    tree_[i] += delta;
}

// Smallest layer whose inclusive prefix weight exceeds u.
int LayerIndex::tree_find(double u) const {
  std::size_t pos = 0;
  std::size_t step = 1;
  while (step * 2 < tree_.size()) step *= 2;
  for (; step > 0; step /= 2) {
    const std::size_t next = pos + step;
    if (next < tree_.size() && tree_[next] <= u) {
      pos = next;
      u -= tree_[next];
    }
  }
  return static_cast<int>(pos);
}

VertexId LayerIndex::sample(Rng& rng) const {
  if (!(total_weight_ > 0.0))
    throw SaturationError("no vertex has positive preference weight");
  const double u = rng.uniform01() * total_weight_;
  int layer = -1;
  if (use_tree_) {
    layer = tree_find(u);
    // Rounding in the tree can land on an empty or zero-weight layer.
    if (layer >= static_cast<int>(layers_.size()) || layer_weight(layer) <= 0.0) layer = -1;
  } else {
    double acc = 0.0;
    for (std::size_t k = 0; k < layers_.size(); ++k) {
      const double w = weight_cache_[k] * static_cast<double>(layers_[k].size());
      if (w <= 0.0) continue;
      acc += w;
      if (u < acc) {
        layer = static_cast<int>(k);
        break;
      }
    }
  }
  if (layer < 0) {
    // u fell past the accumulated weights through drift in the running total.
    for (int k = static_cast<int>(layers_.size()) - 1; k >= 0; --k)
      if (layer_weight(k) > 0.0) {
        layer = k;
        break;
      }
    if (layer < 0) throw SaturationError("no vertex has positive preference weight");
  }
  const auto& members = layers_[static_cast<std::size_t>(layer)];
  return members[rng.below(members.size())];
}

bool LayerIndex::consistent_with(const MultiGraph& g) const {
  if (position_.size() != g.vertex_count()) return false;
  std::size_t indexed = 0;
  for (std::size_t k = 0; k < layers_.size(); ++k) {
    for (std::size_t slot = 0; slot < layers_[k].size(); ++slot) {
      const VertexId v = layers_[k][slot];
      if (v >= g.vertex_count() || g.degrees()[v] != static_cast<int>(k)) return false;
      if (position_[v] != slot) return false;
    }
    indexed += layers_[k].size();
  }
  if (indexed != g.vertex_count()) return false;
  double exact = 0.0;
  for (int d : g.degrees()) exact += f_(d);
  return std::abs(exact - total_weight_) <= 1e-6 * std::max(1.0, std::abs(exact));
}

// ---------------------------------------------------------------------------
// GrowthEngine

GrowthEngine::GrowthEngine(MultiGraph g, ModelParams p, PreferenceFunction f,
                           std::uint64_t seed, GrowOptions options)
    : graph_(std::move(g)),
      params_(std::move(p)),
      index_(graph_, std::move(f), options.select),
      rng_(seed),
      r1_sampler_(params_.r1),
      rn_sampler_(params_.rn),
      options_(options) {
  validate_params(params_);
  if (graph_.vertex_count() == 0) throw std::invalid_argument("growth needs a non-empty seed graph");
  stats_.rng_seed = seed;
}

void GrowthEngine::commit_edges(std::span<const Edge> edges) {
  for (const auto& [u, v] : edges) {
    // u is a new vertex; v is either new (clique edge) or an existing target.
    const int dv = graph_.degree(v);
    graph_.add_edge(u, v);
    if (v < index_boundary_) index_.move(v, dv, dv + 1);
  }
}

void GrowthEngine::after_increment() {
  ++stats_.steps;
  if (++increments_since_refresh_ >= 1024) {
    index_.refresh();
    increments_since_refresh_ = 0;
  }
  if (options_.check_interval > 0 && stats_.steps % options_.check_interval == 0 &&
      !index_.consistent_with(graph_))
    throw std::logic_error("layer index diverged from graph after step " +
                           std::to_string(stats_.steps));
}

void GrowthEngine::apply_monad() { apply_monad_with(r1_sampler_(rng_)); }

void GrowthEngine::apply_monad_with(int free_edges) {
  if (free_edges < 0) throw std::invalid_argument("negative free-edge count");
  scratch_targets_.clear();
  for (int e = 0; e < free_edges; ++e) scratch_targets_.push_back(index_.sample(rng_));

  index_boundary_ = static_cast<VertexId>(graph_.vertex_count());
  const VertexId v = graph_.add_vertex();
  scratch_edges_.clear();
  for (VertexId t : scratch_targets_) scratch_edges_.emplace_back(v, t);
  commit_edges(scratch_edges_);
  index_.insert(v, graph_.degree(v));

  stats_.monad_steps += 1;
  stats_.realized_vertices += 1;
  stats_.realized_edges += scratch_edges_.size();
  after_increment();
}

void GrowthEngine::apply_nad() {
  scratch_counts_.resize(static_cast<std::size_t>(params_.n));
  for (int& c : scratch_counts_) c = rn_sampler_(rng_);
  apply_nad_with(scratch_counts_);
}

void GrowthEngine::apply_nad_with(std::span<const int> free_edges) {
  const int n = params_.n;
  const int mu = params_.mu;
  if (static_cast<int>(free_edges.size()) != n)
    throw std::invalid_argument("n-ad needs one free-edge count per vertex");
  for (int c : free_edges)
    if (c < mu) throw std::invalid_argument("n-ad vertex has fewer free ends than mu");

  // Targets: μ bundle targets first, then every single free end.
  scratch_targets_.clear();
  for (int b = 0; b < mu; ++b) scratch_targets_.push_back(index_.sample(rng_));
  for (int i = 0; i < n; ++i)
    for (int e = mu; e < free_edges[static_cast<std::size_t>(i)]; ++e)
      scratch_targets_.push_back(index_.sample(rng_));

  index_boundary_ = static_cast<VertexId>(graph_.vertex_count());
  const VertexId first = index_boundary_;
  for (int i = 0; i < n; ++i) graph_.add_vertex();

  scratch_edges_.clear();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      scratch_edges_.emplace_back(first + static_cast<VertexId>(i), first + static_cast<VertexId>(j));
  std::size_t next = 0;
  for (int b = 0; b < mu; ++b, ++next)
    for (int i = 0; i < n; ++i)
      scratch_edges_.emplace_back(first + static_cast<VertexId>(i), scratch_targets_[next]);
  for (int i = 0; i < n; ++i)
    for (int e = mu; e < free_edges[static_cast<std::size_t>(i)]; ++e)
      scratch_edges_.emplace_back(first + static_cast<VertexId>(i), scratch_targets_[next++]);
  commit_edges(scratch_edges_);
  for (int i = 0; i < n; ++i) {
    const VertexId v = first + static_cast<VertexId>(i);
    index_.insert(v, graph_.degree(v));
  }

  stats_.nad_steps += 1;
  stats_.realized_vertices += static_cast<std::uint64_t>(n);
  stats_.realized_edges += scratch_edges_.size();
  after_increment();
}

GrowthStats GrowthEngine::grow(std::uint64_t steps) {
  for (std::uint64_t s = 0; s < steps; ++s) {
    try {
      if (rng_.bernoulli(params_.gamma))
        apply_nad();
      else
        apply_monad();
    } catch (const SaturationError& e) {
      stats_.error = std::string("saturation at step ") + std::to_string(stats_.steps + 1) +
                     ": " + e.what();
      break;
    }
  }
  return stats_;
}

GrowthStats grow(MultiGraph& g, const ModelParams& p, const PreferenceFunction& f,
                 std::uint64_t steps, std::uint64_t seed, GrowOptions options) {
  validate_params(p);
  if (g.vertex_count() == 0) throw std::invalid_argument("growth needs a non-empty seed graph");
  GrowthEngine engine(std::move(g), p, f, seed, options);
  GrowthStats stats = engine.grow(steps);
  g = std::move(engine).release();
  return stats;
}

}  // namespace commgrow
