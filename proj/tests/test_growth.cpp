#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "commgrow/analysis.hpp"
#include "commgrow/errors.hpp"
#include "commgrow/graph.hpp"
#include "commgrow/stationary.hpp"
#include "oracles.hpp"

using namespace commgrow;

namespace {

ModelParams monads(int m) {
  ModelParams p;
  p.r1 = DegreeDistribution::point_mass(m);
  p.rn = DegreeDistribution::point_mass(0);
  return p;
}

ModelParams nads(int n, int mu, int j) {
  ModelParams p;
  p.gamma = 1.0;
  p.n = n;
  p.mu = mu;
  p.r1 = DegreeDistribution::point_mass(0);
  p.rn = DegreeDistribution::point_mass(j);
  return p;
}

const PreferenceFunction kConstant = PreferenceFunction::affine(0.0, 1.0, 0);

// Frequencies of `draws` samples against f(k_i)/Σ f(k_j) by direct enumeration.
double sampler_p_value(const MultiGraph& g, const PreferenceFunction& f, LayerSelect select,
                       std::uint64_t seed, int draws) {
  LayerIndex idx(g, f, select);
  Rng rng(seed);
  std::vector<std::uint64_t> counts(g.vertex_count(), 0);
  for (int i = 0; i < draws; ++i) ++counts[idx.sample(rng)];
  std::vector<double> probs(g.vertex_count());
  double total = 0.0;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) total += f(g.degree(static_cast<VertexId>(v)));
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    probs[v] = f(g.degree(static_cast<VertexId>(v))) / total;
  return oracle::chi_square_p(counts, probs);
}

int degree_sum(const MultiGraph& g) {
  int s = 0;
  for (int d : g.degrees()) s += d;
  return s;
}

}  // namespace

TEST_CASE("complete seed graphs") {
  const auto k4 = seed_complete(4);
  CHECK(k4.vertex_count() == 4);
  CHECK(k4.edge_count() == 6);
  for (int d : k4.degrees()) CHECK(d == 3);
  CHECK(seed_complete(2).edge_count() == 1);
  CHECK(seed_complete(5).edge_count() == 10);
  CHECK_THROWS_AS(seed_complete(1), std::invalid_argument);
}

TEST_CASE("multigraph basics") {
  MultiGraph g;
  const auto a = g.add_vertex();
  const auto b = g.add_vertex();
  g.add_edge(a, b);
  g.add_edge(a, b);
  CHECK(g.degree(a) == 2);
  CHECK(g.edge_count() == 2);
  CHECK_THROWS(g.add_edge(a, a));
  CHECK_THROWS(g.add_edge(a, 7));
}

TEST_CASE("empirical degree distribution") {
  const auto k4 = empirical_vdd(seed_complete(4));
  CHECK(k4.prob(3) == 1.0);
  auto g = seed_complete(2);
  g.add_vertex();
  const auto d = empirical_vdd(g);
  CHECK(d.prob(0) == doctest::Approx(1.0 / 3));
  CHECK(d.prob(1) == doctest::Approx(2.0 / 3));
  CHECK_THROWS(empirical_vdd(MultiGraph{}));
}

TEST_CASE("uniform sampling cases") {
  // Single layer: every vertex equally likely regardless of f.
  CHECK(sampler_p_value(seed_complete(6), PreferenceFunction::linear(), LayerSelect::linear, 1, 60000) > 0.001);
  // Constant f over mixed degrees.
  std::mt19937_64 gen(3);
  const auto g = oracle::random_multigraph(gen, 40, 90);
  CHECK(sampler_p_value(g, kConstant, LayerSelect::linear, 2, 60000) > 0.001);
}

TEST_CASE("K4 seed with linear preference samples each vertex a quarter of the time") {
  const auto g = seed_complete(4);
  LayerIndex idx(g, PreferenceFunction::linear());
  Rng rng(11);
  std::vector<std::uint64_t> counts(4, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++counts[idx.sample(rng)];
  const double sigma = std::sqrt(draws * 0.25 * 0.75);
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) - draws / 4.0) < 3 * sigma);
  CHECK(oracle::chi_square_p(counts, {0.25, 0.25, 0.25, 0.25}) > 0.001);
}

TEST_CASE("both layer selectors match exact attachment probabilities") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 6; ++trial) {
    const auto g = oracle::random_multigraph(gen, 30 + 20 * trial, 60 + 80 * trial);
    const auto f = PreferenceFunction::from_callable(1, 40, [](int k) { return std::pow(k, 0.8) + 0.5; });
    for (auto sel : {LayerSelect::linear, LayerSelect::tree})
      CHECK(sampler_p_value(g, f, sel, 1000 + trial, 100000) > 0.001);
  }
}

TEST_CASE("layer index bookkeeping") {
  const auto g = seed_complete(4);
  LayerIndex idx(g, PreferenceFunction::linear());
  CHECK(idx.layer_size(3) == 4);
  CHECK(idx.layer_weight(3) == 12.0);
  CHECK(idx.total_weight() == 12.0);
  CHECK_FALSE(idx.using_tree());
  CHECK(idx.consistent_with(g));
  LayerIndex tree(g, PreferenceFunction::linear(), LayerSelect::tree);
  CHECK(tree.using_tree());

  // Nothing attachable: sampling signals saturation.
  LayerIndex dead(g, PreferenceFunction::linear(5, 9));
  Rng rng(1);
  CHECK_THROWS_AS(dead.sample(rng), SaturationError);
}

TEST_CASE("monad increments") {
  GrowthEngine e(seed_complete(4), monads(2), PreferenceFunction::linear(), 5);
  e.apply_monad_with(0);
  CHECK(e.graph().vertex_count() == 5);
  CHECK(e.graph().degree(4) == 0);
  CHECK(e.graph().edge_count() == 6);

  GrowthEngine m(seed_complete(4), monads(2), PreferenceFunction::linear(), 5);
  m.apply_monad_with(2);
  CHECK(m.graph().degree(4) == 2);
  CHECK(degree_sum(m.graph()) == 12 + 4);
  int raised = 0;
  for (VertexId v = 0; v < 4; ++v) raised += m.graph().degree(v) - 3;
  CHECK(raised == 2);
  CHECK(m.index().consistent_with(m.graph()));
}

TEST_CASE("n-ad increments") {
  SUBCASE("pentad with two free ends per vertex") {
    GrowthEngine e(seed_complete(4), nads(5, 0, 2), PreferenceFunction::linear(), 8);
    const std::vector<int> j(5, 2);
    e.apply_nad_with(j);
    CHECK(e.graph().vertex_count() == 9);
    CHECK(e.graph().edge_count() == 6 + 10 + 10);
    for (VertexId v = 4; v < 9; ++v) CHECK(e.graph().degree(v) == 6);
    CHECK(oracle::brute_triangles(e.graph()) >= 4 + 10);
  }
  SUBCASE("dyad with one bundle") {
    GrowthEngine e(seed_complete(4), nads(2, 1, 1), PreferenceFunction::linear(), 8);
    const std::vector<int> j(2, 1);
    e.apply_nad_with(j);
    CHECK(e.graph().degree(4) == 2);
    CHECK(e.graph().degree(5) == 2);
    int raised = 0, top = 0;
    for (VertexId v = 0; v < 4; ++v) {
      raised += e.graph().degree(v) - 3;
      top = std::max(top, e.graph().degree(v) - 3);
    }
    CHECK(raised == 2);
    CHECK(top == 2);
  }
  SUBCASE("triad with one bundle and one single end per vertex") {
    GrowthEngine e(seed_complete(4), nads(3, 1, 2), kConstant, 8);
    const std::vector<int> j(3, 2);
    e.apply_nad_with(j);
    // 3 clique + 3 bundle + 3 single edges.
    CHECK(e.graph().edge_count() == 6 + 9);
    CHECK(degree_sum(e.graph()) == 12 + 18);
    // The bundle follows the clique edges: all three point at one target.
    const auto& edges = e.graph().edges();
    const VertexId bundle = edges[6 + 3].second;
    for (int i = 0; i < 3; ++i) {
      CHECK(edges[6 + 3 + i].first == 4 + static_cast<VertexId>(i));
      CHECK(edges[6 + 3 + i].second == bundle);
    }
    CHECK(e.graph().degree(bundle) >= 3 + 3);
    for (VertexId v = 4; v < 7; ++v) CHECK(e.graph().degree(v) == 4);
    CHECK(e.index().consistent_with(e.graph()));
  }
  SUBCASE("argument checks") {
    GrowthEngine e(seed_complete(4), nads(3, 1, 2), kConstant, 8);
    const std::vector<int> short_list(2, 2);
    CHECK_THROWS_AS(e.apply_nad_with(short_list), std::invalid_argument);
    const std::vector<int> below_mu{2, 0, 2};
    CHECK_THROWS_AS(e.apply_nad_with(below_mu), std::invalid_argument);
  }
}

TEST_CASE("grow keeps handshake and layer invariants") {
  auto p = oracle::pentad_params();
  p.gamma = 0.2;
  for (auto sel : {LayerSelect::linear, LayerSelect::tree}) {
    GrowOptions opt;
    opt.check_interval = 1;
    opt.select = sel;
    GrowthEngine e(seed_complete(4), p, PreferenceFunction::linear(), 42, opt);
    for (int s = 0; s < 2000; ++s) {
      e.grow(1);
      REQUIRE(degree_sum(e.graph()) == 2 * static_cast<int>(e.graph().edge_count()));
    }
    const auto& st = e.stats();
    CHECK(st.steps == 2000);
    CHECK(st.monad_steps + st.nad_steps == st.steps);
    CHECK(st.realized_vertices + 4 == e.graph().vertex_count());
    CHECK(st.realized_edges + 6 == e.graph().edge_count());
    CHECK(e.index().consistent_with(e.graph()));
  }
}

TEST_CASE("grow with zero steps and determinism") {
  auto g = seed_complete(4);
  const auto st = grow(g, oracle::pentad_params(), PreferenceFunction::linear(), 0, 1);
  CHECK(g == seed_complete(4));
  CHECK(st.steps == 0);
  CHECK(st.realized_vertices == 0);

  auto a = seed_complete(4), b = seed_complete(4), c = seed_complete(4);
  grow(a, oracle::pentad_params(), PreferenceFunction::linear(), 5000, 77);
  grow(b, oracle::pentad_params(), PreferenceFunction::linear(), 5000, 77);
  grow(c, oracle::pentad_params(), PreferenceFunction::linear(), 5000, 78);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("automatic selection switches to the prefix tree mid-run") {
  // A hub of degree 4000 under linear preference crosses 4096 layers quickly.
  MultiGraph g;
  g.add_vertex();
  for (int i = 0; i < 4000; ++i) g.add_edge(0, g.add_vertex());
  GrowOptions opt;
  opt.check_interval = 1;
  GrowthEngine e(std::move(g), monads(3), PreferenceFunction::linear(), 21, opt);
  CHECK_FALSE(e.index().using_tree());
  e.grow(400);
  CHECK(e.graph().degree(0) > LayerIndex::kTreeThreshold);
  CHECK(e.index().using_tree());
  CHECK(e.index().consistent_with(e.graph()));
  CHECK(sampler_p_value(e.graph(), PreferenceFunction::linear(), LayerSelect::automatic, 5, 100000) > 0.001);
}

TEST_CASE("saturation stops the run and leaves the graph intact") {
  // Only degree 3 is attachable; each monad lifts one seed vertex out of the
  // window and arrives at degree 1, so the fifth monad has nowhere to go.
  auto g = seed_complete(4);
  const auto st = grow(g, monads(1), PreferenceFunction::linear(3, 3), 10, 3);
  REQUIRE(st.error.has_value());
  CHECK(st.steps == 4);
  CHECK(g.vertex_count() == 8);
  CHECK(g.edge_count() == 10);
}

TEST_CASE("pentad run adds the expected number of vertices") {
  auto g = seed_complete(4);
  const std::uint64_t steps = 50000;
  const auto st = grow(g, oracle::pentad_params(), PreferenceFunction::linear(), steps, 2718);
  CHECK(g.vertex_count() == 4 + st.monad_steps + 5 * st.nad_steps);
  const double sigma = 4.0 * std::sqrt(steps * 0.01 * 0.99);
  CHECK(std::abs(static_cast<double>(g.vertex_count()) - 4.0 - 52000.0) < 3 * sigma);
}

TEST_CASE("every pentad contributes its ten triangles") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto g = seed_complete(4);
    const auto st = grow(g, nads(5, 0, 1), PreferenceFunction::linear(), 300, seed);
    CHECK(triangle_count(g) >= 10 * st.nad_steps);
  }
}

TEST_CASE("long monad-only run approaches the stationary law") {
  const auto p = monads(2);
  const auto sol = solve_stationary(p, PreferenceFunction::linear());
  auto short_run = seed_complete(4);
  grow(short_run, p, PreferenceFunction::linear(), 10000, 8);
  auto long_run = seed_complete(4);
  grow(long_run, p, PreferenceFunction::linear(), 200000, 8);
  const double tv_short = compare(empirical_vdd(short_run).table(), sol.q).tv_distance;
  const double tv_long = compare(empirical_vdd(long_run).table(), sol.q).tv_distance;
  CHECK(tv_long < 0.02);
  CHECK(tv_short < 0.05);
}
