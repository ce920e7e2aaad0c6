// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include <doctest.h>

#include <algorithm>
#include <set>

#include "kglf/fixtures.hpp"
#include "kglf/predictor.hpp"
#include "random_graphs.hpp"

using namespace kglf;
using doctest::Approx;

namespace {

MetricEnsemble single(MetricFamily family, PredictionMode mode) {
  return {mode, {make_instance(family)}};
}

std::vector<Recommendation> items(std::size_t n, Source source, std::uint32_t offset) {
  std::vector<Recommendation> out;
  for (std::uint32_t i = 0; i < n; ++i) {
    out.push_back({NodeIx{0}, NodeIx{offset + i}, std::nullopt, 1.0 - 0.01 * i, source, i + 1});
  }
  return out;
}

}  // namespace

TEST_CASE("predict_existence on F1") {
  const auto g = fixtures::f1();
  const auto p1 = g.node_by_id("p1");
  const auto e = single(MetricFamily::shortest_path, PredictionMode::existence);
  PredictOptions opt;
  opt.k = 4;
  opt.candidate_size = 4;
  const auto recs = predict_existence(g, p1, e, WeightVector{1.0}, opt);
  REQUIRE(recs.size() == 2);
  CHECK(g.node(recs[0].object).id == "p3");
  CHECK(recs[0].score == Approx(0.8));
  CHECK(recs[0].rank == 1);
  CHECK(g.node(recs[1].object).id == "s2");
  CHECK(recs[1].score == 0.0);

  opt.k = 0;
  CHECK(predict_existence(g, p1, e, WeightVector{1.0}, opt).empty());
  opt.k = 5;
  CHECK_THROWS_AS(predict_existence(g, p1, e, WeightVector{1.0}, opt), Error);
  opt.k = 4;
  CHECK_THROWS_AS(predict_existence(g, NodeIx{77}, e, WeightVector{1.0}, opt), Error);
  opt.min_score = 0.5;
  CHECK(predict_existence(g, p1, e, WeightVector{1.0}, opt).size() == 1);
}

TEST_CASE("ties are ordered by node id") {
  KnowledgeGraph g;
  const auto c = g.add_concept("C", "C");
  g.add_relation("r", "r", c, c);
  const auto u = g.add_node(c, "u");
  g.add_node(c, "zeta");
  g.add_node(c, "alpha");
  g.add_node(c, "mid");
  const auto e = single(MetricFamily::jaccard, PredictionMode::existence);
  PredictOptions opt{.k = 3, .candidate_size = 3, .seed = 5};
  const auto recs = predict_existence(g, u, e, WeightVector{1.0}, opt);
  REQUIRE(recs.size() == 3);
  CHECK(g.node(recs[0].object).id == "alpha");
  CHECK(g.node(recs[1].object).id == "mid");
  CHECK(g.node(recs[2].object).id == "zeta");
}

TEST_CASE("predict_type ranks by edge share") {
  auto g = fixtures::f1(true);
  g.add_relation("likes", "likes", g.concept_by_id("Person"), g.concept_by_id("Person"));
  const auto p2 = g.node_by_id("p2");
  const auto e = single(MetricFamily::edge_dimension_connectivity, PredictionMode::semantic);
  PredictOptions opt{.k = 5, .candidate_size = 5, .seed = 1};
  const auto recs = predict_type(g, p2, e, WeightVector{1.0}, opt);
  for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i - 1].score >= recs[i].score);
  for (const auto& r : recs) {
    REQUIRE(r.relation.has_value());
    CHECK(r.score == Approx(static_cast<double>(g.link_count(*r.relation)) / g.link_count()));
    CHECK_FALSE(g.has_link(r.subject, r.object, *r.relation));
  }
  CHECK(predict_type(g, g.node_by_id("s2"), e, WeightVector{1.0}, opt).empty());
  // Existence ensembles are refused by the semantic path.
  CHECK_THROWS_AS(predict_type(g, p2, single(MetricFamily::jaccard, PredictionMode::existence),
                               WeightVector{1.0}, opt),
                  Error);
}

TEST_CASE("single semantic candidate ranks first") {
  const auto g = fixtures::f1(true);
  const auto e = default_ensemble(PredictionMode::semantic);
  PredictOptions opt{.k = 2, .candidate_size = 2, .seed = 3};
  const auto recs = predict_type(g, g.node_by_id("p1"), e, WeightVector::uniform(e.size()), opt);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].rank == 1);
}

TEST_CASE("interleave proportions") {
  const auto genetic = items(12, Source::genetic, 100);
  const auto baseline = items(12, Source::baseline, 200);
  const auto out = interleave_for_review(genetic, baseline, 9, 4);
  REQUIRE(out.size() == 9);
  CHECK(std::count_if(out.begin(), out.end(), [](auto& r) { return r.source == Source::baseline; }) == 3);
  // Genetic items come from the top of the ranking.
  std::set<std::uint32_t> gen;
  for (const auto& r : out) {
    if (r.source == Source::genetic) gen.insert(r.object.value);
  }
  CHECK(gen == std::set<std::uint32_t>{100, 101, 102, 103, 104, 105});

  const auto again = interleave_for_review(genetic, baseline, 9, 4);
  CHECK(std::equal(out.begin(), out.end(), again.begin(), [](auto& a, auto& b) {
    return a.object == b.object && a.source == b.source;
  }));

  const auto only_genetic = interleave_for_review(items(3, Source::genetic, 0), {}, 3, 1);
  CHECK(only_genetic.size() == 3);
  CHECK(std::all_of(only_genetic.begin(), only_genetic.end(), [](auto& r) { return r.source == Source::genetic; }));

  const auto only_baseline = interleave_for_review({}, items(5, Source::baseline, 0), 3, 1);
  CHECK(only_baseline.size() == 3);

  CHECK(interleave_for_review(genetic, baseline, 0, 1).empty());
  CHECK_THROWS_AS(interleave_for_review({}, {}, 3, 1), Error);
}

TEST_CASE("interleave collisions mark the genetic item") {
  // Baseline pool equals the genetic list: every draw collides.
  const auto genetic = items(6, Source::genetic, 0);
  const auto out = interleave_for_review(genetic, genetic, 6, 2);
  CHECK(out.size() == 6);
  std::set<std::uint32_t> objects;
  for (const auto& r : out) objects.insert(r.object.value);
  CHECK(objects.size() == 6);
  const auto drawn = std::count_if(out.begin(), out.end(), [](auto& r) { return r.baseline_drawn; });
  CHECK(drawn >= 2);
}

TEST_CASE("property: predictions never repeat existing links and ignore input order") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = testing::random_graph(seed + 11, {.max_nodes = 30, .density = 0.1});
    const NodeIx u{static_cast<std::uint32_t>(seed % g.node_count())};
    const auto e = default_ensemble(PredictionMode::existence);
    const auto w = WeightVector::uniform(e.size());
    auto set = existence_candidates(g, u, 10, seed);
    const auto ranked = rank_existence(g, set, e, w);
    for (const auto& r : ranked) CHECK_FALSE(g.connected(r.subject, r.object));
    std::reverse(set.candidates.begin(), set.candidates.end());
    const auto reversed = rank_existence(g, set, e, w);
    REQUIRE(reversed.size() == ranked.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(reversed[i].object == ranked[i].object);

    // One-hot weights reproduce the single metric's order.
    const auto one = rank_existence(g, set, e, WeightVector::one_hot(e.size(), seed % e.size()));
    for (std::size_t i = 1; i < one.size(); ++i) {
      CHECK(evaluate(e.instances[seed % e.size()], g, u, one[i - 1].object) >=
            evaluate(e.instances[seed % e.size()], g, u, one[i].object));
    }
  }
}
