// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include <doctest.h>

#include <cmath>

#include "kglf/fixtures.hpp"
#include "kglf/metrics.hpp"
#include "oracles.hpp"
#include "random_graphs.hpp"

using namespace kglf;
using doctest::Approx;

namespace {

struct F1 {
  KnowledgeGraph g = fixtures::f1();
  NodeIx p1 = g.node_by_id("p1");
  NodeIx p2 = g.node_by_id("p2");
  NodeIx p3 = g.node_by_id("p3");
  NodeIx s1 = g.node_by_id("s1");
  NodeIx s2 = g.node_by_id("s2");
  RelationIx knows = g.relation_by_id("knows");
  RelationIx waited_at = g.relation_by_id("waited_at");
};

constexpr double kFixtureTol = 1e-4;

}  // namespace

TEST_CASE("catalog and default ensembles") {
  CHECK(all_metric_families().size() == 22);
  const auto ex = default_ensemble(PredictionMode::existence);
  const auto se = default_ensemble(PredictionMode::semantic);
  CHECK(ex.size() == 19);
  CHECK(se.size() == 16);
  CHECK(ex.index_of("euler_time_one_day").has_value());
  CHECK(ex.index_of("euler_time_half_day").has_value());
  CHECK_FALSE(ex.index_of("mr_link_propagation").has_value());
  CHECK(se.index_of("mr_link_propagation").has_value());
  CHECK_FALSE(se.index_of("arr").has_value());
  CHECK_NOTHROW(ex.validate());
  CHECK_NOTHROW(se.validate());
  CHECK(metric_catalog().size() == 23);
  CHECK(metric_catalog().front() == "jaccard");

  MetricEnsemble bad{PredictionMode::existence, {make_instance(MetricFamily::conditional_probability)}};
  CHECK_THROWS_AS(bad.validate(), Error);
  MetricParams p;
  p.beta = 1.0;
  CHECK_THROWS_AS(make_instance(MetricFamily::time_score, p), Error);
  CHECK(parse_mode("semantic") == PredictionMode::semantic);
  CHECK_THROWS_AS(parse_mode("both"), Error);
}

TEST_CASE_FIXTURE(F1, "neighborhood overlap on F1") {
  CHECK(neighborhood_overlap(g, OverlapKind::jaccard, p1, p2) == Approx(0.25).epsilon(kFixtureTol));
  CHECK(neighborhood_overlap(g, OverlapKind::jaccard, p1, p3) == Approx(1.0));
  CHECK(neighborhood_overlap(g, OverlapKind::jaccard, p1, s2) == 0.0);
  CHECK(neighborhood_overlap(g, OverlapKind::adamic_adar, p1, p3) ==
        Approx(std::log(2.0) / std::log(3.0)));
  CHECK(neighborhood_overlap(g, OverlapKind::sorensen, p1, p2) == Approx(0.4));
  CHECK(neighborhood_overlap(g, OverlapKind::salton, p1, p2) == Approx(1.0 / std::sqrt(6.0)));
  CHECK(neighborhood_overlap(g, OverlapKind::lhn, p1, p2) == Approx(1.0 / 6.0));
  CHECK(neighborhood_overlap(g, OverlapKind::hub_promoted, p1, p2) == Approx(0.5));
  CHECK(neighborhood_overlap(g, OverlapKind::hub_depressed, p1, p2) == Approx(1.0 / 3.0));
  CHECK(neighborhood_overlap(g, OverlapKind::resource_allocation, p1, p3) == Approx(2.0 / 3.0));
}

TEST_CASE_FIXTURE(F1, "path and temporal families on F1") {
  CHECK(shortest_path_similarity(g, p1, p3) == Approx(0.8));
  CHECK(shortest_path_similarity(g, p1, p2) == 1.0);
  CHECK(shortest_path_similarity(g, p1, s2) == 0.0);

  // Common neighbors {p2, s1}: s1 contributes 0.5^3/3, p2 contributes 0.5^4/5.
  CHECK(time_score(g, p1, p3, 0.5, 1000) == Approx((0.125 / 3.0 + 0.0625 / 5.0) / 2.0));
  CHECK(time_score(g, p1, s2, 0.5, 1000) == 0.0);
  CHECK_THROWS_AS(time_score(g, p1, p3, 0.0, 1000), Error);
  CHECK_THROWS_AS(time_score(g, p1, p3, 0.5, 0), Error);

  // p3's latest link is (p2,p3) at 5000, the graph's newest timestamp.
  CHECK(euler_time(g, p1, p3, 1000.0) == 1.0);
  // s1 last touched at 4000: age 1000.
  CHECK(euler_time(g, p1, s1, 1000.0) == Approx(std::exp(-1.0)));
  CHECK(euler_time(g, p1, s2, 1000.0) == 0.0);
  CHECK_THROWS_AS(euler_time(g, p1, s1, 0.0), Error);
}

TEST_CASE_FIXTURE(F1, "time score with s1 as the only common neighbor") {
  g.remove_link(p1, p2, knows);
  CHECK(time_score(g, p1, p3, 0.5, 1000) == Approx(0.125 / 3.0));
}

TEST_CASE("time score with fresh co-occurrence reaches 1") {
  auto g = fixtures::city_ontology();
  const auto person = g.concept_by_id("Person");
  const auto stop = g.concept_by_id("Stop");
  const auto a = g.add_node(person, "a");
  const auto b = g.add_node(person, "b");
  const auto s = g.add_node(stop, "s");
  const auto waited_at = g.relation_by_id("waited_at");
  g.add_link(a, s, waited_at, 9000);
  g.add_link(b, s, waited_at, 9000);
  CHECK(time_score(g, a, b, 0.5, 1000) == 1.0);
}

TEST_CASE_FIXTURE(F1, "semantic-structure families on F1") {
  CHECK(focci_distance(g, p1, p3) == Approx(1.0 / 3.0));
  CHECK(focci_distance(g, p1, s2) == 0.0);
  CHECK(arr(g, p1, p3) == Approx(0.5));
  CHECK(arr(g, p3, p1) == Approx(1.0));
  CHECK(arr(g, s2, p1) == 0.0);
  CHECK(ao_relation(g, p1, s1, AoVariant::aor) == Approx(1.0));
  CHECK(ao_relation(g, p1, s1, AoVariant::aorr) == Approx(0.5));
  CHECK(ao_relation(g, p1, s1, AoVariant::aorc) == Approx(0.75));
  CHECK(ao_relation(g, p1, s2, AoVariant::aor) == 0.0);

  CHECK(taxonomy_similarity(g, p1, s1) == Approx(0.2));
  CHECK(taxonomy_similarity(g, p1, p2) == 1.0);
  CHECK(relational_similarity(g, p1, p3) == Approx(1.0));
  CHECK(relational_similarity(g, p1, s2) == 0.0);

  CHECK(conditional_probability(g, waited_at) == 0.0);
  CHECK(dimension_connectivity(g, DimensionKind::node, waited_at) == Approx(0.6));
  CHECK(dimension_connectivity(g, DimensionKind::edge, knows) == Approx(0.4));
}

TEST_CASE("taxonomy similarity of siblings") {
  KnowledgeGraph g;
  const auto parent = g.add_concept("P", "P");
  const auto a = g.add_concept("A", "A", parent);
  const auto b = g.add_concept("B", "B", parent);
  const auto x = g.add_node(a, "x");
  const auto y = g.add_node(b, "y");
  // {A,P,root} vs {B,P,root}
  CHECK(taxonomy_similarity(g, x, y) == Approx(0.5));
}

TEST_CASE("conditional probability on F2") {
  const auto g = fixtures::f2();
  CHECK(conditional_probability(g, g.relation_by_id("met_at_stop_with")) == Approx(1.0));
  KnowledgeGraph single;
  const auto c = single.add_concept("C", "C");
  const auto r = single.add_relation("r", "r", c, c);
  single.add_link(single.add_node(c, "a"), single.add_node(c, "b"), r, 1);
  CHECK(conditional_probability(single, r) == 0.0);
}

TEST_CASE("link propagation") {
  KnowledgeGraph g;
  const auto c = g.add_concept("C", "C");
  const auto r = g.add_relation("r", "r", c, c);
  const auto s = g.add_relation("s", "s", c, c);
  const auto u = g.add_node(c, "u");
  const auto v = g.add_node(c, "v");
  const auto w = g.add_node(c, "w");
  g.add_link(v, u, r, 1);
  CHECK(mr_link_propagation(g, u, v, r, 0.5) == Approx(0.5));
  CHECK(mr_link_propagation(g, u, v, r, 0.0) == 0.0);
  CHECK(mr_link_propagation(g, u, w, r, 0.5) == 0.0);
  CHECK_THROWS_AS(mr_link_propagation(g, u, v, r, 1.5), Error);

  // Second dimension with identical pair set adds a fully correlated term.
  g.add_link(u, v, s, 2);
  CHECK(mr_link_propagation(g, u, v, r, 0.5) == Approx(1.0));
}

TEST_CASE_FIXTURE(F1, "combined similarity") {
  MetricEnsemble e{PredictionMode::existence,
                   {make_instance(MetricFamily::jaccard), make_instance(MetricFamily::sorensen)}};
  CHECK(combined_similarity(e, WeightVector{0.5, 0.5}, g, p1, p2) == Approx(0.325));
  CHECK(combined_similarity(e, WeightVector{1.0, 0.0}, g, p1, p2) ==
        neighborhood_overlap(g, OverlapKind::jaccard, p1, p2));
  CHECK(combined_similarity(e, WeightVector{0.5, 0.5}, g, p1, s2) == 0.0);
  CHECK_THROWS_AS(combined_similarity(e, WeightVector{1.0, 0.0, 0.0}, g, p1, p2), Error);
  CHECK_THROWS_AS(combined_similarity(e, WeightVector{0.5, 0.5}, g, p1, p2, knows), Error);

  const auto sem = default_ensemble(PredictionMode::semantic);
  CHECK_THROWS_AS(score_vector(sem, g, p1, p2), Error);
  CHECK(score_vector(sem, g, p1, p3, knows).size() == sem.size());
}

TEST_CASE("property: range and symmetry on random graphs") {
  const auto ex = default_ensemble(PredictionMode::existence);
  const auto se = default_ensemble(PredictionMode::semantic);
  const std::vector<OverlapKind> symmetric = {
      OverlapKind::jaccard, OverlapKind::adamic_adar, OverlapKind::resource_allocation,
      OverlapKind::hub_promoted, OverlapKind::hub_depressed, OverlapKind::lhn,
      OverlapKind::salton, OverlapKind::sorensen};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = testing::random_graph(seed, {.max_nodes = 15});
    for (std::uint32_t a = 0; a < g.node_count(); ++a) {
      for (std::uint32_t b = 0; b < g.node_count(); ++b) {
        if (a == b) continue;
        const NodeIx u{a}, v{b};
        for (double s : score_vector(ex, g, u, v)) {
          REQUIRE(std::isfinite(s));
          REQUIRE(s >= 0.0);
          REQUIRE(s <= 1.0);
        }
        for (std::uint32_t j = 0; j < g.relation_count(); ++j) {
          for (double s : score_vector(se, g, u, v, RelationIx{j})) {
            REQUIRE(std::isfinite(s));
            REQUIRE(s >= 0.0);
            REQUIRE(s <= 1.0);
          }
        }
        for (auto kind : symmetric) {
          CHECK(neighborhood_overlap(g, kind, u, v) == neighborhood_overlap(g, kind, v, u));
        }
        CHECK(shortest_path_similarity(g, u, v) == shortest_path_similarity(g, v, u));
        CHECK(taxonomy_similarity(g, u, v) == taxonomy_similarity(g, v, u));
        CHECK(ao_relation(g, u, v, AoVariant::aorc) == Approx(ao_relation(g, v, u, AoVariant::aorc)));
      }
    }
  }
}

TEST_CASE("property: agreement with naive oracles") {
  const std::vector<std::pair<OverlapKind, oracle::Overlap>> kinds = {
      {OverlapKind::jaccard, oracle::Overlap::jaccard},
      {OverlapKind::adamic_adar, oracle::Overlap::adamic_adar},
      {OverlapKind::resource_allocation, oracle::Overlap::resource_allocation},
      {OverlapKind::hub_promoted, oracle::Overlap::hub_promoted},
      {OverlapKind::hub_depressed, oracle::Overlap::hub_depressed},
      {OverlapKind::lhn, oracle::Overlap::lhn},
      {OverlapKind::salton, oracle::Overlap::salton},
      {OverlapKind::sorensen, oracle::Overlap::sorensen}};
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto g = testing::random_graph(seed + 77, {.max_nodes = 20, .density = 0.15});
    for (std::uint32_t a = 0; a < g.node_count(); ++a) {
      for (std::uint32_t b = 0; b < g.node_count(); ++b) {
        if (a == b) continue;
        const NodeIx u{a}, v{b};
        for (auto [k, o] : kinds) {
          CHECK(std::abs(neighborhood_overlap(g, k, u, v) - oracle::overlap(g, o, u, v)) <= 1e-12);
        }
        CHECK(std::abs(focci_distance(g, u, v) - oracle::focci(g, u, v)) <= 1e-12);
        CHECK(std::abs(arr(g, u, v) - oracle::arr(g, u, v)) <= 1e-12);
        CHECK(std::abs(ao_relation(g, u, v, AoVariant::aor) - oracle::aor(g, u, v)) <= 1e-12);
      }
    }
    if (g.link_count() == 0) continue;
    for (std::uint32_t j = 0; j < g.relation_count(); ++j) {
      const RelationIx r{j};
      CHECK(std::abs(conditional_probability(g, r) - oracle::cp(g, r)) <= 1e-12);
      CHECK(std::abs(dimension_connectivity(g, DimensionKind::node, r) - oracle::ndc(g, r)) <= 1e-12);
      CHECK(std::abs(dimension_connectivity(g, DimensionKind::edge, r) - oracle::edc(g, r)) <= 1e-12);
    }
  }
}
