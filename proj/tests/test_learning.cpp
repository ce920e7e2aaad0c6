// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include <doctest.h>

#include <set>

#include "kglf/fixtures.hpp"
#include "kglf/learning.hpp"
#include "random_graphs.hpp"

using namespace kglf;
using doctest::Approx;

namespace {

FeatureMatrix matrix(std::vector<std::vector<double>> rows, std::vector<double> labels) {
  FeatureMatrix fm;
  fm.rows = rows.size();
  fm.cols = rows.empty() ? 0 : rows[0].size();
  for (const auto& r : rows) fm.values.insert(fm.values.end(), r.begin(), r.end());
  fm.labels = std::move(labels);
  return fm;
}

// Scores each instance on a fresh copy of the graph with the instance's links removed.
double naive_fitness(const WeightVector& w, const TrainingSet& set, const MetricEnsemble& e,
                     const KnowledgeGraph& g) {
  double total = 0.0;
  for (const auto& inst : set.instances) {
    KnowledgeGraph copy = g;
    if (inst.label == 1) {
      for (const auto& l : g.links()) {
        const bool same_pair = (l.subject == inst.subject && l.object == inst.object) ||
                               (l.subject == inst.object && l.object == inst.subject);
        if (inst.relation ? (l.subject == inst.subject && l.object == inst.object && l.relation == *inst.relation)
                          : same_pair) {
          copy.remove_link(l.subject, l.object, l.relation);
        }
      }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      s += w[i] * evaluate(e.instances[i], copy, inst.subject, inst.object, inst.relation);
    }
    s = std::min(1.0, std::max(0.0, s));
    total += (s - inst.label) * (s - inst.label);
  }
  return set.empty() ? 0.0 : total / static_cast<double>(set.size());
}

}  // namespace

TEST_CASE("silver training set on F1") {
  const auto g = fixtures::f1();
  const auto set = build_training_set(g, PredictionMode::existence, Standard::silver, 4, 5);
  REQUIRE(set.size() == 4);
  const std::set<std::pair<std::string, std::string>> unobserved = {
      {"p1", "p3"}, {"p1", "s2"}, {"p2", "s2"}, {"p3", "s2"}};
  int pos = 0;
  for (const auto& inst : set.instances) {
    if (inst.label == 1) {
      ++pos;
      CHECK(g.connected(inst.subject, inst.object));
      CHECK(inst.provenance == Provenance::observed_link);
    } else {
      CHECK(inst.provenance == Provenance::silver_negative);
      auto a = g.node(inst.subject).id;
      auto b = g.node(inst.object).id;
      if (a > b) std::swap(a, b);
      CHECK(unobserved.contains({a, b}));
    }
    CHECK_FALSE(inst.relation.has_value());
  }
  CHECK(pos == 2);
  CHECK(silver_negative_pool(g, PredictionMode::existence) == unobserved.size());
  CHECK(gold_negative_pool(g, PredictionMode::existence) == 0);

  CHECK(build_training_set(g, PredictionMode::existence, Standard::silver, 0, 5).empty());
  CHECK_THROWS_AS(build_training_set(g, PredictionMode::existence, Standard::silver, 3, 5), Error);
  CHECK_THROWS_AS(build_training_set(g, PredictionMode::existence, Standard::gold, 2, 5), Error);
  CHECK_THROWS_AS(build_training_set(g, PredictionMode::existence, Standard::silver, 20, 5), Error);
}

TEST_CASE("gold training set uses recorded rejections") {
  auto g = fixtures::f1(true);
  const auto p1 = g.node_by_id("p1");
  const auto p3 = g.node_by_id("p3");
  const auto s2 = g.node_by_id("s2");
  g.record_non_link(p1, s2, std::nullopt, 10);
  g.record_non_link(p3, s2, std::nullopt, 11);
  g.record_non_link(p1, p3, g.relation_by_id("knows"), 12);
  CHECK(gold_negative_pool(g, PredictionMode::existence) == 2);
  CHECK(gold_negative_pool(g, PredictionMode::semantic) == 1);

  const auto set = build_training_set(g, PredictionMode::existence, Standard::gold, 4, 1);
  for (const auto& inst : set.instances) {
    if (inst.label == 0) {
      CHECK(inst.provenance == Provenance::user_reject);
      CHECK(g.has_non_link(inst.subject, inst.object, std::nullopt));
    }
  }
  const auto sem = build_training_set(g, PredictionMode::semantic, Standard::gold, 2, 1);
  REQUIRE(sem.size() == 2);
  CHECK(sem.instances[1].relation == g.relation_by_id("knows"));

  std::set<LinkKey> accepted{{p1, g.node_by_id("p2"), g.relation_by_id("knows")}};
  const auto marked = build_training_set(g, PredictionMode::semantic, Standard::silver, 10, 1, accepted);
  for (const auto& inst : marked.instances) {
    const bool is_accept = inst.label == 1 && accepted.contains({inst.subject, inst.object, *inst.relation});
    CHECK((inst.provenance == Provenance::user_accept) == is_accept);
  }
}

TEST_CASE("fitness examples") {
  CHECK(mse(WeightVector{1.0}, matrix({{1.0}, {0.0}}, {1.0, 0.0})) == 0.0);
  CHECK(mse(WeightVector{0.5, 0.5}, matrix({{0.0, 0.0}}, {1.0})) == 1.0);
  CHECK(mse(WeightVector{1.0}, matrix({{0.5}, {0.5}}, {0.0, 1.0})) == Approx(0.25));
  CHECK_THROWS_AS(mse(WeightVector{0.5, 0.5}, matrix({{0.5}}, {0.0})), Error);
}

TEST_CASE("leave-one-out features hide the positive's link") {
  const auto g = fixtures::f1();
  const MetricEnsemble e{PredictionMode::existence, {make_instance(MetricFamily::shortest_path)}};
  TrainingSet set{PredictionMode::existence, Standard::silver,
                  {{g.node_by_id("p1"), g.node_by_id("p2"), std::nullopt, 1, Provenance::observed_link}}};
  const auto fm = compute_features(g, e, set);
  // Without (p1,p2) the shortest route is p1-s1-p2.
  CHECK(fm.values[0] == Approx(0.8));
  TrainingSet wrong{PredictionMode::semantic, Standard::silver, {}};
  CHECK_THROWS_AS(compute_features(g, e, wrong), Error);
}

TEST_CASE("fitness matches a from-scratch re-evaluation") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto g = testing::random_graph(seed + 40, {.max_nodes = 25, .density = 0.12});
    for (auto mode : {PredictionMode::existence, PredictionMode::semantic}) {
      const auto e = default_ensemble(mode);
      TrainingSet set;
      try {
        set = build_training_set(g, mode, Standard::silver, 8, seed);
      } catch (const Error&) {
        continue;
      }
      Rng rng(seed);
      std::vector<double> raw(e.size());
      for (double& x : raw) x = std::uniform_real_distribution<double>(0, 1)(rng);
      const WeightVector w(raw);
      CHECK(std::abs(fitness(w, set, e, g) - naive_fitness(w, set, e, g)) <= 1e-9);
    }
  }
}

TEST_CASE("crossover") {
  const WeightVector a{0.2, 0.3, 0.5};
  auto [x, y] = crossover_at(a, a, 1);
  CHECK(x == a);
  CHECK(y == a);

  const WeightVector p{1.0, 0.0};
  const WeightVector q{0.0, 1.0};
  auto [c1, c2] = crossover_at(p, q, 1);
  CHECK(c1[0] == Approx(0.5));
  CHECK(c1[1] == Approx(0.5));
  CHECK(c2[0] == Approx(0.5));
  CHECK(c2[1] == Approx(0.5));

  auto [d1, d2] = crossover_at(p, q, 0);
  CHECK(d1 == q);
  CHECK(d2 == p);
  auto [e1, e2] = crossover_at(p, q, 2);
  CHECK(e1 == p);
  CHECK(e2 == q);

  CHECK_THROWS_AS(crossover_at(p, a, 1), Error);
  CHECK_THROWS_AS(crossover_at(p, q, 3), Error);
  CHECK(crossover(a, WeightVector{0.1, 0.1, 0.8}, 9) == crossover(a, WeightVector{0.1, 0.1, 0.8}, 9));
}

TEST_CASE("mutation") {
  const WeightVector w{0.1, 0.2, 0.3, 0.4};
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(mutate(w, 0.0, s) == w);
  for (std::uint64_t s = 0; s < 50; ++s) CHECK(mutate(WeightVector{1.0}, 1.0, s)[0] == Approx(1.0));
  CHECK(mutate(w, 1.0, 3) == mutate(w, 1.0, 3));
  std::size_t changed = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto m = mutate(w, 1.0, s);
    CHECK(m.on_simplex());
    changed += m == w ? 0 : 1;
  }
  CHECK(changed > 190);
  CHECK_THROWS_AS(mutate(w, 1.5, 1), Error);
}

TEST_CASE("selection") {
  CHECK(select_worst(std::vector<double>{0.1, 0.9}) == 1);
  CHECK(select_worst(std::vector<double>{0.4, 0.4, 0.4}) == 0);
  CHECK(select_worst(std::vector<double>{0.3}) == 0);
  CHECK_THROWS_AS(select_worst(std::vector<double>{}), Error);
}

TEST_CASE("run_gp") {
  const auto fm = matrix({{0.9, 0.1, 0.0}, {0.8, 0.0, 0.3}, {0.1, 0.9, 0.2}, {0.0, 0.7, 0.6}},
                         {1.0, 1.0, 0.0, 0.0});
  GPConfig config;
  config.seed = 4;
  config.tolerance = 1.0;
  const auto loose = run_gp(fm, config);
  CHECK(loose.iterations_used == 1);
  CHECK(loose.fitness_trace.size() == 1);

  config.tolerance = 1e-3;
  config.max_iterations = 200;
  bool all_on_simplex = true;
  const auto report = run_gp(fm, config, [&](std::size_t, std::span<const WeightVector> pop, std::span<const double>) {
    for (const auto& w : pop) all_on_simplex = all_on_simplex && w.on_simplex();
  });
  CHECK(all_on_simplex);
  for (std::size_t i = 1; i < report.fitness_trace.size(); ++i) {
    CHECK(report.fitness_trace[i] <= report.fitness_trace[i - 1]);
  }
  CHECK(report.best_fitness == Approx(mse(report.best_weights, fm)));
  CHECK(report.best_weights[0] > report.best_weights[1]);
  CHECK(run_gp(fm, config).best_weights == report.best_weights);

  config.population_size = 4;
  CHECK_THROWS_AS(run_gp(fm, config), Error);
  config.population_size = 7;
  CHECK_THROWS_AS(run_gp(FeatureMatrix{}, config), Error);
}

TEST_CASE("property: training-set composition") {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto g = testing::random_graph(seed + 300, {.max_nodes = 25, .density = 0.1, .non_link_rate = 0.1});
    for (auto mode : {PredictionMode::existence, PredictionMode::semantic}) {
      for (auto standard : {Standard::gold, Standard::silver}) {
        TrainingSet set;
        try {
          set = build_training_set(g, mode, standard, 6, seed);
        } catch (const Error& e) {
          CHECK(e.code() == ErrorCode::insufficient_data);
          continue;
        }
        std::size_t pos = 0;
        for (const auto& inst : set.instances) {
          CHECK(inst.relation.has_value() == (mode == PredictionMode::semantic));
          if (inst.label == 1) {
            ++pos;
            continue;
          }
          if (standard == Standard::gold) {
            CHECK(inst.provenance == Provenance::user_reject);
            CHECK((g.has_non_link(inst.subject, inst.object, inst.relation) ||
                   (!inst.relation && g.has_non_link(inst.object, inst.subject, std::nullopt))));
          } else {
            CHECK(inst.provenance == Provenance::silver_negative);
          }
        }
        CHECK(pos * 2 == set.size());
      }
    }
  }
}
