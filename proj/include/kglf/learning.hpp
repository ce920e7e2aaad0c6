// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "kglf/graph.hpp"
#include "kglf/metrics.hpp"
#include "kglf/random.hpp"
#include "kglf/weights.hpp"

namespace kglf {

enum class Standard { gold, silver };

std::string_view to_string(Standard standard);
Standard parse_standard(std::string_view text);

enum class Provenance { observed_link, user_accept, user_reject, silver_negative };

std::string_view to_string(Provenance provenance);

struct TrainingInstance {
  NodeIx subject;
  NodeIx object;
  std::optional<RelationIx> relation;  // present iff semantic mode
  int label = 0;
  Provenance provenance = Provenance::observed_link;
};

struct TrainingSet {
  PredictionMode mode = PredictionMode::existence;
  Standard standard = Standard::silver;
  std::vector<TrainingInstance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

// Number of distinct negatives the gold standard could draw on.
std::size_t gold_negative_pool(const KnowledgeGraph& g, PredictionMode mode);
// Number of unobserved, schema-compatible candidates the silver standard could draw on.
std::size_t silver_negative_pool(const KnowledgeGraph& g, PredictionMode mode);

// size/2 positives drawn uniformly from the realized links (pairs in
// existence mode, triplets in semantic mode) and size/2 negatives drawn from
// recorded non-links (gold) or from unobserved schema-compatible candidates
// (silver). Links listed in `accepted` are tagged as user acceptances.
TrainingSet build_training_set(const KnowledgeGraph& g, PredictionMode mode, Standard standard,
                               std::size_t size, std::uint64_t seed,
                               const std::set<LinkKey>& accepted = {});

// Per-instance metric scores, row-major (instances x metrics).
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<double> labels;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

// Scores every instance with every ensemble member. Positive instances are
// scored with their own link(s) hidden so that the feature does not encode
// the label.
FeatureMatrix compute_features(const KnowledgeGraph& g, const MetricEnsemble& ensemble,
                               const TrainingSet& set);

// Mean squared error of the weighted combination against the labels.
double mse(const WeightVector& weights, const FeatureMatrix& features);
double fitness(const WeightVector& weights, const TrainingSet& set, const MetricEnsemble& ensemble,
               const KnowledgeGraph& g);

// -- genetic operators -------------------------------------------------------

// Single-point crossover at `split` in [0, size]: children exchange suffixes
// and are renormalized.
std::pair<WeightVector, WeightVector> crossover_at(const WeightVector& a, const WeightVector& b,
                                                   std::size_t split);
std::pair<WeightVector, WeightVector> crossover(const WeightVector& a, const WeightVector& b,
                                                Rng& rng);
std::pair<WeightVector, WeightVector> crossover(const WeightVector& a, const WeightVector& b,
                                                std::uint64_t seed);

// Picks one position; with probability `threshold` replaces it by U[0, 1).
WeightVector mutate(const WeightVector& w, double threshold, Rng& rng);
WeightVector mutate(const WeightVector& w, double threshold, std::uint64_t seed);

// Index of the least fit (highest error) individual; ties go to the lowest
// index.
std::size_t select_worst(std::span<const double> fitnesses);

struct GPConfig {
  std::size_t population_size = 7;
  std::size_t max_iterations = 1000;
  double tolerance = 1e-3;
  double mutation_threshold = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GPRunReport {
  WeightVector best_weights;
  double best_fitness = 1.0;
  std::size_t iterations_used = 0;
  std::vector<double> fitness_trace;  // best-so-far after each generation
  std::size_t restarts = 0;
};

// Called once per generation with the evaluated population.
using GenerationObserver =
    std::function<void(std::size_t generation, std::span<const WeightVector> population,
                       std::span<const double> fitnesses)>;

// Micro genetic algorithm over the weight simplex. The best individual is
// carried into every generation; the least fit one is excluded from
// reproduction; a collapsed population is reseeded around the best.
GPRunReport run_gp(const FeatureMatrix& features, const GPConfig& config,
                   const GenerationObserver& observer = {});
GPRunReport run_gp(const MetricEnsemble& ensemble, const TrainingSet& set, const KnowledgeGraph& g,
                   const GPConfig& config);

}  // namespace kglf
