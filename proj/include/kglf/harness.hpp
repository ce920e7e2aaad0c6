// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors
//
// Desk-scale evaluation: synthetic graphs with planted link-formation
// mechanisms, a simulated reviewer that knows the held-out links, and the
// genetic-vs-baseline accounting.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kglf/engine.hpp"

namespace kglf {

struct SyntheticRelation {
  std::string id;
  std::string domain;
  std::string range;
};

struct SyntheticSpec {
  std::vector<std::pair<std::string, std::size_t>> concepts = {{"Person", 80}, {"Stop", 25}, {"City", 15}};
  std::vector<SyntheticRelation> relations = {
      {"knows", "Person", "Person"}, {"waited_at", "Person", "Stop"}, {"visited", "Person", "City"}};
  std::size_t links = 480;  // in the full graph, before the holdout
  double triadic_closure = 0.5;
  double type_affinity = 0.3;
  double temporal_recency = 0.2;
  double holdout = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticGraph {
  KnowledgeGraph visible;
  std::vector<Link> hidden;  // indices refer to `visible`
  std::size_t full_link_count = 0;
};

SyntheticGraph generate(const SyntheticSpec& spec);

enum class Scoring {
  learned,  // uniform start, retrained by the service policy
  fixed,    // `fixed_weights`, never retrained
  zero,     // every candidate scores 0; order falls back to node ids
};

struct SimulationConfig {
  std::size_t budget = 2000;
  std::size_t k = 9;
  std::size_t candidate_size = 30;
  std::size_t retrain_every = 200;
  std::size_t training_size = 200;
  GPConfig gp;
  std::uint64_t seed = 0;
  Scoring scoring = Scoring::learned;
  std::optional<WeightVector> fixed_weights;

  void validate() const;
};

struct WeightSnapshot {
  std::size_t after_events = 0;
  std::vector<double> weights;
  double fitness = 0.0;
};

struct ExperimentReport {
  std::uint64_t seed = 0;
  std::size_t feedback_budget = 0;
  std::size_t events = 0;  // may fall short of the budget when hidden links run out
  std::size_t genetic_reviews = 0;
  std::size_t genetic_hits = 0;
  std::size_t baseline_reviews = 0;
  std::size_t baseline_hits = 0;
  double tp_genetic = 0.0;
  double fp_genetic = 0.0;
  double tp_baseline = 0.0;
  double fp_baseline = 0.0;
  double uplift = 0.0;  // +inf when the baseline found nothing and genetic did
  std::vector<std::string> metric_names;
  std::vector<double> final_weights;
  std::vector<WeightSnapshot> trainings;
  // Combined similarity of items reviewed after the first training round,
  // split by the oracle's answer.
  std::vector<double> positive_scores;
  std::vector<double> negative_scores;
  double ks = 0.0;
  std::vector<Link> accepted_links;  // in review order
};

ExperimentReport simulate(const KnowledgeGraph& visible, const std::vector<Link>& hidden,
                          const SimulationConfig& config);

// Two-sample Kolmogorov-Smirnov statistic, sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

std::string report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

// Writes tp_fp.tsv, weights.tsv, cdf_positive.tsv, cdf_negative.tsv and
// summary.tsv for one or more runs.
void write_report(const std::vector<ExperimentReport>& runs, const std::filesystem::path& out_dir);

// hidden.jsonl beside a bundle: a links document over the bundle's nodes.
inline constexpr const char* kHiddenFile = "hidden.jsonl";
std::string render_hidden(const KnowledgeGraph& g, const std::vector<Link>& hidden);
std::vector<Link> parse_hidden(const KnowledgeGraph& g, const std::string& text);

}  // namespace kglf
