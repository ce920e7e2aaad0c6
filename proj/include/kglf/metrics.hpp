// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kglf/graph.hpp"
#include "kglf/weights.hpp"

namespace kglf {

enum class PredictionMode { existence, semantic };

std::string_view to_string(PredictionMode mode);
PredictionMode parse_mode(std::string_view text);

enum class MetricFamily {
  jaccard,
  adamic_adar,
  resource_allocation,
  hub_promoted,
  hub_depressed,
  lhn,
  salton,
  sorensen,
  shortest_path,
  time_score,
  euler_time,
  focci_distance,
  conditional_probability,
  taxonomy_similarity,
  relational_similarity,
  arr,
  aor,
  aorr,
  aorc,
  node_dimension_connectivity,
  edge_dimension_connectivity,
  mr_link_propagation,
};

inline constexpr std::size_t kMetricFamilyCount = 22;

enum class Applicability { existence, semantic, both };

std::span<const MetricFamily> all_metric_families();
std::string_view family_name(MetricFamily family);
Applicability applicability(MetricFamily family);
bool applicable(MetricFamily family, PredictionMode mode);
// Families whose value depends on the relation of a semantic candidate.
bool needs_relation(MetricFamily family);

inline constexpr Timestamp kOneDayMs = 86'400'000;
inline constexpr Timestamp kHalfDayMs = 43'200'000;

struct MetricParams {
  double beta = 0.5;              // time-score discount base, in (0, 1)
  Timestamp step_ms = kOneDayMs;  // time-score step length
  double discount_ms = static_cast<double>(kOneDayMs);  // euler-time discounting factor
  int path_cap = 5;               // shortest-path horizon
  double damping = 0.5;           // link-propagation damping, in [0, 1]
};

struct MetricInstance {
  MetricFamily family;
  MetricParams params;
  std::string display_name;

  // Throws invalid_argument when a parameter is outside its documented range.
  void validate() const;
};

MetricInstance make_instance(MetricFamily family, MetricParams params = {},
                             std::string display_name = {});

// Ordered metric list for one prediction mode. Every instance must be
// applicable to the mode.
struct MetricEnsemble {
  PredictionMode mode = PredictionMode::existence;
  std::vector<MetricInstance> instances;

  std::size_t size() const { return instances.size(); }
  std::optional<std::size_t> index_of(std::string_view display_name) const;
  void validate() const;
};

// Every applicable family once, with euler_time at one-day and half-day
// discounting.
MetricEnsemble default_ensemble(PredictionMode mode);
// Display names of both default ensembles, deduplicated, in family order.
std::vector<std::string> metric_catalog();

// -- individual families -----------------------------------------------------
// All scores are in [0, 1]; undefined ratios evaluate to 0.

enum class OverlapKind {
  jaccard,
  adamic_adar,
  resource_allocation,
  hub_promoted,
  hub_depressed,
  lhn,
  salton,
  sorensen,
};

double neighborhood_overlap(const KnowledgeGraph& g, OverlapKind kind, NodeIx u, NodeIx v);
double shortest_path_similarity(const KnowledgeGraph& g, NodeIx u, NodeIx v, int cap = 5);
double time_score(const KnowledgeGraph& g, NodeIx u, NodeIx v, double beta, Timestamp step_ms);
// Recency of the candidate's latest link, measured against the newest
// timestamp in the graph.
double euler_time(const KnowledgeGraph& g, NodeIx u, NodeIx v, double discount_ms);
double focci_distance(const KnowledgeGraph& g, NodeIx u, NodeIx v);
double conditional_probability(const KnowledgeGraph& g, RelationIx j);
double taxonomy_similarity(const KnowledgeGraph& g, NodeIx u, NodeIx v);
double relational_similarity(const KnowledgeGraph& g, NodeIx u, NodeIx v);
double arr(const KnowledgeGraph& g, NodeIx u, NodeIx v);

enum class AoVariant { aor, aorr, aorc };
double ao_relation(const KnowledgeGraph& g, NodeIx u, NodeIx v, AoVariant variant);

enum class DimensionKind { node, edge };
double dimension_connectivity(const KnowledgeGraph& g, DimensionKind kind, RelationIx j);

double mr_link_propagation(const KnowledgeGraph& g, NodeIx u, NodeIx v, RelationIx j,
                           double damping);

// Dispatches one configured instance. `j` is required for relation-dependent
// families and ignored otherwise.
double evaluate(const MetricInstance& metric, const KnowledgeGraph& g, NodeIx u, NodeIx v,
                std::optional<RelationIx> j = std::nullopt);

// Raw scores of every ensemble member for one candidate.
std::vector<double> score_vector(const MetricEnsemble& ensemble, const KnowledgeGraph& g,
                                 NodeIx u, NodeIx v, std::optional<RelationIx> j = std::nullopt);

// Linear combination sum_i a_i * s_i(u, v[, j]).
double combined_similarity(const MetricEnsemble& ensemble, const WeightVector& weights,
                           const KnowledgeGraph& g, NodeIx u, NodeIx v,
                           std::optional<RelationIx> j = std::nullopt);

}  // namespace kglf
