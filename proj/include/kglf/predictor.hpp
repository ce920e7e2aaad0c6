// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "kglf/candidates.hpp"
#include "kglf/graph.hpp"
#include "kglf/metrics.hpp"
#include "kglf/weights.hpp"

namespace kglf {

enum class Source { genetic, baseline };

std::string_view to_string(Source source);

struct Recommendation {
  NodeIx subject;
  NodeIx object;
  std::optional<RelationIx> relation;  // present iff semantic mode
  double score = 0.0;
  Source source = Source::genetic;
  std::size_t rank = 0;  // 1-based position in the genetic ranking, 0 if unranked
  // Set when the uniform baseline draw picked this item, including draws
  // that collapsed onto a genetic item.
  bool baseline_drawn = false;
};

struct PredictOptions {
  std::size_t k = 10;
  std::size_t candidate_size = 30;
  std::uint64_t seed = 0;
  std::optional<double> min_score;  // off by default
};

// Scores every candidate with the weighted ensemble and orders them by
// descending score, then ascending node id, then ascending relation id.
std::vector<Recommendation> rank_existence(const KnowledgeGraph& g, const ExistenceCandidateSet& set,
                                           const MetricEnsemble& ensemble, const WeightVector& weights);
std::vector<Recommendation> rank_semantic(const KnowledgeGraph& g, const SemanticCandidateSet& set,
                                          const MetricEnsemble& ensemble, const WeightVector& weights);

std::vector<Recommendation> predict_existence(const KnowledgeGraph& g, NodeIx u,
                                              const MetricEnsemble& ensemble,
                                              const WeightVector& weights,
                                              const PredictOptions& options);
std::vector<Recommendation> predict_type(const KnowledgeGraph& g, NodeIx u,
                                         const MetricEnsemble& ensemble, const WeightVector& weights,
                                         const PredictOptions& options);

// Review queue of `total` items: floor(total/3) drawn uniformly from the
// baseline pool, the rest from the top of the genetic ranking. A baseline
// draw that hits an item already taken from the genetic side marks it and
// draws again. Either side backfills the other when it runs dry. The
// presentation order is shuffled with `seed`.
std::vector<Recommendation> interleave_for_review(std::span<const Recommendation> genetic,
                                                  std::span<const Recommendation> baseline_pool,
                                                  std::size_t total, std::uint64_t seed);

}  // namespace kglf
