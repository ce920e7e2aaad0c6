// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/predictor.hpp"

#include <algorithm>
#include <tuple>

#include "kglf/random.hpp"

namespace kglf {

namespace {

void sort_ranked(const KnowledgeGraph& g, NodeIx target, std::vector<Recommendation>& recs) {
  auto candidate = [target](const Recommendation& r) {
    return r.subject == target ? r.object : r.subject;
  };
  std::sort(recs.begin(), recs.end(), [&](const Recommendation& a, const Recommendation& b) {
    if (a.score != b.score) return a.score > b.score;
    const auto& ia = g.node(candidate(a)).id;
    const auto& ib = g.node(candidate(b)).id;
    if (ia != ib) return ia < ib;
    const std::string ra = a.relation ? g.relation(*a.relation).id : std::string{};
    const std::string rb = b.relation ? g.relation(*b.relation).id : std::string{};
    return ra < rb;
  });
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].rank = i + 1;
}

void truncate(std::vector<Recommendation>& recs, const PredictOptions& options) {
  if (options.min_score) {
    std::erase_if(recs, [&](const Recommendation& r) { return r.score < *options.min_score; });
  }
  if (recs.size() > options.k) recs.resize(options.k);
}

auto identity(const Recommendation& r) {
  return std::tuple(r.subject, r.object, r.relation.has_value(), r.relation.value_or(RelationIx{}));
}

}  // namespace

std::string_view to_string(Source source) {
  return source == Source::genetic ? "genetic" : "baseline";
}

std::vector<Recommendation> rank_existence(const KnowledgeGraph& g, const ExistenceCandidateSet& set,
                                           const MetricEnsemble& ensemble,
                                           const WeightVector& weights) {
  if (ensemble.mode != PredictionMode::existence) {
    throw Error(ErrorCode::invalid_argument, "existence ranking needs an existence ensemble");
  }
  std::vector<Recommendation> recs;
  recs.reserve(set.candidates.size());
  for (NodeIx v : set.candidates) {
    recs.push_back({set.target, v, std::nullopt,
                    combined_similarity(ensemble, weights, g, set.target, v), Source::genetic, 0});
  }
  sort_ranked(g, set.target, recs);
  return recs;
}

std::vector<Recommendation> rank_semantic(const KnowledgeGraph& g, const SemanticCandidateSet& set,
                                          const MetricEnsemble& ensemble,
                                          const WeightVector& weights) {
  if (ensemble.mode != PredictionMode::semantic) {
    throw Error(ErrorCode::invalid_argument, "semantic ranking needs a semantic ensemble");
  }
  std::vector<Recommendation> recs;
  recs.reserve(set.candidates.size());
  for (const auto& c : set.candidates) {
    recs.push_back({c.subject(set.target), c.object(set.target), c.relation,
                    combined_similarity(ensemble, weights, g, set.target, c.node, c.relation),
                    Source::genetic, 0});
  }
  sort_ranked(g, set.target, recs);
  return recs;
}

std::vector<Recommendation> predict_existence(const KnowledgeGraph& g, NodeIx u,
                                              const MetricEnsemble& ensemble,
                                              const WeightVector& weights,
                                              const PredictOptions& options) {
  g.node(u);
  if (options.k == 0) return {};
  if (options.k > options.candidate_size) {
    throw Error(ErrorCode::invalid_argument, "k must not exceed the candidate size");
  }
  auto recs = rank_existence(g, existence_candidates(g, u, options.candidate_size, options.seed),
                             ensemble, weights);
  truncate(recs, options);
  return recs;
}

std::vector<Recommendation> predict_type(const KnowledgeGraph& g, NodeIx u,
                                         const MetricEnsemble& ensemble, const WeightVector& weights,
                                         const PredictOptions& options) {
  g.node(u);
  if (options.k == 0) return {};
  if (options.k > options.candidate_size) {
    throw Error(ErrorCode::invalid_argument, "k must not exceed the candidate size");
  }
  auto recs = rank_semantic(g, semantic_candidates(g, u, options.candidate_size, options.seed),
                            ensemble, weights);
  truncate(recs, options);
  return recs;
}

std::vector<Recommendation> interleave_for_review(std::span<const Recommendation> genetic,
                                                  std::span<const Recommendation> baseline_pool,
                                                  std::size_t total, std::uint64_t seed) {
  if (total == 0) return {};
  if (genetic.empty() && baseline_pool.empty()) {
    throw Error(ErrorCode::insufficient_data, "no recommendations to interleave");
  }
  Rng rng(seed);
  const std::size_t baseline_quota = total / 3;

  std::vector<Recommendation> out;
  std::size_t next_genetic = 0;
  auto take_genetic = [&] {
    Recommendation r = genetic[next_genetic++];
    r.source = Source::genetic;
    out.push_back(r);
  };
  while (out.size() < total - baseline_quota && next_genetic < genetic.size()) take_genetic();

  std::vector<Recommendation> draws(baseline_pool.begin(), baseline_pool.end());
  std::shuffle(draws.begin(), draws.end(), rng);
  std::size_t next_draw = 0;
  std::size_t baseline_taken = 0;
  // Draws continue until the quota is met; later, until the list is full.
  auto draw_baseline = [&](std::size_t limit) {
    while (baseline_taken < limit && out.size() < total && next_draw < draws.size()) {
      Recommendation r = draws[next_draw++];
      auto hit = std::find_if(out.begin(), out.end(),
                              [&](const Recommendation& o) { return identity(o) == identity(r); });
      if (hit != out.end()) {
        hit->baseline_drawn = true;
        continue;
      }
      r.source = Source::baseline;
      r.rank = 0;
      for (const auto& gr : genetic) {
        if (identity(gr) == identity(r)) r.rank = gr.rank;
      }
      r.baseline_drawn = true;
      out.push_back(r);
      ++baseline_taken;
    }
  };
  draw_baseline(baseline_quota);

  // Backfill from whichever side still has items.
  while (out.size() < total && next_genetic < genetic.size()) {
    const auto id = identity(genetic[next_genetic]);
    if (std::any_of(out.begin(), out.end(), [&](const Recommendation& o) { return identity(o) == id; })) {
      ++next_genetic;
      continue;
    }
    take_genetic();
  }
  draw_baseline(total);

  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace kglf
