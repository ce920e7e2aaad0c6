// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/candidates.hpp"

#include <set>

#include "kglf/random.hpp"

namespace kglf {

ExistenceCandidateSet existence_candidates(const KnowledgeGraph& g, NodeIx u, std::size_t n,
                                           std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "existence candidate size must be >= 2");
  const auto& neighbors = g.adjacency(u).neighbors;

  auto excluded = [&](NodeIx x) {
    return x == u || neighbors.contains(x) || g.excluded_pair(u, x);
  };

  std::set<NodeIx> two_hop;
  for (const auto& [t, _] : neighbors) {
    for (const auto& [x, _c] : g.adjacency(t).neighbors) {
      if (!excluded(x)) two_hop.insert(x);
    }
  }

  Rng rng(seed);
  ExistenceCandidateSet out{u, {}, {}, n};
  const std::size_t quota = (n + 1) / 2;
  for (NodeIx x : sample_without_replacement(std::vector<NodeIx>(two_hop.begin(), two_hop.end()), quota, rng)) {
    out.candidates.push_back(x);
    out.pools.push_back(CandidatePool::two_hop);
  }

  const std::set<NodeIx> chosen(out.candidates.begin(), out.candidates.end());
  std::vector<NodeIx> global;
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    NodeIx x{i};
    if (!excluded(x) && !chosen.contains(x)) global.push_back(x);
  }
  for (NodeIx x : sample_without_replacement(std::move(global), n - out.candidates.size(), rng)) {
    out.candidates.push_back(x);
    out.pools.push_back(CandidatePool::global);
  }
  return out;
}

SemanticCandidateSet semantic_candidates(const KnowledgeGraph& g, NodeIx u, std::size_t n,
                                         std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "semantic candidate size must be >= 1");
  Rng rng(seed);
  SemanticCandidateSet out{u, {}, n};
  auto order = g.neighbors(u);
  std::shuffle(order.begin(), order.end(), rng);

  for (NodeIx c : order) {
    if (out.candidates.size() >= n) break;
    std::vector<SemanticCandidate> options;
    for (std::uint32_t r = 0; r < g.relation_count(); ++r) {
      RelationIx j{r};
      if (g.has_link(u, c, j) || g.has_link(c, u, j)) continue;
      if (g.has_non_link(u, c, j) || g.has_non_link(c, u, j)) continue;
      if (g.schema_allows(u, c, j)) {
        options.push_back({c, j, true});
      } else if (g.schema_allows(c, u, j)) {
        options.push_back({c, j, false});
      }
    }
    if (options.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    out.candidates.push_back(options[pick(rng)]);
  }
  return out;
}

}  // namespace kglf
