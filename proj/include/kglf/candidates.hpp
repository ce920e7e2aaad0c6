// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <cstdint>
#include <vector>

#include "kglf/graph.hpp"

namespace kglf {

enum class CandidatePool { two_hop, global };

struct ExistenceCandidateSet {
  NodeIx target;
  std::vector<NodeIx> candidates;
  std::vector<CandidatePool> pools;  // provenance, parallel to candidates
  std::size_t requested_size = 0;
};

struct SemanticCandidate {
  NodeIx node;
  RelationIx relation;
  bool target_is_subject = true;

  NodeIx subject(NodeIx target) const { return target_is_subject ? target : node; }
  NodeIx object(NodeIx target) const { return target_is_subject ? node : target; }
};

struct SemanticCandidateSet {
  NodeIx target;
  std::vector<SemanticCandidate> candidates;
  std::size_t requested_size = 0;
};

// Half of the set (rounded up) comes from neighbors of neighbors, the rest
// from the whole graph; each pool backfills the other when it runs short.
// Excludes the target, its neighbors, and nodes it has rejected outright.
ExistenceCandidateSet existence_candidates(const KnowledgeGraph& g, NodeIx u, std::size_t n,
                                           std::uint64_t seed);

// Walks the target's neighbors in seeded order and attaches one unrealized,
// schema-compatible relation to each, until n pairs are collected.
SemanticCandidateSet semantic_candidates(const KnowledgeGraph& g, NodeIx u, std::size_t n,
                                         std::uint64_t seed);

}  // namespace kglf
