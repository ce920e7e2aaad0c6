// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors
//
// Naive re-evaluations of metric families straight from the link list.
// Deliberately share no code with src/metrics.cpp.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "kglf/graph.hpp"

namespace kglf::oracle {

using NodeSet = std::set<std::uint32_t>;

inline NodeSet gamma(const KnowledgeGraph& g, NodeIx u) {
  NodeSet out;
  for (const auto& l : g.links()) {
    if (l.subject == u) out.insert(l.object.value);
    if (l.object == u) out.insert(l.subject.value);
  }
  return out;
}

inline NodeSet gamma_rel(const KnowledgeGraph& g, NodeIx u, RelationIx j) {
  NodeSet out;
  for (const auto& l : g.links()) {
    if (l.relation != j) continue;
    if (l.subject == u) out.insert(l.object.value);
    if (l.object == u) out.insert(l.subject.value);
  }
  return out;
}

inline std::set<std::uint32_t> active(const KnowledgeGraph& g, NodeIx u) {
  std::set<std::uint32_t> out;
  for (const auto& l : g.links()) {
    if (l.subject == u) out.insert(l.relation.value);
  }
  return out;
}

template <class T>
std::set<T> intersect(const std::set<T>& a, const std::set<T>& b) {
  std::set<T> out;
  for (const auto& x : a) {
    if (b.count(x)) out.insert(x);
  }
  return out;
}

template <class T>
std::set<T> unite(std::set<T> a, const std::set<T>& b) {
  a.insert(b.begin(), b.end());
  return a;
}

enum class Overlap { jaccard, adamic_adar, resource_allocation, hub_promoted, hub_depressed, lhn, salton, sorensen };

inline double overlap(const KnowledgeGraph& g, Overlap kind, NodeIx u, NodeIx v) {
  const auto a = gamma(g, u);
  const auto b = gamma(g, v);
  const auto common = intersect(a, b);
  if (common.empty()) return 0.0;
  const double c = static_cast<double>(common.size());
  const double ku = static_cast<double>(a.size());
  const double kv = static_cast<double>(b.size());
  switch (kind) {
    case Overlap::jaccard: return c / static_cast<double>(unite(a, b).size());
    case Overlap::adamic_adar: {
      double s = 0.0;
      for (auto z : common) s += 1.0 / std::log(static_cast<double>(gamma(g, NodeIx{z}).size()));
      return s * std::log(2.0) / c;
    }
    case Overlap::resource_allocation: {
      double s = 0.0;
      for (auto z : common) s += 1.0 / static_cast<double>(gamma(g, NodeIx{z}).size());
      return s * 2.0 / c;
    }
    case Overlap::hub_promoted: return c / std::min(ku, kv);
    case Overlap::hub_depressed: return c / std::max(ku, kv);
    case Overlap::lhn: return c / (ku * kv);
    case Overlap::salton: return c / std::sqrt(ku * kv);
    case Overlap::sorensen: return 2.0 * c / (ku + kv);
  }
  return 0.0;
}

inline double focci(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  double best = 0.0;
  for (auto j : intersect(active(g, u), active(g, v))) {
    const RelationIx rj{j};
    const auto inv = g.relation(rj).inverse_of;
    for (auto z : intersect(gamma_rel(g, u, rj), gamma_rel(g, v, rj))) {
      // Nodes reaching z through j, or reached from z through the declared inverse.
      NodeSet reverse;
      for (const auto& l : g.links()) {
        if (l.relation == rj && l.object.value == z) reverse.insert(l.subject.value);
        if (inv && l.relation == *inv && l.subject.value == z) reverse.insert(l.object.value);
      }
      if (!reverse.empty()) best = std::max(best, 1.0 / static_cast<double>(reverse.size()));
    }
  }
  return best;
}

inline double arr(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  const auto ju = active(g, u);
  if (ju.empty()) return 0.0;
  return static_cast<double>(intersect(ju, active(g, v)).size()) / static_cast<double>(ju.size());
}

inline double aor(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  const auto nv = gamma(g, v);
  if (nv.empty()) return 0.0;
  double same = 0;
  for (auto z : nv) same += g.node(NodeIx{z}).type == g.node(u).type ? 1 : 0;
  return same / static_cast<double>(nv.size());
}

inline double aorr(const KnowledgeGraph& g, NodeIx u, NodeIx v) { return aor(g, v, u); }

inline double aorc(const KnowledgeGraph& g, NodeIx u, NodeIx v) { return (aor(g, u, v) + aor(g, v, u)) / 2.0; }

inline std::set<std::pair<std::uint32_t, std::uint32_t>> pair_set(const KnowledgeGraph& g, RelationIx j) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  for (const auto& l : g.links()) {
    if (l.relation != j) continue;
    out.insert({std::min(l.subject.value, l.object.value), std::max(l.subject.value, l.object.value)});
  }
  return out;
}

inline double cp(const KnowledgeGraph& g, RelationIx j) {
  const auto ej = pair_set(g, j);
  if (ej.empty()) return 0.0;
  double best = 0.0;
  for (std::uint32_t i = 0; i < g.relation_count(); ++i) {
    if (i == j.value) continue;
    best = std::max(best, static_cast<double>(intersect(ej, pair_set(g, RelationIx{i})).size()) /
                              static_cast<double>(ej.size()));
  }
  return best;
}

inline double ndc(const KnowledgeGraph& g, RelationIx j) {
  NodeSet subjects;
  for (const auto& l : g.links()) {
    if (l.relation == j) subjects.insert(l.subject.value);
  }
  return static_cast<double>(subjects.size()) / static_cast<double>(g.node_count());
}

inline double edc(const KnowledgeGraph& g, RelationIx j) {
  double n = 0;
  for (const auto& l : g.links()) n += l.relation == j ? 1 : 0;
  return n / static_cast<double>(g.links().size());
}

}  // namespace kglf::oracle
