// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace kglf {

namespace {

constexpr std::array<MetricFamily, kMetricFamilyCount> kFamilies = {
    MetricFamily::jaccard,
    MetricFamily::adamic_adar,
    MetricFamily::resource_allocation,
    MetricFamily::hub_promoted,
    MetricFamily::hub_depressed,
    MetricFamily::lhn,
    MetricFamily::salton,
    MetricFamily::sorensen,
    MetricFamily::shortest_path,
    MetricFamily::time_score,
    MetricFamily::euler_time,
    MetricFamily::focci_distance,
    MetricFamily::conditional_probability,
    MetricFamily::taxonomy_similarity,
    MetricFamily::relational_similarity,
    MetricFamily::arr,
    MetricFamily::aor,
    MetricFamily::aorr,
    MetricFamily::aorc,
    MetricFamily::node_dimension_connectivity,
    MetricFamily::edge_dimension_connectivity,
    MetricFamily::mr_link_propagation,
};

double clamp01(double x) {
  if (!(x > 0.0)) return 0.0;  // also maps NaN to 0
  return x > 1.0 ? 1.0 : x;
}

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// Calls fn(key) for every key present in both maps.
template <class A, class B, class Fn>
void for_each_common(const A& a, const B& b, Fn&& fn) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      fn(ia->first);
      ++ia;
      ++ib;
    }
  }
}

template <class A, class B>
std::size_t common_count(const A& a, const B& b) {
  std::size_t n = 0;
  for_each_common(a, b, [&](auto) { ++n; });
  return n;
}

template <class SetA, class SetB>
std::size_t set_common(const SetA& a, const SetB& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

using UnorderedPairs = std::set<std::pair<NodeIx, NodeIx>>;

UnorderedPairs unordered_pairs(const KnowledgeGraph& g, RelationIx j) {
  UnorderedPairs out;
  for (auto [a, b] : g.pairs_of_relation(j)) out.emplace(std::min(a, b), std::max(a, b));
  return out;
}

// Jaccard overlap of the unordered pair sets of two relations.
double pair_set_jaccard(const UnorderedPairs& a, const UnorderedPairs& b) {
  const std::size_t common = set_common(a, b);
  return ratio(static_cast<double>(common), static_cast<double>(a.size() + b.size() - common));
}

std::size_t distinct_relations(std::span<const PairLink> links) {
  std::set<RelationIx> rel;
  for (const auto& l : links) rel.insert(l.relation);
  return rel.size();
}

Timestamp most_recent(std::span<const PairLink> links) {
  Timestamp t = links.front().timestamp;
  for (const auto& l : links) t = std::max(t, l.timestamp);
  return t;
}

// Mean over `a` of the best taxonomy match in `b`.
double best_match_mean(const KnowledgeGraph& g, const std::set<NodeIx>& a,
                       const std::set<NodeIx>& b) {
  if (a.empty() || b.empty()) return 0.0;
  double sum = 0.0;
  for (NodeIx x : a) {
    double best = 0.0;
    for (NodeIx y : b) best = std::max(best, taxonomy_similarity(g, x, y));
    sum += best;
  }
  return sum / static_cast<double>(a.size());
}

RelationIx require_relation(std::optional<RelationIx> j, const MetricInstance& m) {
  if (!j) {
    throw Error(ErrorCode::invalid_argument,
                "metric '" + m.display_name + "' needs the candidate's relation");
  }
  return *j;
}

}  // namespace

// -- catalog -----------------------------------------------------------------

std::string_view to_string(PredictionMode mode) {
  return mode == PredictionMode::existence ? "existence" : "semantic";
}

PredictionMode parse_mode(std::string_view text) {
  if (text == "existence") return PredictionMode::existence;
  if (text == "semantic") return PredictionMode::semantic;
  throw Error(ErrorCode::invalid_argument, "unknown prediction mode '" + std::string(text) + "'");
}

std::span<const MetricFamily> all_metric_families() { return kFamilies; }

std::string_view family_name(MetricFamily family) {
  switch (family) {
    case MetricFamily::jaccard: return "jaccard";
    case MetricFamily::adamic_adar: return "adamic_adar";
    case MetricFamily::resource_allocation: return "resource_allocation";
    case MetricFamily::hub_promoted: return "hub_promoted";
    case MetricFamily::hub_depressed: return "hub_depressed";
    case MetricFamily::lhn: return "lhn";
    case MetricFamily::salton: return "salton";
    case MetricFamily::sorensen: return "sorensen";
    case MetricFamily::shortest_path: return "shortest_path";
    case MetricFamily::time_score: return "time_score";
    case MetricFamily::euler_time: return "euler_time";
    case MetricFamily::focci_distance: return "focci_distance";
    case MetricFamily::conditional_probability: return "conditional_probability";
    case MetricFamily::taxonomy_similarity: return "taxonomy_similarity";
    case MetricFamily::relational_similarity: return "relational_similarity";
    case MetricFamily::arr: return "arr";
    case MetricFamily::aor: return "aor";
    case MetricFamily::aorr: return "aorr";
    case MetricFamily::aorc: return "aorc";
    case MetricFamily::node_dimension_connectivity: return "node_dimension_connectivity";
    case MetricFamily::edge_dimension_connectivity: return "edge_dimension_connectivity";
    case MetricFamily::mr_link_propagation: return "mr_link_propagation";
  }
  return "unknown";
}

Applicability applicability(MetricFamily family) {
  switch (family) {
    case MetricFamily::focci_distance:
    case MetricFamily::taxonomy_similarity:
    case MetricFamily::relational_similarity:
    case MetricFamily::arr:
    case MetricFamily::aor:
    case MetricFamily::aorr:
    case MetricFamily::aorc:
      return Applicability::existence;
    case MetricFamily::conditional_probability:
    case MetricFamily::node_dimension_connectivity:
    case MetricFamily::edge_dimension_connectivity:
    case MetricFamily::mr_link_propagation:
      return Applicability::semantic;
    default:
      return Applicability::both;
  }
}

bool applicable(MetricFamily family, PredictionMode mode) {
  const auto a = applicability(family);
  return a == Applicability::both || (a == Applicability::existence) == (mode == PredictionMode::existence);
}

bool needs_relation(MetricFamily family) {
  return family == MetricFamily::conditional_probability ||
         family == MetricFamily::node_dimension_connectivity ||
         family == MetricFamily::edge_dimension_connectivity ||
         family == MetricFamily::mr_link_propagation;
}

void MetricInstance::validate() const {
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::invalid_argument, "metric '" + display_name + "': " + what);
  };
  switch (family) {
    case MetricFamily::time_score:
      if (!(params.beta > 0.0 && params.beta < 1.0)) fail("beta must be in (0, 1)");
      if (params.step_ms <= 0) fail("step length must be positive");
      break;
    case MetricFamily::euler_time:
      if (!(params.discount_ms > 0.0)) fail("discounting factor must be positive");
      break;
    case MetricFamily::shortest_path:
      if (params.path_cap < 1) fail("path cap must be >= 1");
      break;
    case MetricFamily::mr_link_propagation:
      if (!(params.damping >= 0.0 && params.damping <= 1.0)) fail("damping must be in [0, 1]");
      break;
    default:
      break;
  }
}

MetricInstance make_instance(MetricFamily family, MetricParams params, std::string display_name) {
  if (display_name.empty()) display_name = std::string(family_name(family));
  MetricInstance m{family, params, std::move(display_name)};
  m.validate();
  return m;
}

std::optional<std::size_t> MetricEnsemble::index_of(std::string_view display_name) const {
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].display_name == display_name) return i;
  }
  return std::nullopt;
}

void MetricEnsemble::validate() const {
  std::set<std::string_view> names;
  for (const auto& m : instances) {
    m.validate();
    if (!applicable(m.family, mode)) {
      throw Error(ErrorCode::invalid_argument, "metric '" + m.display_name + "' is not applicable to " +
                                                   std::string(to_string(mode)) + " prediction");
    }
    if (!names.insert(m.display_name).second) {
      throw Error(ErrorCode::duplicate, "duplicate metric name '" + m.display_name + "'");
    }
  }
}

MetricEnsemble default_ensemble(PredictionMode mode) {
  MetricEnsemble e{mode, {}};
  for (MetricFamily f : kFamilies) {
    if (!applicable(f, mode)) continue;
    if (f == MetricFamily::euler_time) {
      MetricParams day;
      day.discount_ms = static_cast<double>(kOneDayMs);
      MetricParams half_day;
      half_day.discount_ms = static_cast<double>(kHalfDayMs);
      e.instances.push_back(make_instance(f, day, "euler_time_one_day"));
      e.instances.push_back(make_instance(f, half_day, "euler_time_half_day"));
    } else {
      e.instances.push_back(make_instance(f));
    }
  }
  return e;
}

std::vector<std::string> metric_catalog() {
  std::vector<std::string> names;
  std::set<std::string> seen;
  for (auto mode : {PredictionMode::existence, PredictionMode::semantic}) {
    for (const auto& m : default_ensemble(mode).instances) {
      if (seen.insert(m.display_name).second) names.push_back(m.display_name);
    }
  }
  // Keep family order rather than mode order.
  std::stable_sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
    auto rank = [](const std::string& n) {
      for (std::size_t i = 0; i < kFamilies.size(); ++i) {
        if (n.rfind(family_name(kFamilies[i]), 0) == 0) return i;
      }
      return kFamilies.size();
    };
    return rank(a) < rank(b);
  });
  return names;
}

// -- families ----------------------------------------------------------------

double neighborhood_overlap(const KnowledgeGraph& g, OverlapKind kind, NodeIx u, NodeIx v) {
  const auto& nu = g.adjacency(u).neighbors;
  const auto& nv = g.adjacency(v).neighbors;
  std::size_t common = 0;
  double aa_sum = 0.0;
  double ra_sum = 0.0;
  for_each_common(nu, nv, [&](NodeIx z) {
    ++common;
    const auto kz = static_cast<double>(g.degree(z));
    if (kind == OverlapKind::adamic_adar && kz > 1.0) aa_sum += 1.0 / std::log(kz);
    if (kind == OverlapKind::resource_allocation) ra_sum += 1.0 / kz;
  });
  if (common == 0) return 0.0;
  const auto c = static_cast<double>(common);
  const auto ku = static_cast<double>(nu.size());
  const auto kv = static_cast<double>(nv.size());
  switch (kind) {
    case OverlapKind::jaccard: return clamp01(ratio(c, ku + kv - c));
    case OverlapKind::adamic_adar: return clamp01(aa_sum * std::log(2.0) / c);
    case OverlapKind::resource_allocation: return clamp01(ra_sum * 2.0 / c);
    case OverlapKind::hub_promoted: return clamp01(ratio(c, std::min(ku, kv)));
    case OverlapKind::hub_depressed: return clamp01(ratio(c, std::max(ku, kv)));
    case OverlapKind::lhn: return clamp01(ratio(c, ku * kv));
    case OverlapKind::salton: return clamp01(ratio(c, std::sqrt(ku * kv)));
    case OverlapKind::sorensen: return clamp01(ratio(2.0 * c, ku + kv));
  }
  return 0.0;
}

double shortest_path_similarity(const KnowledgeGraph& g, NodeIx u, NodeIx v, int cap) {
  if (u == v) return 0.0;
  auto len = g.shortest_path_len(u, v, cap);
  if (!len) return 0.0;
  return clamp01(1.0 - static_cast<double>(*len - 1) / static_cast<double>(cap));
}

double time_score(const KnowledgeGraph& g, NodeIx u, NodeIx v, double beta, Timestamp step_ms) {
  if (!(beta > 0.0 && beta < 1.0) || step_ms <= 0) {
    throw Error(ErrorCode::invalid_argument, "time score needs beta in (0,1) and a positive step");
  }
  if (u == v) return 0.0;
  const auto latest = g.latest_timestamp();
  if (!latest) return 0.0;
  double sum = 0.0;
  std::size_t common = 0;
  for_each_common(g.adjacency(u).neighbors, g.adjacency(v).neighbors, [&](NodeIx c) {
    ++common;
    const auto lu = g.pair_links(u, c);
    const auto lv = g.pair_links(v, c);
    const auto mu = static_cast<double>(distinct_relations(lu));
    const auto mv = static_cast<double>(distinct_relations(lv));
    const double harmonic = 2.0 * mu * mv / (mu + mv);
    const double discount = 1.0 / std::max(mu, mv);
    const Timestamp tu = most_recent(lu);
    const Timestamp tv = most_recent(lv);
    const auto age_steps = static_cast<double>((*latest - std::min(tu, tv)) / step_ms);
    const auto gap_steps = static_cast<double>(std::abs(tu - tv) / step_ms);
    sum += harmonic * discount * std::pow(beta, age_steps) / (gap_steps + 1.0);
  });
  if (common == 0) return 0.0;
  return clamp01(sum / static_cast<double>(common));
}

double euler_time(const KnowledgeGraph& g, NodeIx u, NodeIx v, double discount_ms) {
  if (!(discount_ms > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "euler time needs a positive discounting factor");
  }
  g.node(u);
  const auto last = g.last_link_time(v);
  if (!last) return 0.0;
  const auto age = static_cast<double>(*g.latest_timestamp() - *last);
  return clamp01(std::exp(-age / discount_ms));
}

double focci_distance(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  if (u == v) return 0.0;
  const auto& au = g.adjacency(u);
  const auto& av = g.adjacency(v);
  double best = 0.0;
  for_each_common(au.out, av.out, [&](RelationIx j) {
    for_each_common(au.by_relation.at(j), av.by_relation.at(j), [&](NodeIx z) {
      const auto n = g.inverse_neighbors(z, j).size();
      if (n > 0) best = std::max(best, 1.0 / static_cast<double>(n));
    });
  });
  return clamp01(best);
}

double conditional_probability(const KnowledgeGraph& g, RelationIx j) {
  const auto pj = unordered_pairs(g, j);
  if (pj.empty()) return 0.0;
  double best = 0.0;
  for (std::uint32_t i = 0; i < g.relation_count(); ++i) {
    if (RelationIx{i} == j) continue;
    const auto pi = unordered_pairs(g, RelationIx{i});
    best = std::max(best, static_cast<double>(set_common(pj, pi)) / static_cast<double>(pj.size()));
  }
  return clamp01(best);
}

double taxonomy_similarity(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  auto au = g.concept_ancestors(g.node(u).type);
  auto av = g.concept_ancestors(g.node(v).type);
  std::sort(au.begin(), au.end());
  std::sort(av.begin(), av.end());
  const std::size_t common = set_common(au, av);
  return clamp01(ratio(static_cast<double>(common), static_cast<double>(au.size() + av.size() - common)));
}

double relational_similarity(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  const auto& au = g.adjacency(u);
  const auto& av = g.adjacency(v);
  double sum = 0.0;
  std::size_t contexts = 0;
  for_each_common(au.out, av.out, [&](RelationIx j) {
    sum += best_match_mean(g, au.out.at(j), av.out.at(j));
    ++contexts;
  });
  for_each_common(au.in, av.in, [&](RelationIx j) {
    sum += best_match_mean(g, au.in.at(j), av.in.at(j));
    ++contexts;
  });
  return contexts == 0 ? 0.0 : clamp01(sum / static_cast<double>(contexts));
}

double arr(const KnowledgeGraph& g, NodeIx u, NodeIx v) {
  if (u == v) return 0.0;
  const auto& ou = g.adjacency(u).out;
  const auto& ov = g.adjacency(v).out;
  return clamp01(ratio(static_cast<double>(common_count(ou, ov)), static_cast<double>(ou.size())));
}

double ao_relation(const KnowledgeGraph& g, NodeIx u, NodeIx v, AoVariant variant) {
  if (u == v) return 0.0;
  auto same_type_share = [&](NodeIx target, NodeIx candidate) {
    const auto& nc = g.adjacency(candidate).neighbors;
    if (nc.empty()) return 0.0;
    const ConceptIx target_type = g.node(target).type;
    std::size_t same = 0;
    for (const auto& [z, _] : nc) same += g.node(z).type == target_type ? 1 : 0;
    return static_cast<double>(same) / static_cast<double>(nc.size());
  };
  switch (variant) {
    case AoVariant::aor: return clamp01(same_type_share(u, v));
    case AoVariant::aorr: return clamp01(same_type_share(v, u));
    case AoVariant::aorc: return clamp01((same_type_share(u, v) + same_type_share(v, u)) / 2.0);
  }
  return 0.0;
}

double dimension_connectivity(const KnowledgeGraph& g, DimensionKind kind, RelationIx j) {
  if (g.node_count() == 0 || g.link_count() == 0) {
    throw Error(ErrorCode::insufficient_data, "dimension connectivity needs a non-empty graph");
  }
  if (kind == DimensionKind::node) {
    return clamp01(static_cast<double>(g.subjects_of_relation(j).size()) /
                   static_cast<double>(g.node_count()));
  }
  return clamp01(static_cast<double>(g.link_count(j)) / static_cast<double>(g.link_count()));
}

double mr_link_propagation(const KnowledgeGraph& g, NodeIx u, NodeIx v, RelationIx j,
                           double damping) {
  if (!(damping >= 0.0 && damping <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "damping must be in [0, 1]");
  }
  g.relation(j);
  if (u == v) return 0.0;
  const auto links = g.pair_links(u, v);
  if (links.empty()) return 0.0;

  std::set<RelationIx> linking;
  for (const auto& l : links) linking.insert(l.relation);
  // Seed score of the candidate is 1; weights are link indicators.
  auto step = [&](RelationIx i) {
    return linking.contains(i) ? ratio(1.0, static_cast<double>(g.degree(v, i))) : 0.0;
  };

  double score = damping * step(j);
  if (linking.size() > 1) {
    const auto pj = unordered_pairs(g, j);
    double cross = 0.0;
    for (RelationIx i : linking) {
      if (i == j) continue;
      cross += pair_set_jaccard(pj, unordered_pairs(g, i)) * step(i);
    }
    score += damping * cross / static_cast<double>(linking.size() - 1);
  }
  return clamp01(score);
}

// -- dispatch ----------------------------------------------------------------

double evaluate(const MetricInstance& m, const KnowledgeGraph& g, NodeIx u, NodeIx v,
                std::optional<RelationIx> j) {
  switch (m.family) {
    case MetricFamily::jaccard: return neighborhood_overlap(g, OverlapKind::jaccard, u, v);
    case MetricFamily::adamic_adar: return neighborhood_overlap(g, OverlapKind::adamic_adar, u, v);
    case MetricFamily::resource_allocation:
      return neighborhood_overlap(g, OverlapKind::resource_allocation, u, v);
    case MetricFamily::hub_promoted: return neighborhood_overlap(g, OverlapKind::hub_promoted, u, v);
    case MetricFamily::hub_depressed: return neighborhood_overlap(g, OverlapKind::hub_depressed, u, v);
    case MetricFamily::lhn: return neighborhood_overlap(g, OverlapKind::lhn, u, v);
    case MetricFamily::salton: return neighborhood_overlap(g, OverlapKind::salton, u, v);
    case MetricFamily::sorensen: return neighborhood_overlap(g, OverlapKind::sorensen, u, v);
    case MetricFamily::shortest_path: return shortest_path_similarity(g, u, v, m.params.path_cap);
    case MetricFamily::time_score: return time_score(g, u, v, m.params.beta, m.params.step_ms);
    case MetricFamily::euler_time: return euler_time(g, u, v, m.params.discount_ms);
    case MetricFamily::focci_distance: return focci_distance(g, u, v);
    case MetricFamily::conditional_probability:
      return conditional_probability(g, require_relation(j, m));
    case MetricFamily::taxonomy_similarity: return taxonomy_similarity(g, u, v);
    case MetricFamily::relational_similarity: return relational_similarity(g, u, v);
    case MetricFamily::arr: return arr(g, u, v);
    case MetricFamily::aor: return ao_relation(g, u, v, AoVariant::aor);
    case MetricFamily::aorr: return ao_relation(g, u, v, AoVariant::aorr);
    case MetricFamily::aorc: return ao_relation(g, u, v, AoVariant::aorc);
    case MetricFamily::node_dimension_connectivity:
      if (g.link_count() == 0) return 0.0;
      return dimension_connectivity(g, DimensionKind::node, require_relation(j, m));
    case MetricFamily::edge_dimension_connectivity:
      if (g.link_count() == 0) return 0.0;
      return dimension_connectivity(g, DimensionKind::edge, require_relation(j, m));
    case MetricFamily::mr_link_propagation:
      return mr_link_propagation(g, u, v, require_relation(j, m), m.params.damping);
  }
  return 0.0;
}

std::vector<double> score_vector(const MetricEnsemble& ensemble, const KnowledgeGraph& g,
                                 NodeIx u, NodeIx v, std::optional<RelationIx> j) {
  if ((ensemble.mode == PredictionMode::semantic) != j.has_value()) {
    throw Error(ErrorCode::invalid_argument,
                ensemble.mode == PredictionMode::semantic
                    ? "semantic scoring needs a relation identifier"
                    : "existence scoring takes no relation identifier");
  }
  std::vector<double> out;
  out.reserve(ensemble.size());
  for (const auto& m : ensemble.instances) out.push_back(evaluate(m, g, u, v, j));
  return out;
}

double combined_similarity(const MetricEnsemble& ensemble, const WeightVector& weights,
                           const KnowledgeGraph& g, NodeIx u, NodeIx v,
                           std::optional<RelationIx> j) {
  if (weights.size() != ensemble.size()) {
    throw Error(ErrorCode::invalid_argument, "weight vector length does not match the ensemble");
  }
  if (!weights.on_simplex()) {
    throw Error(ErrorCode::invalid_argument, "weights must be normalized to sum 1");
  }
  const auto scores = score_vector(ensemble, g, u, v, j);
  double s = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) s += weights[i] * scores[i];
  return clamp01(s);
}

}  // namespace kglf
