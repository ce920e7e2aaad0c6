// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/graph.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace kglf {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::unknown_id: return "unknown_id";
    case ErrorCode::duplicate: return "duplicate";
    case ErrorCode::schema_violation: return "schema_violation";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::conflict: return "conflict";
  }
  return "unknown";
}

namespace {

template <class Map>
void decrement(Map& counts, NodeIx key) {
  auto it = counts.find(key);
  if (it == counts.end()) return;
  if (--it->second == 0) counts.erase(it);
}

std::vector<NodeIx> keys_of(const NodeCounts& counts) {
  std::vector<NodeIx> out;
  out.reserve(counts.size());
  for (const auto& [k, _] : counts) out.push_back(k);
  return out;
}

}  // namespace

KnowledgeGraph::KnowledgeGraph() {
  concepts_.push_back(Concept{std::string(kRootConcept), std::string(kRootConcept), std::nullopt});
  concept_ids_.emplace(std::string(kRootConcept), ConceptIx{0});
}

// -- ontology ----------------------------------------------------------------

ConceptIx KnowledgeGraph::add_concept(std::string id, std::string label,
                                      std::optional<ConceptIx> parent) {
  if (concept_ids_.contains(id)) {
    throw Error(ErrorCode::duplicate, "duplicate concept id '" + id + "'");
  }
  ConceptIx p = parent.value_or(root());
  check_concept(p);
  ConceptIx c{static_cast<std::uint32_t>(concepts_.size())};
  if (label.empty()) label = id;
  concept_ids_.emplace(id, c);
  concepts_.push_back(Concept{std::move(id), std::move(label), p});
  return c;
}

RelationIx KnowledgeGraph::add_relation(std::string id, std::string label, ConceptIx domain,
                                        ConceptIx range, bool allow_self_loops) {
  if (relation_ids_.contains(id)) {
    throw Error(ErrorCode::duplicate, "duplicate relation id '" + id + "'");
  }
  check_concept(domain);
  check_concept(range);
  RelationIx j{static_cast<std::uint32_t>(relations_.size())};
  if (label.empty()) label = id;
  relation_ids_.emplace(id, j);
  relations_.push_back(
      RelationIdentifier{std::move(id), std::move(label), domain, range, std::nullopt, allow_self_loops});
  relation_pairs_.emplace_back();
  relation_subjects_.emplace_back();
  return j;
}

void KnowledgeGraph::set_inverse(RelationIx a, RelationIx b) {
  check_relation(a);
  check_relation(b);
  auto& ra = relations_[a.value];
  auto& rb = relations_[b.value];
  if ((ra.inverse_of && *ra.inverse_of != b) || (rb.inverse_of && *rb.inverse_of != a)) {
    throw Error(ErrorCode::schema_violation,
                "relation '" + ra.id + "' or '" + rb.id + "' already has a different inverse");
  }
  ra.inverse_of = b;
  rb.inverse_of = a;
}

const Concept& KnowledgeGraph::concept_at(ConceptIx c) const {
  check_concept(c);
  return concepts_[c.value];
}

const RelationIdentifier& KnowledgeGraph::relation(RelationIx j) const {
  check_relation(j);
  return relations_[j.value];
}

std::optional<ConceptIx> KnowledgeGraph::find_concept(std::string_view id) const {
  auto it = concept_ids_.find(std::string(id));
  if (it == concept_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationIx> KnowledgeGraph::find_relation(std::string_view id) const {
  auto it = relation_ids_.find(std::string(id));
  if (it == relation_ids_.end()) return std::nullopt;
  return it->second;
}

ConceptIx KnowledgeGraph::concept_by_id(std::string_view id) const {
  if (auto c = find_concept(id)) return *c;
  throw Error(ErrorCode::unknown_id, "unknown concept '" + std::string(id) + "'");
}

RelationIx KnowledgeGraph::relation_by_id(std::string_view id) const {
  if (auto j = find_relation(id)) return *j;
  throw Error(ErrorCode::unknown_id, "unknown relation '" + std::string(id) + "'");
}

std::vector<ConceptIx> KnowledgeGraph::concept_ancestors(ConceptIx c) const {
  check_concept(c);
  std::vector<ConceptIx> chain{c};
  // Parents are always created before children, so the chain terminates.
  while (auto p = concepts_[chain.back().value].parent) chain.push_back(*p);
  return chain;
}

bool KnowledgeGraph::is_a(ConceptIx c, ConceptIx ancestor) const {
  check_concept(c);
  for (std::optional<ConceptIx> cur = c; cur; cur = concepts_[cur->value].parent) {
    if (*cur == ancestor) return true;
  }
  return false;
}

bool KnowledgeGraph::schema_allows(NodeIx u, NodeIx v, RelationIx j) const {
  check_node(u);
  check_node(v);
  const auto& r = relation(j);
  if (u == v && !r.allow_self_loops) return false;
  return is_a(nodes_[u.value].type, r.domain) && is_a(nodes_[v.value].type, r.range);
}

std::vector<RelationIx> KnowledgeGraph::compatible_relations(NodeIx u, NodeIx v) const {
  std::vector<RelationIx> out;
  for (std::uint32_t j = 0; j < relations_.size(); ++j) {
    if (schema_allows(u, v, RelationIx{j})) out.push_back(RelationIx{j});
  }
  return out;
}

// -- instances ---------------------------------------------------------------

NodeIx KnowledgeGraph::add_node(ConceptIx type, std::string id, std::string label,
                                std::map<std::string, std::string> attributes) {
  check_concept(type);
  if (id.empty()) throw Error(ErrorCode::invalid_argument, "node id must not be empty");
  if (node_ids_.contains(id)) {
    throw Error(ErrorCode::duplicate, "duplicate node id '" + id + "'");
  }
  NodeIx u{static_cast<std::uint32_t>(nodes_.size())};
  if (label.empty()) label = id;
  node_ids_.emplace(id, u);
  nodes_.push_back(Node{std::move(id), type, std::move(label), std::move(attributes)});
  adjacency_.emplace_back();
  return u;
}

const Node& KnowledgeGraph::node(NodeIx u) const {
  check_node(u);
  return nodes_[u.value];
}

std::optional<NodeIx> KnowledgeGraph::find_node(std::string_view id) const {
  auto it = node_ids_.find(std::string(id));
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

NodeIx KnowledgeGraph::node_by_id(std::string_view id) const {
  if (auto u = find_node(id)) return *u;
  throw Error(ErrorCode::unknown_id, "unknown node '" + std::string(id) + "'");
}

std::vector<NodeIx> KnowledgeGraph::nodes_of_concept(ConceptIx c, bool include_descendants) const {
  check_concept(c);
  std::vector<NodeIx> out;
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    ConceptIx nc = nodes_[i].type;
    if (nc == c || (include_descendants && is_a(nc, c))) out.push_back(NodeIx{i});
  }
  return out;
}

void KnowledgeGraph::add_link(NodeIx u, NodeIx v, RelationIx j, Timestamp t) {
  check_node(u);
  check_node(v);
  check_relation(j);
  const auto& r = relations_[j.value];
  if (!schema_allows(u, v, j)) {
    throw Error(ErrorCode::schema_violation,
                "(" + nodes_[u.value].id + ", " + nodes_[v.value].id + ", " + r.id +
                    ") violates the domain/range of '" + r.id + "'");
  }
  Triplet key{u.value, v.value, j.value};
  if (link_pos_.contains(key)) {
    throw Error(ErrorCode::duplicate, "link (" + nodes_[u.value].id + ", " + nodes_[v.value].id +
                                          ", " + r.id + ") already exists");
  }

  link_pos_.emplace(key, links_.size());
  links_.push_back(Link{u, v, j, t});

  auto& au = adjacency_[u.value];
  auto& av = adjacency_[v.value];
  ++au.neighbors[v];
  ++au.by_relation[j][v];
  au.out[j].insert(v);
  if (u != v) {
    ++av.neighbors[u];
    ++av.by_relation[j][u];
  }
  av.in[j].insert(u);

  relation_pairs_[j.value].emplace(u, v);
  ++relation_subjects_[j.value][u];
  const bool forward = u <= v;
  pair_links_[pair_key(u, v)].push_back(PairLink{j, forward, t});
  timestamps_.insert(t);

  // A later acceptance overrides any earlier rejection of the same link.
  for (auto k : {key_of(u, v, j), key_of(u, v, std::nullopt), key_of(v, u, std::nullopt)}) {
    if (!non_link_keys_.contains(k)) continue;
    for (std::size_t i = 0; i < non_links_.size(); ++i) {
      if (key_of(non_links_[i].subject, non_links_[i].object, non_links_[i].relation) == k) {
        erase_non_link_at(i);
        break;
      }
    }
  }
}

bool KnowledgeGraph::remove_link(NodeIx u, NodeIx v, RelationIx j) {
  check_node(u);
  check_node(v);
  check_relation(j);
  auto it = link_pos_.find(Triplet{u.value, v.value, j.value});
  if (it == link_pos_.end()) return false;
  const std::size_t pos = it->second;
  const Timestamp t = links_[pos].timestamp;
  link_pos_.erase(it);
  links_.erase(links_.begin() + static_cast<std::ptrdiff_t>(pos));
  for (auto& [_, p] : link_pos_) {
    if (p > pos) --p;
  }

  auto& au = adjacency_[u.value];
  auto& av = adjacency_[v.value];
  decrement(au.neighbors, v);
  decrement(au.by_relation[j], v);
  if (au.by_relation[j].empty()) au.by_relation.erase(j);
  au.out[j].erase(v);
  if (au.out[j].empty()) au.out.erase(j);
  if (u != v) {
    decrement(av.neighbors, u);
    decrement(av.by_relation[j], u);
    if (av.by_relation[j].empty()) av.by_relation.erase(j);
  }
  av.in[j].erase(u);
  if (av.in[j].empty()) av.in.erase(j);

  relation_pairs_[j.value].erase({u, v});
  decrement(relation_subjects_[j.value], u);
  auto& pl = pair_links_[pair_key(u, v)];
  const bool forward = u <= v;
  std::erase_if(pl, [&](const PairLink& l) { return l.relation == j && l.forward == forward; });
  if (pl.empty()) pair_links_.erase(pair_key(u, v));
  timestamps_.erase(timestamps_.find(t));
  return true;
}

bool KnowledgeGraph::has_link(NodeIx u, NodeIx v, RelationIx j) const {
  return link_pos_.contains(Triplet{u.value, v.value, j.value});
}

bool KnowledgeGraph::connected(NodeIx u, NodeIx v) const {
  check_node(u);
  check_node(v);
  return adjacency_[u.value].neighbors.contains(v);
}

std::size_t KnowledgeGraph::link_count(RelationIx j) const {
  check_relation(j);
  return relation_pairs_[j.value].size();
}

void KnowledgeGraph::record_non_link(NodeIx u, NodeIx v, std::optional<RelationIx> j, Timestamp t) {
  check_node(u);
  check_node(v);
  if (j) {
    check_relation(*j);
    if (has_link(u, v, *j)) {
      throw Error(ErrorCode::conflict, "cannot record non-link: (" + nodes_[u.value].id + ", " +
                                           nodes_[v.value].id + ", " + relations_[j->value].id +
                                           ") exists");
    }
  } else if (connected(u, v)) {
    throw Error(ErrorCode::conflict, "cannot record non-link: " + nodes_[u.value].id + " and " +
                                         nodes_[v.value].id + " are linked");
  }
  if (!non_link_keys_.insert(key_of(u, v, j)).second) return;
  non_links_.push_back(NonLink{u, v, j, t});
}

bool KnowledgeGraph::has_non_link(NodeIx u, NodeIx v, std::optional<RelationIx> j) const {
  return non_link_keys_.contains(key_of(u, v, j));
}

bool KnowledgeGraph::excluded_pair(NodeIx u, NodeIx v) const {
  return has_non_link(u, v, std::nullopt) || has_non_link(v, u, std::nullopt);
}

void KnowledgeGraph::erase_non_link_at(std::size_t pos) {
  const auto& nl = non_links_[pos];
  non_link_keys_.erase(key_of(nl.subject, nl.object, nl.relation));
  non_links_.erase(non_links_.begin() + static_cast<std::ptrdiff_t>(pos));
}

// -- neighborhood queries ----------------------------------------------------

const Adjacency& KnowledgeGraph::adjacency(NodeIx u) const {
  check_node(u);
  return adjacency_[u.value];
}

std::vector<NodeIx> KnowledgeGraph::neighbors(NodeIx u) const {
  return keys_of(adjacency(u).neighbors);
}

std::vector<NodeIx> KnowledgeGraph::neighbors_by_relation(NodeIx u, RelationIx j) const {
  check_relation(j);
  const auto& a = adjacency(u);
  auto it = a.by_relation.find(j);
  if (it == a.by_relation.end()) return {};
  return keys_of(it->second);
}

std::size_t KnowledgeGraph::degree(NodeIx u) const { return adjacency(u).neighbors.size(); }

std::size_t KnowledgeGraph::degree(NodeIx u, RelationIx j) const {
  const auto& a = adjacency(u);
  auto it = a.by_relation.find(j);
  return it == a.by_relation.end() ? 0 : it->second.size();
}

std::vector<RelationIx> KnowledgeGraph::active_relations(NodeIx u) const {
  std::vector<RelationIx> out;
  for (const auto& [j, _] : adjacency(u).out) out.push_back(j);
  return out;
}

std::vector<RelationIx> KnowledgeGraph::relations_between(NodeIx u, NodeIx v) const {
  check_node(v);
  std::vector<RelationIx> out;
  for (const auto& [j, objects] : adjacency(u).out) {
    if (objects.contains(v)) out.push_back(j);
  }
  return out;
}

std::vector<std::pair<NodeIx, NodeIx>> KnowledgeGraph::pairs_of_relation(RelationIx j) const {
  check_relation(j);
  const auto& s = relation_pairs_[j.value];
  return {s.begin(), s.end()};
}

std::vector<NodeIx> KnowledgeGraph::subjects_of_relation(RelationIx j) const {
  check_relation(j);
  return keys_of(relation_subjects_[j.value]);
}

std::vector<NodeIx> KnowledgeGraph::inverse_neighbors(NodeIx z, RelationIx j) const {
  check_relation(j);
  const auto& a = adjacency(z);
  std::set<NodeIx> out;
  if (auto it = a.in.find(j); it != a.in.end()) out.insert(it->second.begin(), it->second.end());
  if (auto inv = relations_[j.value].inverse_of) {
    if (auto it = a.out.find(*inv); it != a.out.end()) out.insert(it->second.begin(), it->second.end());
  }
  return {out.begin(), out.end()};
}

std::optional<int> KnowledgeGraph::shortest_path_len(NodeIx u, NodeIx v, int cap) const {
  check_node(u);
  check_node(v);
  if (cap < 1) throw Error(ErrorCode::invalid_argument, "path cap must be >= 1");
  if (u == v) return 0;
  std::vector<int> dist(nodes_.size(), -1);
  std::deque<NodeIx> frontier{u};
  dist[u.value] = 0;
  while (!frontier.empty()) {
    NodeIx x = frontier.front();
    frontier.pop_front();
    const int d = dist[x.value];
    if (d >= cap) break;
    for (const auto& [y, _] : adjacency_[x.value].neighbors) {
      if (dist[y.value] >= 0) continue;
      if (y == v) return d + 1;
      dist[y.value] = d + 1;
      frontier.push_back(y);
    }
  }
  return std::nullopt;
}

std::span<const PairLink> KnowledgeGraph::pair_links(NodeIx u, NodeIx v) const {
  auto it = pair_links_.find(pair_key(u, v));
  if (it == pair_links_.end()) return {};
  return it->second;
}

std::optional<Timestamp> KnowledgeGraph::last_link_time(NodeIx u) const {
  std::optional<Timestamp> best;
  for (const auto& [c, _] : adjacency(u).neighbors) {
    for (const auto& l : pair_links(u, c)) {
      if (!best || l.timestamp > *best) best = l.timestamp;
    }
  }
  return best;
}

std::optional<Timestamp> KnowledgeGraph::latest_timestamp() const {
  if (timestamps_.empty()) return std::nullopt;
  return *timestamps_.rbegin();
}

// -- internals ---------------------------------------------------------------

std::uint64_t KnowledgeGraph::pair_key(NodeIx a, NodeIx b) {
  if (b < a) std::swap(a, b);
  return (static_cast<std::uint64_t>(a.value) << 32) | b.value;
}

KnowledgeGraph::NonLinkKey KnowledgeGraph::key_of(NodeIx u, NodeIx v, std::optional<RelationIx> j) {
  return NonLinkKey{u.value, v.value, j ? j->value : kNoRelation};
}

void KnowledgeGraph::check_node(NodeIx u) const {
  if (u.value >= nodes_.size()) {
    throw Error(ErrorCode::unknown_id, "unknown node handle " + std::to_string(u.value));
  }
}

void KnowledgeGraph::check_relation(RelationIx j) const {
  if (j.value >= relations_.size()) {
    throw Error(ErrorCode::unknown_id, "unknown relation handle " + std::to_string(j.value));
  }
}

void KnowledgeGraph::check_concept(ConceptIx c) const {
  if (c.value >= concepts_.size()) {
    throw Error(ErrorCode::unknown_id, "unknown concept handle " + std::to_string(c.value));
  }
}

bool same_content(const KnowledgeGraph& a, const KnowledgeGraph& b) {
  if (a.concept_count() != b.concept_count() || a.relation_count() != b.relation_count() ||
      a.node_count() != b.node_count() || a.link_count() != b.link_count() ||
      a.non_links().size() != b.non_links().size()) {
    return false;
  }
  auto concept_id = [](const KnowledgeGraph& g, std::optional<ConceptIx> c) {
    return c ? g.concept_at(*c).id : std::string{};
  };
  for (std::uint32_t i = 0; i < a.concept_count(); ++i) {
    const auto& ca = a.concept_at(ConceptIx{i});
    auto cb_ix = b.find_concept(ca.id);
    if (!cb_ix) return false;
    const auto& cb = b.concept_at(*cb_ix);
    if (ca.label != cb.label || concept_id(a, ca.parent) != concept_id(b, cb.parent)) return false;
  }
  for (std::uint32_t i = 0; i < a.relation_count(); ++i) {
    const auto& ra = a.relation(RelationIx{i});
    auto rb_ix = b.find_relation(ra.id);
    if (!rb_ix) return false;
    const auto& rb = b.relation(*rb_ix);
    auto inv = [](const KnowledgeGraph& g, const RelationIdentifier& r) {
      return r.inverse_of ? g.relation(*r.inverse_of).id : std::string{};
    };
    if (ra.label != rb.label || a.concept_at(ra.domain).id != b.concept_at(rb.domain).id ||
        a.concept_at(ra.range).id != b.concept_at(rb.range).id || inv(a, ra) != inv(b, rb) ||
        ra.allow_self_loops != rb.allow_self_loops) {
      return false;
    }
  }
  for (std::uint32_t i = 0; i < a.node_count(); ++i) {
    const auto& na = a.node(NodeIx{i});
    auto nb_ix = b.find_node(na.id);
    if (!nb_ix) return false;
    const auto& nb = b.node(*nb_ix);
    if (na.label != nb.label || na.attributes != nb.attributes ||
        a.concept_at(na.type).id != b.concept_at(nb.type).id) {
      return false;
    }
  }
  using Row = std::tuple<std::string, std::string, std::string, Timestamp>;
  auto link_rows = [](const KnowledgeGraph& g) {
    std::vector<Row> rows;
    for (const auto& l : g.links()) {
      rows.emplace_back(g.node(l.subject).id, g.node(l.object).id, g.relation(l.relation).id, l.timestamp);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  auto non_link_rows = [](const KnowledgeGraph& g) {
    std::vector<Row> rows;
    for (const auto& nl : g.non_links()) {
      rows.emplace_back(g.node(nl.subject).id, g.node(nl.object).id,
                        nl.relation ? g.relation(*nl.relation).id : std::string{}, nl.timestamp);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  return link_rows(a) == link_rows(b) && non_link_rows(a) == non_link_rows(b);
}

}  // namespace kglf
