// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kglf/error.hpp"
#include "kglf/ids.hpp"

namespace kglf {

struct Concept {
  std::string id;
  std::string label;
  std::optional<ConceptIx> parent;  // empty only for the root
};

struct RelationIdentifier {
  std::string id;
  std::string label;
  ConceptIx domain;
  ConceptIx range;
  std::optional<RelationIx> inverse_of;
  bool allow_self_loops = false;
};

struct Node {
  std::string id;
  ConceptIx type;
  std::string label;
  std::map<std::string, std::string> attributes;
};

struct Link {
  NodeIx subject;
  NodeIx object;
  RelationIx relation;
  Timestamp timestamp = 0;
};

// A confirmed absence. An empty relation means "no link of any type".
struct NonLink {
  NodeIx subject;
  NodeIx object;
  std::optional<RelationIx> relation;
  Timestamp timestamp = 0;
};

// One realized link seen from an unordered node pair.
struct PairLink {
  RelationIx relation;
  bool forward;  // true when the lower-indexed node is the subject
  Timestamp timestamp;
};

// Triplet identity of a link, usable as an ordered key.
struct LinkKey {
  NodeIx subject;
  NodeIx object;
  RelationIx relation;
  auto operator<=>(const LinkKey&) const = default;
};

using NodeCounts = std::map<NodeIx, std::uint32_t>;

struct Adjacency {
  // Undirected neighborhood; the count is the number of links to that node.
  NodeCounts neighbors;
  std::map<RelationIx, NodeCounts> by_relation;
  std::map<RelationIx, std::set<NodeIx>> out;
  std::map<RelationIx, std::set<NodeIx>> in;
};

// Heterogeneous, multi-relational directed graph with a single-parent concept
// tree. Neighborhood queries are undirected; relation-set queries (active
// relations, relations between, pairs and subjects of a relation) keep the
// subject/object direction.
class KnowledgeGraph {
 public:
  static constexpr std::string_view kRootConcept = "root";

  KnowledgeGraph();

  // -- ontology --------------------------------------------------------------
  ConceptIx add_concept(std::string id, std::string label,
                        std::optional<ConceptIx> parent = std::nullopt);
  RelationIx add_relation(std::string id, std::string label, ConceptIx domain,
                          ConceptIx range, bool allow_self_loops = false);
  void set_inverse(RelationIx a, RelationIx b);

  ConceptIx root() const { return ConceptIx{0}; }
  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t relation_count() const { return relations_.size(); }
  const Concept& concept_at(ConceptIx c) const;
  const RelationIdentifier& relation(RelationIx j) const;
  std::optional<ConceptIx> find_concept(std::string_view id) const;
  std::optional<RelationIx> find_relation(std::string_view id) const;
  ConceptIx concept_by_id(std::string_view id) const;
  RelationIx relation_by_id(std::string_view id) const;

  // Upwards cotopy: c itself, its parent chain, and the root.
  std::vector<ConceptIx> concept_ancestors(ConceptIx c) const;
  bool is_a(ConceptIx c, ConceptIx ancestor) const;
  // Whether (u, v, j) would satisfy j's domain/range and self-loop rules.
  bool schema_allows(NodeIx u, NodeIx v, RelationIx j) const;
  // Relations j for which (u, v, j) is schema-valid.
  std::vector<RelationIx> compatible_relations(NodeIx u, NodeIx v) const;

  // -- instances -------------------------------------------------------------
  NodeIx add_node(ConceptIx type, std::string id, std::string label = {},
                  std::map<std::string, std::string> attributes = {});
  std::size_t node_count() const { return nodes_.size(); }
  const Node& node(NodeIx u) const;
  std::optional<NodeIx> find_node(std::string_view id) const;
  NodeIx node_by_id(std::string_view id) const;
  std::vector<NodeIx> nodes_of_concept(ConceptIx c, bool include_descendants = true) const;

  void add_link(NodeIx u, NodeIx v, RelationIx j, Timestamp t);
  bool remove_link(NodeIx u, NodeIx v, RelationIx j);
  bool has_link(NodeIx u, NodeIx v, RelationIx j) const;
  // Any link between u and v, either direction.
  bool connected(NodeIx u, NodeIx v) const;
  std::size_t link_count() const { return links_.size(); }
  std::size_t link_count(RelationIx j) const;
  const std::vector<Link>& links() const { return links_; }

  void record_non_link(NodeIx u, NodeIx v, std::optional<RelationIx> j, Timestamp t);
  bool has_non_link(NodeIx u, NodeIx v, std::optional<RelationIx> j) const;
  // True when a relation-less non-link exists for {u, v} in either direction.
  bool excluded_pair(NodeIx u, NodeIx v) const;
  const std::vector<NonLink>& non_links() const { return non_links_; }

  // -- neighborhood queries --------------------------------------------------
  const Adjacency& adjacency(NodeIx u) const;
  std::vector<NodeIx> neighbors(NodeIx u) const;
  std::vector<NodeIx> neighbors_by_relation(NodeIx u, RelationIx j) const;
  std::size_t degree(NodeIx u) const;
  std::size_t degree(NodeIx u, RelationIx j) const;
  std::vector<RelationIx> active_relations(NodeIx u) const;
  std::vector<RelationIx> relations_between(NodeIx u, NodeIx v) const;
  std::vector<std::pair<NodeIx, NodeIx>> pairs_of_relation(RelationIx j) const;
  std::vector<NodeIx> subjects_of_relation(RelationIx j) const;
  // Nodes reached by walking j backwards from z (its subjects), plus the
  // objects of z under the declared inverse of j when there is one.
  std::vector<NodeIx> inverse_neighbors(NodeIx z, RelationIx j) const;
  // Hop count over undirected neighborhoods, empty beyond cap or when
  // unreachable.
  std::optional<int> shortest_path_len(NodeIx u, NodeIx v, int cap) const;

  std::span<const PairLink> pair_links(NodeIx u, NodeIx v) const;
  std::optional<Timestamp> last_link_time(NodeIx u) const;
  std::optional<Timestamp> latest_timestamp() const;

 private:
  static std::uint64_t pair_key(NodeIx a, NodeIx b);
  void check_node(NodeIx u) const;
  void check_relation(RelationIx j) const;
  void check_concept(ConceptIx c) const;
  void erase_non_link_at(std::size_t pos);

  struct NonLinkKey {
    std::uint32_t subject;
    std::uint32_t object;
    std::uint32_t relation;  // kNoRelation when absent
    auto operator<=>(const NonLinkKey&) const = default;
  };
  static constexpr std::uint32_t kNoRelation = 0xffffffffu;
  static NonLinkKey key_of(NodeIx u, NodeIx v, std::optional<RelationIx> j);

  struct Triplet {
    std::uint32_t subject;
    std::uint32_t object;
    std::uint32_t relation;
    auto operator<=>(const Triplet&) const = default;
  };

  std::vector<Concept> concepts_;
  std::vector<RelationIdentifier> relations_;
  std::vector<Node> nodes_;
  std::vector<Adjacency> adjacency_;
  std::unordered_map<std::string, ConceptIx> concept_ids_;
  std::unordered_map<std::string, RelationIx> relation_ids_;
  std::unordered_map<std::string, NodeIx> node_ids_;

  std::vector<Link> links_;
  std::map<Triplet, std::size_t> link_pos_;
  std::vector<std::set<std::pair<NodeIx, NodeIx>>> relation_pairs_;
  std::vector<NodeCounts> relation_subjects_;
  std::unordered_map<std::uint64_t, std::vector<PairLink>> pair_links_;
  std::multiset<Timestamp> timestamps_;

  std::vector<NonLink> non_links_;
  std::set<NonLinkKey> non_link_keys_;
};

// Structural equality by external identifiers: ontology, nodes with labels
// and attributes, link set with timestamps, non-link set.
bool same_content(const KnowledgeGraph& a, const KnowledgeGraph& b);

}  // namespace kglf
