// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#include "kglf/fixtures.hpp"

namespace kglf::fixtures {

KnowledgeGraph f1(bool extended_schema) {
  KnowledgeGraph g;
  const auto agent = g.add_concept("Agent", "Agent");
  const auto person = g.add_concept("Person", "Person", agent);
  const auto place = g.add_concept("Place", "Place");
  const auto stop = g.add_concept("Stop", "Stop", place);
  const auto knows = g.add_relation("knows", "knows", person, person);
  const auto waited_at = g.add_relation("waited_at", "waited at", person, stop);
  if (extended_schema) g.add_relation("met_at_stop_with", "met at stop with", person, person);

  const auto p1 = g.add_node(person, "p1");
  const auto p2 = g.add_node(person, "p2");
  const auto p3 = g.add_node(person, "p3");
  const auto s1 = g.add_node(stop, "s1");
  g.add_node(stop, "s2");

  g.add_link(p1, p2, knows, 1000);
  g.add_link(p1, s1, waited_at, 2000);
  g.add_link(p2, s1, waited_at, 3000);
  g.add_link(p3, s1, waited_at, 4000);
  g.add_link(p2, p3, knows, 5000);
  return g;
}

KnowledgeGraph f2() {
  KnowledgeGraph g = f1(true);
  g.add_link(g.node_by_id("p1"), g.node_by_id("p2"), g.relation_by_id("met_at_stop_with"), 6000);
  return g;
}

KnowledgeGraph city_ontology() {
  KnowledgeGraph g;
  const auto person = g.add_concept("Person", "Person");
  const auto stop = g.add_concept("Stop", "Stop");
  const auto city = g.add_concept("City", "City");
  g.add_relation("knows", "knows", person, person);
  g.add_relation("waited_at", "waited at", person, stop);
  g.add_relation("visited", "visited", person, city);
  g.add_relation("located_in", "located in", stop, city);
  return g;
}

}  // namespace kglf::fixtures
