// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include "kglf/graph.hpp"

namespace kglf::fixtures {

// Five-node city graph:
//   root -> Agent -> Person {p1, p2, p3}
//   root -> Place -> Stop   {s1, s2}
//   knows: Person -> Person, waited_at: Person -> Stop
//   (p1,p2,knows,1000) (p1,s1,waited_at,2000) (p2,s1,waited_at,3000)
//   (p3,s1,waited_at,4000) (p2,p3,knows,5000)
// With `extended_schema` the Person -> Person relation met_at_stop_with is
// declared but unused.
KnowledgeGraph f1(bool extended_schema = false);

// f1 plus (p1, p2, met_at_stop_with, 6000).
KnowledgeGraph f2();

// Minimal city ontology: Person, Stop, City with knows, waited_at, visited,
// located_in. No instances.
KnowledgeGraph city_ontology();

}  // namespace kglf::fixtures
