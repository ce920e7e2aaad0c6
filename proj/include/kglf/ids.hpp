// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The kglf Authors

#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace kglf {

// Dense handle into one of the graph's tables. External identifiers are
// strings; handles are only meaningful for the graph that issued them.
template <class Tag>
struct Index {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Index&) const = default;
};

using ConceptIx = Index<struct ConceptTag>;
using RelationIx = Index<struct RelationTag>;
using NodeIx = Index<struct NodeTag>;

// Milliseconds since epoch.
using Timestamp = std::int64_t;

}  // namespace kglf

template <class Tag>
struct std::hash<kglf::Index<Tag>> {
  std::size_t operator()(const kglf::Index<Tag>& ix) const noexcept {
    return std::hash<std::uint32_t>{}(ix.value);
  }
};
