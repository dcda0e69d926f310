#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "amrgec/penman.hpp"
#include "amrgec/rng.hpp"

namespace amrgec {

inline constexpr const char* kMaskLabel = "MASK";

enum class MaskStrategy { NodeEdge, Subgraph };

struct MaskSpec {
  MaskStrategy strategy = MaskStrategy::NodeEdge;
  double rate = 0.15;          // node/edge strategy
  int max_subgraph_size = 3;   // subgraph strategy
  std::uint64_t seed = 0;
};

class InvalidRateError : public std::runtime_error {
 public:
  explicit InvalidRateError(double rate)
      : std::runtime_error("mask rate " + std::to_string(rate) +
                           " outside [0, 1]") {}
};

class GraphTooSmallError : public std::runtime_error {
 public:
  GraphTooSmallError()
      : std::runtime_error("subgraph masking needs at least 2 nodes") {}
};

// Independent Bernoulli(rate) replacement of labels with "MASK", driven by a
// SplitMix64 stream seeded with `seed`. Draw order is fixed: one draw per
// node in graph order (concept), then one per edge in graph order (role).
// Topology, variables, root, and attributes are unchanged.
AmrGraph mask_node_edge(const AmrGraph& g, double rate, std::uint64_t seed);

// Removes one descendant-closed subgraph and replaces it with a single MASK
// node. The subgraph root is a uniform draw (one next_below over the non-root
// nodes in graph order); its directed descendants are collected breadth-first
// in edge order and truncated to max_subgraph_size nodes. Edges crossing the
// boundary re-attach to the MASK node with their original role.
AmrGraph mask_subgraph(const AmrGraph& g, int max_subgraph_size,
                       std::uint64_t seed);

AmrGraph apply_mask(const AmrGraph& g, const MaskSpec& spec);

}  // namespace amrgec
