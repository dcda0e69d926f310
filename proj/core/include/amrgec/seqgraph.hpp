#pragma once

#include <compare>
#include <string>
#include <vector>

#include "amrgec/align.hpp"
#include "amrgec/penman.hpp"

namespace amrgec {

inline constexpr const char* kLabelForward = "label-forward";
inline constexpr const char* kLabelBackward = "label-backward";

struct SeqEdge {
  int src;
  int dst;
  std::string label;
  auto operator<=>(const SeqEdge&) const = default;
};

// Token-position graph: bidirectional sequence-adjacency edges plus AMR role
// edges projected through the alignment. Edges are kept sorted and unique.
struct SequenceAmrGraph {
  std::vector<std::string> tokens;
  std::vector<SeqEdge> edges;  // sorted by (src, dst, label), no duplicates

  int size() const { return static_cast<int>(tokens.size()); }
  bool operator==(const SequenceAmrGraph&) const = default;
};

// Sequence backbone (i, i+1, label-forward) / (i+1, i, label-backward) for
// each adjacent pair, then one edge per AMR role edge whose endpoints are
// both aligned and map to distinct tokens.
SequenceAmrGraph build_sequence_amr_graph(const std::vector<std::string>& tokens,
                                          const AmrGraph& g, const Alignment& a);

// {"tokens": [...], "edges": [[src, dst, "label"], ...]}, edges in sorted order
std::string export_graph_json(const SequenceAmrGraph& sg);
SequenceAmrGraph import_graph_json(const std::string& json_text);

}  // namespace amrgec
