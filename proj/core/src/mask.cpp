#include "amrgec/mask.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace amrgec {

AmrGraph mask_node_edge(const AmrGraph& g, double rate, std::uint64_t seed) {
  if (rate < 0.0 || rate > 1.0) throw InvalidRateError(rate);
  validate(g);
  SplitMix64 rng(seed);
  AmrGraph out = g;
  for (auto& n : out.nodes)
    if (rng.next_bernoulli(rate)) n.concept_label = kMaskLabel;
  for (auto& e : out.edges)
    if (rng.next_bernoulli(rate)) e.role = kMaskLabel;
  return out;
}

AmrGraph mask_subgraph(const AmrGraph& g, int max_subgraph_size,
                       std::uint64_t seed) {
  if (max_subgraph_size < 1)
    throw std::invalid_argument("max_subgraph_size must be >= 1");
  validate(g);
  if (g.nodes.size() < 2) throw GraphTooSmallError();

  std::vector<std::string> non_root;
  for (const auto& n : g.nodes)
    if (n.var != g.root) non_root.push_back(n.var);

  SplitMix64 rng(seed);
  const std::string& start = non_root[rng.next_below(non_root.size())];

  // Breadth-first descendant closure, truncated.
  std::unordered_set<std::string> removed{start};
  std::deque<std::string> frontier{start};
  while (!frontier.empty() &&
         removed.size() < static_cast<std::size_t>(max_subgraph_size)) {
    std::string v = frontier.front();
    frontier.pop_front();
    for (const auto& e : g.edges) {
      // the root never joins the removed set, even as a reentrant descendant
      if (e.src != v || e.tgt == g.root || removed.count(e.tgt)) continue;
      removed.insert(e.tgt);
      frontier.push_back(e.tgt);
      if (removed.size() >= static_cast<std::size_t>(max_subgraph_size)) break;
    }
  }

  // Fresh variable for the MASK node.
  std::unordered_set<std::string> taken;
  for (const auto& n : g.nodes) taken.insert(n.var);
  for (const auto& a : g.attributes)
    if (!a.quoted) taken.insert(a.value);
  std::string mask_var = "m";
  for (int k = 2; taken.count(mask_var); ++k)
    mask_var = "m" + std::to_string(k);

  AmrGraph out;
  out.root = g.root;
  for (const auto& n : g.nodes)
    if (!removed.count(n.var)) out.nodes.push_back(n);
  out.nodes.push_back({mask_var, kMaskLabel});
  for (const auto& e : g.edges) {
    bool s = removed.count(e.src) != 0;
    bool t = removed.count(e.tgt) != 0;
    if (s && t) continue;
    out.edges.push_back({s ? mask_var : e.src, e.role, t ? mask_var : e.tgt});
  }
  for (const auto& a : g.attributes)
    if (!removed.count(a.src)) out.attributes.push_back(a);
  validate(out);
  return out;
}

AmrGraph apply_mask(const AmrGraph& g, const MaskSpec& spec) {
  switch (spec.strategy) {
    case MaskStrategy::NodeEdge:
      return mask_node_edge(g, spec.rate, spec.seed);
    case MaskStrategy::Subgraph:
      return mask_subgraph(g, spec.max_subgraph_size, spec.seed);
  }
  throw std::logic_error("unreachable");
}

}  // namespace amrgec
