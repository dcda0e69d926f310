#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "amrgec/penman.hpp"

namespace amrgec {

struct SmatchResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int matched = 0;
  std::map<std::string, std::string> mapping;  // g1 variable -> g2 variable
};

// Alpha-equivalence of canonical triple sets.
bool graphs_identical(const AmrGraph& g1, const AmrGraph& g2);

// Matched-triple count of g1 under a variable mapping into g2. Exposed so an
// exhaustive search can score candidate mappings with the same arithmetic.
int matched_triples(const TripleSet& t1, const TripleSet& t2,
                    const std::map<std::string, std::string>& mapping);

// Seeded hill-climbing Smatch: `restarts` searches over injective partial
// variable mappings, best-improvement moves (re-map one variable or swap
// two), stop at a local optimum. Restart 0 starts from a greedy
// concept-match mapping, later restarts from random ones. Deterministic for
// a fixed seed; ties across restarts resolve to the earliest.
SmatchResult smatch(const AmrGraph& g1, const AmrGraph& g2, int restarts = 4,
                    std::uint64_t seed = 0);

class EmptyCorpusError : public std::runtime_error {
 public:
  EmptyCorpusError() : std::runtime_error("empty pair list") {}
};

// Fraction of pairs with graphs_identical == true.
double reliability_rate(
    const std::vector<std::pair<AmrGraph, AmrGraph>>& pairs);

}  // namespace amrgec
