#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <random>

#include "amrgec/mask.hpp"
#include "amrgec/smatch.hpp"
#include "support/testutil.hpp"

using namespace amrgec;

namespace {

// Independent transcription of the published SplitMix64 update, used to
// replay the exact Bernoulli draw sequence the denoiser consumes.
struct ReplayRng {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  bool bernoulli(double rate) {
    return static_cast<double>(next() >> 11) * 0x1.0p-53 < rate;
  }
};

}  // namespace

TEST_CASE("rate 0 is the identity") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    AmrGraph g = testutil::random_graph(rng);
    AmrGraph out = mask_node_edge(g, 0.0, 123);
    CHECK(canonicalize(out) == canonicalize(g));
  }
}

TEST_CASE("rate 1 masks every concept and role") {
  AmrGraph g = parse_penman(
      "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b) :polarity -)");
  AmrGraph out = mask_node_edge(g, 1.0, 7);
  CHECK(out.nodes.size() == g.nodes.size());
  CHECK(out.edges.size() == g.edges.size());
  CHECK(out.attributes.size() == g.attributes.size());
  for (const auto& n : out.nodes) CHECK(n.concept_label == kMaskLabel);
  for (const auto& e : out.edges) CHECK(e.role == kMaskLabel);
  CHECK(out.attributes[0].value == "-");  // attributes untouched
}

TEST_CASE("invalid rate") {
  AmrGraph g = parse_penman("(b / boy)");
  CHECK_THROWS_AS(mask_node_edge(g, -0.1, 0), InvalidRateError);
  CHECK_THROWS_AS(mask_node_edge(g, 1.1, 0), InvalidRateError);
}

TEST_CASE("node/edge masking is deterministic and replayable") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    AmrGraph g = testutil::random_graph(rng, 10);
    std::uint64_t seed = rng();
    AmrGraph out1 = mask_node_edge(g, 0.3, seed);
    AmrGraph out2 = mask_node_edge(g, 0.3, seed);
    CHECK(serialize_penman(out1) == serialize_penman(out2));

    // replay: one draw per node then one per edge, in graph order
    ReplayRng replay{seed};
    int expected_masked = 0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (replay.bernoulli(0.3)) ++expected_masked;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
      if (replay.bernoulli(0.3)) ++expected_masked;
    int got_masked = 0;
    for (const auto& n : out1.nodes)
      if (n.concept_label == kMaskLabel) ++got_masked;
    for (const auto& e : out1.edges)
      if (e.role == kMaskLabel) ++got_masked;
    CHECK(got_masked == expected_masked);
  }
}

TEST_CASE("masked fraction within the binomial bound") {
  // 10,000 Bernoulli draws at rate 0.15 via node masking on 1-node graphs
  const double rate = 0.15;
  const int trials = 10000;
  int masked = 0;
  AmrGraph g = parse_penman("(b / boy)");
  for (int i = 0; i < trials; ++i) {
    AmrGraph out = mask_node_edge(g, rate, static_cast<std::uint64_t>(i));
    if (out.nodes[0].concept_label == kMaskLabel) ++masked;
  }
  double frac = static_cast<double>(masked) / trials;
  double sigma = std::sqrt(rate * (1 - rate) / trials);
  CHECK(std::abs(frac - rate) <= 3 * sigma);
}

TEST_CASE("two-node subgraph mask has only one choice") {
  AmrGraph g = parse_penman("(a / alpha :ARG0 (b / beta))");
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    AmrGraph out = mask_subgraph(g, 3, seed);
    CHECK(canonicalize(out) ==
          canonicalize(parse_penman("(a / alpha :ARG0 (m / MASK))")));
  }
}

TEST_CASE("subgraph mask rejects tiny graphs") {
  AmrGraph g = parse_penman("(b / boy)");
  CHECK_THROWS_AS(mask_subgraph(g, 3, 0), GraphTooSmallError);
}

TEST_CASE("chain graph truncation follows the documented trace") {
  // a -> b -> c -> d -> e -> f, seed chosen so the draw picks b (index 0
  // of the non-root nodes when next_below(5) == 0)
  AmrGraph g = parse_penman(
      "(a / alpha :ARG0 (b / beta :ARG0 (c / gamma :ARG0 (d / delta :ARG0 "
      "(e / epsilon :ARG0 (f / zeta))))))");
  std::uint64_t seed = 0;
  while (SplitMix64(seed).next_below(5) != 0) ++seed;  // draw must pick b
  AmrGraph out = mask_subgraph(g, 3, seed);
  // b, c, d removed; MASK keeps the boundary edges a->MASK and MASK->e
  CHECK(out.nodes.size() == 6 - 3 + 1);
  CHECK(canonicalize(out) ==
        canonicalize(parse_penman(
            "(a / alpha :ARG0 (m / MASK :ARG0 (e / epsilon :ARG0 (f / zeta))))")));
}

TEST_CASE("node count law and validity on random graphs") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    AmrGraph g = testutil::random_graph(rng, 10);
    if (g.nodes.size() < 2) continue;
    int cap = 1 + static_cast<int>(rng() % 4);
    AmrGraph out = mask_subgraph(g, cap, rng());
    validate(out);  // connected, unique vars, single root
    int removed = static_cast<int>(g.nodes.size()) -
                  (static_cast<int>(out.nodes.size()) - 1);
    CHECK(removed >= 1);
    CHECK(removed <= cap);
    bool found_mask = false;
    for (const auto& n : out.nodes)
      found_mask = found_mask || n.concept_label == kMaskLabel;
    CHECK(found_mask);
  }
}

TEST_CASE("subgraph masking is deterministic") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    AmrGraph g = testutil::random_graph(rng, 10);
    if (g.nodes.size() < 2) continue;
    std::uint64_t seed = rng();
    CHECK(serialize_penman(mask_subgraph(g, 3, seed)) ==
          serialize_penman(mask_subgraph(g, 3, seed)));
  }
}
