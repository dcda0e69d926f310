#include <benchmark/benchmark.h>

#include <random>

#include "amrgec/align.hpp"
#include "amrgec/encoder.hpp"
#include "amrgec/penman.hpp"
#include "amrgec/seqgraph.hpp"
#include "amrgec/smatch.hpp"

namespace {

const char* kSample =
    "(w / want-01 :ARG0 (b / boy) :ARG1 (g / go-02 :ARG0 b :ARG4 "
    "(s / school) :time (d / day :name \"Sunday\")) :polarity -)";

void BM_ParseRoundTrip(benchmark::State& state) {
  for (auto _ : state) {
    amrgec::AmrGraph g = amrgec::parse_penman(kSample);
    benchmark::DoNotOptimize(amrgec::serialize_penman(g));
  }
}
BENCHMARK(BM_ParseRoundTrip);

void BM_Canonicalize(benchmark::State& state) {
  amrgec::AmrGraph g = amrgec::parse_penman(kSample);
  for (auto _ : state) benchmark::DoNotOptimize(amrgec::canonicalize(g));
}
BENCHMARK(BM_Canonicalize);

void BM_Smatch(benchmark::State& state) {
  amrgec::AmrGraph g1 = amrgec::parse_penman(kSample);
  amrgec::AmrGraph g2 = amrgec::parse_penman(
      "(x / want-01 :ARG0 (y / boy) :ARG1 (z / go-02 :ARG0 y))");
  for (auto _ : state)
    benchmark::DoNotOptimize(amrgec::smatch(g1, g2, 4, 0));
}
BENCHMARK(BM_Smatch);

void BM_EncoderForward(benchmark::State& state) {
  amrgec::EncoderConfig cfg;
  cfg.d = 8;
  cfg.layers = 2;
  cfg.variant = amrgec::GnnVariant::GCN;
  amrgec::EncoderParams p = amrgec::EncoderParams::random(cfg, 1);
  amrgec::EncoderInput in;
  for (int i = 0; i < 8; ++i) in.token_ids.push_back(i % cfg.vocab);
  for (int i = 0; i + 1 < 8; ++i) {
    in.edges.push_back({i, i + 1, 1});
    in.edges.push_back({i + 1, i, 2});
  }
  for (auto _ : state) benchmark::DoNotOptimize(amrgec::forward(p, in));
}
BENCHMARK(BM_EncoderForward);

}  // namespace

BENCHMARK_MAIN();
