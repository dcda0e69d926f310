#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace amrgec;

int main(int argc, char** argv) {
  CLI::App app{"AMR toolkit: PENMAN parsing, alignment, sequence-AMR graphs, "
               "denoising masks, Smatch, and a gradient-checked fusion encoder"};
  app.require_subcommand(1);
  // Config keys live in a section named after the subcommand, e.g.
  //   [mask]
  //   mask-rate=0.3
  //   seed=7
  // fallthrough() lets `--config` appear after the subcommand name.
  app.set_config("--config", "", "Read options from a key=value config file");
  app.fallthrough();

  std::string input, output, input2;
  std::string strategy = "node-edge";
  std::string variant = "GCN";
  double rate = 0.15, lr = 0.1, epsilon = 1e-5;
  int max_subgraph = 3, restarts = 4, d = 4, layers = 0, steps = 500,
      pairs = 20;
  std::uint64_t seed = 0;

  auto* parse = app.add_subcommand("parse", "Validate an AMR corpus file");
  parse->add_option("input", input, "AMR corpus file")->required();

  auto* align = app.add_subcommand("align", "Align AMR nodes to tokens");
  align->add_option("input", input, "AMR corpus file with ::tok")->required();
  align->add_option("-o,--output", output, "Output path (default stdout)");

  auto* build = app.add_subcommand("build", "Build sequence-AMR graphs");
  build->add_option("input", input, "AMR corpus file with ::tok")->required();
  build->add_option("-o,--output", output, "Output path (default stdout)");

  auto* mask = app.add_subcommand("mask", "Apply a denoising mask strategy");
  mask->add_option("input", input, "AMR corpus file")->required();
  mask->add_option("-o,--output", output, "Output path (default stdout)");
  mask->add_option("--mask-strategy", strategy, "node-edge or subgraph")
      ->check(CLI::IsMember({"node-edge", "subgraph"}));
  mask->add_option("--mask-rate", rate, "Bernoulli mask rate");
  mask->add_option("--max-subgraph-size", max_subgraph, "Subgraph node cap");
  mask->add_option("--seed", seed, "RNG seed")->required();

  auto* smatch = app.add_subcommand("smatch", "Per-pair Smatch scores");
  smatch->add_option("first", input, "First corpus")->required();
  smatch->add_option("second", input2, "Second corpus")->required();
  smatch->add_option("--restarts", restarts, "Hill-climbing restarts");
  smatch->add_option("--seed", seed, "RNG seed")->required();

  auto* rel = app.add_subcommand("reliability",
                                 "Corpus reliability rate and mean Smatch f1");
  rel->add_option("source", input, "Source-side corpus")->required();
  rel->add_option("corrected", input2, "Corrected-side corpus")->required();
  rel->add_option("--restarts", restarts, "Hill-climbing restarts");
  rel->add_option("--seed", seed, "RNG seed")->required();

  auto* check = app.add_subcommand("encode-check",
                                   "Gradient-check the fusion encoder");
  check->add_option("--variant", variant, "GCN, GAT, or DeepGCN")
      ->check(CLI::IsMember({"GCN", "GAT", "DeepGCN"}));
  check->add_option("--d", d, "Model width");
  check->add_option("--layers", layers, "GNN layers (0 = variant default)");
  check->add_option("--epsilon", epsilon, "Finite-difference step");
  check->add_option("--seed", seed, "RNG seed")->required();

  auto* demo = app.add_subcommand("overfit-demo",
                                  "Overfit the encoder on a toy teacher corpus");
  demo->add_option("--variant", variant, "GCN, GAT, or DeepGCN")
      ->check(CLI::IsMember({"GCN", "GAT", "DeepGCN"}));
  demo->add_option("--d", d, "Model width");
  demo->add_option("--pairs", pairs, "Training pairs");
  demo->add_option("--steps", steps, "Gradient steps");
  demo->add_option("--lr", lr, "Learning rate");
  demo->add_option("--seed", seed, "RNG seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsageError;
  }

  if (parse->parsed()) return cli::cmd_parse(input, std::cout, std::cerr);
  if (align->parsed())
    return cli::cmd_align(input, output, std::cout, std::cerr);
  if (build->parsed())
    return cli::cmd_build(input, output, std::cout, std::cerr);
  if (mask->parsed()) {
    MaskSpec spec;
    spec.strategy = strategy == "subgraph" ? MaskStrategy::Subgraph
                                           : MaskStrategy::NodeEdge;
    spec.rate = rate;
    spec.max_subgraph_size = max_subgraph;
    spec.seed = seed;
    return cli::cmd_mask(input, output, spec, std::cout, std::cerr);
  }
  if (smatch->parsed())
    return cli::cmd_smatch(input, input2, restarts, seed, std::cout, std::cerr);
  if (rel->parsed())
    return cli::cmd_reliability(input, input2, restarts, seed, std::cout,
                                std::cerr);
  if (check->parsed())
    return cli::cmd_encode_check(variant, d, layers, seed, epsilon, std::cout,
                                 std::cerr);
  if (demo->parsed())
    return cli::cmd_overfit_demo(variant, d, pairs, steps, lr, seed, std::cout,
                                 std::cerr);
  return cli::kUsageError;
}
