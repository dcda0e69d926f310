#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "amrgec/align.hpp"
#include "amrgec/encoder.hpp"
#include "amrgec/penman.hpp"
#include "amrgec/rng.hpp"
#include "amrgec/seqgraph.hpp"
#include "amrgec/smatch.hpp"
#include "json.hpp"

namespace amrgec::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Data goes to the -o file when given, otherwise to stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::runtime_error("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

EncoderConfig make_config(const std::string& variant, int d, int layers) {
  EncoderConfig cfg;
  cfg.variant = variant_from_name(variant);
  cfg.d = d;
  cfg.layers = layers > 0 ? layers
               : cfg.variant == GnnVariant::DeepGCN ? 4
                                                    : 2;
  cfg.vocab = 16;
  cfg.num_labels = 8;
  return cfg;
}

// Three tokens on the sequence backbone plus one long-range role edge.
EncoderInput fixture_input() {
  EncoderInput in;
  in.token_ids = {1, 2, 3};
  in.edges = {{0, 1, 1}, {1, 0, 2}, {1, 2, 1}, {2, 1, 2}, {2, 0, 3}};
  return in;
}

Eigen::MatrixXd random_target(int n, int d, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd t(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) t(i, j) = rng.next_double() * 2.0 - 1.0;
  return t;
}

}  // namespace

std::vector<TrainingPair> make_teacher_corpus(const EncoderConfig& cfg,
                                              int pairs, std::uint64_t seed) {
  EncoderParams teacher = EncoderParams::random(cfg, seed ^ 0x7465616368ULL);
  SplitMix64 rng(seed);
  std::vector<TrainingPair> corpus;
  for (int i = 0; i < pairs; ++i) {
    TrainingPair pair;
    int n = 3 + static_cast<int>(rng.next_below(4));  // 3..6 tokens
    for (int t = 0; t < n; ++t)
      pair.input.token_ids.push_back(
          static_cast<int>(rng.next_below(cfg.vocab)));
    for (int t = 0; t + 1 < n; ++t) {
      pair.input.edges.push_back({t, t + 1, 1});
      pair.input.edges.push_back({t + 1, t, 2});
    }
    int extra = static_cast<int>(rng.next_below(3));
    for (int e = 0; e < extra; ++e) {
      int s = static_cast<int>(rng.next_below(n));
      int t = static_cast<int>(rng.next_below(n));
      if (s != t)
        pair.input.edges.push_back(
            {s, t, 3 + static_cast<int>(rng.next_below(cfg.num_labels - 3))});
    }
    pair.target = forward(teacher, pair.input).fused;
    corpus.push_back(std::move(pair));
  }
  return corpus;
}

int cmd_parse(const std::string& input_path, std::ostream& out,
              std::ostream& err) {
  std::string text;
  try {
    text = read_file(input_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  auto blocks = split_corpus(text);
  int failures = 0;
  for (const auto& blk : blocks) {
    try {
      AmrGraph g = parse_penman(blk.expr, blk.expr_line);
      out << "OK\tline " << blk.line << '\t' << g.nodes.size() << " nodes\n";
    } catch (const ParseError& e) {
      ++failures;
      out << "ERROR\tline " << e.line() << " col " << e.col() << '\t'
          << e.what() << '\n';
    } catch (const InvalidGraphError& e) {
      ++failures;
      out << "ERROR\tline " << blk.line << '\t' << e.what() << '\n';
    }
  }
  out << blocks.size() << " graphs, " << failures << " failed\n";
  return failures == 0 ? kOk : kValidationError;
}

int cmd_align(const std::string& input_path, const std::string& output_path,
              std::ostream& out, std::ostream& err) {
  try {
    auto records = read_corpus(read_file(input_path));
    Sink sink(output_path, out);
    for (const auto& rec : records) {
      auto tokens = rec.tokens();
      if (tokens.empty()) {
        err << "warning: record at line " << rec.line
            << " has no ::tok, skipped\n";
        continue;
      }
      sink.stream() << alignment_to_json(align(rec.graph, tokens)) << '\n';
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int cmd_build(const std::string& input_path, const std::string& output_path,
              std::ostream& out, std::ostream& err) {
  try {
    auto records = read_corpus(read_file(input_path));
    Sink sink(output_path, out);
    for (const auto& rec : records) {
      auto tokens = rec.tokens();
      if (tokens.empty()) {
        err << "warning: record at line " << rec.line
            << " has no ::tok, skipped\n";
        continue;
      }
      Alignment a = align(rec.graph, tokens);
      sink.stream() << export_graph_json(
                           build_sequence_amr_graph(tokens, rec.graph, a))
                    << '\n';
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int cmd_mask(const std::string& input_path, const std::string& output_path,
             const MaskSpec& spec, std::ostream& out, std::ostream& err) {
  try {
    auto records = read_corpus(read_file(input_path));
    std::vector<CorpusRecord> masked;
    for (std::size_t i = 0; i < records.size(); ++i) {
      MaskSpec rec_spec = spec;
      rec_spec.seed = spec.seed + i;
      CorpusRecord rec = records[i];
      try {
        rec.graph = apply_mask(rec.graph, rec_spec);
      } catch (const GraphTooSmallError& e) {
        err << "warning: record at line " << rec.line << ": " << e.what()
            << ", passed through unmasked\n";
      }
      masked.push_back(std::move(rec));
    }
    std::string text = write_corpus(masked);
    if (output_path.empty())
      out << text;
    else
      write_file(output_path, text);
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int cmd_smatch(const std::string& path1, const std::string& path2,
               int restarts, std::uint64_t seed, std::ostream& out,
               std::ostream& err) {
  try {
    auto r1 = read_corpus(read_file(path1));
    auto r2 = read_corpus(read_file(path2));
    if (r1.size() != r2.size()) {
      err << "error: record counts differ (" << r1.size() << " vs "
          << r2.size() << ")\n";
      return kValidationError;
    }
    out << "index\tprecision\trecall\tf1\n";
    for (std::size_t i = 0; i < r1.size(); ++i) {
      SmatchResult res = smatch(r1[i].graph, r2[i].graph, restarts, seed + i);
      out << i << '\t' << res.precision << '\t' << res.recall << '\t' << res.f1
          << '\n';
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int cmd_reliability(const std::string& source_path,
                    const std::string& corrected_path, int restarts,
                    std::uint64_t seed, std::ostream& out, std::ostream& err) {
  try {
    auto r1 = read_corpus(read_file(source_path));
    auto r2 = read_corpus(read_file(corrected_path));
    if (r1.size() != r2.size()) {
      err << "error: record counts differ (" << r1.size() << " vs "
          << r2.size() << ")\n";
      return kValidationError;
    }
    if (r1.empty()) {
      err << "error: empty corpus\n";
      return kValidationError;
    }
    int identical = 0;
    double f1_sum = 0.0;
    for (std::size_t i = 0; i < r1.size(); ++i) {
      if (graphs_identical(r1[i].graph, r2[i].graph)) ++identical;
      f1_sum += smatch(r1[i].graph, r2[i].graph, restarts, seed + i).f1;
    }
    double n = static_cast<double>(r1.size());
    out << r1.size() << '\t' << identical << '\t' << identical / n << '\t'
        << f1_sum / n << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int cmd_encode_check(const std::string& variant, int d, int layers,
                     std::uint64_t seed, double epsilon, std::ostream& out,
                     std::ostream& err) {
  try {
    EncoderConfig cfg = make_config(variant, d, layers);
    EncoderParams p = EncoderParams::random(cfg, seed);
    EncoderInput in = fixture_input();
    Eigen::MatrixXd target = random_target(
        static_cast<int>(in.token_ids.size()), cfg.d, seed ^ 0x746172676574ULL);
    std::vector<GradCheckEntry> report;
    double overall = gradient_check(p, in, target, epsilon, &report);
    out << "tensor\tmax_rel_error\n";
    for (const auto& e : report)
      out << e.tensor << '\t' << e.max_rel_error << '\n';
    out << "overall\t" << overall << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

int cmd_overfit_demo(const std::string& variant, int d, int pairs, int steps,
                     double learning_rate, std::uint64_t seed,
                     std::ostream& out, std::ostream& err) {
  try {
    EncoderConfig cfg = make_config(variant, d, 0);
    auto corpus = make_teacher_corpus(cfg, pairs, seed);
    EncoderParams p = EncoderParams::random(cfg, seed ^ 0x73747564656eULL);
    auto losses = overfit_toy(p, corpus, steps, learning_rate);
    out << "step\tloss\n";
    for (std::size_t s = 0; s < losses.size(); s += 50)
      out << s << '\t' << losses[s] << '\n';
    out << "final\t" << losses.back() << '\n';
    out << "ratio\t" << losses.back() / losses.front() << '\n';
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
}

}  // namespace amrgec::cli
