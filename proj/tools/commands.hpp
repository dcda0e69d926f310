#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <vector>

#include "amrgec/encoder.hpp"
#include "amrgec/mask.hpp"

namespace amrgec::cli {

// Random token sequences with a sequence backbone and a few extra role
// edges; targets come from a frozen random teacher of the same shape.
std::vector<TrainingPair> make_teacher_corpus(const EncoderConfig& cfg,
                                              int pairs, std::uint64_t seed);

// Exit codes: 0 success, 1 validation failure, 2 usage error.
inline constexpr int kOk = 0;
inline constexpr int kValidationError = 1;
inline constexpr int kUsageError = 2;

// Validate an AMR corpus file; one OK/error line per graph.
int cmd_parse(const std::string& input_path, std::ostream& out,
              std::ostream& err);

// One alignment JSON object per record (records need `# ::tok`).
int cmd_align(const std::string& input_path, const std::string& output_path,
              std::ostream& out, std::ostream& err);

// One sequence-AMR graph JSON object per line.
int cmd_build(const std::string& input_path, const std::string& output_path,
              std::ostream& out, std::ostream& err);

// Masked corpus in the standard corpus format. Record i is masked with
// seed spec.seed + i, so one flag seeds the whole run deterministically.
int cmd_mask(const std::string& input_path, const std::string& output_path,
             const MaskSpec& spec, std::ostream& out, std::ostream& err);

// Per-pair TSV: index, precision, recall, f1.
int cmd_smatch(const std::string& path1, const std::string& path2,
               int restarts, std::uint64_t seed, std::ostream& out,
               std::ostream& err);

// One TSV line: pair count, identical count, rate, mean smatch f1.
int cmd_reliability(const std::string& source_path,
                    const std::string& corrected_path, int restarts,
                    std::uint64_t seed, std::ostream& out, std::ostream& err);

// Gradient-check report as TSV (tensor, max relative error) on a small
// built-in fixture.
int cmd_encode_check(const std::string& variant, int d, int layers,
                     std::uint64_t seed, double epsilon, std::ostream& out,
                     std::ostream& err);

// Trains on a frozen-teacher toy corpus; prints a loss curve summary.
int cmd_overfit_demo(const std::string& variant, int d, int pairs, int steps,
                     double learning_rate, std::uint64_t seed,
                     std::ostream& out, std::ostream& err);

}  // namespace amrgec::cli
