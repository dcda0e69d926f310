#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "amrgec/seqgraph.hpp"

namespace amrgec {

// Desk-scale semantic aggregated encoder: one self-attention sequence layer,
// L layers of message passing over the sequence-AMR graph with edge-label
// embeddings, and residual fusion of the two streams. Everything is double
// precision and fully differentiable by hand, so gradients can be checked
// against central finite differences.

enum class GnnVariant { GCN, GAT, DeepGCN };

std::string variant_name(GnnVariant v);
GnnVariant variant_from_name(const std::string& name);

struct EncoderConfig {
  int d = 8;
  int layers = 2;  // DeepGCN wants >= 4
  int vocab = 32;
  int num_labels = 8;
  GnnVariant variant = GnnVariant::GCN;
};

struct EncoderParams {
  EncoderConfig cfg;
  Eigen::MatrixXd embed;                 // vocab x d
  Eigen::MatrixXd wq, wk, wv, wo;        // d x d
  std::vector<Eigen::MatrixXd> gnn_w;    // layers, each d x d
  std::vector<Eigen::MatrixXd> gat_a;    // layers, each 2d x 1 (GAT only)
  Eigen::MatrixXd label_embed;           // num_labels x d
  Eigen::MatrixXd gnn_out;               // d x d, output projection (no bias)

  // Named views over every parameter tensor, for generic gradient handling.
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensors();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> tensors() const;

  static EncoderParams random(const EncoderConfig& cfg, std::uint64_t seed,
                              double scale = 0.5);
  static EncoderParams zeros(const EncoderConfig& cfg);
};

std::string params_to_json(const EncoderParams& p);
EncoderParams params_from_json(const std::string& text);

struct EncoderEdge {
  int src;
  int dst;
  int label;  // index into label_embed
};

struct EncoderInput {
  std::vector<int> token_ids;       // out-of-range ids clamp to UNK (0)
  std::vector<EncoderEdge> edges;
};

// Token/label string interning; id 0 is reserved for unknowns.
class Vocab {
 public:
  Vocab() { ids_["<unk>"] = 0; names_.push_back("<unk>"); }
  int intern(const std::string& s);
  int lookup(const std::string& s) const;  // 0 if unseen
  int size() const { return static_cast<int>(names_.size()); }

 private:
  std::map<std::string, int> ids_;
  std::vector<std::string> names_;
};

EncoderInput make_input(const SequenceAmrGraph& sg, const Vocab& tokens,
                        const Vocab& labels);

class ShapeMismatchError : public std::runtime_error {
 public:
  explicit ShapeMismatchError(const std::string& what)
      : std::runtime_error(what) {}
};

class EmptyInputError : public std::runtime_error {
 public:
  EmptyInputError() : std::runtime_error("empty token sequence") {}
};

class NonFiniteLossError : public std::runtime_error {
 public:
  NonFiniteLossError() : std::runtime_error("loss is not finite") {}
};

struct GatNodeTrace {
  std::vector<int> cand_src;    // candidate source node per slot; slot 0 = self
  std::vector<int> cand_label;  // label id per slot, -1 for self
  Eigen::MatrixXd z;            // slots x d, transformed messages
  Eigen::VectorXd q;            // d, transformed receiver state
  Eigen::VectorXd scores;       // tanh-squashed attention logits
  Eigen::VectorXd alpha;        // softmax over slots
};

struct GnnLayerTrace {
  Eigen::MatrixXd input;  // n x d
  Eigen::MatrixXd agg;    // GCN/DeepGCN aggregation
  Eigen::MatrixXd out;    // layer output (post-activation)
  std::vector<GatNodeTrace> gat;  // GAT only
};

struct ForwardTrace {
  Eigen::MatrixXd x;            // embeddings + positions
  Eigen::MatrixXd q, k, v;      // attention projections
  Eigen::MatrixXd attn;         // n x n softmax rows
  Eigen::MatrixXd h;            // sequence states after attention + residual
  std::vector<GnnLayerTrace> layers;
  Eigen::MatrixXd yhat;         // graph states after output projection
  Eigen::MatrixXd fused;        // h + yhat
};

// Sequence stream: embeddings + sinusoidal positions through one softmax
// self-attention layer with a residual connection.
Eigen::MatrixXd sequence_encode(const std::vector<int>& token_ids,
                                const EncoderParams& p);

// Full pipeline with recorded intermediates.
ForwardTrace forward(const EncoderParams& p, const EncoderInput& in);

Eigen::MatrixXd gnn_forward(const SequenceAmrGraph& sg,
                            const Eigen::MatrixXd& h, const EncoderParams& p,
                            const Vocab& labels);

Eigen::MatrixXd fuse(const Eigen::MatrixXd& h, const Eigen::MatrixXd& yhat);

// MSE loss between fused output and target; analytic gradients accumulate
// into `grads` (same shapes as p) when non-null.
double loss_and_grad(const EncoderParams& p, const EncoderInput& in,
                     const Eigen::MatrixXd& target, EncoderParams* grads);

struct GradCheckEntry {
  std::string tensor;
  double max_rel_error;
};

// Central finite differences against the analytic gradients for every
// parameter entry. Returns the max relative error over all parameters.
double gradient_check(const EncoderParams& p, const EncoderInput& in,
                      const Eigen::MatrixXd& target, double epsilon,
                      std::vector<GradCheckEntry>* report = nullptr);

struct TrainingPair {
  EncoderInput input;
  Eigen::MatrixXd target;
};

// Plain full-batch gradient descent on MSE; returns loss per step (step 0 =
// initial loss). Throws NonFiniteLossError if the loss diverges.
std::vector<double> overfit_toy(EncoderParams& p,
                                const std::vector<TrainingPair>& corpus,
                                int steps, double learning_rate);

}  // namespace amrgec
