#include "amrgec/encoder.hpp"

#include <cmath>

#include "amrgec/rng.hpp"
#include "json.hpp"

namespace amrgec {

std::string variant_name(GnnVariant v) {
  switch (v) {
    case GnnVariant::GCN: return "GCN";
    case GnnVariant::GAT: return "GAT";
    case GnnVariant::DeepGCN: return "DeepGCN";
  }
  throw std::logic_error("unreachable");
}

GnnVariant variant_from_name(const std::string& name) {
  if (name == "GCN") return GnnVariant::GCN;
  if (name == "GAT") return GnnVariant::GAT;
  if (name == "DeepGCN") return GnnVariant::DeepGCN;
  throw std::invalid_argument("unknown GNN variant: " + name);
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> EncoderParams::tensors() {
  std::vector<std::pair<std::string, Eigen::MatrixXd*>> t;
  t.push_back({"embed", &embed});
  t.push_back({"wq", &wq});
  t.push_back({"wk", &wk});
  t.push_back({"wv", &wv});
  t.push_back({"wo", &wo});
  for (std::size_t l = 0; l < gnn_w.size(); ++l)
    t.push_back({"gnn_w" + std::to_string(l), &gnn_w[l]});
  for (std::size_t l = 0; l < gat_a.size(); ++l)
    t.push_back({"gat_a" + std::to_string(l), &gat_a[l]});
  t.push_back({"label_embed", &label_embed});
  t.push_back({"gnn_out", &gnn_out});
  return t;
}

std::vector<std::pair<std::string, const Eigen::MatrixXd*>>
EncoderParams::tensors() const {
  auto mut = const_cast<EncoderParams*>(this)->tensors();
  std::vector<std::pair<std::string, const Eigen::MatrixXd*>> t;
  for (auto& [name, m] : mut) t.push_back({name, m});
  return t;
}

EncoderParams EncoderParams::zeros(const EncoderConfig& cfg) {
  EncoderParams p;
  p.cfg = cfg;
  const int d = cfg.d;
  p.embed = Eigen::MatrixXd::Zero(cfg.vocab, d);
  p.wq = p.wk = p.wv = p.wo = Eigen::MatrixXd::Zero(d, d);
  p.gnn_w.assign(cfg.layers, Eigen::MatrixXd::Zero(d, d));
  if (cfg.variant == GnnVariant::GAT)
    p.gat_a.assign(cfg.layers, Eigen::MatrixXd::Zero(2 * d, 1));
  p.label_embed = Eigen::MatrixXd::Zero(cfg.num_labels, d);
  p.gnn_out = Eigen::MatrixXd::Zero(d, d);
  return p;
}

EncoderParams EncoderParams::random(const EncoderConfig& cfg,
                                    std::uint64_t seed, double scale) {
  EncoderParams p = zeros(cfg);
  SplitMix64 rng(seed);
  for (auto& [name, m] : p.tensors())
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index j = 0; j < m->cols(); ++j)
        (*m)(i, j) = (rng.next_double() * 2.0 - 1.0) * scale;
  return p;
}

std::string params_to_json(const EncoderParams& p) {
  nlohmann::ordered_json j;
  j["d"] = p.cfg.d;
  j["layers"] = p.cfg.layers;
  j["vocab"] = p.cfg.vocab;
  j["num_labels"] = p.cfg.num_labels;
  j["variant"] = variant_name(p.cfg.variant);
  auto& tens = j["tensors"] = nlohmann::ordered_json::object();
  for (const auto& [name, m] : p.tensors()) {
    nlohmann::ordered_json t;
    t["shape"] = {m->rows(), m->cols()};
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m->size()));
    for (Eigen::Index i = 0; i < m->rows(); ++i)
      for (Eigen::Index jj = 0; jj < m->cols(); ++jj) data.push_back((*m)(i, jj));
    t["data"] = data;
    tens[name] = std::move(t);
  }
  return j.dump();
}

EncoderParams params_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  EncoderConfig cfg;
  cfg.d = j.at("d");
  cfg.layers = j.at("layers");
  cfg.vocab = j.at("vocab");
  cfg.num_labels = j.at("num_labels");
  cfg.variant = variant_from_name(j.at("variant"));
  EncoderParams p = EncoderParams::zeros(cfg);
  for (auto& [name, m] : p.tensors()) {
    const auto& t = j.at("tensors").at(name);
    Eigen::Index rows = t.at("shape")[0];
    Eigen::Index cols = t.at("shape")[1];
    if (rows != m->rows() || cols != m->cols())
      throw ShapeMismatchError("tensor " + name + " has unexpected shape");
    const auto& data = t.at("data");
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index jj = 0; jj < cols; ++jj) (*m)(i, jj) = data.at(k++);
  }
  return p;
}

int Vocab::intern(const std::string& s) {
  auto it = ids_.find(s);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(names_.size());
  ids_[s] = id;
  names_.push_back(s);
  return id;
}

int Vocab::lookup(const std::string& s) const {
  auto it = ids_.find(s);
  return it == ids_.end() ? 0 : it->second;
}

EncoderInput make_input(const SequenceAmrGraph& sg, const Vocab& tokens,
                        const Vocab& labels) {
  EncoderInput in;
  for (const auto& t : sg.tokens) in.token_ids.push_back(tokens.lookup(t));
  for (const auto& e : sg.edges)
    in.edges.push_back({e.src, e.dst, labels.lookup(e.label)});
  return in;
}

namespace {

Eigen::MatrixXd sinusoidal_positions(int n, int d) {
  Eigen::MatrixXd pos(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      double freq = std::pow(10000.0, -2.0 * (j / 2) / d);
      pos(i, j) = (j % 2 == 0) ? std::sin(i * freq) : std::cos(i * freq);
    }
  }
  return pos;
}

Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& s) {
  Eigen::MatrixXd a(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::VectorXd row = s.row(i);
    double m = row.maxCoeff();
    Eigen::VectorXd e = (row.array() - m).exp();
    a.row(i) = e / e.sum();
  }
  return a;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& s) {
  double m = s.maxCoeff();
  Eigen::VectorXd e = (s.array() - m).exp();
  return e / e.sum();
}

int clamp_token(int id, int vocab) { return (id < 0 || id >= vocab) ? 0 : id; }

int clamp_label(int id, int labels) { return (id < 0 || id >= labels) ? 0 : id; }

struct Degrees {
  std::vector<double> din, dout;  // include a self-loop per node
};

Degrees degrees(int n, const std::vector<EncoderEdge>& edges) {
  Degrees deg;
  deg.din.assign(n, 1.0);
  deg.dout.assign(n, 1.0);
  for (const auto& e : edges) {
    deg.dout[e.src] += 1.0;
    deg.din[e.dst] += 1.0;
  }
  return deg;
}

void check_edges(int n, const std::vector<EncoderEdge>& edges) {
  for (const auto& e : edges)
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
      throw ShapeMismatchError("edge endpoint outside node range");
}

// One GNN layer forward; fills the trace.
void gnn_layer(const EncoderParams& p, int layer,
               const std::vector<EncoderEdge>& edges, const Degrees& deg,
               GnnLayerTrace& tr) {
  const Eigen::MatrixXd& z = tr.input;
  const int n = static_cast<int>(z.rows());
  const Eigen::MatrixXd& w = p.gnn_w[layer];

  if (p.cfg.variant == GnnVariant::GAT) {
    tr.out.resize(n, p.cfg.d);
    tr.gat.assign(n, {});
    std::vector<std::vector<const EncoderEdge*>> in_edges(n);
    for (const auto& e : edges) in_edges[e.dst].push_back(&e);
    const Eigen::VectorXd a_src = p.gat_a[layer].col(0).head(p.cfg.d);
    const Eigen::VectorXd a_dst = p.gat_a[layer].col(0).tail(p.cfg.d);
    for (int t = 0; t < n; ++t) {
      GatNodeTrace& g = tr.gat[t];
      g.cand_src.push_back(t);
      g.cand_label.push_back(-1);
      for (const auto* e : in_edges[t]) {
        g.cand_src.push_back(e->src);
        g.cand_label.push_back(clamp_label(e->label, p.cfg.num_labels));
      }
      const int slots = static_cast<int>(g.cand_src.size());
      g.z.resize(slots, p.cfg.d);
      g.scores.resize(slots);
      g.q = (z.row(t) * w).transpose();
      for (int k = 0; k < slots; ++k) {
        Eigen::RowVectorXd state = z.row(g.cand_src[k]);
        if (g.cand_label[k] >= 0) state += p.label_embed.row(g.cand_label[k]);
        g.z.row(k) = state * w;
        g.scores(k) =
            std::tanh(g.z.row(k).dot(a_src) + g.q.dot(a_dst));
      }
      g.alpha = softmax(g.scores);
      Eigen::RowVectorXd agg = g.alpha.transpose() * g.z;
      tr.out.row(t) = agg.array().tanh();
    }
    return;
  }

  // GCN / DeepGCN: symmetric-normalized sum over in-edges plus a self-loop.
  tr.agg.setZero(n, p.cfg.d);
  for (int t = 0; t < n; ++t)
    tr.agg.row(t) = z.row(t) / std::sqrt(deg.dout[t] * deg.din[t]);
  for (const auto& e : edges) {
    double coef = 1.0 / std::sqrt(deg.dout[e.src] * deg.din[e.dst]);
    tr.agg.row(e.dst) +=
        coef * (z.row(e.src) + p.label_embed.row(clamp_label(e.label, p.cfg.num_labels)));
  }
  tr.out = (tr.agg * w).array().tanh();
  if (p.cfg.variant == GnnVariant::DeepGCN) tr.out += z;
}

}  // namespace

Eigen::MatrixXd sequence_encode(const std::vector<int>& token_ids,
                                const EncoderParams& p) {
  EncoderInput in;
  in.token_ids = token_ids;
  return forward(p, in).h;
}

ForwardTrace forward(const EncoderParams& p, const EncoderInput& in) {
  if (in.token_ids.empty()) throw EmptyInputError();
  const int n = static_cast<int>(in.token_ids.size());
  const int d = p.cfg.d;
  check_edges(n, in.edges);

  ForwardTrace tr;
  tr.x.resize(n, d);
  for (int i = 0; i < n; ++i)
    tr.x.row(i) = p.embed.row(clamp_token(in.token_ids[i], p.cfg.vocab));
  tr.x += sinusoidal_positions(n, d);

  tr.q = tr.x * p.wq;
  tr.k = tr.x * p.wk;
  tr.v = tr.x * p.wv;
  Eigen::MatrixXd scores = tr.q * tr.k.transpose() / std::sqrt(double(d));
  tr.attn = row_softmax(scores);
  tr.h = tr.x + (tr.attn * tr.v) * p.wo;

  Degrees deg = degrees(n, in.edges);
  tr.layers.resize(p.cfg.layers);
  Eigen::MatrixXd z = tr.h;
  for (int l = 0; l < p.cfg.layers; ++l) {
    tr.layers[l].input = z;
    gnn_layer(p, l, in.edges, deg, tr.layers[l]);
    z = tr.layers[l].out;
  }
  tr.yhat = z * p.gnn_out;
  tr.fused = tr.h + tr.yhat;
  return tr;
}

Eigen::MatrixXd gnn_forward(const SequenceAmrGraph& sg, const Eigen::MatrixXd& h,
                            const EncoderParams& p, const Vocab& labels) {
  if (h.rows() != sg.size())
    throw ShapeMismatchError("hidden state rows != graph node count");
  std::vector<EncoderEdge> edges;
  for (const auto& e : sg.edges)
    edges.push_back({e.src, e.dst, labels.lookup(e.label)});
  Degrees deg = degrees(sg.size(), edges);
  Eigen::MatrixXd z = h;
  GnnLayerTrace tr;
  for (int l = 0; l < p.cfg.layers; ++l) {
    tr.input = z;
    gnn_layer(p, l, edges, deg, tr);
    z = tr.out;
  }
  return z * p.gnn_out;
}

Eigen::MatrixXd fuse(const Eigen::MatrixXd& h, const Eigen::MatrixXd& yhat) {
  if (h.rows() != yhat.rows() || h.cols() != yhat.cols())
    throw ShapeMismatchError("fuse operands have different shapes");
  return h + yhat;
}

double loss_and_grad(const EncoderParams& p, const EncoderInput& in,
                     const Eigen::MatrixXd& target, EncoderParams* grads) {
  ForwardTrace tr = forward(p, in);
  if (tr.fused.rows() != target.rows() || tr.fused.cols() != target.cols())
    throw ShapeMismatchError("target shape does not match output");
  const int n = static_cast<int>(tr.fused.rows());
  const int d = p.cfg.d;
  Eigen::MatrixXd diff = tr.fused - target;
  double loss = diff.squaredNorm() / static_cast<double>(n * d);
  if (!std::isfinite(loss)) throw NonFiniteLossError();
  if (!grads) return loss;

  EncoderParams& g = *grads;
  Eigen::MatrixXd dfused = 2.0 / static_cast<double>(n * d) * diff;

  // fused = h + z_L * gnn_out
  Eigen::MatrixXd dh = dfused;
  const Eigen::MatrixXd& z_last = tr.layers.empty() ? tr.h : tr.layers.back().out;
  g.gnn_out += z_last.transpose() * dfused;
  Eigen::MatrixXd dz = dfused * p.gnn_out.transpose();

  Degrees deg = degrees(n, in.edges);
  for (int l = p.cfg.layers - 1; l >= 0; --l) {
    const GnnLayerTrace& ltr = tr.layers[l];
    const Eigen::MatrixXd& z = ltr.input;
    Eigen::MatrixXd dz_in = Eigen::MatrixXd::Zero(n, d);

    if (p.cfg.variant == GnnVariant::GAT) {
      const Eigen::VectorXd a_src = p.gat_a[l].col(0).head(d);
      const Eigen::VectorXd a_dst = p.gat_a[l].col(0).tail(d);
      for (int t = 0; t < n; ++t) {
        const GatNodeTrace& gt = ltr.gat[t];
        const int slots = static_cast<int>(gt.cand_src.size());
        Eigen::RowVectorXd out = ltr.out.row(t);
        Eigen::RowVectorXd dagg =
            dz.row(t).array() * (1.0 - out.array().square());
        Eigen::VectorXd dalpha(slots);
        for (int k = 0; k < slots; ++k) dalpha(k) = dagg.dot(gt.z.row(k));
        double inner = dalpha.dot(gt.alpha);
        Eigen::VectorXd dscores =
            gt.alpha.array() * (dalpha.array() - inner);
        Eigen::VectorXd du =
            dscores.array() * (1.0 - gt.scores.array().square());
        Eigen::RowVectorXd dq = Eigen::RowVectorXd::Zero(d);
        for (int k = 0; k < slots; ++k) {
          Eigen::RowVectorXd dzk = gt.alpha(k) * dagg + du(k) * a_src.transpose();
          g.gat_a[l].col(0).head(d) += du(k) * gt.z.row(k).transpose();
          g.gat_a[l].col(0).tail(d) += du(k) * gt.q;
          dq += du(k) * a_dst.transpose();
          Eigen::RowVectorXd state = z.row(gt.cand_src[k]);
          if (gt.cand_label[k] >= 0)
            state += p.label_embed.row(gt.cand_label[k]);
          g.gnn_w[l] += state.transpose() * dzk;
          Eigen::RowVectorXd dstate = dzk * p.gnn_w[l].transpose();
          dz_in.row(gt.cand_src[k]) += dstate;
          if (gt.cand_label[k] >= 0)
            g.label_embed.row(gt.cand_label[k]) += dstate;
        }
        g.gnn_w[l] += z.row(t).transpose() * dq;
        dz_in.row(t) += dq * p.gnn_w[l].transpose();
      }
    } else {
      Eigen::MatrixXd tanh_part = ltr.out;
      if (p.cfg.variant == GnnVariant::DeepGCN) {
        tanh_part -= z;
        dz_in += dz;  // residual path
      }
      Eigen::MatrixXd dpre =
          dz.array() * (1.0 - tanh_part.array().square());
      g.gnn_w[l] += ltr.agg.transpose() * dpre;
      Eigen::MatrixXd dagg = dpre * p.gnn_w[l].transpose();
      for (int t = 0; t < n; ++t)
        dz_in.row(t) += dagg.row(t) / std::sqrt(deg.dout[t] * deg.din[t]);
      for (const auto& e : in.edges) {
        double coef = 1.0 / std::sqrt(deg.dout[e.src] * deg.din[e.dst]);
        dz_in.row(e.src) += coef * dagg.row(e.dst);
        g.label_embed.row(clamp_label(e.label, p.cfg.num_labels)) +=
            coef * dagg.row(e.dst);
      }
    }
    dz = std::move(dz_in);
  }
  dh += dz;  // GNN stack input was h

  // sequence encoder: h = x + (attn * v) * wo
  Eigen::MatrixXd dx = dh;
  Eigen::MatrixXd av = tr.attn * tr.v;
  g.wo += av.transpose() * dh;
  Eigen::MatrixXd dav = dh * p.wo.transpose();
  Eigen::MatrixXd dattn = dav * tr.v.transpose();
  Eigen::MatrixXd dv = tr.attn.transpose() * dav;
  Eigen::MatrixXd dscores(n, n);
  for (int i = 0; i < n; ++i) {
    Eigen::RowVectorXd arow = tr.attn.row(i);
    double inner = dattn.row(i).dot(arow);
    dscores.row(i) = arow.array() * (dattn.row(i).array() - inner);
  }
  dscores /= std::sqrt(double(d));
  Eigen::MatrixXd dq = dscores * tr.k;
  Eigen::MatrixXd dk = dscores.transpose() * tr.q;
  g.wq += tr.x.transpose() * dq;
  g.wk += tr.x.transpose() * dk;
  g.wv += tr.x.transpose() * dv;
  dx += dq * p.wq.transpose() + dk * p.wk.transpose() + dv * p.wv.transpose();
  for (int i = 0; i < n; ++i)
    g.embed.row(clamp_token(in.token_ids[i], p.cfg.vocab)) += dx.row(i);
  return loss;
}

double gradient_check(const EncoderParams& p, const EncoderInput& in,
                      const Eigen::MatrixXd& target, double epsilon,
                      std::vector<GradCheckEntry>* report) {
  if (epsilon <= 0.0 || epsilon > 1e-2)
    throw std::invalid_argument("epsilon must be in (0, 1e-2]");
  EncoderParams grads = EncoderParams::zeros(p.cfg);
  loss_and_grad(p, in, target, &grads);

  EncoderParams work = p;
  auto work_tensors = work.tensors();
  auto grad_tensors = grads.tensors();
  double overall = 0.0;
  for (std::size_t t = 0; t < work_tensors.size(); ++t) {
    Eigen::MatrixXd* m = work_tensors[t].second;
    const Eigen::MatrixXd* gm = grad_tensors[t].second;
    double tensor_max = 0.0;
    for (Eigen::Index i = 0; i < m->rows(); ++i) {
      for (Eigen::Index j = 0; j < m->cols(); ++j) {
        double saved = (*m)(i, j);
        (*m)(i, j) = saved + epsilon;
        double lp = loss_and_grad(work, in, target, nullptr);
        (*m)(i, j) = saved - epsilon;
        double lm = loss_and_grad(work, in, target, nullptr);
        (*m)(i, j) = saved;
        double numeric = (lp - lm) / (2.0 * epsilon);
        double analytic = (*gm)(i, j);
        double rel = std::abs(analytic - numeric) /
                     std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        tensor_max = std::max(tensor_max, rel);
      }
    }
    if (report) report->push_back({work_tensors[t].first, tensor_max});
    overall = std::max(overall, tensor_max);
  }
  return overall;
}

std::vector<double> overfit_toy(EncoderParams& p,
                                const std::vector<TrainingPair>& corpus,
                                int steps, double learning_rate) {
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  std::vector<double> losses;
  for (int step = 0; step <= steps; ++step) {
    EncoderParams grads = EncoderParams::zeros(p.cfg);
    double loss = 0.0;
    for (const auto& pair : corpus)
      loss += loss_and_grad(p, pair.input, pair.target, &grads);
    loss /= static_cast<double>(corpus.size());
    if (!std::isfinite(loss)) throw NonFiniteLossError();
    losses.push_back(loss);
    if (step == steps) break;
    auto pt = p.tensors();
    auto gt = grads.tensors();
    double inv = learning_rate / static_cast<double>(corpus.size());
    for (std::size_t t = 0; t < pt.size(); ++t)
      *pt[t].second -= inv * (*gt[t].second);
  }
  return losses;
}

}  // namespace amrgec
