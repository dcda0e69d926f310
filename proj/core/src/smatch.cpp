#include "amrgec/smatch.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "amrgec/rng.hpp"

namespace amrgec {

bool graphs_identical(const AmrGraph& g1, const AmrGraph& g2) {
  return canonicalize(g1) == canonicalize(g2);
}

namespace {

struct Indexed {
  std::vector<std::string> vars;                 // index -> variable
  std::vector<std::pair<int, std::string>> inst; // (var, concept)
  std::vector<std::tuple<int, std::string, int>> rel;
  std::vector<std::tuple<int, std::string, std::string>> attr;
  int triple_count = 0;

  explicit Indexed(const AmrGraph& g) {
    std::map<std::string, int> idx;
    for (const auto& n : g.nodes) {
      idx[n.var] = static_cast<int>(vars.size());
      vars.push_back(n.var);
    }
    for (const auto& n : g.nodes) inst.push_back({idx[n.var], n.concept_label});
    for (const auto& e : g.edges)
      rel.push_back({idx[e.src], e.role, idx[e.tgt]});
    for (const auto& a : g.attributes)
      attr.push_back({idx[a.src], a.role, a.value});
    triple_count = static_cast<int>(inst.size() + rel.size() + attr.size());
  }
};

struct Scorer {
  std::set<std::pair<int, std::string>> inst2;
  std::set<std::tuple<int, std::string, int>> rel2;
  std::set<std::tuple<int, std::string, std::string>> attr2;
  const Indexed& a;

  Scorer(const Indexed& a_, const Indexed& b) : a(a_) {
    inst2.insert(b.inst.begin(), b.inst.end());
    rel2.insert(b.rel.begin(), b.rel.end());
    attr2.insert(b.attr.begin(), b.attr.end());
  }

  // mapping[v] = index into g2 variables, or -1
  int score(const std::vector<int>& m) const {
    int s = 0;
    for (const auto& [v, c] : a.inst)
      if (m[v] >= 0 && inst2.count({m[v], c})) ++s;
    for (const auto& [v1, r, v2] : a.rel)
      if (m[v1] >= 0 && m[v2] >= 0 && rel2.count({m[v1], r, m[v2]})) ++s;
    for (const auto& [v, r, c] : a.attr)
      if (m[v] >= 0 && attr2.count({m[v], r, c})) ++s;
    return s;
  }
};

std::vector<int> owners(const std::vector<int>& m, int n2) {
  std::vector<int> own(n2, -1);
  for (std::size_t v = 0; v < m.size(); ++v)
    if (m[v] >= 0) own[m[v]] = static_cast<int>(v);
  return own;
}

// Re-map v to w; a displaced owner of w takes v's old target.
void remap(std::vector<int>& cand, std::vector<int>& own, int v, int w) {
  int old = cand[v];
  if (old >= 0) own[old] = -1;
  if (w >= 0 && own[w] >= 0 && own[w] != v) {
    int u = own[w];
    cand[u] = old;
    if (old >= 0) own[old] = u;
  }
  cand[v] = w;
  if (w >= 0) own[w] = v;
}

// Align one same-role relation pair in a single step (both endpoints).
std::vector<int> pair_move(const std::vector<int>& m, const std::vector<int>& o,
                           int v1, int w1, int v2, int w2) {
  std::vector<int> cand = m;
  std::vector<int> own = o;
  remap(cand, own, v1, w1);
  if (cand[v2] != w2) remap(cand, own, v2, w2);
  return cand;
}

// Best-improvement local search. Moves: re-map one variable (to an unused
// target, to nothing, or swapping with the current owner), and align one
// same-role relation pair. The pair move escapes plateaus where a relation
// match needs both endpoints re-mapped at once.
int hill_climb(const Scorer& scorer, const Indexed& a, const Indexed& b,
               std::vector<int>& m) {
  const int n1 = static_cast<int>(m.size());
  const int n2 = static_cast<int>(b.vars.size());
  int current = scorer.score(m);

  for (;;) {
    int best_gain = 0;
    std::vector<int> best;
    std::vector<int> owner = owners(m, n2);

    auto consider = [&](std::vector<int> cand) {
      int gain = scorer.score(cand) - current;
      if (gain > best_gain) {
        best_gain = gain;
        best = std::move(cand);
      }
    };

    for (int v = 0; v < n1; ++v) {
      for (int w = -1; w < n2; ++w) {
        if (w == m[v]) continue;
        std::vector<int> cand = m;
        std::vector<int> own = owner;
        remap(cand, own, v, w);
        consider(std::move(cand));
      }
    }
    for (const auto& [v1, role1, v2] : a.rel) {
      for (const auto& [w1, role2, w2] : b.rel) {
        if (role1 != role2) continue;
        if (m[v1] == w1 && m[v2] == w2) continue;
        consider(pair_move(m, owner, v1, w1, v2, w2));
      }
    }
    if (best_gain == 0) return current;
    m = std::move(best);
    current += best_gain;
  }
}

// hill_climb with deterministic plateau kicks: at a local optimum, try each
// relation-pair move that does not lose score, re-climb, and keep the result
// only if it is strictly better. Each accepted kick raises the score, so this
// terminates.
int climb_with_kicks(const Scorer& scorer, const Indexed& a, const Indexed& b,
                     std::vector<int>& m) {
  const int n2 = static_cast<int>(b.vars.size());
  int current = hill_climb(scorer, a, b, m);
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<int> owner = owners(m, n2);
    for (const auto& [v1, role1, v2] : a.rel) {
      for (const auto& [w1, role2, w2] : b.rel) {
        if (role1 != role2) continue;
        if (m[v1] == w1 && m[v2] == w2) continue;
        std::vector<int> cand = pair_move(m, owner, v1, w1, v2, w2);
        if (scorer.score(cand) < current) continue;
        int s = hill_climb(scorer, a, b, cand);
        if (s > current) {
          current = s;
          m = std::move(cand);
          improved = true;
          break;
        }
      }
      if (improved) break;
    }
  }
  return current;
}

std::vector<int> greedy_init(const Indexed& a, const Indexed& b,
                             SplitMix64& rng) {
  std::vector<int> m(a.vars.size(), -1);
  std::vector<bool> used(b.vars.size(), false);
  std::vector<std::string> concept2(b.vars.size());
  for (const auto& [w, c] : b.inst) concept2[w] = c;
  for (const auto& [v, c] : a.inst) {
    for (std::size_t w = 0; w < concept2.size(); ++w) {
      if (!used[w] && concept2[w] == c) {
        m[v] = static_cast<int>(w);
        used[w] = true;
        break;
      }
    }
  }
  // complete with random unused targets
  std::vector<int> free;
  for (std::size_t w = 0; w < used.size(); ++w)
    if (!used[w]) free.push_back(static_cast<int>(w));
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] >= 0 || free.empty()) continue;
    std::size_t k = rng.next_below(free.size());
    m[v] = free[k];
    free.erase(free.begin() + static_cast<long>(k));
  }
  return m;
}

// Aligns same-role relation pairs first (both endpoints at once), then falls
// back to concept matching for whatever is left. Complements greedy_init:
// concept-greedy starts can sit on plateaus where improving a relation match
// would first sacrifice a concept match.
std::vector<int> relation_greedy_init(const Indexed& a, const Indexed& b,
                                      SplitMix64& rng) {
  std::vector<int> m(a.vars.size(), -1);
  std::vector<bool> used(b.vars.size(), false);
  auto fits = [&](int v, int w) { return m[v] == w || (m[v] < 0 && !used[w]); };
  auto bind = [&](int v, int w) {
    if (m[v] < 0) {
      m[v] = w;
      used[w] = true;
    }
  };
  for (const auto& [v1, role1, v2] : a.rel) {
    for (const auto& [w1, role2, w2] : b.rel) {
      if (role1 != role2 || w1 == w2 || !fits(v1, w1) || !fits(v2, w2))
        continue;
      if (v1 == v2) break;
      bind(v1, w1);
      bind(v2, w2);
      break;
    }
  }
  std::vector<std::string> concept2(b.vars.size());
  for (const auto& [w, c] : b.inst) concept2[w] = c;
  for (const auto& [v, c] : a.inst) {
    if (m[v] >= 0) continue;
    for (std::size_t w = 0; w < concept2.size(); ++w) {
      if (!used[w] && concept2[w] == c) {
        m[v] = static_cast<int>(w);
        used[w] = true;
        break;
      }
    }
  }
  std::vector<int> free;
  for (std::size_t w = 0; w < used.size(); ++w)
    if (!used[w]) free.push_back(static_cast<int>(w));
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] >= 0 || free.empty()) continue;
    std::size_t k = rng.next_below(free.size());
    m[v] = free[k];
    free.erase(free.begin() + static_cast<long>(k));
  }
  return m;
}

std::vector<int> random_init(std::size_t n1, std::size_t n2, SplitMix64& rng) {
  std::vector<int> targets(n2);
  for (std::size_t i = 0; i < n2; ++i) targets[i] = static_cast<int>(i);
  // Fisher-Yates
  for (std::size_t i = n2; i > 1; --i) {
    std::size_t j = rng.next_below(i);
    std::swap(targets[i - 1], targets[j]);
  }
  std::vector<int> m(n1, -1);
  for (std::size_t v = 0; v < n1 && v < n2; ++v) m[v] = targets[v];
  return m;
}

}  // namespace

int matched_triples(const TripleSet& t1, const TripleSet& t2,
                    const std::map<std::string, std::string>& mapping) {
  std::set<Triple> s2(t2.begin(), t2.end());
  int matched = 0;
  for (const auto& t : t1) {
    Triple img = t;
    auto it = mapping.find(t.a);
    if (it == mapping.end()) continue;
    img.a = it->second;
    if (t.kind == TripleKind::Relation) {
      auto jt = mapping.find(t.b);
      if (jt == mapping.end()) continue;
      img.b = jt->second;
    }
    if (s2.count(img)) ++matched;
  }
  return matched;
}

SmatchResult smatch(const AmrGraph& g1, const AmrGraph& g2, int restarts,
                    std::uint64_t seed) {
  validate(g1);
  validate(g2);
  Indexed a(g1), b(g2);
  Scorer scorer(a, b);
  SplitMix64 rng(seed);

  int best_score = -1;
  std::vector<int> best_map;
  for (int r = 0; r < std::max(restarts, 1); ++r) {
    std::vector<int> m =
        r == 0   ? greedy_init(a, b, rng)
        : r == 1 ? relation_greedy_init(a, b, rng)
                 : random_init(a.vars.size(), b.vars.size(), rng);
    int s = climb_with_kicks(scorer, a, b, m);
    if (s > best_score) {
      best_score = s;
      best_map = std::move(m);
    }
  }

  SmatchResult res;
  res.matched = best_score;
  for (std::size_t v = 0; v < best_map.size(); ++v)
    if (best_map[v] >= 0) res.mapping[a.vars[v]] = b.vars[best_map[v]];
  res.precision = a.triple_count ? static_cast<double>(best_score) / a.triple_count : 0.0;
  res.recall = b.triple_count ? static_cast<double>(best_score) / b.triple_count : 0.0;
  double pr = res.precision + res.recall;
  res.f1 = pr > 0 ? 2.0 * res.precision * res.recall / pr : 0.0;
  return res;
}

double reliability_rate(
    const std::vector<std::pair<AmrGraph, AmrGraph>>& pairs) {
  if (pairs.empty()) throw EmptyCorpusError();
  int identical = 0;
  for (const auto& [g1, g2] : pairs)
    if (graphs_identical(g1, g2)) ++identical;
  return static_cast<double>(identical) / static_cast<double>(pairs.size());
}

}  // namespace amrgec
