#include "amrgec/align.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace amrgec {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

std::size_t common_prefix_len(const std::string& a, const std::string& b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

// Leftmost unconsumed candidate, or leftmost candidate if all are consumed.
int pick(const std::vector<int>& candidates, const std::vector<bool>& consumed) {
  if (candidates.empty()) return -1;
  for (int c : candidates)
    if (!consumed[c]) return c;
  return candidates.front();
}

}  // namespace

std::string normalize_concept(const std::string& concept_label) {
  std::string s = concept_label;
  auto dash = s.rfind('-');
  if (dash != std::string::npos && dash + 1 < s.size()) {
    bool digits = true;
    for (std::size_t i = dash + 1; i < s.size(); ++i)
      digits = digits && std::isdigit(static_cast<unsigned char>(s[i]));
    if (digits) s.erase(dash);
  }
  return lowercase(s);
}

Alignment align(const AmrGraph& g, const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw EmptyTokenListError();
  validate(g);

  std::vector<std::string> lowered(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) lowered[i] = lowercase(tokens[i]);

  Alignment result;
  std::vector<bool> consumed(tokens.size(), false);

  for (const std::string& var : canonical_order(g)) {
    std::string c = normalize_concept(g.concept_of(var));

    std::vector<int> exact, prefix;
    for (std::size_t i = 0; i < lowered.size(); ++i) {
      if (lowered[i] == c)
        exact.push_back(static_cast<int>(i));
      else if (common_prefix_len(lowered[i], c) >= 4)
        prefix.push_back(static_cast<int>(i));
    }

    int tok = pick(exact, consumed);
    if (tok < 0) tok = pick(prefix, consumed);
    if (tok < 0) {
      std::vector<int> attr;
      for (const auto& a : g.attributes) {
        if (a.src != var) continue;
        std::string v = lowercase(a.value);
        for (std::size_t i = 0; i < lowered.size(); ++i)
          if (lowered[i] == v) attr.push_back(static_cast<int>(i));
      }
      std::sort(attr.begin(), attr.end());
      tok = pick(attr, consumed);
    }

    if (tok >= 0) {
      result.amr2seq[var] = tok;
      consumed[tok] = true;
    } else {
      result.unaligned.insert(var);
    }
  }
  return result;
}

double alignment_coverage(const Alignment& a, const AmrGraph& g) {
  if (g.nodes.empty()) return 0.0;
  return static_cast<double>(a.amr2seq.size()) /
         static_cast<double>(g.nodes.size());
}

std::string alignment_to_json(const Alignment& a) {
  nlohmann::ordered_json j;
  for (const auto& [var, idx] : a.amr2seq) j[var] = idx;
  j["unaligned"] = a.unaligned;
  return j.dump();
}

}  // namespace amrgec
