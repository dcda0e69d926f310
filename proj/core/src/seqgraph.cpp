#include "amrgec/seqgraph.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

namespace amrgec {

SequenceAmrGraph build_sequence_amr_graph(const std::vector<std::string>& tokens,
                                          const AmrGraph& g, const Alignment& a) {
  if (tokens.empty()) throw EmptyTokenListError();
  const int n = static_cast<int>(tokens.size());

  SequenceAmrGraph sg;
  sg.tokens = tokens;
  for (int i = 0; i + 1 < n; ++i) {
    sg.edges.push_back({i, i + 1, kLabelForward});
    sg.edges.push_back({i + 1, i, kLabelBackward});
  }
  for (const auto& e : g.edges) {
    auto s = a.amr2seq.find(e.src);
    auto t = a.amr2seq.find(e.tgt);
    if (s == a.amr2seq.end() || t == a.amr2seq.end()) continue;
    if (s->second == t->second) continue;  // collapsed to a self-loop
    if (s->second < 0 || s->second >= n || t->second < 0 || t->second >= n)
      throw std::out_of_range("alignment index outside token range");
    sg.edges.push_back({s->second, t->second, e.role});
  }
  std::sort(sg.edges.begin(), sg.edges.end());
  sg.edges.erase(std::unique(sg.edges.begin(), sg.edges.end()), sg.edges.end());
  return sg;
}

std::string export_graph_json(const SequenceAmrGraph& sg) {
  nlohmann::ordered_json j;
  j["tokens"] = sg.tokens;
  j["edges"] = nlohmann::json::array();
  for (const auto& e : sg.edges) j["edges"].push_back({e.src, e.dst, e.label});
  return j.dump();
}

SequenceAmrGraph import_graph_json(const std::string& json_text) {
  auto j = nlohmann::json::parse(json_text);
  SequenceAmrGraph sg;
  sg.tokens = j.at("tokens").get<std::vector<std::string>>();
  for (const auto& e : j.at("edges"))
    sg.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(),
                        e.at(2).get<std::string>()});
  std::sort(sg.edges.begin(), sg.edges.end());
  return sg;
}

}  // namespace amrgec
