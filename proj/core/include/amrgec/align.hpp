#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "amrgec/penman.hpp"

namespace amrgec {

// Partial map from AMR variable to 0-based token index. Several variables may
// share a token; a variable maps to at most one.
struct Alignment {
  std::map<std::string, int> amr2seq;
  std::set<std::string> unaligned;
};

class EmptyTokenListError : public std::runtime_error {
 public:
  EmptyTokenListError() : std::runtime_error("token list is empty") {}
};

// Deterministic lexical matching cascade, nodes visited in canonical
// discovery order. Per node, first rule that fires wins:
//   1. exact lowercase match of the concept with its sense suffix stripped
//      ("want-01" -> "want")
//   2. common lowercase prefix of length >= 4 between concept and token
//   3. exact lowercase match of one of the node's attribute constants
// Candidates prefer the leftmost token not yet consumed by this alignment;
// if every candidate is consumed the leftmost candidate is reused.
Alignment align(const AmrGraph& g, const std::vector<std::string>& tokens);

// |aligned| / |nodes|
double alignment_coverage(const Alignment& a, const AmrGraph& g);

// {"var": index, ..., "unaligned": [...]} with sorted keys
std::string alignment_to_json(const Alignment& a);

// Strips a trailing "-<digits>" sense suffix and lowercases.
std::string normalize_concept(const std::string& concept_label);

}  // namespace amrgec
