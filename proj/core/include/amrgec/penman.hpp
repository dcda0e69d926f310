#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace amrgec {

// Rooted directed labeled graph in the AMR sense: instance nodes bound to
// variables, role edges between variables, and constant-valued attributes.
// Immutable by convention once built and validated.

struct AmrNode {
  std::string var;
  std::string concept_label;  // e.g. "want-01"; sense suffixes are opaque
};

struct AmrEdge {
  std::string src;
  std::string role;  // ":"-less, e.g. "ARG0"
  std::string tgt;
};

struct AmrAttribute {
  std::string src;
  std::string role;
  std::string value;   // constant, e.g. "-", "Sunday", "New York"
  bool quoted = false; // quoted form is preserved on output
};

struct AmrGraph {
  std::vector<AmrNode> nodes;
  std::vector<AmrEdge> edges;
  std::vector<AmrAttribute> attributes;
  std::string root;

  int node_index(const std::string& var) const;
  const std::string& concept_of(const std::string& var) const;
};

enum class ParseErrorKind {
  UnbalancedParens,
  DuplicateVariableDefinition,
  UnknownVariableReference,
  EmptyRole,
  Syntax,
};

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, int col, const std::string& what);
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int col_;
};

class InvalidGraphError : public std::runtime_error {
 public:
  explicit InvalidGraphError(const std::string& what)
      : std::runtime_error(what) {}
};

// Throws InvalidGraphError unless: variables unique, root present, graph
// connected (ignoring edge direction), roles nonempty, attribute sources exist.
void validate(const AmrGraph& g);

// Parses one PENMAN expression. Inverse roles (":ARG0-of") are normalized to
// forward edges. Re-mentions of a defined variable resolve to the same node.
// `line0` offsets reported positions when the text is embedded in a file.
AmrGraph parse_penman(const std::string& text, int line0 = 1);

// Depth-first serialization from the root; each variable defined at first
// visit, re-mentions as bare variables, child order = input edge order.
// Edges reached against their direction are emitted with an inverse role.
std::string serialize_penman(const AmrGraph& g);

enum class TripleKind { Instance, Relation, Attribute };

struct Triple {
  TripleKind kind;
  std::string a;     // variable
  std::string role;  // "instance" for instance triples
  std::string b;     // variable, concept, or constant
  auto operator<=>(const Triple&) const = default;
};

using TripleSet = std::vector<Triple>;  // sorted

// Triple view with original variable names (substrate for smatch).
TripleSet triples(const AmrGraph& g);

// Variables in depth-first discovery order from the root, the order the
// canonical renaming assigns. Serialization order of sibling edges does not
// matter beyond (role, neighbor concept) ties.
std::vector<std::string> canonical_order(const AmrGraph& g);

// Canonical triple set: variables renamed v0, v1, ... in depth-first
// discovery order from the root (incident edges ordered by direction, role,
// then neighbor concept), triples sorted. Alpha-equivalent graphs map to
// identical TripleSets.
TripleSet canonicalize(const AmrGraph& g);

// One graph of an AMR corpus file: `# ::key value` metadata lines followed by
// a PENMAN expression. `# ::tok` carries the sentence tokens.
struct CorpusRecord {
  std::map<std::string, std::string> meta;
  AmrGraph graph;
  int line = 0;  // first line of the record in the source file

  std::vector<std::string> tokens() const;  // space-split ::tok, empty if none
  std::string id() const;                   // ::id or ""
};

// Raw corpus block before PENMAN parsing, for callers that want to keep
// going past a malformed record.
struct CorpusBlock {
  std::map<std::string, std::string> meta;
  std::string expr;
  int line = 0;       // first line of the block
  int expr_line = 0;  // first line of the PENMAN expression
};

std::vector<CorpusBlock> split_corpus(const std::string& text);

// Graphs separated by blank lines; parse errors carry file line numbers.
std::vector<CorpusRecord> read_corpus(const std::string& text);
std::string write_corpus(const std::vector<CorpusRecord>& records);

}  // namespace amrgec
