#include "amrgec/penman.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace amrgec {

int AmrGraph::node_index(const std::string& var) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].var == var) return static_cast<int>(i);
  }
  return -1;
}

const std::string& AmrGraph::concept_of(const std::string& var) const {
  int i = node_index(var);
  if (i < 0) throw InvalidGraphError("unknown variable: " + var);
  return nodes[i].concept_label;
}

ParseError::ParseError(ParseErrorKind kind, int line, int col,
                       const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ", col " +
                         std::to_string(col) + ": " + what),
      kind_(kind),
      line_(line),
      col_(col) {}

void validate(const AmrGraph& g) {
  if (g.nodes.empty()) throw InvalidGraphError("graph has no nodes");
  std::unordered_set<std::string> vars;
  for (const auto& n : g.nodes) {
    if (n.var.empty()) throw InvalidGraphError("empty variable name");
    if (!vars.insert(n.var).second)
      throw InvalidGraphError("duplicate variable: " + n.var);
    if (n.concept_label.empty())
      throw InvalidGraphError("empty concept on " + n.var);
  }
  if (!vars.count(g.root)) throw InvalidGraphError("root is not a node: " + g.root);
  for (const auto& e : g.edges) {
    if (e.role.empty()) throw InvalidGraphError("empty role label");
    if (!vars.count(e.src) || !vars.count(e.tgt))
      throw InvalidGraphError("edge endpoint is not a node");
  }
  for (const auto& a : g.attributes) {
    if (a.role.empty()) throw InvalidGraphError("empty attribute role");
    if (!vars.count(a.src)) throw InvalidGraphError("attribute source is not a node");
    if (vars.count(a.value) && !a.quoted)
      throw InvalidGraphError("attribute constant collides with a variable: " + a.value);
  }
  // connectivity, ignoring edge direction
  std::unordered_map<std::string, std::vector<std::string>> adj;
  for (const auto& e : g.edges) {
    adj[e.src].push_back(e.tgt);
    adj[e.tgt].push_back(e.src);
  }
  std::unordered_set<std::string> seen{g.root};
  std::vector<std::string> stack{g.root};
  while (!stack.empty()) {
    std::string v = stack.back();
    stack.pop_back();
    for (const auto& w : adj[v]) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  if (seen.size() != g.nodes.size())
    throw InvalidGraphError("graph is not connected");
}

namespace {

enum class TokKind { LParen, RParen, Slash, Role, Str, Atom, End };

struct Token {
  TokKind kind;
  std::string text;  // role without ':', string without quotes
  int line, col;
  bool quoted = false;
};

std::vector<Token> tokenize(const std::string& text, int line0) {
  std::vector<Token> out;
  int line = line0, col = 1;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    int tl = line, tc = col;
    if (c == '(') {
      out.push_back({TokKind::LParen, "(", tl, tc});
      advance(c);
      ++i;
    } else if (c == ')') {
      out.push_back({TokKind::RParen, ")", tl, tc});
      advance(c);
      ++i;
    } else if (c == '/') {
      out.push_back({TokKind::Slash, "/", tl, tc});
      advance(c);
      ++i;
    } else if (c == '"') {
      advance(c);
      ++i;
      std::string s;
      while (i < text.size() && text[i] != '"') {
        s += text[i];
        advance(text[i]);
        ++i;
      }
      if (i == text.size())
        throw ParseError(ParseErrorKind::Syntax, tl, tc, "unterminated string");
      advance('"');
      ++i;
      out.push_back({TokKind::Str, s, tl, tc, true});
    } else if (c == ':') {
      advance(c);
      ++i;
      std::string s;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '(' && text[i] != ')' && text[i] != '/') {
        s += text[i];
        advance(text[i]);
        ++i;
      }
      if (s.empty())
        throw ParseError(ParseErrorKind::EmptyRole, tl, tc, "empty role label");
      out.push_back({TokKind::Role, s, tl, tc});
    } else {
      std::string s;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
             text[i] != '(' && text[i] != ')' && text[i] != '/' &&
             text[i] != ':' && text[i] != '"') {
        s += text[i];
        advance(text[i]);
        ++i;
      }
      out.push_back({TokKind::Atom, s, tl, tc});
    }
  }
  out.push_back({TokKind::End, "", line, col});
  return out;
}

// Classic AMR variable shape: one lowercase letter plus optional digits.
bool looks_like_variable(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

bool is_inverse_role(const std::string& role) {
  return role.size() > 3 && role.ends_with("-of");
}

std::string invert_role(const std::string& role) {
  if (is_inverse_role(role)) return role.substr(0, role.size() - 3);
  return role + "-of";
}

class Parser {
 public:
  Parser(std::vector<Token> toks) : toks_(std::move(toks)) {
    // Pre-scan variable definitions so bare re-mentions can be told apart
    // from attribute constants.
    for (std::size_t i = 0; i + 1 < toks_.size(); ++i) {
      if (toks_[i].kind == TokKind::LParen && toks_[i + 1].kind == TokKind::Atom)
        declared_.insert(toks_[i + 1].text);
    }
  }

  AmrGraph run() {
    if (peek().kind != TokKind::LParen)
      throw err(ParseErrorKind::Syntax, "expected '('");
    g_.root = parse_node();
    if (peek().kind != TokKind::End)
      throw err(ParseErrorKind::UnbalancedParens, "trailing input after graph");
    validate(g_);
    return std::move(g_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  ParseError err(ParseErrorKind kind, const std::string& msg) const {
    return ParseError(kind, peek().line, peek().col, msg);
  }

  // '(' var '/' concept relation* ')'; returns the variable.
  std::string parse_node() {
    take();  // '('
    if (peek().kind != TokKind::Atom)
      throw err(ParseErrorKind::Syntax, "expected variable after '('");
    Token vt = take();
    if (defined_.count(vt.text))
      throw ParseError(ParseErrorKind::DuplicateVariableDefinition, vt.line,
                       vt.col, "variable '" + vt.text + "' defined twice");
    if (peek().kind != TokKind::Slash)
      throw err(ParseErrorKind::Syntax, "expected '/' after variable");
    take();
    if (peek().kind != TokKind::Atom)
      throw err(ParseErrorKind::Syntax, "expected concept after '/'");
    Token ct = take();
    defined_.insert(vt.text);
    g_.nodes.push_back({vt.text, ct.text});
    while (peek().kind == TokKind::Role) {
      Token role = take();
      parse_relation(vt.text, role);
    }
    if (peek().kind == TokKind::End)
      throw err(ParseErrorKind::UnbalancedParens, "missing ')'");
    if (peek().kind != TokKind::RParen)
      throw err(ParseErrorKind::Syntax, "expected ')' or relation");
    take();
    return vt.text;
  }

  void add_edge(const std::string& src, const std::string& role,
                const std::string& tgt) {
    if (is_inverse_role(role))
      g_.edges.push_back({tgt, invert_role(role), src});
    else
      g_.edges.push_back({src, role, tgt});
  }

  void parse_relation(const std::string& src, const Token& role) {
    const Token& t = peek();
    switch (t.kind) {
      case TokKind::LParen:
        add_edge(src, role.text, parse_node());
        break;
      case TokKind::Str:
        g_.attributes.push_back({src, role.text, take().text, true});
        break;
      case TokKind::Atom: {
        Token a = take();
        if (declared_.count(a.text)) {
          add_edge(src, role.text, a.text);
        } else if (looks_like_variable(a.text)) {
          throw ParseError(ParseErrorKind::UnknownVariableReference, a.line,
                           a.col, "variable '" + a.text + "' is never defined");
        } else {
          g_.attributes.push_back({src, role.text, a.text, false});
        }
        break;
      }
      case TokKind::RParen:
      case TokKind::End:
        throw err(ParseErrorKind::Syntax, "missing value after role");
      default:
        throw err(ParseErrorKind::Syntax, "unexpected token after role");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::unordered_set<std::string> declared_;
  std::unordered_set<std::string> defined_;
  AmrGraph g_;
};

struct Incidence {
  std::vector<int> out, in;  // edge indices in input order
};

std::unordered_map<std::string, Incidence> incidence(const AmrGraph& g) {
  std::unordered_map<std::string, Incidence> inc;
  for (const auto& n : g.nodes) inc[n.var];
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    inc[g.edges[i].src].out.push_back(static_cast<int>(i));
    inc[g.edges[i].tgt].in.push_back(static_cast<int>(i));
  }
  return inc;
}

}  // namespace

AmrGraph parse_penman(const std::string& text, int line0) {
  return Parser(tokenize(text, line0)).run();
}

std::string serialize_penman(const AmrGraph& g) {
  validate(g);

  // Spanning tree preferring forward edges; an edge is inverted only when its
  // source is unreachable any other way.
  std::unordered_set<std::string> discovered{g.root};
  std::vector<int> tree(g.edges.size(), 0);  // 0 none, 1 forward, -1 inverted
  bool grew = true;
  while (discovered.size() < g.nodes.size() && grew) {
    grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        if (discovered.count(e.src) && !discovered.count(e.tgt)) {
          tree[i] = 1;
          discovered.insert(e.tgt);
          grew = true;
        }
      }
    }
    grew = false;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      if (discovered.count(e.tgt) && !discovered.count(e.src)) {
        tree[i] = -1;
        discovered.insert(e.src);
        grew = true;
        break;
      }
    }
  }

  auto inc = incidence(g);
  std::unordered_map<std::string, std::vector<int>> attrs;
  for (std::size_t i = 0; i < g.attributes.size(); ++i)
    attrs[g.attributes[i].src].push_back(static_cast<int>(i));

  std::ostringstream out;
  std::function<void(const std::string&)> emit = [&](const std::string& v) {
    out << '(' << v << " / " << g.concept_of(v);
    for (int ai : attrs[v]) {
      const auto& a = g.attributes[ai];
      out << " :" << a.role << ' ';
      if (a.quoted)
        out << '"' << a.value << '"';
      else
        out << a.value;
    }
    // children and references in input edge order
    std::vector<int> incident = inc[v].out;
    incident.insert(incident.end(), inc[v].in.begin(), inc[v].in.end());
    std::sort(incident.begin(), incident.end());
    for (int ei : incident) {
      const auto& e = g.edges[ei];
      if (e.src == v) {
        if (tree[ei] == 1) {
          out << " :" << e.role << ' ';
          emit(e.tgt);
        } else if (tree[ei] == 0) {
          out << " :" << e.role << ' ' << e.tgt;  // re-mention
        }
      } else if (tree[ei] == -1) {
        out << " :" << invert_role(e.role) << ' ';
        emit(e.src);
      }
    }
    out << ')';
  };
  emit(g.root);
  return out.str();
}

TripleSet triples(const AmrGraph& g) {
  TripleSet ts;
  for (const auto& n : g.nodes)
    ts.push_back({TripleKind::Instance, n.var, "instance", n.concept_label});
  for (const auto& e : g.edges)
    ts.push_back({TripleKind::Relation, e.src, e.role, e.tgt});
  for (const auto& a : g.attributes)
    ts.push_back({TripleKind::Attribute, a.src, a.role, a.value});
  return ts;
}

std::vector<std::string> canonical_order(const AmrGraph& g) {
  auto inc = incidence(g);
  std::vector<std::string> order;
  std::unordered_set<std::string> seen;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    if (!seen.insert(v).second) return;
    order.push_back(v);
    auto by_role_concept = [&](bool outgoing) {
      std::vector<int> idx = outgoing ? inc[v].out : inc[v].in;
      std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        const auto& ea = g.edges[a];
        const auto& eb = g.edges[b];
        const std::string& ca = g.concept_of(outgoing ? ea.tgt : ea.src);
        const std::string& cb = g.concept_of(outgoing ? eb.tgt : eb.src);
        return std::tie(ea.role, ca) < std::tie(eb.role, cb);
      });
      return idx;
    };
    for (int ei : by_role_concept(true)) visit(g.edges[ei].tgt);
    for (int ei : by_role_concept(false)) visit(g.edges[ei].src);
  };
  visit(g.root);
  return order;
}

TripleSet canonicalize(const AmrGraph& g) {
  validate(g);
  auto order = canonical_order(g);
  std::unordered_map<std::string, std::string> rename;
  for (std::size_t i = 0; i < order.size(); ++i)
    rename[order[i]] = "v" + std::to_string(i);
  TripleSet ts = triples(g);
  for (auto& t : ts) {
    t.a = rename.at(t.a);
    if (t.kind == TripleKind::Relation) t.b = rename.at(t.b);
  }
  std::sort(ts.begin(), ts.end());
  return ts;
}

std::vector<std::string> CorpusRecord::tokens() const {
  std::vector<std::string> toks;
  auto it = meta.find("tok");
  if (it == meta.end()) return toks;
  std::istringstream in(it->second);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

std::string CorpusRecord::id() const {
  auto it = meta.find("id");
  return it == meta.end() ? "" : it->second;
}

std::vector<CorpusBlock> split_corpus(const std::string& text) {
  std::vector<CorpusBlock> blocks;
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  std::size_t i = 0;
  while (i < lines.size()) {
    while (i < lines.size() &&
           lines[i].find_first_not_of(" \t\r") == std::string::npos)
      ++i;
    if (i >= lines.size()) break;
    CorpusBlock blk;
    blk.line = static_cast<int>(i + 1);
    while (i < lines.size() && lines[i].starts_with("#")) {
      const std::string& l = lines[i];
      if (l.starts_with("# ::")) {
        std::string rest = l.substr(4);
        auto sp = rest.find(' ');
        std::string key = rest.substr(0, sp);
        std::string val = sp == std::string::npos ? "" : rest.substr(sp + 1);
        blk.meta[key] = val;
      }
      ++i;
    }
    blk.expr_line = static_cast<int>(i + 1);
    while (i < lines.size() &&
           lines[i].find_first_not_of(" \t\r") != std::string::npos) {
      blk.expr += lines[i];
      blk.expr += '\n';
      ++i;
    }
    blocks.push_back(std::move(blk));
  }
  return blocks;
}

std::vector<CorpusRecord> read_corpus(const std::string& text) {
  std::vector<CorpusRecord> records;
  for (auto& blk : split_corpus(text)) {
    CorpusRecord rec;
    rec.meta = std::move(blk.meta);
    rec.line = blk.line;
    rec.graph = parse_penman(blk.expr, blk.expr_line);
    records.push_back(std::move(rec));
  }
  return records;
}

std::string write_corpus(const std::vector<CorpusRecord>& records) {
  std::ostringstream out;
  bool first = true;
  for (const auto& rec : records) {
    if (!first) out << '\n';
    first = false;
    for (const auto& [k, v] : rec.meta) out << "# ::" << k << ' ' << v << '\n';
    out << serialize_penman(rec.graph) << '\n';
  }
  return out.str();
}

}  // namespace amrgec
