#include "amrsumm/penman.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <vector>

namespace amrsumm {

namespace {

struct Token {
  enum Kind { lparen, rparen, slash, role, atom, quoted, end };
  Kind kind = end;
  std::string text;  // role text without ':', quoted text without quotes
  std::size_t offset = 0;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> toks;
  std::size_t i = 0;
  auto is_delim = [](char c) { return c == '(' || c == ')' || c == '/' || c == '"' || is_space(c); };
  while (i < text.size()) {
    char c = text[i];
    if (is_space(c)) {
      ++i;
    } else if (c == '(') {
      toks.push_back({Token::lparen, "(", i++});
    } else if (c == ')') {
      toks.push_back({Token::rparen, ")", i++});
    } else if (c == '/') {
      toks.push_back({Token::slash, "/", i++});
    } else if (c == '"') {
      std::size_t start = i++;
      std::string out;
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '\\' && i + 1 < text.size()) {
          out.push_back(text[i + 1]);
          i += 2;
        } else if (d == '"') {
          closed = true;
          ++i;
          break;
        } else {
          out.push_back(d);
          ++i;
        }
      }
      if (!closed) throw ParseError("unterminated string literal", start);
      toks.push_back({Token::quoted, out, start});
    } else {
      std::size_t start = i;
      while (i < text.size() && !is_delim(text[i])) ++i;
      std::string word(text.substr(start, i - start));
      if (word[0] == ':') {
        if (word.size() == 1) throw ParseError("empty relation label", start);
        toks.push_back({Token::role, word.substr(1), start});
      } else {
        toks.push_back({Token::atom, word, start});
      }
    }
  }
  toks.push_back({Token::end, "", text.size()});
  return toks;
}

bool is_number(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  return digits > 0 && i == s.size();
}

// Bare atoms that are constants rather than variable references.
bool is_symbol_const(const std::string& s) {
  return s == "-" || s == "+" || s == "imperative" || s == "expressive" || s == "interrogative";
}

struct Parser {
  const std::vector<Token>& toks;
  std::size_t pos = 0;
  AmrGraph g;
  int next_const = 0;
  std::set<std::string> introduced;
  struct Pending {
    std::size_t edge;
    std::string atom;
    std::size_t offset;
  };
  std::vector<Pending> pending;

  explicit Parser(const std::vector<Token>& t) : toks(t) {}

  const Token& peek() const { return toks[pos]; }
  Token take() { return toks[pos++]; }

  std::string fresh_const() { return "_c" + std::to_string(next_const++); }

  std::string parse_node() {
    Token lp = take();
    if (lp.kind != Token::lparen) throw ParseError("expected '('", lp.offset);
    Token var_tok = take();
    if (var_tok.kind != Token::atom) throw ParseError("expected variable name", var_tok.offset);
    const std::string var = var_tok.text;
    if (introduced.count(var))
      throw ParseError("variable '" + var + "' introduced twice", var_tok.offset);
    Token sl = take();
    if (sl.kind != Token::slash) throw ParseError("expected '/' after variable", sl.offset);
    Token con = take();
    if (con.kind != Token::atom && con.kind != Token::quoted)
      throw ParseError("expected concept label", con.offset);
    introduced.insert(var);
    g.nodes.push_back({var, con.text, NodeKind::variable});
    while (peek().kind == Token::role) {
      Token role = take();
      const Token& v = peek();
      if (v.kind == Token::lparen) {
        std::string child = parse_node();
        g.edges.push_back({var, child, role.text});
      } else if (v.kind == Token::quoted) {
        take();
        std::string cv = fresh_const();
        g.nodes.push_back({cv, v.text, NodeKind::string_constant});
        g.edges.push_back({var, cv, role.text});
      } else if (v.kind == Token::atom) {
        take();
        if (is_number(v.text)) {
          std::string cv = fresh_const();
          g.nodes.push_back({cv, v.text, NodeKind::numeric_constant});
          g.edges.push_back({var, cv, role.text});
        } else if (is_symbol_const(v.text)) {
          std::string cv = fresh_const();
          g.nodes.push_back({cv, v.text, NodeKind::symbol_constant});
          g.edges.push_back({var, cv, role.text});
        } else {
          g.edges.push_back({var, v.text, role.text});
          pending.push_back({g.edges.size() - 1, v.text, v.offset});
        }
      } else {
        throw ParseError("expected a value after ':" + role.text + "'", v.offset);
      }
    }
    Token rp = take();
    if (rp.kind != Token::rparen) throw ParseError("expected ')'", rp.offset);
    return var;
  }
};

std::map<std::string, int> var_index(const AmrGraph& g) {
  std::map<std::string, int> idx;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) idx[g.nodes[i].var] = static_cast<int>(i);
  return idx;
}

int lookup(const std::map<std::string, int>& idx, const std::string& var) {
  auto it = idx.find(var);
  if (it == idx.end()) throw Error("edge references unknown variable '" + var + "'");
  return it->second;
}

void check_acyclic(const AmrGraph& g, std::size_t offset) {
  const std::map<std::string, int> idx = var_index(g);
  const int n = static_cast<int>(g.nodes.size());
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<int>> out(n);
  for (const AmrEdge& e : g.edges) {
    int u = lookup(idx, e.source), v = lookup(idx, e.target);
    out[u].push_back(v);
    ++indeg[v];
  }
  std::queue<int> q;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) q.push(i);
  int seen = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    ++seen;
    for (int v : out[u])
      if (--indeg[v] == 0) q.push(v);
  }
  if (seen != n) throw ParseError("cycle after inverse-relation normalization", offset);
}

void check_connected(const AmrGraph& g) {
  const std::map<std::string, int> idx = var_index(g);
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const AmrEdge& e : g.edges) {
    int u = lookup(idx, e.source), v = lookup(idx, e.target);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(idx.at(g.root));
  seen[idx.at(g.root)] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  for (int i = 0; i < n; ++i)
    if (!seen[i]) throw ParseError("node '" + g.nodes[i].var + "' disconnected from root", 0);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

AmrGraph parse_penman(std::string_view text) {
  const std::vector<Token> toks = lex(text);
  Parser p(toks);
  p.parse_node();
  if (p.peek().kind != Token::end)
    throw ParseError("trailing content after expression", p.peek().offset);
  AmrGraph g = std::move(p.g);
  for (const Parser::Pending& pe : p.pending) {
    if (!p.introduced.count(pe.atom))
      throw ParseError("reference to undefined variable '" + pe.atom + "'", pe.offset);
  }
  for (AmrEdge& e : g.edges) {
    if (e.relation.size() > 3 && e.relation.ends_with("-of")) {
      std::swap(e.source, e.target);
      e.relation.erase(e.relation.size() - 3);
    }
  }
  g.root = g.nodes.front().var;
  check_acyclic(g, 0);
  check_connected(g);
  return g;
}

std::string serialize_penman(const AmrGraph& g) {
  if (g.nodes.empty()) throw Error("cannot serialize an empty graph");
  const std::map<std::string, int> idx = var_index(g);
  auto root_it = idx.find(g.root);
  if (root_it == idx.end()) throw Error("root variable '" + g.root + "' missing from graph");
  if (g.nodes[root_it->second].kind != NodeKind::variable)
    throw Error("root must be a variable node");
  check_acyclic(g, 0);

  const int n = static_cast<int>(g.nodes.size());
  struct Child {
    std::string rel;  // emitted relation, ":x" or ":x-of"
    int node;
    int edge;
  };
  std::vector<std::vector<Child>> adj(n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const AmrEdge& e = g.edges[i];
    int u = lookup(idx, e.source), v = lookup(idx, e.target);
    adj[u].push_back({":" + e.relation, v, static_cast<int>(i)});
    adj[v].push_back({":" + e.relation + "-of", u, static_cast<int>(i)});
  }
  for (auto& lst : adj) {
    std::stable_sort(lst.begin(), lst.end(), [&](const Child& a, const Child& b) {
      const AmrNode& na = g.nodes[a.node];
      const AmrNode& nb = g.nodes[b.node];
      return std::tie(a.rel, na.concept_label, na.var) < std::tie(b.rel, nb.concept_label, nb.var);
    });
  }

  std::vector<char> used(g.edges.size(), 0), visited(n, 0);
  std::ostringstream out;
  auto emit = [&](auto&& self, int v) -> void {
    visited[v] = 1;
    const AmrNode& nd = g.nodes[v];
    out << '(' << nd.var << " / " << nd.concept_label;
    for (const Child& c : adj[v]) {
      if (used[c.edge]) continue;
      used[c.edge] = 1;
      out << ' ' << c.rel << ' ';
      if (visited[c.node]) {
        out << g.nodes[c.node].var;
      } else if (g.nodes[c.node].kind == NodeKind::variable) {
        self(self, c.node);
      } else {
        visited[c.node] = 1;
        const AmrNode& cn = g.nodes[c.node];
        out << (cn.kind == NodeKind::string_constant ? quote(cn.concept_label)
                                                     : cn.concept_label);
      }
    }
    out << ')';
  };
  emit(emit, root_it->second);
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) throw Error("edge not reachable from root: " + g.edges[i].source);
  return out.str();
}

}  // namespace amrsumm
