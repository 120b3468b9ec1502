#include "amrsumm/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "amrsumm/penman.hpp"

namespace amrsumm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

struct Reader {
  std::istream& in;
  const std::string& name;
  int lineno = 0;

  Reader(std::istream& stream, const std::string& corpus_name) : in(stream), name(corpus_name) {}

  std::vector<Document> docs;
  std::set<std::string> doc_ids;
  bool in_summary = false;

  // pending sentence block
  bool snt_open = false;
  int snt_line = 0;
  std::vector<std::string> tokens;
  std::vector<Alignment> alignments;
  std::string penman;

  [[noreturn]] void fail(const std::string& msg) const {
    std::string where = name + ":" + std::to_string(lineno);
    if (!docs.empty()) where += " (doc '" + docs.back().id + "')";
    throw CorpusError(where + ": " + msg);
  }

  void flush_sentence() {
    if (!snt_open) return;
    if (trim(penman).empty()) fail("sentence block at line " + std::to_string(snt_line) + " has no graph");
    Sentence s;
    s.tokens = tokens;
    try {
      s.graph = parse_penman(penman);
    } catch (const ParseError& e) {
      fail(std::string("bad graph: ") + e.what());
    }
    s.alignments = alignments;
    for (const Alignment& a : s.alignments) {
      if (s.graph.index_of(a.var) < 0) fail("alignment names unknown variable '" + a.var + "'");
      if (a.start < 0 || a.end <= a.start || a.end > static_cast<int>(s.tokens.size()))
        fail("alignment span " + std::to_string(a.start) + "-" + std::to_string(a.end) +
             " outside sentence of " + std::to_string(s.tokens.size()) + " tokens");
    }
    if (in_summary)
      docs.back().summary.push_back(std::move(s));
    else
      docs.back().sentences.push_back(std::move(s));
    snt_open = false;
    tokens.clear();
    alignments.clear();
    penman.clear();
  }

  void directive(const std::string& body) {
    if (body.rfind("doc", 0) == 0 && (body.size() == 3 || is_space_at(body, 3))) {
      flush_sentence();
      std::string id = trim(body.substr(3));
      if (id.empty()) fail("::doc needs an id");
      if (!doc_ids.insert(id).second) fail("duplicate document id '" + id + "'");
      docs.push_back(Document{id, {}, {}});
      in_summary = false;
    } else if (body.rfind("snt", 0) == 0 && (body.size() == 3 || is_space_at(body, 3))) {
      if (docs.empty()) fail("::snt before any ::doc");
      flush_sentence();
      snt_open = true;
      snt_line = lineno;
      tokens = split_ws(body.size() > 3 ? body.substr(4) : "");
    } else if (body.rfind("align", 0) == 0 && (body.size() == 5 || is_space_at(body, 5))) {
      if (!snt_open) fail("::align outside a sentence block");
      std::vector<std::string> parts = split_ws(body.substr(5));
      if (parts.size() != 2) fail("::align needs '<var> <start>-<end>'");
      std::size_t dash = parts[1].find('-', 1);  // allow negative start to fail later
      if (dash == std::string::npos) fail("::align span needs '<start>-<end>'");
      Alignment a;
      a.var = parts[0];
      try {
        a.start = std::stoi(parts[1].substr(0, dash));
        a.end = std::stoi(parts[1].substr(dash + 1));
      } catch (const std::exception&) {
        fail("::align span is not numeric");
      }
      alignments.push_back(a);
    } else if (trim(body) == "summary") {
      if (docs.empty()) fail("::summary before any ::doc");
      flush_sentence();
      if (in_summary) fail("repeated ::summary");
      in_summary = true;
    } else {
      std::vector<std::string> parts = split_ws(body);
      fail("unknown directive '# ::" + (parts.empty() ? "" : parts.front()) + "'");
    }
  }

  static bool is_space_at(const std::string& s, std::size_t i) {
    return i < s.size() && (s[i] == ' ' || s[i] == '\t');
  }

  std::vector<Document> run() {
    std::string line;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string t = trim(line);
      if (t.empty()) {
        if (snt_open && !trim(penman).empty()) flush_sentence();
        continue;
      }
      if (t[0] == '#') {
        std::string body = trim(t.substr(1));
        if (body.rfind("::", 0) == 0) {
          directive(trim(body.substr(2)));
        } else {
          if (snt_open && !trim(penman).empty()) flush_sentence();
        }
        continue;
      }
      if (!snt_open) fail("graph text outside a sentence block");
      penman += line;
      penman += '\n';
    }
    ++lineno;
    flush_sentence();
    for (const Document& d : docs)
      if (d.sentences.empty()) throw CorpusError(name + ": document '" + d.id + "' has no sentences");
    return std::move(docs);
  }
};

}  // namespace

std::vector<Document> parse_corpus(std::istream& in, const std::string& name) {
  Reader r(in, name);
  return r.run();
}

std::vector<Document> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file '" + path + "'");
  return parse_corpus(in, path);
}

namespace {

void write_sentence(std::ostringstream& out, const Sentence& s) {
  out << "# ::snt";
  for (const std::string& t : s.tokens) out << ' ' << t;
  out << '\n';
  for (const Alignment& a : s.alignments)
    out << "# ::align " << a.var << ' ' << a.start << '-' << a.end << '\n';
  out << serialize_penman(s.graph) << "\n\n";
}

}  // namespace

std::string serialize_corpus(const std::vector<Document>& docs) {
  std::ostringstream out;
  for (const Document& d : docs) {
    out << "# ::doc " << d.id << '\n';
    for (const Sentence& s : d.sentences) write_sentence(out, s);
    if (!d.summary.empty()) {
      out << "# ::summary\n";
      for (const Sentence& s : d.summary) write_sentence(out, s);
    }
  }
  return out.str();
}

}  // namespace amrsumm
