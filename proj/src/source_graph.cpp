#include "amrsumm/source_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace amrsumm {

namespace {

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') c = '_';
  return out;
}

}  // namespace

void SourceEdge::recompute_top_labels() {
  if (expanded) {
    top_labels = {"null"};
    return;
  }
  std::vector<std::pair<int, std::string>> items;
  for (const auto& [label, count] : label_histogram) items.emplace_back(-count, label);
  std::sort(items.begin(), items.end());
  top_labels.clear();
  for (std::size_t i = 0; i < items.size() && i < 2; ++i) top_labels.push_back(items[i].second);
}

int SourceGraph::node_index(std::string_view label) const {
  auto it = label_to_index_.find(std::string(label));
  return it == label_to_index_.end() ? -1 : it->second;
}

int SourceGraph::edge_index(int source, int target) const {
  auto it = pair_to_edge_.find({source, target});
  return it == pair_to_edge_.end() ? -1 : it->second;
}

const SourceEdge* SourceGraph::find_edge(int source, int target) const {
  int i = edge_index(source, target);
  return i < 0 ? nullptr : &edges[i];
}

void SourceGraph::rebuild_lookup() {
  label_to_index_.clear();
  pair_to_edge_.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!label_to_index_.emplace(nodes[i].label, static_cast<int>(i)).second)
      throw Error("duplicate node label '" + nodes[i].label + "'");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const SourceEdge& e = edges[i];
    if (!pair_to_edge_.emplace(std::pair(e.source, e.target), static_cast<int>(i)).second)
      throw Error("duplicate edge " + std::to_string(e.source) + "->" + std::to_string(e.target));
  }
}

// Lookup maintenance hook for functions that assemble graphs field by field.
class SourceGraphBuilder {
 public:
  static void finalize(SourceGraph& sg) { sg.rebuild_lookup(); }
};

namespace {

struct EdgeIdx {
  std::vector<std::vector<int>> out, in;  // node index -> edge indices
};

EdgeIdx index_edges(const AmrGraph& g) {
  EdgeIdx ei;
  ei.out.resize(g.nodes.size());
  ei.in.resize(g.nodes.size());
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    int u = g.index_of(g.edges[k].source);
    int v = g.index_of(g.edges[k].target);
    if (u < 0 || v < 0) throw Error("edge references unknown variable");
    ei.out[u].push_back(static_cast<int>(k));
    ei.in[v].push_back(static_cast<int>(k));
  }
  return ei;
}

void drop_node(AmrGraph& g, const std::string& var) {
  g.nodes.erase(std::find_if(g.nodes.begin(), g.nodes.end(),
                             [&](const AmrNode& n) { return n.var == var; }));
}

// Collapses one flat fragment, returns false when none matches.
bool collapse_one(AmrGraph& g, std::unordered_map<std::string, std::string>* remap,
                  std::set<std::string>& name_heads) {
  EdgeIdx ei = index_edges(g);
  for (std::size_t h = 0; h < g.nodes.size(); ++h) {
    AmrNode& head = g.nodes[h];
    if (head.concept_label != "name" && head.concept_label != "date-entity") continue;
    if (head.collapsed_name || head.collapsed_date) continue;
    bool flat = true;
    for (int k : ei.out[h]) {
      int c = g.index_of(g.edges[k].target);
      if (!ei.out[c].empty() || ei.in[c].size() != 1) {
        flat = false;
        break;
      }
    }
    if (!flat) continue;

    std::vector<std::pair<std::string, std::string>> parts;  // relation, child concept
    std::vector<std::string> child_vars;
    for (int k : ei.out[h]) {
      const AmrEdge& e = g.edges[k];
      parts.emplace_back(e.relation, sanitize(g.find(e.target)->concept_label));
      child_vars.push_back(e.target);
    }
    std::stable_sort(parts.begin(), parts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string label = head.concept_label;
    for (const auto& [rel, child] : parts) label += "_" + rel + "_" + child;

    const std::string head_var = head.var;
    const bool is_name = head.concept_label == "name";
    head.concept_label = label;
    (is_name ? head.collapsed_name : head.collapsed_date) = true;
    if (is_name) name_heads.insert(head_var);

    std::erase_if(g.edges, [&](const AmrEdge& e) { return e.source == head_var; });
    for (const std::string& cv : child_vars) {
      if (g.root == cv) g.root = head_var;
      drop_node(g, cv);
      if (remap) (*remap)[cv] = head_var;
    }
    return true;
  }
  return false;
}

// Merges one freshly collapsed name node into its lone parent.
bool merge_one(AmrGraph& g, std::unordered_map<std::string, std::string>* remap,
               std::set<std::string>& name_heads) {
  for (auto it = name_heads.begin(); it != name_heads.end();) {
    const std::string var = *it;
    int n = g.index_of(var);
    if (n < 0) {  // absorbed into another fragment meanwhile
      it = name_heads.erase(it);
      continue;
    }
    EdgeIdx ei = index_edges(g);
    if (!ei.out[n].empty() || ei.in[n].size() != 1) {
      ++it;
      continue;
    }
    const AmrEdge in_edge = g.edges[ei.in[n][0]];
    int p = g.index_of(in_edge.source);
    if (ei.out[p].size() != 1) {
      ++it;
      continue;
    }
    g.nodes[p].concept_label += "_" + g.nodes[n].concept_label;
    g.nodes[p].collapsed_name = true;
    std::erase_if(g.edges, [&](const AmrEdge& e) { return e.target == var; });
    if (g.root == var) g.root = in_edge.source;
    drop_node(g, var);
    if (remap) {
      for (auto& [from, to] : *remap)
        if (to == var) to = in_edge.source;
      (*remap)[var] = in_edge.source;
    }
    name_heads.erase(it);
    return true;
  }
  return false;
}

}  // namespace

AmrGraph collapse_fragments(const AmrGraph& g,
                            std::unordered_map<std::string, std::string>* var_remap) {
  AmrGraph out = g;
  std::set<std::string> name_heads;
  for (;;) {
    if (collapse_one(out, var_remap, name_heads)) continue;
    if (merge_one(out, var_remap, name_heads)) continue;
    break;
  }
  return out;
}

Sentence collapse_sentence(const Sentence& s) {
  Sentence out;
  out.tokens = s.tokens;
  std::unordered_map<std::string, std::string> remap;
  out.graph = collapse_fragments(s.graph, &remap);
  for (const Alignment& a : s.alignments) {
    std::string v = a.var;
    while (remap.count(v)) v = remap.at(v);
    if (out.graph.index_of(v) >= 0) out.alignments.push_back({v, a.start, a.end});
  }
  return out;
}

namespace {

std::vector<int> sentence_depths(const AmrGraph& g) {
  const int n = static_cast<int>(g.nodes.size());
  std::vector<std::vector<int>> adj(n);
  for (const AmrEdge& e : g.edges) {
    int u = g.index_of(e.source), v = g.index_of(e.target);
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> depth(n, 0);
  std::vector<char> seen(n, 0);
  int r = g.index_of(g.root);
  if (r < 0) throw Error("sentence graph root missing");
  std::queue<int> q;
  q.push(r);
  seen[r] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        depth[v] = depth[u] + 1;
        q.push(v);
      }
  }
  return depth;
}

}  // namespace

SourceGraph merge_graphs(const std::vector<Sentence>& sentences) {
  if (sentences.empty()) throw Error("cannot merge an empty sentence list");
  SourceGraph sg;
  sg.num_sentences = static_cast<int>(sentences.size());
  sg.nodes.push_back(SourceNode{"ROOT", {}, {}, false, false});
  std::set<int> roots;

  auto node_for = [&sg](const std::string& label) {
    if (label == "ROOT") throw Error("concept label 'ROOT' is reserved");
    auto it = sg.label_to_index_.find(label);
    if (it != sg.label_to_index_.end()) return it->second;
    int idx = static_cast<int>(sg.nodes.size());
    sg.nodes.push_back(SourceNode{label, {}, {}, false, false});
    sg.label_to_index_.emplace(label, idx);
    return idx;
  };
  auto edge_for = [&sg](int u, int v) {
    auto it = sg.pair_to_edge_.find({u, v});
    if (it != sg.pair_to_edge_.end()) return it->second;
    int idx = static_cast<int>(sg.edges.size());
    SourceEdge e;
    e.source = u;
    e.target = v;
    sg.edges.push_back(e);
    sg.pair_to_edge_.emplace(std::pair(u, v), idx);
    return idx;
  };
  sg.label_to_index_.emplace("ROOT", 0);

  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const Sentence& s = sentences[si];
    const AmrGraph& g = s.graph;
    if (g.nodes.empty()) throw Error("sentence " + std::to_string(si) + " has an empty graph");
    const std::vector<int> depth = sentence_depths(g);

    std::map<std::string, int> span_len;
    std::map<std::string, std::vector<AlignedSpan>> spans;
    for (const Alignment& a : s.alignments) {
      int len = a.end - a.start;
      if (len > span_len[a.var]) span_len[a.var] = len;
      spans[a.var].push_back({static_cast<int>(si), a.start, a.end});
    }

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const AmrNode& n = g.nodes[i];
      int idx = node_for(sanitize(n.concept_label));
      SourceNode& sn = sg.nodes[idx];
      int sl = span_len.count(n.var) ? span_len[n.var] : 0;
      sn.mentions.push_back({static_cast<int>(si), depth[static_cast<int>(i)], sl});
      if (spans.count(n.var))
        sn.spans.insert(sn.spans.end(), spans[n.var].begin(), spans[n.var].end());
      sn.is_named_entity = sn.is_named_entity || n.collapsed_name;
      sn.is_date_entity = sn.is_date_entity || n.collapsed_date;
    }
    for (const AmrEdge& e : g.edges) {
      int u = node_for(sanitize(g.find(e.source)->concept_label));
      int v = node_for(sanitize(g.find(e.target)->concept_label));
      if (u == v) continue;  // same-label endpoints merged; self-loops dropped
      SourceEdge& se = sg.edges[edge_for(u, v)];
      ++se.label_histogram[e.relation];
      se.mention_sentences.push_back(static_cast<int>(si));
    }
    int r = node_for(sanitize(g.find(g.root)->concept_label));
    sg.edges[edge_for(0, r)].mention_sentences.push_back(static_cast<int>(si));
    roots.insert(r);
  }

  sg.sentence_roots.assign(roots.begin(), roots.end());
  for (SourceEdge& e : sg.edges) e.recompute_top_labels();
  return sg;
}

SourceGraph merge_graphs(const std::vector<AmrGraph>& graphs) {
  std::vector<Sentence> sentences(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) sentences[i].graph = graphs[i];
  return merge_graphs(sentences);
}

Expansion expansion_from_string(std::string_view name) {
  if (name == "none") return Expansion::none;
  if (name == "sentence") return Expansion::sentence;
  if (name == "document") return Expansion::document;
  throw ConfigError("unknown expansion level '" + std::string(name) + "'");
}

std::string_view to_string(Expansion e) {
  switch (e) {
    case Expansion::none: return "none";
    case Expansion::sentence: return "sentence";
    case Expansion::document: return "document";
  }
  return "none";
}

SourceGraph expand(const SourceGraph& sg, Expansion level) {
  SourceGraph out = sg;
  if (level == Expansion::none) return out;
  const int n = static_cast<int>(out.nodes.size());
  std::vector<std::set<int>> sents(n);
  for (int i = 1; i < n; ++i)
    for (const Mention& m : out.nodes[i].mentions) sents[i].insert(m.sentence);

  auto co_mentioned = [&](int i, int j) {
    const std::set<int>& a = sents[i];
    const std::set<int>& b = sents[j];
    const std::set<int>& small = a.size() <= b.size() ? a : b;
    const std::set<int>& big = a.size() <= b.size() ? b : a;
    for (int s : small)
      if (big.count(s)) return true;
    return false;
  };

  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      if (i == j || out.edge_index(i, j) >= 0) continue;
      if (level == Expansion::sentence && !co_mentioned(i, j)) continue;
      SourceEdge e;
      e.source = i;
      e.target = j;
      e.expanded = true;
      e.top_labels = {"null"};
      out.edges.push_back(e);
    }
  }
  SourceGraphBuilder::finalize(out);
  return out;
}

CoverageResult coverage(const SourceGraph& sg, const std::vector<AmrGraph>& gold) {
  if (gold.empty()) throw Error("coverage needs at least one gold graph");
  std::vector<AmrGraph> collapsed;
  collapsed.reserve(gold.size());
  for (const AmrGraph& g : gold) collapsed.push_back(collapse_fragments(g));
  const SourceGraph gsg = merge_graphs(collapsed);

  std::set<std::tuple<std::string, std::string, std::string>> triples;
  for (const SourceEdge& e : gsg.edges) {
    if (e.source == 0) continue;
    for (const auto& [rel, count] : e.label_histogram)
      triples.insert({gsg.nodes[e.source].label, rel, gsg.nodes[e.target].label});
  }
  if (triples.empty()) throw Error("gold graphs have no edges");

  CoverageResult r;
  r.gold_edges = static_cast<int>(triples.size());
  for (const auto& [src, rel, tgt] : triples) {
    int u = sg.node_index(src);
    int v = sg.node_index(tgt);
    const SourceEdge* e = (u >= 0 && v >= 0) ? sg.find_edge(u, v) : nullptr;
    if (!e) continue;
    ++r.unlabeled_covered;
    if (e->label_histogram.count(rel)) ++r.labeled_covered;
  }
  r.labeled = static_cast<double>(r.labeled_covered) / r.gold_edges;
  r.unlabeled = static_cast<double>(r.unlabeled_covered) / r.gold_edges;
  return r;
}

SourceGraph build_document_graph(const Document& doc, Expansion level) {
  std::vector<Sentence> collapsed;
  collapsed.reserve(doc.sentences.size());
  for (const Sentence& s : doc.sentences) collapsed.push_back(collapse_sentence(s));
  return expand(merge_graphs(collapsed), level);
}

SourceGraph build_gold_graph(const Document& doc) {
  if (doc.summary.empty()) throw CorpusError("document '" + doc.id + "' has no summary");
  std::vector<Sentence> collapsed;
  collapsed.reserve(doc.summary.size());
  for (const Sentence& s : doc.summary) collapsed.push_back(collapse_sentence(s));
  return merge_graphs(collapsed);
}

std::string to_jsonl(const SourceGraph& sg) {
  using nlohmann::json;
  std::ostringstream out;
  json header = {{"type", "graph"},
                 {"nodes", sg.nodes.size()},
                 {"edges", sg.edges.size()},
                 {"sentences", sg.num_sentences},
                 {"sentence_roots", sg.sentence_roots}};
  out << header.dump() << '\n';
  for (std::size_t i = 0; i < sg.nodes.size(); ++i) {
    const SourceNode& n = sg.nodes[i];
    json mentions = json::array();
    for (const Mention& m : n.mentions)
      mentions.push_back({{"sentence", m.sentence}, {"depth", m.depth}, {"span_len", m.span_len}});
    json spans = json::array();
    for (const AlignedSpan& s : n.spans) spans.push_back({s.sentence, s.start, s.end});
    out << json{{"type", "node"},     {"index", i},
                {"label", n.label},   {"mentions", mentions},
                {"spans", spans},     {"named_entity", n.is_named_entity},
                {"date_entity", n.is_date_entity}}
               .dump()
        << '\n';
  }
  for (const SourceEdge& e : sg.edges) {
    out << json{{"type", "edge"},
                {"source", e.source},
                {"target", e.target},
                {"labels", e.label_histogram},
                {"top_labels", e.top_labels},
                {"expanded", e.expanded},
                {"sentences", e.mention_sentences}}
               .dump()
        << '\n';
  }
  return out.str();
}

}  // namespace amrsumm
