#include "amrsumm/eval.hpp"

#include <algorithm>
#include <cctype>

namespace amrsumm {

int BagOfWords::total() const {
  int n = 0;
  for (const auto& [tok, c] : counts) n += c;
  return n;
}

std::vector<std::string> BagOfWords::sorted_tokens() const {
  std::vector<std::string> out;
  for (const auto& [tok, c] : counts)
    for (int i = 0; i < c; ++i) out.push_back(tok);
  return out;
}

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct SpanText {
  int count = 0;
  int ntok = 0;
  int sentence = 0;
  int start = 0;
  std::vector<std::string> tokens;
};

}  // namespace

BagOfWords generate_bow(const Subgraph& sub, const SourceGraph& sg,
                        const std::vector<Sentence>& sentences) {
  BagOfWords bag;
  for (int v : sub.nodes) {
    if (v < 0 || v >= static_cast<int>(sg.nodes.size()))
      throw Error("node outside source graph: " + std::to_string(v));
    const SourceNode& node = sg.nodes[v];
    std::map<std::string, SpanText> texts;
    for (const AlignedSpan& a : node.spans) {
      if (a.sentence < 0 || a.sentence >= static_cast<int>(sentences.size()))
        throw Error("aligned span outside sentence list");
      const std::vector<std::string>& toks = sentences[a.sentence].tokens;
      if (a.start < 0 || a.end > static_cast<int>(toks.size()) || a.start >= a.end)
        throw Error("aligned span outside sentence");
      std::vector<std::string> words;
      std::string key;
      for (int t = a.start; t < a.end; ++t) {
        words.push_back(lower(toks[t]));
        if (!key.empty()) key += ' ';
        key += words.back();
      }
      auto [it, fresh] = texts.try_emplace(key);
      SpanText& st = it->second;
      ++st.count;
      if (fresh) {
        st.ntok = static_cast<int>(words.size());
        st.sentence = a.sentence;
        st.start = a.start;
        st.tokens = std::move(words);
      } else if (std::pair(a.sentence, a.start) < std::pair(st.sentence, st.start)) {
        st.sentence = a.sentence;
        st.start = a.start;
      }
    }
    if (texts.empty()) continue;
    const SpanText* best = nullptr;
    for (const auto& [key, st] : texts) {
      if (!best || st.count > best->count ||
          (st.count == best->count &&
           std::pair(st.ntok, std::pair(st.sentence, st.start)) <
               std::pair(best->ntok, std::pair(best->sentence, best->start))))
        best = &st;
    }
    for (const std::string& tok : best->tokens) ++bag.counts[tok];
  }
  return bag;
}

double f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

Rouge rouge1(const BagOfWords& candidate, const std::vector<std::vector<std::string>>& references,
             const std::set<std::string>& stopwords) {
  std::map<std::string, int> cand;
  for (const auto& [tok, c] : candidate.counts) {
    const std::string t = lower(tok);
    if (!stopwords.count(t)) cand[t] += c;
  }
  std::map<std::string, int> ref_max;
  for (const std::vector<std::string>& ref : references) {
    std::map<std::string, int> here;
    for (const std::string& tok : ref) {
      const std::string t = lower(tok);
      if (!stopwords.count(t)) ++here[t];
    }
    for (const auto& [t, c] : here) ref_max[t] = std::max(ref_max[t], c);
  }
  int ref_total = 0;
  for (const auto& [t, c] : ref_max) ref_total += c;
  if (ref_total == 0) throw Error("empty references");
  int cand_total = 0, match = 0;
  for (const auto& [t, c] : cand) {
    cand_total += c;
    auto it = ref_max.find(t);
    if (it != ref_max.end()) match += std::min(c, it->second);
  }
  Rouge r;
  r.p = cand_total > 0 ? static_cast<double>(match) / cand_total : 0.0;
  r.r = static_cast<double>(match) / ref_total;
  r.f = f1(r.p, r.r);
  return r;
}

PrfCounts set_overlap(const std::set<std::string>& predicted, const std::set<std::string>& gold) {
  PrfCounts c;
  c.predicted = static_cast<int>(predicted.size());
  c.gold = static_cast<int>(gold.size());
  for (const std::string& s : predicted)
    if (gold.count(s)) ++c.matched;
  return c;
}

PrfCounts pair_overlap(const std::set<std::pair<std::string, std::string>>& predicted,
                       const std::set<std::pair<std::string, std::string>>& gold) {
  PrfCounts c;
  c.predicted = static_cast<int>(predicted.size());
  c.gold = static_cast<int>(gold.size());
  for (const auto& p : predicted)
    if (gold.count(p)) ++c.matched;
  return c;
}

std::set<std::string> selected_labels(const Subgraph& sub, const SourceGraph& sg) {
  std::set<std::string> out;
  for (int v : sub.nodes) {
    if (v < 1 || v >= static_cast<int>(sg.nodes.size()))
      throw Error("node outside source graph: " + std::to_string(v));
    out.insert(sg.nodes[v].label);
  }
  return out;
}

std::set<std::pair<std::string, std::string>> selected_pairs(const Subgraph& sub,
                                                             const SourceGraph& sg) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [u, v] : sub.edges) {
    if (u < 0 || u >= static_cast<int>(sg.nodes.size()) || v < 1 ||
        v >= static_cast<int>(sg.nodes.size()))
      throw Error("edge outside source graph");
    out.insert({sg.nodes[u].label, sg.nodes[v].label});
  }
  return out;
}

std::set<std::string> gold_labels(const SourceGraph& gold) {
  std::set<std::string> out;
  for (std::size_t i = 1; i < gold.nodes.size(); ++i) out.insert(gold.nodes[i].label);
  return out;
}

std::set<std::pair<std::string, std::string>> gold_pairs(const SourceGraph& gold) {
  std::set<std::pair<std::string, std::string>> out;
  for (const SourceEdge& e : gold.edges)
    out.insert({gold.nodes[e.source].label, gold.nodes[e.target].label});
  return out;
}

namespace {

void fill(double& p, double& r, double& f, const PrfCounts& c) {
  p = c.predicted > 0 ? static_cast<double>(c.matched) / c.predicted : 0.0;
  r = c.gold > 0 ? static_cast<double>(c.matched) / c.gold : 0.0;
  f = f1(p, r);
}

}  // namespace

EvalReport node_edge_prf(const Subgraph& sub, const SourceGraph& sg, const SourceGraph& gold) {
  if (gold.nodes.size() <= 1 || gold.edges.empty()) throw Error("gold graph is empty");
  EvalReport rep;
  fill(rep.node_p, rep.node_r, rep.node_f, set_overlap(selected_labels(sub, sg), gold_labels(gold)));
  fill(rep.edge_p, rep.edge_r, rep.edge_f, pair_overlap(selected_pairs(sub, sg), gold_pairs(gold)));
  return rep;
}

}  // namespace amrsumm
