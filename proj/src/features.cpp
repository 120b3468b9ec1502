#include "amrsumm/features.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace amrsumm {

namespace {

std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string weight_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool FeatureVector::has(std::string_view name) const {
  return std::binary_search(names.begin(), names.end(), std::string(name));
}

std::string FeatureVector::dump() const {
  std::string out;
  for (const std::string& n : names) {
    out += n;
    out += "\t1\n";
  }
  return out;
}

double Weights::node_dot(const FeatureVector& f) const {
  double s = 0.0;
  for (const std::string& n : f.names) {
    auto it = theta.find(n);
    if (it != theta.end()) s += it->second;
  }
  return s;
}

double Weights::edge_dot(const FeatureVector& g) const {
  double s = 0.0;
  for (const std::string& n : g.names) {
    auto it = psi.find(n);
    if (it != psi.end()) s += it->second;
  }
  return s;
}

std::string serialize_weights(const Weights& w, const std::string& digest) {
  std::ostringstream out;
  out << "# model digest=" << digest << '\n';
  for (const auto& [name, val] : w.theta) out << "node:" << name << '\t' << weight_str(val) << '\n';
  for (const auto& [name, val] : w.psi) out << "edge:" << name << '\t' << weight_str(val) << '\n';
  return out.str();
}

Weights parse_weights(const std::string& text) {
  Weights w;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw IoError("model line " + std::to_string(lineno) + ": missing tab separator");
    std::string name = line.substr(0, tab);
    std::string valtext = line.substr(tab + 1);
    char* end = nullptr;
    double val = std::strtod(valtext.c_str(), &end);
    if (end == valtext.c_str() || *end != '\0')
      throw IoError("model line " + std::to_string(lineno) + ": bad weight '" + valtext + "'");
    if (name.rfind("node:", 0) == 0)
      w.theta[name.substr(5)] = val;
    else if (name.rfind("edge:", 0) == 0)
      w.psi[name.substr(5)] = val;
    else
      throw IoError("model line " + std::to_string(lineno) + ": name needs node:/edge: prefix");
  }
  return w;
}

void save_weights(const Weights& w, const std::string& path, const std::string& digest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out << serialize_weights(w, digest);
  if (!out) throw IoError("failed writing model file '" + path + "'");
}

Weights load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_weights(buf.str());
}

FeatureVector node_features(const SourceGraph& sg, int v, const FeatureConfig& cfg) {
  if (v <= 0 || v >= static_cast<int>(sg.nodes.size()))
    throw Error("node index out of range: " + std::to_string(v));
  const SourceNode& n = sg.nodes[v];
  std::vector<std::string> f;
  f.push_back("concept=" + n.label);

  const int freq = static_cast<int>(n.mentions.size());
  for (int t : cfg.freq_thresholds)
    if (freq > t) f.push_back("freq_gt_" + std::to_string(t));

  if (!n.mentions.empty()) {
    double depth_sum = 0.0, pos_sum = 0.0, span_sum = 0.0;
    int min_depth = n.mentions.front().depth;
    int first_sent = n.mentions.front().sentence;
    int max_span = 0;
    for (const Mention& m : n.mentions) {
      depth_sum += m.depth;
      pos_sum += m.sentence;
      span_sum += m.span_len;
      min_depth = std::min(min_depth, m.depth);
      first_sent = std::min(first_sent, m.sentence);
      max_span = std::max(max_span, m.span_len);
    }
    const double cnt = static_cast<double>(n.mentions.size());
    const double denom = sg.num_sentences > 0 ? sg.num_sentences : 1;
    const double avg_depth = depth_sum / cnt;
    const double avg_pos = pos_sum / cnt / denom;
    const double first_pos = first_sent / denom;
    const double avg_span = span_sum / cnt;
    for (int t : cfg.depth_thresholds) {
      if (avg_depth > t) f.push_back("avg_depth_gt_" + std::to_string(t));
      if (min_depth > t) f.push_back("min_depth_gt_" + std::to_string(t));
    }
    for (double t : cfg.position_thresholds) {
      if (avg_pos > t) f.push_back("avg_pos_gt_" + fmt_num(t));
      if (first_pos > t) f.push_back("first_pos_gt_" + fmt_num(t));
    }
    for (int t : cfg.span_thresholds) {
      if (avg_span > t) f.push_back("avg_span_gt_" + std::to_string(t));
      if (max_span > t) f.push_back("max_span_gt_" + std::to_string(t));
    }
  }
  if (n.is_named_entity) f.push_back("named_entity");
  if (n.is_date_entity) f.push_back("date_entity");
  f.push_back("bias");
  std::sort(f.begin(), f.end());
  return FeatureVector{std::move(f)};
}

FeatureVector edge_features(const SourceGraph& sg, int edge_idx, const FeatureConfig& cfg) {
  if (edge_idx < 0 || edge_idx >= static_cast<int>(sg.edges.size()))
    throw Error("edge index out of range: " + std::to_string(edge_idx));
  const SourceEdge& e = sg.edges[edge_idx];
  std::vector<std::string> f;

  for (std::size_t k = 0; k < e.top_labels.size() && k < 2; ++k)
    f.push_back("label" + std::to_string(k + 1) + "=" + e.top_labels[k]);
  if (!e.label_histogram.empty()) {
    int total = 0;
    for (const auto& [label, count] : e.label_histogram) total += count;
    for (std::size_t k = 0; k < e.top_labels.size() && k < 2; ++k) {
      const double rf = static_cast<double>(e.label_histogram.at(e.top_labels[k])) / total;
      for (double t : cfg.label_relfreq_thresholds)
        if (rf >= t)
          f.push_back("label" + std::to_string(k + 1) + "_relfreq_ge_" + fmt_num(t));
    }
  }

  const int efreq = e.occurrence_count();
  for (int t : cfg.freq_thresholds)
    if (efreq > t) f.push_back("efreq_gt_" + std::to_string(t));

  if (!e.mention_sentences.empty()) {
    const double denom = sg.num_sentences > 0 ? sg.num_sentences : 1;
    double pos_sum = 0.0;
    int first = e.mention_sentences.front();
    for (int s : e.mention_sentences) {
      pos_sum += s;
      first = std::min(first, s);
    }
    const double avg_pos = pos_sum / e.mention_sentences.size() / denom;
    const double first_pos = first / denom;
    for (double t : cfg.position_thresholds) {
      if (avg_pos > t) f.push_back("eavg_pos_gt_" + fmt_num(t));
      if (first_pos > t) f.push_back("efirst_pos_gt_" + fmt_num(t));
    }
  }

  if (e.source != 0)
    for (const std::string& n : node_features(sg, e.source, cfg).names)
      if (n != "bias") f.push_back("src_" + n);
  if (e.target != 0)
    for (const std::string& n : node_features(sg, e.target, cfg).names)
      if (n != "bias") f.push_back("tgt_" + n);

  if (e.expanded) f.push_back("expanded");

  // Sentences mentioning both endpoints; ROOT counts as present everywhere.
  std::set<int> src_sents, tgt_sents;
  for (const Mention& m : sg.nodes[e.target].mentions) tgt_sents.insert(m.sentence);
  int allfreq = 0;
  if (e.source == 0) {
    allfreq = static_cast<int>(tgt_sents.size());
  } else {
    for (const Mention& m : sg.nodes[e.source].mentions) src_sents.insert(m.sentence);
    for (int s : src_sents) allfreq += tgt_sents.count(s) ? 1 : 0;
  }
  for (int t : cfg.freq_thresholds)
    if (allfreq > t) f.push_back("allfreq_gt_" + std::to_string(t));

  f.push_back("ebias");
  std::sort(f.begin(), f.end());
  return FeatureVector{std::move(f)};
}

namespace {

bool strip_prefix(std::string& s, std::string_view prefix) {
  if (s.rfind(prefix, 0) != 0) return false;
  s.erase(0, prefix.size());
  return true;
}

bool suffix_in(const std::string& s, const std::vector<int>& ts) {
  for (int t : ts)
    if (s == std::to_string(t)) return true;
  return false;
}

bool suffix_in(const std::string& s, const std::vector<double>& ts) {
  for (double t : ts)
    if (s == fmt_num(t)) return true;
  return false;
}

bool valid_node_name(std::string name, const FeatureConfig& cfg) {
  if (name.rfind("concept=", 0) == 0) return true;
  if (name == "named_entity" || name == "date_entity" || name == "bias") return true;
  if (strip_prefix(name, "freq_gt_")) return suffix_in(name, cfg.freq_thresholds);
  if (strip_prefix(name, "avg_depth_gt_")) return suffix_in(name, cfg.depth_thresholds);
  if (strip_prefix(name, "min_depth_gt_")) return suffix_in(name, cfg.depth_thresholds);
  if (strip_prefix(name, "avg_pos_gt_")) return suffix_in(name, cfg.position_thresholds);
  if (strip_prefix(name, "first_pos_gt_")) return suffix_in(name, cfg.position_thresholds);
  if (strip_prefix(name, "avg_span_gt_")) return suffix_in(name, cfg.span_thresholds);
  if (strip_prefix(name, "max_span_gt_")) return suffix_in(name, cfg.span_thresholds);
  return false;
}

bool valid_edge_name(std::string name, const FeatureConfig& cfg) {
  if (name.rfind("label1=", 0) == 0 || name.rfind("label2=", 0) == 0) return true;
  if (name == "expanded" || name == "ebias") return true;
  if (strip_prefix(name, "label1_relfreq_ge_") || strip_prefix(name, "label2_relfreq_ge_"))
    return suffix_in(name, cfg.label_relfreq_thresholds);
  if (strip_prefix(name, "efreq_gt_")) return suffix_in(name, cfg.freq_thresholds);
  if (strip_prefix(name, "allfreq_gt_")) return suffix_in(name, cfg.freq_thresholds);
  if (strip_prefix(name, "eavg_pos_gt_")) return suffix_in(name, cfg.position_thresholds);
  if (strip_prefix(name, "efirst_pos_gt_")) return suffix_in(name, cfg.position_thresholds);
  if (strip_prefix(name, "src_") || strip_prefix(name, "tgt_"))
    return name != "bias" && valid_node_name(name, cfg);
  return false;
}

}  // namespace

std::vector<std::string> unknown_feature_names(const Weights& w, const FeatureConfig& cfg) {
  std::vector<std::string> bad;
  for (const auto& [name, val] : w.theta)
    if (!valid_node_name(name, cfg)) bad.push_back("node:" + name);
  for (const auto& [name, val] : w.psi)
    if (!valid_edge_name(name, cfg)) bad.push_back("edge:" + name);
  return bad;
}

}  // namespace amrsumm
