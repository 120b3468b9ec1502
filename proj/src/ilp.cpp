#include "amrsumm/ilp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "amrsumm/source_graph.hpp"

namespace amrsumm {

void IlpInstance::sort_edges() { std::sort(edges.begin(), edges.end()); }

int IlpInstance::edge_index(int source, int target) const {
  IlpEdge probe{source, target, 0.0};
  auto it = std::lower_bound(edges.begin(), edges.end(), probe);
  if (it == edges.end() || it->source != source || it->target != target) return -1;
  return static_cast<int>(it - edges.begin());
}

void IlpInstance::validate() const {
  if (num_nodes < 1) throw Error("instance needs at least the ROOT node");
  if (static_cast<int>(node_scores.size()) != num_nodes)
    throw Error("node_scores size does not match num_nodes");
  if (node_scores[0] != 0.0) throw Error("ROOT carries no score");
  for (double s : node_scores)
    if (!std::isfinite(s)) throw Error("non-finite node score");
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const IlpEdge& e = edges[k];
    if (e.source < 0 || e.source >= num_nodes || e.target < 1 || e.target >= num_nodes)
      throw Error("edge endpoint out of range");
    if (e.source == e.target) throw Error("self-loop edge");
    if (!std::isfinite(e.score)) throw Error("non-finite edge score");
    if (k > 0 && !(edges[k - 1] < e)) throw Error("edges not sorted by (source, target) or duplicated");
  }
  if (size_limit && *size_limit < 0) throw Error("negative size limit");
  if (max_root_out < 0) throw Error("negative ROOT out-degree cap");
}

namespace {

std::string num_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string IlpInstance::dump() const {
  std::ostringstream out;
  out << "nodes " << num_nodes << '\n';
  for (int i = 1; i < num_nodes; ++i) out << "node " << i << ' ' << num_str(node_scores[i]) << '\n';
  for (const IlpEdge& e : edges)
    out << "edge " << e.source << ' ' << e.target << ' ' << num_str(e.score) << '\n';
  if (size_limit) out << "size " << *size_limit << '\n';
  if (max_root_out > 0) out << "rootcap " << max_root_out << '\n';
  return out.str();
}

IlpInstance IlpInstance::parse(const std::string& text) {
  IlpInstance inst;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_nodes = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    auto bad = [&]() -> Error {
      return Error("instance line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    };
    if (kind == "nodes") {
      int n;
      if (!(ls >> n) || n < 1) throw bad();
      inst.num_nodes = n;
      inst.node_scores.assign(n, 0.0);
      have_nodes = true;
    } else if (kind == "node") {
      int i;
      double s;
      if (!have_nodes || !(ls >> i >> s) || i < 1 || i >= inst.num_nodes) throw bad();
      inst.node_scores[i] = s;
    } else if (kind == "edge") {
      int u, v;
      double s;
      if (!have_nodes || !(ls >> u >> v >> s)) throw bad();
      inst.edges.push_back({u, v, s});
    } else if (kind == "size") {
      int L;
      if (!(ls >> L)) throw bad();
      inst.size_limit = L;
    } else if (kind == "rootcap") {
      int c;
      if (!(ls >> c)) throw bad();
      inst.max_root_out = c;
    } else {
      throw bad();
    }
  }
  if (!have_nodes) throw Error("instance text has no 'nodes' line");
  inst.sort_edges();
  inst.validate();
  return inst;
}

IlpInstance IlpInstance::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open instance file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void IlpInstance::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write instance file '" + path + "'");
  out << dump();
  if (!out) throw IoError("failed writing instance file '" + path + "'");
}

namespace {

// Depth-first branch and bound over the lex-sorted edge list. Selected edges
// form a forest hanging from ROOT (in-degree <= 1 plus cycle exclusion plus
// the requirement that every chosen edge's source is eventually covered), so
// node scores fold into the unique incoming edge of each selected node. The
// include branch is explored first and incumbents are replaced only on
// strict improvement, which makes the returned optimum the lexicographically
// smallest edge set among maximizers.
struct Solver {
  const IlpInstance& inst;
  int n = 0, m = 0;
  bool has_limit = false;
  int limit = 0;
  std::vector<double> w;

  std::vector<double> possum;
  std::vector<std::vector<double>> topsum;
  std::vector<std::vector<int>> suffix_in;

  std::vector<char> in_use;
  std::vector<int> parent;
  std::set<int> uncovered;
  std::vector<int> chosen;
  int root_out = 0;

  bool have_best = false;
  double best = 0.0;
  std::vector<int> best_set;

  explicit Solver(const IlpInstance& ii) : inst(ii) {
    n = inst.num_nodes;
    m = static_cast<int>(inst.edges.size());
    has_limit = inst.size_limit.has_value();
    limit = has_limit ? *inst.size_limit : 0;
    w.resize(m);
    for (int k = 0; k < m; ++k)
      w[k] = inst.edges[k].score + inst.node_scores[inst.edges[k].target];

    possum.assign(m + 1, 0.0);
    for (int k = m - 1; k >= 0; --k) possum[k] = possum[k + 1] + std::max(0.0, w[k]);

    if (has_limit) {
      const int cap = std::min(limit, m);
      topsum.assign(m + 1, {0.0});
      std::vector<double> suf;  // descending
      for (int k = m - 1; k >= 0; --k) {
        auto it = std::upper_bound(suf.begin(), suf.end(), w[k], std::greater<double>());
        suf.insert(it, w[k]);
        if (static_cast<int>(suf.size()) > cap) suf.pop_back();
        topsum[k].resize(suf.size() + 1);
        topsum[k][0] = 0.0;
        for (std::size_t i = 0; i < suf.size(); ++i) topsum[k][i + 1] = topsum[k][i] + suf[i];
      }
    }

    suffix_in.assign(m + 1, std::vector<int>(n, 0));
    for (int k = m - 1; k >= 0; --k) {
      suffix_in[k] = suffix_in[k + 1];
      ++suffix_in[k][inst.edges[k].target];
    }

    in_use.assign(n, 0);
    parent.assign(n, -1);
  }

  bool makes_cycle(int source, int target) const {
    int x = source;
    while (x > 0) {
      if (x == target) return true;
      x = parent[x];
    }
    return x == target;  // target can never be 0, so this is false at chain end
  }

  void offer(double cur) {
    if (!uncovered.empty()) return;
    if (!have_best || cur > best) {
      have_best = true;
      best = cur;
      best_set = chosen;
    }
  }

  void dfs(int k, double cur) {
    if (has_limit && static_cast<int>(chosen.size()) == limit) {
      offer(cur);
      return;
    }
    if (k == m) {
      if (!has_limit) offer(cur);
      return;
    }
    if (has_limit) {
      const int r = limit - static_cast<int>(chosen.size());
      if (r > m - k) return;
      if (static_cast<int>(uncovered.size()) > r) return;
    }
    for (int x : uncovered)
      if (suffix_in[k][x] == 0) return;
    const double bound =
        cur + (has_limit ? topsum[k][limit - static_cast<int>(chosen.size())] : possum[k]);
    if (have_best && bound <= best) return;

    const IlpEdge& e = inst.edges[k];
    const bool capped = e.source == 0 && inst.max_root_out > 0 && root_out == inst.max_root_out;
    if (!in_use[e.target] && !capped && !(e.source != 0 && makes_cycle(e.source, e.target))) {
      in_use[e.target] = 1;
      parent[e.target] = e.source;
      const bool tgt_was_uncovered = uncovered.erase(e.target) > 0;
      bool src_added = false;
      if (e.source != 0 && !in_use[e.source]) src_added = uncovered.insert(e.source).second;
      if (e.source == 0) ++root_out;
      chosen.push_back(k);

      dfs(k + 1, cur + w[k]);

      chosen.pop_back();
      if (e.source == 0) --root_out;
      if (src_added) uncovered.erase(e.source);
      if (tgt_was_uncovered) uncovered.insert(e.target);
      parent[e.target] = -1;
      in_use[e.target] = 0;
    }
    dfs(k + 1, cur);
  }
};

Subgraph subgraph_from(const IlpInstance& inst, const std::vector<int>& edge_ids) {
  Subgraph sub;
  std::set<int> nodes;
  for (int k : edge_ids) {
    const IlpEdge& e = inst.edges[k];
    if (e.source != 0) nodes.insert(e.source);
    nodes.insert(e.target);
    sub.edges.emplace_back(e.source, e.target);
  }
  sub.nodes.assign(nodes.begin(), nodes.end());
  std::sort(sub.edges.begin(), sub.edges.end());
  return sub;
}

}  // namespace

Subgraph decode(const IlpInstance& inst) {
  inst.validate();
  Solver s(inst);
  s.dfs(0, 0.0);
  if (!s.have_best) {
    std::string msg = "no feasible subgraph";
    if (inst.size_limit) msg += " with " + std::to_string(*inst.size_limit) + " edges";
    throw InfeasibleError(msg);
  }
  return subgraph_from(inst, s.best_set);
}

double score(const Subgraph& sub, const IlpInstance& inst) {
  double s = 0.0;
  for (int v : sub.nodes) {
    if (v < 1 || v >= inst.num_nodes) throw Error("node outside instance: " + std::to_string(v));
    s += inst.node_scores[v];
  }
  for (const auto& [u, v] : sub.edges) {
    int k = inst.edge_index(u, v);
    if (k < 0)
      throw Error("edge outside instance: " + std::to_string(u) + "->" + std::to_string(v));
    s += inst.edges[k].score;
  }
  return s;
}

double cost(const Subgraph& sub, const IlpInstance& inst, const CostMask& mask) {
  if (static_cast<int>(mask.node_correct.size()) != inst.num_nodes ||
      mask.edge_correct.size() != inst.edges.size())
    throw Error("cost mask does not match instance");
  int right_nodes = 0, right_edges = 0, wrong = 0;
  for (int v : sub.nodes) {
    if (v < 1 || v >= inst.num_nodes) throw Error("node outside instance: " + std::to_string(v));
    mask.node_correct[v] ? ++right_nodes : ++wrong;
  }
  for (const auto& [u, v] : sub.edges) {
    int k = inst.edge_index(u, v);
    if (k < 0)
      throw Error("edge outside instance: " + std::to_string(u) + "->" + std::to_string(v));
    mask.edge_correct[k] ? ++right_edges : ++wrong;
  }
  const int missing = (mask.gold_nodes - right_nodes) + (mask.gold_edges - right_edges);
  return mask.unit_cost * (wrong + missing);
}

IlpInstance cost_shifted_instance(const IlpInstance& inst, const CostMask& mask, int sign) {
  if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  if (static_cast<int>(mask.node_correct.size()) != inst.num_nodes ||
      mask.edge_correct.size() != inst.edges.size())
    throw Error("cost mask does not match instance");
  IlpInstance out = inst;
  for (int i = 1; i < out.num_nodes; ++i)
    out.node_scores[i] += sign * (mask.node_correct[i] ? -mask.unit_cost : mask.unit_cost);
  for (std::size_t k = 0; k < out.edges.size(); ++k)
    out.edges[k].score += sign * (mask.edge_correct[k] ? -mask.unit_cost : mask.unit_cost);
  return out;
}

Subgraph cost_augmented_decode(const IlpInstance& inst, const CostMask& mask, int sign) {
  return decode(cost_shifted_instance(inst, mask, sign));
}

CostSpec cost_spec_from_gold(const SourceGraph& gold, double unit_cost) {
  CostSpec cs;
  cs.unit_cost = unit_cost;
  for (std::size_t i = 1; i < gold.nodes.size(); ++i) cs.gold_nodes.insert(gold.nodes[i].label);
  for (const SourceEdge& e : gold.edges)
    cs.gold_edges.insert({gold.nodes[e.source].label, gold.nodes[e.target].label});
  return cs;
}

CostMask CostMask::build(const IlpInstance& inst, const SourceGraph& sg, const CostSpec& cost) {
  if (inst.num_nodes != static_cast<int>(sg.nodes.size()))
    throw Error("instance does not match source graph");
  CostMask m;
  m.unit_cost = cost.unit_cost;
  m.gold_nodes = static_cast<int>(cost.gold_nodes.size());
  m.gold_edges = static_cast<int>(cost.gold_edges.size());
  m.node_correct.assign(inst.num_nodes, false);
  for (int i = 1; i < inst.num_nodes; ++i)
    m.node_correct[i] = cost.gold_nodes.count(sg.nodes[i].label) > 0;
  m.edge_correct.reserve(inst.edges.size());
  for (const IlpEdge& e : inst.edges)
    m.edge_correct.push_back(
        cost.gold_edges.count({sg.nodes[e.source].label, sg.nodes[e.target].label}) > 0);
  return m;
}

IlpInstance instance_skeleton(const SourceGraph& sg, std::optional<int> size_limit) {
  IlpInstance inst;
  inst.num_nodes = static_cast<int>(sg.nodes.size());
  inst.node_scores.assign(inst.num_nodes, 0.0);
  inst.edges.reserve(sg.edges.size());
  for (const SourceEdge& e : sg.edges) inst.edges.push_back({e.source, e.target, 0.0});
  inst.size_limit = size_limit;
  inst.sort_edges();
  inst.validate();
  return inst;
}

Subgraph oracle_decode(const SourceGraph& sg, const SourceGraph& gold_graph, int size_limit) {
  const CostSpec cs = cost_spec_from_gold(gold_graph, 1.0);
  IlpInstance inst = instance_skeleton(sg, size_limit);
  const CostMask mask = CostMask::build(inst, sg, cs);
  for (int i = 1; i < inst.num_nodes; ++i) inst.node_scores[i] = mask.node_correct[i] ? 0.0 : -1.0;
  for (std::size_t k = 0; k < inst.edges.size(); ++k)
    inst.edges[k].score = mask.edge_correct[k] ? 0.0 : -1.0;
  return decode(inst);
}

Subgraph oracle_decode(const SourceGraph& sg, const std::vector<AmrGraph>& gold, int size_limit) {
  std::vector<AmrGraph> collapsed;
  collapsed.reserve(gold.size());
  for (const AmrGraph& g : gold) collapsed.push_back(collapse_fragments(g));
  return oracle_decode(sg, merge_graphs(collapsed), size_limit);
}

}  // namespace amrsumm
