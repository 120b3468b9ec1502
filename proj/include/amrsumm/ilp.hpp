#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amrsumm/source_graph.hpp"

namespace amrsumm {

struct IlpEdge {
  int source = 0;
  int target = 0;
  double score = 0.0;

  friend bool operator<(const IlpEdge& a, const IlpEdge& b) {
    return std::pair(a.source, a.target) < std::pair(b.source, b.target);
  }
};

// One decoding problem. Node 0 is ROOT: it carries no score and is never a
// content node, but selected edges must hang every content node from it.
struct IlpInstance {
  int num_nodes = 0;                // including ROOT
  std::vector<double> node_scores;  // size num_nodes, [0] == 0
  std::vector<IlpEdge> edges;       // unique (source, target), target != 0, lex-sorted
  std::optional<int> size_limit;    // exact selected-edge count when present
  int max_root_out = 0;             // cap on ROOT out-degree, 0 = unlimited

  void sort_edges();
  int edge_index(int source, int target) const;  // -1 when absent
  void validate() const;                         // throws Error on bad shape

  std::string dump() const;  // text format for solver debugging
  static IlpInstance parse(const std::string& text);
  static IlpInstance load(const std::string& path);
  void save(const std::string& path) const;
};

// A decoded summary subgraph: selected nodes and directed edges over
// source-graph indices, both sorted ascending. ROOT never appears in nodes.
struct Subgraph {
  std::vector<int> nodes;
  std::vector<std::pair<int, int>> edges;

  bool operator==(const Subgraph&) const = default;
};

// Gold reference for cost augmentation and oracle decoding: node labels and
// unlabeled (source label, target label) pairs, ROOT attachment included as
// ("ROOT", label).
struct CostSpec {
  std::set<std::string> gold_nodes;
  std::set<std::pair<std::string, std::string>> gold_edges;
  double unit_cost = 1.0;
};

CostSpec cost_spec_from_gold(const SourceGraph& gold, double unit_cost = 1.0);

// Instance-aligned view of a CostSpec.
struct CostMask {
  std::vector<bool> node_correct;  // per instance node
  std::vector<bool> edge_correct;  // parallel to instance edges
  double unit_cost = 1.0;
  int gold_nodes = 0;  // |G*| node count, for the constant loss term
  int gold_edges = 0;

  static CostMask build(const IlpInstance& inst, const SourceGraph& sg, const CostSpec& cost);
};

// Sum of node and edge scores over the selection. Throws when an element
// lies outside the instance.
double score(const Subgraph& sub, const IlpInstance& inst);

// unit_cost per selected element missing from gold plus per gold element
// missing from the selection.
double cost(const Subgraph& sub, const IlpInstance& inst, const CostMask& mask);

// Exact maximizer of the factored score over all feasible subgraphs:
// endpoints of selected edges selected, at most one incoming edge per node,
// every selected node reachable from ROOT through selected edges, and
// exactly size_limit edges when set. Branch and bound over edge variables;
// ties break toward the lexicographically smallest edge set. Throws
// InfeasibleError when no subgraph of the requested size exists.
Subgraph decode(const IlpInstance& inst);

// argmax of score(G) + sign * cost(G; G*), via per-element score shifts;
// constraints unchanged. sign is +1 or -1.
Subgraph cost_augmented_decode(const IlpInstance& inst, const CostMask& mask, int sign);

// The score-shifted instance cost_augmented_decode runs on.
IlpInstance cost_shifted_instance(const IlpInstance& inst, const CostMask& mask, int sign);

// Decode with score 0 for correct nodes/edges and -1 for wrong ones: the
// best gold-approximating subgraph in the hypothesis space.
Subgraph oracle_decode(const SourceGraph& sg, const std::vector<AmrGraph>& gold, int size_limit);
Subgraph oracle_decode(const SourceGraph& sg, const SourceGraph& gold_graph, int size_limit);

// Skeleton with zero scores, one IlpEdge per source-graph edge.
IlpInstance instance_skeleton(const SourceGraph& sg, std::optional<int> size_limit);

}  // namespace amrsumm
