#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "amrsumm/amr.hpp"

namespace amrsumm {

struct Mention {
  int sentence = 0;  // 0-based sentence index
  int depth = 0;     // shortest distance to the sentence root, edges undirected
  int span_len = 0;  // longest aligned span in tokens, 0 when unaligned
};

// A concrete aligned span, kept for bag-of-words generation.
struct AlignedSpan {
  int sentence = 0;
  int start = 0;
  int end = 0;
};

struct SourceNode {
  std::string label;  // unique across the graph; merging is by label equality
  std::vector<Mention> mentions;  // empty only for ROOT
  std::vector<AlignedSpan> spans;
  bool is_named_entity = false;
  bool is_date_entity = false;
};

struct SourceEdge {
  int source = 0;
  int target = 0;
  std::map<std::string, int> label_histogram;  // relation -> count
  std::vector<std::string> top_labels;  // two most frequent, ties lexicographic;
                                        // {"null"} for expanded edges
  bool expanded = false;
  std::vector<int> mention_sentences;  // one entry per folded occurrence, sorted

  int occurrence_count() const { return static_cast<int>(mention_sentences.size()); }
  void recompute_top_labels();
};

// The merged multi-sentence graph. Node 0 is ROOT with label "ROOT" and an
// unlabeled edge to every distinct sentence-root concept.
struct SourceGraph {
  std::vector<SourceNode> nodes;
  std::vector<SourceEdge> edges;
  std::vector<int> sentence_roots;  // distinct node indices, ascending
  int num_sentences = 0;

  int node_index(std::string_view label) const;  // -1 when absent
  int edge_index(int source, int target) const;  // -1 when absent
  const SourceEdge* find_edge(int source, int target) const;

 private:
  friend SourceGraph merge_graphs(const std::vector<Sentence>&);
  friend class SourceGraphBuilder;
  void rebuild_lookup();
  std::unordered_map<std::string, int> label_to_index_;
  std::map<std::pair<int, int>, int> pair_to_edge_;
};

// Replaces every flat fragment headed by "date-entity" or "name" with a
// single leaf node labeled by concatenating the head concept and the
// children's relation/concept labels, children sorted by relation label
// (source order within equal relations). A collapsed "name" node that is
// its parent's only child is further combined with the parent, prefixing
// the parent concept. If var_remap is given, it receives old-var -> new-var
// entries for every variable that disappeared.
AmrGraph collapse_fragments(const AmrGraph& g,
                            std::unordered_map<std::string, std::string>* var_remap = nullptr);

// collapse_fragments plus alignment remapping.
Sentence collapse_sentence(const Sentence& s);

// Merges collapsed sentence graphs into one SourceGraph: one node per
// distinct label, parallel labeled edges folded into histogram edges,
// ROOT attached to every sentence root. Self-loops created by merging two
// same-label nodes within a sentence are dropped. Throws on an empty list.
SourceGraph merge_graphs(const std::vector<Sentence>& sentences);

// Convenience wrapper for graphs without tokens or alignments.
SourceGraph merge_graphs(const std::vector<AmrGraph>& graphs);

enum class Expansion { none, sentence, document };

Expansion expansion_from_string(std::string_view name);
std::string_view to_string(Expansion e);

// Adds "null"-labeled candidate edges between every ordered pair of
// distinct non-ROOT nodes that lacks one: co-mentioned pairs at sentence
// level, all pairs at document level. Existing edges are untouched.
SourceGraph expand(const SourceGraph& sg, Expansion level);

struct CoverageResult {
  double labeled = 0.0;
  double unlabeled = 0.0;
  int gold_edges = 0;
  int labeled_covered = 0;
  int unlabeled_covered = 0;
};

// Fraction of gold (source label, relation, target label) edges present in
// sg: labeled requires the relation in the folded histogram, unlabeled only
// the endpoints (expanded edges count). Gold ROOT attachment is excluded.
// Throws when the gold graphs have no edges.
CoverageResult coverage(const SourceGraph& sg, const std::vector<AmrGraph>& gold);

// Collapses each sentence and builds the (optionally expanded) source graph.
SourceGraph build_document_graph(const Document& doc, Expansion level);

// Collapses and merges the gold summary sentences. Throws when absent.
SourceGraph build_gold_graph(const Document& doc);

// JSON-lines debug dump, one node/edge record per line.
std::string to_jsonl(const SourceGraph& sg);

}  // namespace amrsumm
