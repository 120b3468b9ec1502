#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "amrsumm/ilp.hpp"
#include "amrsumm/source_graph.hpp"

namespace amrsumm {

// Order-free multiset of lowercased tokens.
struct BagOfWords {
  std::map<std::string, int> counts;

  int total() const;
  std::vector<std::string> sorted_tokens() const;  // with multiplicity
};

// For each selected non-ROOT node, emits the tokens of the word span most
// frequently aligned to its mentions (ties: shortest span, then earliest
// occurrence). Unaligned nodes contribute nothing.
BagOfWords generate_bow(const Subgraph& sub, const SourceGraph& sg,
                        const std::vector<Sentence>& sentences);

struct Rouge {
  double p = 0.0;
  double r = 0.0;
  double f = 0.0;
};

// Unigram clipped-count overlap against the per-token max over references;
// lowercased exact match, optional stopword removal, F = 2PR/(P+R) with 0
// when degenerate. Throws unless at least one reference is non-empty.
Rouge rouge1(const BagOfWords& candidate, const std::vector<std::vector<std::string>>& references,
             const std::set<std::string>& stopwords = {});

struct PrfCounts {
  int predicted = 0;
  int gold = 0;
  int matched = 0;
};

struct EvalReport {
  double node_p = 0.0, node_r = 0.0, node_f = 0.0;
  double edge_p = 0.0, edge_r = 0.0, edge_f = 0.0;
  double rouge_p = 0.0, rouge_r = 0.0, rouge_f = 0.0;
};

double f1(double p, double r);

// Node matching by exact label sets, edge matching by unlabeled
// (source label, target label) pairs with ROOT attachment included on both
// sides. Throws on empty gold.
EvalReport node_edge_prf(const Subgraph& sub, const SourceGraph& sg, const SourceGraph& gold);

// Label-level inputs, for evaluation decoupled from graph construction.
PrfCounts set_overlap(const std::set<std::string>& predicted, const std::set<std::string>& gold);
PrfCounts pair_overlap(const std::set<std::pair<std::string, std::string>>& predicted,
                       const std::set<std::pair<std::string, std::string>>& gold);

std::set<std::string> selected_labels(const Subgraph& sub, const SourceGraph& sg);
std::set<std::pair<std::string, std::string>> selected_pairs(const Subgraph& sub,
                                                             const SourceGraph& sg);
std::set<std::string> gold_labels(const SourceGraph& gold);
std::set<std::pair<std::string, std::string>> gold_pairs(const SourceGraph& gold);

}  // namespace amrsumm
