#pragma once

#include <vector>

#include "amrsumm/features.hpp"
#include "amrsumm/ilp.hpp"
#include "amrsumm/source_graph.hpp"

namespace amrsumm {

// Feature vectors for every node and every edge of a source graph.
struct GraphFeatures {
  std::vector<FeatureVector> node_feats;
  std::vector<FeatureVector> edge_feats;
};

// Serial reference implementations. The _omp variants parallelize the
// per-element / per-document loops and must produce identical output for
// any jobs value; jobs <= 0 means the OpenMP default.
GraphFeatures extract_features_serial(const SourceGraph& sg, const FeatureConfig& cfg);
GraphFeatures extract_features_omp(const SourceGraph& sg, const FeatureConfig& cfg, int jobs = 0);

IlpInstance score_instance(const SourceGraph& sg, const GraphFeatures& gf, const Weights& w,
                           int size_limit, int max_root_out = 0);

std::vector<SourceGraph> build_graphs_serial(const std::vector<Document>& docs,
                                             Expansion expansion);
std::vector<SourceGraph> build_graphs_omp(const std::vector<Document>& docs, Expansion expansion,
                                          int jobs = 0);

std::vector<Subgraph> decode_corpus_serial(const std::vector<IlpInstance>& instances);
std::vector<Subgraph> decode_corpus_omp(const std::vector<IlpInstance>& instances, int jobs = 0);

}  // namespace amrsumm
