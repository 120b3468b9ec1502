#pragma once

#include <map>
#include <string>
#include <vector>

#include "amrsumm/source_graph.hpp"

namespace amrsumm {

// Sparse binary feature vector: active feature names only, sorted; every
// stored value is exactly 1.
struct FeatureVector {
  std::vector<std::string> names;

  bool has(std::string_view name) const;
  std::string dump() const;  // "name<TAB>1" lines
};

struct FeatureConfig {
  std::vector<int> freq_thresholds{0, 1, 2, 5, 10};
  std::vector<int> depth_thresholds{1, 2, 3, 4, 5};
  std::vector<double> position_thresholds{0.1, 0.2, 0.3, 0.5, 0.8};
  std::vector<int> span_thresholds{1, 2, 3, 5, 8};
  std::vector<double> label_relfreq_thresholds{0.33, 0.66, 1.0};
};

// theta scores node features, psi edge features. The two name spaces are
// independent; model files prefix names with "node:"/"edge:".
struct Weights {
  std::map<std::string, double> theta;
  std::map<std::string, double> psi;

  double node_dot(const FeatureVector& f) const;
  double edge_dot(const FeatureVector& g) const;
};

std::string serialize_weights(const Weights& w, const std::string& digest);
Weights parse_weights(const std::string& text);
void save_weights(const Weights& w, const std::string& path, const std::string& digest);
Weights load_weights(const std::string& path);

// Node features, v != 0:
//   concept=<label>; freq_gt_<t> when mention count > t; avg/min depth,
//   avg/first relative sentence position, avg/max aligned span length, each
//   binarized against the config thresholds; named_entity / date_entity
//   indicators; bias.
FeatureVector node_features(const SourceGraph& sg, int v, const FeatureConfig& cfg);

// Edge features, by index into sg.edges:
//   label1=/label2= identity for the top histogram labels plus their
//   relative frequency binarized (>=); efreq_gt_<t> over folded unexpanded
//   occurrences; eavg_pos/efirst_pos over occurrence sentences; src_/tgt_
//   copies of the endpoint node features (bias excluded, src_ absent for
//   ROOT edges); expanded indicator; allfreq_gt_<t> over sentences
//   co-mentioning both endpoints; ebias.
FeatureVector edge_features(const SourceGraph& sg, int edge_idx, const FeatureConfig& cfg);

// Rejects weight names that the given configuration can never emit.
// Returns the offending names (empty when the model is compatible).
std::vector<std::string> unknown_feature_names(const Weights& w, const FeatureConfig& cfg);

}  // namespace amrsumm
