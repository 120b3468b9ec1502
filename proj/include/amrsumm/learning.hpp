#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "amrsumm/features.hpp"
#include "amrsumm/ilp.hpp"

namespace amrsumm {

enum class LossKind { perceptron, hinge, ramp };

LossKind loss_from_string(std::string_view name);
std::string_view to_string(LossKind k);

struct TrainConfig {
  LossKind loss = LossKind::ramp;
  double eta = 1.0;
  int epochs = 10;
  std::uint64_t seed = 1;
  double unit_cost = 1.0;
  bool size_from_gold = true;  // L = gold edge count per instance
  int fixed_size = 0;          // used when !size_from_gold
  int max_root_out = 0;
  FeatureConfig features;
};

// Cached per-document training state: features, gold cost mask, and the
// weight-independent gold projection (oracle decode at the gold size).
struct TrainInstance {
  SourceGraph sg;
  std::vector<FeatureVector> node_feats;  // [0] empty (ROOT)
  std::vector<FeatureVector> edge_feats;  // parallel to sg.edges
  CostMask mask;
  int size_limit = 0;
  int max_root_out = 0;
  Subgraph gold_projection;
};

TrainInstance make_train_instance(const SourceGraph& sg, const SourceGraph& gold,
                                  const TrainConfig& cfg);

struct SparseGradient {
  std::map<std::string, double> theta;
  std::map<std::string, double> psi;

  bool empty() const { return theta.empty() && psi.empty(); }
};

struct LossResult {
  SparseGradient gradient;
  double loss = 0.0;
};

// Rebuilds instance scores from w and returns the subgradient of the chosen
// loss plus its value:
//   perceptron:  Phi(decode) - Phi(gold projection)
//   hinge:       Phi(cost-augmented decode(+1)) - Phi(gold projection)
//   ramp:        Phi(cost-augmented decode(+1)) - Phi(cost-augmented decode(-1))
LossResult loss_subgradient(LossKind kind, const TrainInstance& ti, const Weights& w);

// Per-coordinate accumulators of squared subgradients.
struct AdagradState {
  std::map<std::string, double> sumsq_theta;
  std::map<std::string, double> sumsq_psi;
  Weights weights;
};

// For each nonzero coordinate: accumulate g^2, then step by eta/sqrt(sum) * g.
// Zero-gradient coordinates are untouched.
void adagrad_step(AdagradState& state, const SparseGradient& grad, double eta);

struct TrainResult {
  Weights weights;
  std::vector<double> epoch_loss;  // summed instance loss per epoch
};

// Seeded-shuffle online training: one loss_subgradient + adagrad_step per
// instance per epoch. Deterministic for a fixed config.
TrainResult train(const std::vector<TrainInstance>& instances, const TrainConfig& cfg);

// The instance scored with w at the cached size limit.
IlpInstance build_instance(const TrainInstance& ti, const Weights& w);

}  // namespace amrsumm
