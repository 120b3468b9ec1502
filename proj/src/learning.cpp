#include "amrsumm/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace amrsumm {

LossKind loss_from_string(std::string_view name) {
  if (name == "perceptron") return LossKind::perceptron;
  if (name == "hinge") return LossKind::hinge;
  if (name == "ramp") return LossKind::ramp;
  throw ConfigError("unknown loss '" + std::string(name) + "' (perceptron, hinge, ramp)");
}

std::string_view to_string(LossKind k) {
  switch (k) {
    case LossKind::perceptron: return "perceptron";
    case LossKind::hinge: return "hinge";
    case LossKind::ramp: return "ramp";
  }
  return "?";
}

TrainInstance make_train_instance(const SourceGraph& sg, const SourceGraph& gold,
                                  const TrainConfig& cfg) {
  TrainInstance ti;
  ti.sg = sg;
  ti.node_feats.resize(sg.nodes.size());
  for (std::size_t v = 1; v < sg.nodes.size(); ++v)
    ti.node_feats[v] = node_features(sg, static_cast<int>(v), cfg.features);
  ti.edge_feats.resize(sg.edges.size());
  for (std::size_t k = 0; k < sg.edges.size(); ++k)
    ti.edge_feats[k] = edge_features(sg, static_cast<int>(k), cfg.features);

  ti.size_limit = cfg.size_from_gold ? static_cast<int>(gold.edges.size()) : cfg.fixed_size;
  ti.max_root_out = cfg.max_root_out;

  const CostSpec spec = cost_spec_from_gold(gold, cfg.unit_cost);
  const IlpInstance skeleton = instance_skeleton(sg, ti.size_limit);
  ti.mask = CostMask::build(skeleton, sg, spec);

  // Best reachable stand-in for the gold graph; the root cap is a decoding
  // constraint and does not apply here.
  ti.gold_projection = oracle_decode(sg, gold, ti.size_limit);
  return ti;
}

IlpInstance build_instance(const TrainInstance& ti, const Weights& w) {
  IlpInstance inst = instance_skeleton(ti.sg, ti.size_limit);
  inst.max_root_out = ti.max_root_out;
  for (int i = 1; i < inst.num_nodes; ++i) inst.node_scores[i] = w.node_dot(ti.node_feats[i]);
  for (IlpEdge& e : inst.edges) {
    const int k = ti.sg.edge_index(e.source, e.target);
    if (k < 0) throw Error("instance edge missing from source graph");
    e.score = w.edge_dot(ti.edge_feats[k]);
  }
  return inst;
}

namespace {

void accumulate(SparseGradient& g, const TrainInstance& ti, const Subgraph& sub, double sign) {
  for (int v : sub.nodes)
    for (const std::string& name : ti.node_feats[v].names) g.theta[name] += sign;
  for (const auto& [u, v] : sub.edges) {
    const int k = ti.sg.edge_index(u, v);
    if (k < 0) throw Error("subgraph edge missing from source graph");
    for (const std::string& name : ti.edge_feats[k].names) g.psi[name] += sign;
  }
}

void drop_zeros(std::map<std::string, double>& m) {
  for (auto it = m.begin(); it != m.end();)
    it = (it->second == 0.0) ? m.erase(it) : std::next(it);
}

}  // namespace

LossResult loss_subgradient(LossKind kind, const TrainInstance& ti, const Weights& w) {
  const IlpInstance inst = build_instance(ti, w);
  LossResult res;
  Subgraph lhs, rhs;
  switch (kind) {
    case LossKind::perceptron: {
      lhs = decode(inst);
      rhs = ti.gold_projection;
      res.loss = score(lhs, inst) - score(rhs, inst);
      break;
    }
    case LossKind::hinge: {
      lhs = cost_augmented_decode(inst, ti.mask, +1);
      rhs = ti.gold_projection;
      res.loss = score(lhs, inst) + cost(lhs, inst, ti.mask) - score(rhs, inst);
      break;
    }
    case LossKind::ramp: {
      lhs = cost_augmented_decode(inst, ti.mask, +1);
      rhs = cost_augmented_decode(inst, ti.mask, -1);
      res.loss = score(lhs, inst) + cost(lhs, inst, ti.mask) -
                 (score(rhs, inst) - cost(rhs, inst, ti.mask));
      break;
    }
  }
  accumulate(res.gradient, ti, lhs, +1.0);
  accumulate(res.gradient, ti, rhs, -1.0);
  drop_zeros(res.gradient.theta);
  drop_zeros(res.gradient.psi);
  return res;
}

void adagrad_step(AdagradState& state, const SparseGradient& grad, double eta) {
  for (const auto& [name, g] : grad.theta) {
    if (g == 0.0) continue;
    double& ss = state.sumsq_theta[name];
    ss += g * g;
    state.weights.theta[name] -= eta / std::sqrt(ss) * g;
  }
  for (const auto& [name, g] : grad.psi) {
    if (g == 0.0) continue;
    double& ss = state.sumsq_psi[name];
    ss += g * g;
    state.weights.psi[name] -= eta / std::sqrt(ss) * g;
  }
}

TrainResult train(const std::vector<TrainInstance>& instances, const TrainConfig& cfg) {
  if (instances.empty()) throw Error("no training instances");
  AdagradState state;
  TrainResult out;
  std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed));
  std::vector<int> order(instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    // Fisher-Yates with the raw generator; std::shuffle is not reproducible
    // across standard library implementations.
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      const std::size_t j = rng() % (i + 1);
      std::swap(order[i], order[j]);
    }
    double total = 0.0;
    for (int idx : order) {
      const LossResult res = loss_subgradient(cfg.loss, instances[idx], state.weights);
      adagrad_step(state, res.gradient, cfg.eta);
      total += res.loss;
    }
    out.epoch_loss.push_back(total);
  }
  out.weights = std::move(state.weights);
  return out;
}

}  // namespace amrsumm
