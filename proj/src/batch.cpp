#include "amrsumm/batch.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace amrsumm {

namespace {

int thread_count(int jobs) {
#ifdef _OPENMP
  return jobs > 0 ? jobs : omp_get_max_threads();
#else
  (void)jobs;
  return 1;
#endif
}

// Rethrows the first (lowest index) exception so failures do not depend on
// thread scheduling.
struct ErrorSlot {
  std::vector<std::exception_ptr> slots;

  explicit ErrorSlot(std::size_t n) : slots(n) {}

  template <typename F>
  void run(std::size_t i, F&& f) noexcept {
    try {
      f();
    } catch (...) {
      slots[i] = std::current_exception();
    }
  }

  void rethrow() const {
    for (const std::exception_ptr& p : slots)
      if (p) std::rethrow_exception(p);
  }
};

}  // namespace

GraphFeatures extract_features_serial(const SourceGraph& sg, const FeatureConfig& cfg) {
  GraphFeatures gf;
  gf.node_feats.resize(sg.nodes.size());
  for (std::size_t v = 1; v < sg.nodes.size(); ++v)
    gf.node_feats[v] = node_features(sg, static_cast<int>(v), cfg);
  gf.edge_feats.resize(sg.edges.size());
  for (std::size_t k = 0; k < sg.edges.size(); ++k)
    gf.edge_feats[k] = edge_features(sg, static_cast<int>(k), cfg);
  return gf;
}

GraphFeatures extract_features_omp(const SourceGraph& sg, const FeatureConfig& cfg, int jobs) {
  GraphFeatures gf;
  gf.node_feats.resize(sg.nodes.size());
  gf.edge_feats.resize(sg.edges.size());
  const int nv = static_cast<int>(sg.nodes.size());
  const int ne = static_cast<int>(sg.edges.size());
  ErrorSlot errors(static_cast<std::size_t>(nv) + ne);
  const int threads = thread_count(jobs);
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static)
#endif
  for (int v = 1; v < nv; ++v)
    errors.run(v, [&, v] { gf.node_feats[v] = node_features(sg, v, cfg); });
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(static)
#endif
  for (int k = 0; k < ne; ++k)
    errors.run(static_cast<std::size_t>(nv) + k,
               [&, k] { gf.edge_feats[k] = edge_features(sg, k, cfg); });
  (void)threads;
  errors.rethrow();
  return gf;
}

IlpInstance score_instance(const SourceGraph& sg, const GraphFeatures& gf, const Weights& w,
                           int size_limit, int max_root_out) {
  if (gf.node_feats.size() != sg.nodes.size() || gf.edge_feats.size() != sg.edges.size())
    throw Error("features do not match source graph");
  IlpInstance inst = instance_skeleton(sg, size_limit);
  inst.max_root_out = max_root_out;
  for (int i = 1; i < inst.num_nodes; ++i) inst.node_scores[i] = w.node_dot(gf.node_feats[i]);
  for (IlpEdge& e : inst.edges) {
    const int k = sg.edge_index(e.source, e.target);
    if (k < 0) throw Error("instance edge missing from source graph");
    e.score = w.edge_dot(gf.edge_feats[k]);
  }
  return inst;
}

std::vector<SourceGraph> build_graphs_serial(const std::vector<Document>& docs,
                                             Expansion expansion) {
  std::vector<SourceGraph> out(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) out[i] = build_document_graph(docs[i], expansion);
  return out;
}

std::vector<SourceGraph> build_graphs_omp(const std::vector<Document>& docs, Expansion expansion,
                                          int jobs) {
  std::vector<SourceGraph> out(docs.size());
  const int n = static_cast<int>(docs.size());
  ErrorSlot errors(docs.size());
  const int threads = thread_count(jobs);
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i)
    errors.run(i, [&, i] { out[i] = build_document_graph(docs[i], expansion); });
  (void)threads;
  errors.rethrow();
  return out;
}

std::vector<Subgraph> decode_corpus_serial(const std::vector<IlpInstance>& instances) {
  std::vector<Subgraph> out(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) out[i] = decode(instances[i]);
  return out;
}

std::vector<Subgraph> decode_corpus_omp(const std::vector<IlpInstance>& instances, int jobs) {
  std::vector<Subgraph> out(instances.size());
  const int n = static_cast<int>(instances.size());
  ErrorSlot errors(instances.size());
  const int threads = thread_count(jobs);
#ifdef _OPENMP
#pragma omp parallel for num_threads(threads) schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) errors.run(i, [&, i] { out[i] = decode(instances[i]); });
  (void)threads;
  errors.rethrow();
  return out;
}

}  // namespace amrsumm
