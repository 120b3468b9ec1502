// Serial reference vs OpenMP comparison on a synthetic corpus stitched from
// the bundled fixtures. Outputs one table row per stage plus a consistency
// check that both implementations produced identical results.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "amrsumm/batch.hpp"
#include "amrsumm/corpus.hpp"
#include "amrsumm/learning.hpp"

using namespace amrsumm;

namespace {

double ms_of(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-18s %10.1f ms %10.1f ms %7.2fx %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel benchmark"};
  int copies = 120;
  int jobs = 0;
  std::string fixtures = FIXTURES_DIR;
  app.add_option("--copies", copies, "fixture replication factor");
  app.add_option("--jobs", jobs, "worker threads, 0 = runtime default");
  app.add_option("--fixtures", fixtures, "fixture directory");
  CLI11_PARSE(app, argc, argv);

  std::vector<Document> docs;
  for (const char* name : {"toy.corpus", "mixed.corpus", "separable.corpus"}) {
    const auto batch = load_corpus(fixtures + "/" + name);
    for (int c = 0; c < copies; ++c)
      for (Document d : batch) {
        d.id += "_" + std::to_string(c);
        docs.push_back(std::move(d));
      }
  }
  std::printf("%zu documents, jobs=%d\n\n", docs.size(), jobs);
  std::printf("%-18s %13s %13s %8s\n", "stage", "serial", "parallel", "speedup");

  std::vector<SourceGraph> gs, gp;
  const double t_bs = ms_of([&] { gs = build_graphs_serial(docs, Expansion::sentence); });
  const double t_bp = ms_of([&] { gp = build_graphs_omp(docs, Expansion::sentence, jobs); });
  bool same = true;
  for (std::size_t i = 0; i < gs.size(); ++i)
    if (to_jsonl(gs[i]) != to_jsonl(gp[i])) same = false;
  row("build graphs", t_bs, t_bp, same);

  const FeatureConfig fcfg;
  std::vector<GraphFeatures> fs(gs.size()), fp(gs.size());
  const double t_fs = ms_of([&] {
    for (std::size_t i = 0; i < gs.size(); ++i) fs[i] = extract_features_serial(gs[i], fcfg);
  });
  const double t_fp = ms_of([&] {
    for (std::size_t i = 0; i < gs.size(); ++i) fp[i] = extract_features_omp(gs[i], fcfg, jobs);
  });
  same = true;
  for (std::size_t i = 0; i < gs.size(); ++i)
    if (fs[i].node_feats.size() != fp[i].node_feats.size() ||
        fs[i].edge_feats.size() != fp[i].edge_feats.size())
      same = false;
    else {
      for (std::size_t v = 0; v < fs[i].node_feats.size(); ++v)
        if (fs[i].node_feats[v].names != fp[i].node_feats[v].names) same = false;
      for (std::size_t k = 0; k < fs[i].edge_feats.size(); ++k)
        if (fs[i].edge_feats[k].names != fp[i].edge_feats[k].names) same = false;
    }
  row("extract features", t_fs, t_fp, same);

  // Small deterministic weights so decoding has something to argue about.
  Weights w;
  std::mt19937 rng(7);
  auto dyadic = [&rng] { return (static_cast<int>(rng() % 2049) - 1024) / 1024.0; };
  for (const GraphFeatures& gf : fs) {
    for (const FeatureVector& f : gf.node_feats)
      for (const std::string& n : f.names)
        if (!w.theta.count(n)) w.theta[n] = dyadic();
    for (const FeatureVector& f : gf.edge_feats)
      for (const std::string& n : f.names)
        if (!w.psi.count(n)) w.psi[n] = dyadic();
  }
  std::vector<IlpInstance> instances;
  instances.reserve(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const int L = static_cast<int>(build_gold_graph(docs[i]).edges.size());
    instances.push_back(score_instance(gs[i], fs[i], w, L));
  }
  std::vector<Subgraph> ds, dp;
  const double t_ds = ms_of([&] { ds = decode_corpus_serial(instances); });
  const double t_dp = ms_of([&] { dp = decode_corpus_omp(instances, jobs); });
  row("decode", t_ds, t_dp, ds == dp);
  return 0;
}
