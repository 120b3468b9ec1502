#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

#include "amrsumm/corpus.hpp"
#include "amrsumm/features.hpp"
#include "amrsumm/penman.hpp"

using namespace amrsumm;

namespace {

SourceGraph toy_graph(Expansion level = Expansion::none) {
  const auto docs = load_corpus(std::string(FIXTURES_DIR) + "/toy.corpus");
  return build_document_graph(docs.at(0), level);
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("node features on the toy graph") {
  const SourceGraph sg = toy_graph();
  const FeatureConfig cfg;

  // dog: 2 mentions at depth 1, sentences 0 and 1, single-token spans
  CHECK(node_features(sg, 3, cfg).names ==
        sorted({"concept=dog", "freq_gt_0", "freq_gt_1", "avg_pos_gt_0.1", "avg_pos_gt_0.2",
                "bias"}));

  // garden: one mention at depth 3 in sentence 0
  CHECK(node_features(sg, 6, cfg).names ==
        sorted({"concept=garden", "freq_gt_0", "avg_depth_gt_1", "avg_depth_gt_2",
                "min_depth_gt_1", "min_depth_gt_2", "bias"}));

  // collapsed entity carries the named_entity flag
  CHECK(node_features(sg, 4, cfg).names ==
        sorted({"concept=person_name_op1_Joe", "freq_gt_0", "avg_depth_gt_1", "min_depth_gt_1",
                "named_entity", "bias"}));

  CHECK_THROWS_AS(node_features(sg, 0, cfg), Error);
  CHECK_THROWS_AS(node_features(sg, 99, cfg), Error);
}

TEST_CASE("edge features on a content edge") {
  const SourceGraph sg = toy_graph();
  const FeatureConfig cfg;
  const int k = sg.edge_index(7, 3);  // chase-01 -> dog
  REQUIRE(k >= 0);
  const FeatureVector f = edge_features(sg, k, cfg);

  CHECK(f.has("label1=ARG0"));
  CHECK(f.has("label1_relfreq_ge_0.33"));
  CHECK(f.has("label1_relfreq_ge_0.66"));
  CHECK(f.has("label1_relfreq_ge_1"));
  CHECK(f.has("efreq_gt_0"));
  CHECK_FALSE(f.has("efreq_gt_1"));
  CHECK(f.has("src_concept=chase-01"));
  CHECK(f.has("tgt_concept=dog"));
  CHECK(f.has("tgt_freq_gt_1"));
  CHECK(f.has("allfreq_gt_0"));
  CHECK(f.has("ebias"));
  CHECK_FALSE(f.has("expanded"));
  CHECK_FALSE(f.has("label2=ARG0"));
  CHECK_FALSE(f.has("src_bias"));
  CHECK_FALSE(f.has("tgt_bias"));

  CHECK_THROWS_AS(edge_features(sg, -1, cfg), Error);
  CHECK_THROWS_AS(edge_features(sg, 99, cfg), Error);
}

TEST_CASE("ROOT edges have no source copy and no labels") {
  const SourceGraph sg = toy_graph();
  const FeatureConfig cfg;
  const int k = sg.edge_index(0, 7);
  REQUIRE(k >= 0);
  const FeatureVector f = edge_features(sg, k, cfg);
  CHECK(f.has("ebias"));
  CHECK(f.has("tgt_concept=chase-01"));
  CHECK(f.has("allfreq_gt_0"));
  CHECK(f.has("efreq_gt_0"));  // rooted once
  CHECK_FALSE(f.has("efreq_gt_1"));
  for (const std::string& n : f.names) {
    CHECK(n.rfind("src_", 0) != 0);
    CHECK(n.rfind("label1=", 0) != 0);
    CHECK(n.rfind("label2=", 0) != 0);
  }
}

TEST_CASE("label histogram drives identity and relative frequency") {
  const SourceGraph sg = merge_graphs({parse_penman("(x / run-02 :ARG0 (d / dog))"),
                                       parse_penman("(x / run-02 :ARG0 (d / dog))"),
                                       parse_penman("(x / run-02 :ARG1 (d / dog))")});
  const FeatureConfig cfg;
  const int k = sg.edge_index(sg.node_index("run-02"), sg.node_index("dog"));
  const FeatureVector f = edge_features(sg, k, cfg);
  CHECK(f.has("label1=ARG0"));
  CHECK(f.has("label1_relfreq_ge_0.33"));
  CHECK(f.has("label1_relfreq_ge_0.66"));  // 2/3 >= 0.66
  CHECK_FALSE(f.has("label1_relfreq_ge_1"));
  CHECK(f.has("label2=ARG1"));
  CHECK(f.has("label2_relfreq_ge_0.33"));  // 1/3 >= 0.33
  CHECK_FALSE(f.has("label2_relfreq_ge_0.66"));
  CHECK(f.has("efreq_gt_2"));  // three occurrences
}

TEST_CASE("expanded edges") {
  const SourceGraph sg = toy_graph(Expansion::document);
  const int garden = sg.node_index("garden");
  const int chase = sg.node_index("chase-01");
  const int k = sg.edge_index(chase, garden);
  REQUIRE(k >= 0);
  const FeatureConfig cfg;
  const FeatureVector f = edge_features(sg, k, cfg);
  CHECK(f.has("expanded"));
  CHECK(f.has("label1=null"));
  CHECK_FALSE(f.has("allfreq_gt_0"));  // never co-mentioned
  for (const std::string& n : f.names) CHECK(n.rfind("efreq_gt_", 0) != 0);
}

TEST_CASE("feature vector basics") {
  FeatureVector f;
  f.names = {"alpha", "beta"};
  CHECK(f.has("alpha"));
  CHECK_FALSE(f.has("gamma"));
  CHECK(f.dump() == "alpha\t1\nbeta\t1\n");
}

TEST_CASE("weights dot products") {
  Weights w;
  w.theta = {{"a", 1.5}, {"b", -0.5}};
  w.psi = {{"a", 10.0}};
  FeatureVector f;
  f.names = {"a", "b", "c"};
  CHECK(w.node_dot(f) == 1.0);
  CHECK(w.edge_dot(f) == 10.0);
}

TEST_CASE("weight serialization round trip") {
  Weights w;
  w.theta = {{"concept=dog", 1.0 / 3.0}, {"bias", -2.0}};
  w.psi = {{"ebias", 0.125}};
  const std::string text = serialize_weights(w, "cafebabe01234567");
  CHECK(text.find("# model digest=cafebabe01234567") == 0);
  const Weights back = parse_weights(text);
  CHECK(back.theta == w.theta);
  CHECK(back.psi == w.psi);
}

TEST_CASE("weight parsing rejects malformed lines") {
  CHECK_THROWS_AS(parse_weights("node:a\tx\n"), IoError);
  CHECK_THROWS_AS(parse_weights("wrong:a\t1\n"), IoError);
  CHECK_THROWS_AS(parse_weights("node:a 1\n"), IoError);  // no tab
  CHECK_THROWS_AS(load_weights("/nonexistent/model.tsv"), IoError);
}

TEST_CASE("weight files persist") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "amrsumm_w_test.tsv").string();
  Weights w;
  w.theta["bias"] = 0.5;
  save_weights(w, path, "0000000000000000");
  const Weights back = load_weights(path);
  CHECK(back.theta == w.theta);
  std::filesystem::remove(path);
}

TEST_CASE("unknown feature names are caught") {
  const FeatureConfig cfg;
  Weights w;
  w.theta = {{"concept=dog", 1.0}, {"freq_gt_1", 1.0}, {"bias", 1.0}};
  w.psi = {{"label1=ARG0", 1.0}, {"src_avg_pos_gt_0.1", 1.0}, {"ebias", 1.0}};
  CHECK(unknown_feature_names(w, cfg).empty());

  w.theta["freq_gt_3"] = 1.0;  // 3 is not a configured threshold
  w.psi["src_bias"] = 1.0;     // bias is never copied onto edges
  w.psi["mystery"] = 1.0;
  const auto bad = unknown_feature_names(w, cfg);
  CHECK(bad == std::vector<std::string>{"node:freq_gt_3", "edge:mystery", "edge:src_bias"});

  FeatureConfig wide;
  wide.freq_thresholds = {3};
  Weights w2;
  w2.theta = {{"freq_gt_3", 1.0}};
  CHECK(unknown_feature_names(w2, wide).empty());
}
