#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "amrsumm/corpus.hpp"
#include "amrsumm/eval.hpp"
#include "amrsumm/ilp.hpp"

using namespace amrsumm;

namespace {

std::vector<Document> toy() { return load_corpus(std::string(FIXTURES_DIR) + "/toy.corpus"); }

BagOfWords bag(std::map<std::string, int> counts) {
  BagOfWords b;
  b.counts = std::move(counts);
  return b;
}

Sentence sentence_of(std::vector<std::string> tokens) {
  Sentence s;
  s.tokens = std::move(tokens);
  return s;
}

// one content node with the given spans hung off ROOT
SourceGraph single_node_graph(std::vector<AlignedSpan> spans) {
  SourceGraph sg;
  SourceNode root;
  root.label = "ROOT";
  SourceNode x;
  x.label = "x";
  x.mentions.push_back(Mention{});
  x.spans = std::move(spans);
  sg.nodes = {root, x};
  SourceEdge e;
  e.source = 0;
  e.target = 1;
  sg.edges = {e};
  sg.sentence_roots = {1};
  sg.num_sentences = 1;
  return sg;
}

Subgraph pick_node_1() {
  Subgraph sub;
  sub.nodes = {1};
  sub.edges = {{0, 1}};
  return sub;
}

}  // namespace

TEST_CASE("bag of words bookkeeping") {
  const BagOfWords b = bag({{"b", 2}, {"a", 1}});
  CHECK(b.total() == 3);
  CHECK(b.sorted_tokens() == std::vector<std::string>{"a", "b", "b"});
  CHECK(bag({}).total() == 0);
}

TEST_CASE("f1 degenerate cases") {
  CHECK(f1(0.0, 0.0) == 0.0);
  CHECK(f1(0.5, 0.5) == 0.5);
  CHECK(f1(1.0, 0.0) == 0.0);
}

TEST_CASE("rouge-1 identities") {
  CHECK(rouge1(bag({{"a", 1}, {"b", 1}}), {{"a", "b"}}).f == 1.0);
  CHECK(rouge1(bag({{"a", 1}}), {{"b", "c"}}).f == 0.0);

  // candidate {a,a,b} against reference [a,b,c]: clipped match 2
  const Rouge r = rouge1(bag({{"a", 2}, {"b", 1}}), {{"a", "b", "c"}});
  CHECK(r.p == 2.0 / 3.0);
  CHECK(r.r == 2.0 / 3.0);
  CHECK(r.f == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  // per-token max across references: a capped at 2, b at 1
  const Rouge multi = rouge1(bag({{"a", 3}}), {{"a", "a"}, {"b"}});
  CHECK(multi.p == 2.0 / 3.0);
  CHECK(multi.r == 2.0 / 3.0);

  // case folding on both sides
  CHECK(rouge1(bag({{"dog", 1}}), {{"Dog"}}).f == 1.0);
}

TEST_CASE("rouge-1 stopwords and degenerate inputs") {
  const std::set<std::string> stop{"the", "a"};
  const Rouge r = rouge1(bag({{"the", 1}, {"dog", 1}}), {{"the", "dog"}}, stop);
  CHECK(r.p == 1.0);
  CHECK(r.r == 1.0);

  // empty candidate against a real reference
  const Rouge empty = rouge1(bag({}), {{"dog"}});
  CHECK(empty.p == 0.0);
  CHECK(empty.r == 0.0);
  CHECK(empty.f == 0.0);

  CHECK_THROWS_AS(rouge1(bag({{"x", 1}}), {}), Error);
  CHECK_THROWS_AS(rouge1(bag({{"x", 1}}), {{}, {}}), Error);
  // stopword removal can empty the references too
  CHECK_THROWS_AS(rouge1(bag({{"dog", 1}}), {{"the"}}, stop), Error);
}

TEST_CASE("bags from the toy oracle selections") {
  const auto docs = toy();
  const SourceGraph plain = build_document_graph(docs[0], Expansion::none);
  const SourceGraph gold = build_gold_graph(docs[0]);

  const Subgraph sub = oracle_decode(plain, gold, 5);
  const BagOfWords b = generate_bow(sub, plain, docs[0].sentences);
  CHECK(b.counts == std::map<std::string, int>{
                        {"saw", 1}, {"dog", 1}, {"joe", 1}, {"chasing", 1}, {"cat", 1}});

  const SourceGraph expanded = build_document_graph(docs[0], Expansion::document);
  const Subgraph sub2 = oracle_decode(expanded, gold, 5);
  const BagOfWords b2 = generate_bow(sub2, expanded, docs[0].sentences);
  CHECK(b2.counts == std::map<std::string, int>{
                         {"dog", 1}, {"joe", 1}, {"garden", 1}, {"chasing", 1}, {"cat", 1}});
}

TEST_CASE("span selection rules") {
  const std::vector<Sentence> sents = {sentence_of({"dog", "dogs"}), sentence_of({"dog"}),
                                       sentence_of({"puppy", "dog"})};

  // most frequent span text wins
  SourceGraph sg = single_node_graph({{0, 0, 1}, {0, 1, 2}, {1, 0, 1}});
  CHECK(generate_bow(pick_node_1(), sg, sents).counts == std::map<std::string, int>{{"dog", 1}});

  // tie on count: fewer tokens
  sg = single_node_graph({{2, 0, 2}, {0, 1, 2}});
  CHECK(generate_bow(pick_node_1(), sg, sents).counts == std::map<std::string, int>{{"dogs", 1}});

  // tie on count and length: earliest occurrence, independent of span order
  sg = single_node_graph({{2, 0, 1}, {0, 0, 1}});
  CHECK(generate_bow(pick_node_1(), sg, sents).counts == std::map<std::string, int>{{"dog", 1}});

  // multi-token winner contributes each token
  sg = single_node_graph({{2, 0, 2}});
  CHECK(generate_bow(pick_node_1(), sg, sents).counts ==
        std::map<std::string, int>{{"puppy", 1}, {"dog", 1}});

  // unaligned nodes contribute nothing
  sg = single_node_graph({});
  CHECK(generate_bow(pick_node_1(), sg, sents).counts.empty());

  // out-of-range selections and spans are rejected
  Subgraph bad;
  bad.nodes = {7};
  CHECK_THROWS_AS(generate_bow(bad, sg, sents), Error);
  sg = single_node_graph({{9, 0, 1}});
  CHECK_THROWS_AS(generate_bow(pick_node_1(), sg, sents), Error);
  sg = single_node_graph({{0, 1, 5}});
  CHECK_THROWS_AS(generate_bow(pick_node_1(), sg, sents), Error);
}

TEST_CASE("bags depend on nodes, not edges") {
  const auto docs = toy();
  const SourceGraph sg = build_document_graph(docs[0], Expansion::none);
  Subgraph a;
  a.nodes = {3, 7, 8};
  a.edges = {{0, 7}, {7, 3}, {7, 8}};
  Subgraph b;
  b.nodes = {3, 7, 8};
  const BagOfWords ba = generate_bow(a, sg, docs[0].sentences);
  CHECK(ba.counts == generate_bow(b, sg, docs[0].sentences).counts);
  CHECK(ba.counts ==
        std::map<std::string, int>{{"dog", 1}, {"chasing", 1}, {"cat", 1}});
}

TEST_CASE("node and edge scores on the toy oracle") {
  const auto docs = toy();
  const SourceGraph sg = build_document_graph(docs[0], Expansion::none);
  const SourceGraph gold = build_gold_graph(docs[0]);
  const Subgraph sub = oracle_decode(sg, gold, 5);

  const EvalReport rep = node_edge_prf(sub, sg, gold);
  CHECK(rep.node_p == 0.8);
  CHECK(rep.node_r == 0.8);
  CHECK(rep.node_f == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(rep.edge_p == 0.8);
  CHECK(rep.edge_r == 0.8);
  CHECK(rep.edge_f == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(rep.rouge_f == 0.0);  // not this function's business

  SourceGraph empty_gold;
  SourceNode root;
  root.label = "ROOT";
  empty_gold.nodes = {root};
  CHECK_THROWS_AS(node_edge_prf(sub, sg, empty_gold), Error);
}

TEST_CASE("label and pair extraction") {
  const auto docs = toy();
  const SourceGraph sg = build_document_graph(docs[0], Expansion::none);
  const SourceGraph gold = build_gold_graph(docs[0]);
  const Subgraph sub = oracle_decode(sg, gold, 5);

  CHECK(selected_labels(sub, sg) ==
        std::set<std::string>{"see-01", "dog", "person_name_op1_Joe", "chase-01", "cat"});
  CHECK(selected_pairs(sub, sg).count({"ROOT", "chase-01"}) == 1);
  CHECK(selected_pairs(sub, sg).count({"ROOT", "see-01"}) == 1);
  CHECK(gold_labels(gold) ==
        std::set<std::string>{"chase-01", "dog", "person_name_op1_Joe", "cat", "garden"});
  CHECK(gold_pairs(gold).size() == 5);
  CHECK(gold_pairs(gold).count({"chase-01", "garden"}) == 1);

  Subgraph out_of_range;
  out_of_range.nodes = {42};
  CHECK_THROWS_AS(selected_labels(out_of_range, sg), Error);
}

TEST_CASE("overlap counting") {
  const PrfCounts s = set_overlap({"a", "b", "c"}, {"b", "c", "d", "e"});
  CHECK(s.predicted == 3);
  CHECK(s.gold == 4);
  CHECK(s.matched == 2);

  const PrfCounts p = pair_overlap({{"a", "b"}, {"b", "c"}}, {{"b", "c"}});
  CHECK(p.predicted == 2);
  CHECK(p.gold == 1);
  CHECK(p.matched == 1);
}
