// Command line front end: build / coverage / train / decode / oracle /
// evaluate over the corpus format documented in corpus.hpp.
//
// Exit codes: 0 ok, 2 input errors (corpus, graphs, model, predictions),
// 3 infeasible decoding, 4 bad configuration or flags, 1 anything else.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "amrsumm/batch.hpp"
#include "amrsumm/config.hpp"
#include "amrsumm/corpus.hpp"
#include "amrsumm/eval.hpp"
#include "amrsumm/learning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace amrsumm;

namespace {

std::string num_str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad integer for " + what + ": '" + s + "'");
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("bad number for " + what + ": '" + s + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Options {
  std::string corpus;
  std::string expansion = "sentence";
  std::string loss = "ramp";
  double eta = 1.0;
  int epochs = 10;
  unsigned long seed = 1;
  std::string size_policy = "gold";
  double unit_cost = 1.0;
  int max_root_out = 0;
  int jobs = 0;
  std::string out = "out";
  std::string model;
  std::string predictions;
  std::string config_path;
  std::string stopwords_path;

  FeatureConfig features;
  std::string freq_list, depth_list, position_list, span_list, relfreq_list;
};

const std::set<std::string> kConfigKeys = {
    "corpus",        "expansion",        "loss",
    "eta",           "epochs",           "seed",
    "size-policy",   "unit-cost",        "max-root-out",
    "jobs",          "out",              "model",
    "predictions",   "stopwords",        "freq-thresholds",
    "depth-thresholds", "position-thresholds", "span-thresholds",
    "relfreq-thresholds"};

// Config file values fill in whatever the command line left at its default;
// explicit flags always win.
void apply_config(Options& o, const std::map<std::string, CLI::Option*>& flags) {
  if (o.config_path.empty()) return;
  const auto kv = load_config_file(o.config_path);
  for (const auto& [key, value] : kv) {
    if (!kConfigKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
    auto it = flags.find(key);
    if (it != flags.end() && it->second->count() > 0) continue;  // flag wins
    if (key == "corpus") o.corpus = value;
    else if (key == "expansion") o.expansion = value;
    else if (key == "loss") o.loss = value;
    else if (key == "eta") o.eta = to_double(value, key);
    else if (key == "epochs") o.epochs = to_int(value, key);
    else if (key == "seed") o.seed = static_cast<unsigned long>(to_int(value, key));
    else if (key == "size-policy") o.size_policy = value;
    else if (key == "unit-cost") o.unit_cost = to_double(value, key);
    else if (key == "max-root-out") o.max_root_out = to_int(value, key);
    else if (key == "jobs") o.jobs = to_int(value, key);
    else if (key == "out") o.out = value;
    else if (key == "model") o.model = value;
    else if (key == "predictions") o.predictions = value;
    else if (key == "stopwords") o.stopwords_path = value;
    else if (key == "freq-thresholds") o.freq_list = value;
    else if (key == "depth-thresholds") o.depth_list = value;
    else if (key == "position-thresholds") o.position_list = value;
    else if (key == "span-thresholds") o.span_list = value;
    else if (key == "relfreq-thresholds") o.relfreq_list = value;
  }
}

void finish_features(Options& o) {
  auto ints = [](const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const std::string& s : split_list(text)) out.push_back(to_int(s, what));
    if (out.empty()) throw ConfigError(what + " must not be empty");
    return out;
  };
  auto doubles = [](const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& s : split_list(text)) out.push_back(to_double(s, what));
    if (out.empty()) throw ConfigError(what + " must not be empty");
    return out;
  };
  if (!o.freq_list.empty()) o.features.freq_thresholds = ints(o.freq_list, "freq-thresholds");
  if (!o.depth_list.empty()) o.features.depth_thresholds = ints(o.depth_list, "depth-thresholds");
  if (!o.position_list.empty())
    o.features.position_thresholds = doubles(o.position_list, "position-thresholds");
  if (!o.span_list.empty()) o.features.span_thresholds = ints(o.span_list, "span-thresholds");
  if (!o.relfreq_list.empty())
    o.features.label_relfreq_thresholds = doubles(o.relfreq_list, "relfreq-thresholds");
}

std::string join_num(const std::vector<int>& v) {
  std::string s;
  for (int x : v) {
    if (!s.empty()) s += ',';
    s += std::to_string(x);
  }
  return s;
}

std::string join_num(const std::vector<double>& v) {
  std::string s;
  for (double x : v) {
    if (!s.empty()) s += ',';
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    s += buf;
  }
  return s;
}

std::map<std::string, std::string> effective_options(const Options& o) {
  return {
      {"corpus", o.corpus},
      {"expansion", o.expansion},
      {"loss", o.loss},
      {"eta", num_str(o.eta)},
      {"epochs", std::to_string(o.epochs)},
      {"seed", std::to_string(o.seed)},
      {"size-policy", o.size_policy},
      {"unit-cost", num_str(o.unit_cost)},
      {"max-root-out", std::to_string(o.max_root_out)},
      {"jobs", std::to_string(o.jobs)},
      {"model", o.model},
      {"predictions", o.predictions},
      {"stopwords", o.stopwords_path},
      {"freq-thresholds", join_num(o.features.freq_thresholds)},
      {"depth-thresholds", join_num(o.features.depth_thresholds)},
      {"position-thresholds", join_num(o.features.position_thresholds)},
      {"span-thresholds", join_num(o.features.span_thresholds)},
      {"relfreq-thresholds", join_num(o.features.label_relfreq_thresholds)},
  };
}

fs::path ensure_outdir(const Options& o) {
  fs::path dir(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + o.out + "': " + ec.message());
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot write '" + p.string() + "'");
  return f;
}

std::string write_manifest(const Options& o, const std::string& command) {
  const fs::path dir = ensure_outdir(o);
  const auto opts = effective_options(o);
  const std::string digest = config_digest(opts);
  json j;
  j["command"] = command;
  j["digest"] = digest;
  j["out"] = o.out;
  j["options"] = opts;
  auto f = open_out(dir / "manifest.json");
  f << j.dump(2) << '\n';
  return digest;
}

std::vector<Document> load_docs(const Options& o) {
  if (o.corpus.empty()) throw ConfigError("--corpus is required");
  std::vector<Document> docs = load_corpus(o.corpus);
  if (docs.empty()) throw CorpusError("corpus '" + o.corpus + "' has no documents");
  return docs;
}

int gold_size(const Document& doc, const SizePolicy& sp) {
  if (!sp.from_gold) return sp.fixed;
  return static_cast<int>(build_gold_graph(doc).edges.size());
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::set<std::string> out;
  if (path.empty()) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stopword file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    std::string w = trim(line);
    std::transform(w.begin(), w.end(), w.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!w.empty()) out.insert(w);
  }
  return out;
}

void write_predictions(const fs::path& dir, const std::vector<Document>& docs,
                       const std::vector<SourceGraph>& graphs, const std::vector<Subgraph>& subs) {
  auto f = open_out(dir / "predictions.jsonl");
  for (std::size_t i = 0; i < docs.size(); ++i) {
    json j;
    j["doc"] = docs[i].id;
    j["nodes"] = selected_labels(subs[i], graphs[i]);
    json edges = json::array();
    for (const auto& [a, b] : selected_pairs(subs[i], graphs[i])) edges.push_back({a, b});
    j["edges"] = edges;
    j["bow"] = generate_bow(subs[i], graphs[i], docs[i].sentences).sorted_tokens();
    f << j.dump() << '\n';
  }
}

int cmd_build(const Options& o) {
  const auto docs = load_docs(o);
  const auto graphs = build_graphs_omp(docs, expansion_from_string(o.expansion), o.jobs);
  write_manifest(o, "build");
  const fs::path dir(o.out);
  auto f = open_out(dir / "graphs.jsonl");
  std::size_t nodes = 0, edges = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    json head;
    head["type"] = "doc";
    head["id"] = docs[i].id;
    f << head.dump() << '\n' << to_jsonl(graphs[i]);
    nodes += graphs[i].nodes.size();
    edges += graphs[i].edges.size();
  }
  std::cout << "[INFO] built " << graphs.size() << " source graphs (" << nodes << " nodes, "
            << edges << " edges) -> " << (dir / "graphs.jsonl").string() << '\n';
  return 0;
}

int cmd_coverage(const Options& o) {
  const auto docs = load_docs(o);
  write_manifest(o, "coverage");
  std::printf("%-10s %9s %11s\n", "expansion", "labeled", "unlabeled");
  for (Expansion level : {Expansion::none, Expansion::sentence, Expansion::document}) {
    long gold = 0, lab = 0, unlab = 0;
    const auto graphs = build_graphs_omp(docs, level, o.jobs);
    for (std::size_t i = 0; i < docs.size(); ++i) {
      std::vector<AmrGraph> summary;
      for (const Sentence& s : docs[i].summary) summary.push_back(s.graph);
      const CoverageResult cr = coverage(graphs[i], summary);
      gold += cr.gold_edges;
      lab += cr.labeled_covered;
      unlab += cr.unlabeled_covered;
    }
    std::printf("%-10s %8.1f%% %10.1f%%\n", std::string(to_string(level)).c_str(),
                100.0 * lab / gold, 100.0 * unlab / gold);
  }
  return 0;
}

TrainConfig train_config(const Options& o) {
  TrainConfig cfg;
  cfg.loss = loss_from_string(o.loss);
  cfg.eta = o.eta;
  cfg.epochs = o.epochs;
  cfg.seed = o.seed;
  cfg.unit_cost = o.unit_cost;
  const SizePolicy sp = parse_size_policy(o.size_policy);
  cfg.size_from_gold = sp.from_gold;
  cfg.fixed_size = sp.fixed;
  cfg.max_root_out = o.max_root_out;
  cfg.features = o.features;
  return cfg;
}

int cmd_train(const Options& o) {
  const auto docs = load_docs(o);
  const TrainConfig cfg = train_config(o);
  const auto graphs = build_graphs_omp(docs, expansion_from_string(o.expansion), o.jobs);
  std::vector<TrainInstance> instances;
  instances.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i)
    instances.push_back(make_train_instance(graphs[i], build_gold_graph(docs[i]), cfg));
  const TrainResult res = train(instances, cfg);
  const std::string digest = write_manifest(o, "train");
  const fs::path dir(o.out);
  save_weights(res.weights, (dir / "model.tsv").string(), digest);
  for (std::size_t e = 0; e < res.epoch_loss.size(); ++e)
    std::cout << "[INFO] epoch " << e + 1 << " loss " << num_str(res.epoch_loss[e]) << '\n';
  std::cout << "[INFO] wrote " << (dir / "model.tsv").string() << " ("
            << res.weights.theta.size() << " node weights, " << res.weights.psi.size()
            << " edge weights)\n";
  return 0;
}

int cmd_decode(const Options& o) {
  const auto docs = load_docs(o);
  if (o.model.empty()) throw ConfigError("decode needs --model");
  const Weights w = load_weights(o.model);
  const auto unknown = unknown_feature_names(w, o.features);
  if (!unknown.empty()) {
    std::string msg = "model uses feature names this configuration cannot produce:";
    for (const std::string& n : unknown) msg += " " + n;
    throw ConfigError(msg);
  }
  const SizePolicy sp = parse_size_policy(o.size_policy);
  const auto graphs = build_graphs_omp(docs, expansion_from_string(o.expansion), o.jobs);
  std::vector<IlpInstance> instances;
  instances.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const GraphFeatures gf = extract_features_omp(graphs[i], o.features, o.jobs);
    instances.push_back(score_instance(graphs[i], gf, w, gold_size(docs[i], sp), o.max_root_out));
  }
  const auto subs = decode_corpus_omp(instances, o.jobs);
  write_manifest(o, "decode");
  write_predictions(fs::path(o.out), docs, graphs, subs);
  std::cout << "[INFO] decoded " << subs.size() << " documents -> "
            << (fs::path(o.out) / "predictions.jsonl").string() << '\n';
  return 0;
}

int cmd_oracle(const Options& o) {
  const auto docs = load_docs(o);
  const SizePolicy sp = parse_size_policy(o.size_policy);
  const auto graphs = build_graphs_omp(docs, expansion_from_string(o.expansion), o.jobs);
  std::vector<Subgraph> subs;
  subs.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const SourceGraph gold = build_gold_graph(docs[i]);
    const int L = sp.from_gold ? static_cast<int>(gold.edges.size()) : sp.fixed;
    subs.push_back(oracle_decode(graphs[i], gold, L));
  }
  write_manifest(o, "oracle");
  write_predictions(fs::path(o.out), docs, graphs, subs);
  std::cout << "[INFO] oracle-decoded " << subs.size() << " documents -> "
            << (fs::path(o.out) / "predictions.jsonl").string() << '\n';
  return 0;
}

struct DocPrediction {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;
  BagOfWords bow;
};

std::map<std::string, DocPrediction> load_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open predictions file '" + path + "'");
  std::map<std::string, DocPrediction> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw CorpusError("predictions line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      const std::string id = j.at("doc").get<std::string>();
      if (out.count(id))
        throw CorpusError("predictions line " + std::to_string(lineno) + ": duplicate doc '" +
                          id + "'");
      DocPrediction p;
      for (const auto& n : j.at("nodes")) p.nodes.insert(n.get<std::string>());
      for (const auto& e : j.at("edges"))
        p.edges.insert({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
      for (const auto& t : j.at("bow")) ++p.bow.counts[t.get<std::string>()];
      out.emplace(id, std::move(p));
    } catch (const json::exception& e) {
      throw CorpusError("predictions line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (out.empty()) throw CorpusError("predictions file '" + path + "' is empty");
  return out;
}

int cmd_evaluate(const Options& o) {
  const auto docs = load_docs(o);
  const std::string pred_path =
      o.predictions.empty() ? (fs::path(o.out) / "predictions.jsonl").string() : o.predictions;
  const auto preds = load_predictions(pred_path);
  const auto stop = load_stopwords(o.stopwords_path);

  PrfCounts node_total, edge_total;
  double rp = 0.0, rr = 0.0, rf = 0.0;
  int n_docs = 0;
  json per_doc = json::array();
  for (const Document& doc : docs) {
    auto it = preds.find(doc.id);
    if (it == preds.end()) continue;
    const SourceGraph gold = build_gold_graph(doc);
    const PrfCounts nc = set_overlap(it->second.nodes, gold_labels(gold));
    const PrfCounts ec = pair_overlap(it->second.edges, gold_pairs(gold));
    std::vector<std::string> ref;
    for (const Sentence& s : doc.summary)
      for (const std::string& t : s.tokens) ref.push_back(t);
    const Rouge rg = rouge1(it->second.bow, {ref}, stop);
    node_total.predicted += nc.predicted;
    node_total.gold += nc.gold;
    node_total.matched += nc.matched;
    edge_total.predicted += ec.predicted;
    edge_total.gold += ec.gold;
    edge_total.matched += ec.matched;
    rp += rg.p;
    rr += rg.r;
    rf += rg.f;
    ++n_docs;
    json d;
    d["doc"] = doc.id;
    d["node"] = {{"predicted", nc.predicted}, {"gold", nc.gold}, {"matched", nc.matched}};
    d["edge"] = {{"predicted", ec.predicted}, {"gold", ec.gold}, {"matched", ec.matched}};
    d["rouge1"] = {{"p", rg.p}, {"r", rg.r}, {"f", rg.f}};
    per_doc.push_back(d);
  }
  if (n_docs == 0) throw CorpusError("no prediction matches any document in the corpus");

  auto prf = [](const PrfCounts& c) {
    const double p = c.predicted > 0 ? static_cast<double>(c.matched) / c.predicted : 0.0;
    const double r = c.gold > 0 ? static_cast<double>(c.matched) / c.gold : 0.0;
    return std::array<double, 3>{p, r, f1(p, r)};
  };
  const auto np = prf(node_total);
  const auto ep = prf(edge_total);
  rp /= n_docs;
  rr /= n_docs;
  rf /= n_docs;

  write_manifest(o, "evaluate");
  const fs::path dir(o.out);
  json rep;
  rep["documents"] = n_docs;
  rep["node"] = {{"p", np[0]}, {"r", np[1]}, {"f", np[2]}};
  rep["edge"] = {{"p", ep[0]}, {"r", ep[1]}, {"f", ep[2]}};
  rep["rouge1"] = {{"p", rp}, {"r", rr}, {"f", rf}};
  rep["per_doc"] = per_doc;
  open_out(dir / "report.json") << rep.dump(2) << '\n';

  std::ostringstream txt;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-9s %7s %7s %7s\n", "", "P", "R", "F");
  txt << buf;
  std::snprintf(buf, sizeof buf, "%-9s %7.3f %7.3f %7.3f\n", "nodes", np[0], np[1], np[2]);
  txt << buf;
  std::snprintf(buf, sizeof buf, "%-9s %7.3f %7.3f %7.3f\n", "edges", ep[0], ep[1], ep[2]);
  txt << buf;
  std::snprintf(buf, sizeof buf, "%-9s %7.3f %7.3f %7.3f\n", "rouge-1", rp, rr, rf);
  txt << buf;
  txt << "documents " << n_docs << '\n';
  open_out(dir / "report.txt") << txt.str();
  std::cout << txt.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph summarization over per-sentence semantic graphs"};
  app.require_subcommand(1);

  Options o;
  std::map<std::string, CLI::Option*> flags;  // the parsed subcommand's options
  auto add_common = [&o](CLI::App* sub) {
    std::map<std::string, CLI::Option*> f;
    f["corpus"] = sub->add_option("--corpus", o.corpus, "corpus file");
    f["expansion"] = sub->add_option("--expansion", o.expansion,
                                     "graph expansion: none, sentence, document");
    f["loss"] = sub->add_option("--loss", o.loss, "perceptron, hinge, ramp");
    f["eta"] = sub->add_option("--eta", o.eta, "learning rate");
    f["epochs"] = sub->add_option("--epochs", o.epochs, "training epochs");
    f["seed"] = sub->add_option("--seed", o.seed, "shuffle seed");
    f["size-policy"] = sub->add_option("--size-policy", o.size_policy, "gold or fixed:<k>");
    f["unit-cost"] = sub->add_option("--unit-cost", o.unit_cost, "cost per wrong element");
    f["max-root-out"] =
        sub->add_option("--max-root-out", o.max_root_out, "ROOT out-degree cap, 0 = unlimited");
    f["jobs"] = sub->add_option("--jobs", o.jobs, "worker threads, 0 = runtime default");
    f["out"] = sub->add_option("--out", o.out, "output directory");
    f["model"] = sub->add_option("--model", o.model, "model file to load");
    f["predictions"] =
        sub->add_option("--predictions", o.predictions, "predictions file to evaluate");
    f["stopwords"] =
        sub->add_option("--stopwords", o.stopwords_path, "stopword file, one token per line");
    sub->add_option("--config", o.config_path, "key=value config file");
    return f;
  };

  int (*run)(const Options&) = nullptr;
  auto hook = [&](CLI::App* sub, int (*fn)(const Options&)) {
    auto f = add_common(sub);
    sub->callback([&run, &flags, f, fn]() {
      run = fn;
      flags = f;
    });
  };
  hook(app.add_subcommand("build", "parse a corpus and write source graphs"), cmd_build);
  hook(app.add_subcommand("coverage", "summary edge coverage per expansion level"), cmd_coverage);
  hook(app.add_subcommand("train", "fit scoring weights"), cmd_train);
  hook(app.add_subcommand("decode", "select summary subgraphs with a model"), cmd_decode);
  hook(app.add_subcommand("oracle", "best reachable subgraphs given the gold summaries"),
       cmd_oracle);
  hook(app.add_subcommand("evaluate", "score predictions against gold summaries"), cmd_evaluate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 4;
  }

  try {
    apply_config(o, flags);
    finish_features(o);
    return run(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const CorpusError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
