// Command-line front end: train, eval, cv, gradcheck, attn, convert.
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 verification
// failure, 1 anything else.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mahnn/mahnn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string checksum_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(ss.str())));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
  }
  fs::rename(tmp, path);
}

struct ManifestBuilder {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<fs::path> outputs;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void write(const fs::path& out_dir) const {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["seed"] = seed;
    m["inputs"] = inputs;
    m["outputs"] = json::array();
    for (const auto& p : outputs)
      m["outputs"].push_back(
          {{"path", p.string()}, {"checksum", checksum_file(p)}});
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_atomic(out_dir / "manifest.json", m.dump(2) + "\n");
  }
};

mahnn::TrainConfig load_config(const std::string& path) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw mahnn::ConfigError("cannot open config file " + path);
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw mahnn::ConfigError("config is not valid JSON: " +
                               std::string(e.what()));
    }
  }
  std::vector<std::string> errors;
  auto cfg = mahnn::config_from_json(j, errors);
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw mahnn::ConfigError(msg);
  }
  return cfg;
}

mahnn::Corpus load_corpus(const std::string& path, mahnn::LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw mahnn::ParseError("cannot open data file " + path);
  return mahnn::load_tsv(in, nullptr, report);
}

json report_to_json(const mahnn::LoadReport& rep) {
  return json{{"accepted", rep.accepted},
              {"rejected", rep.rejected},
              {"replaced_bytes", rep.replaced_bytes},
              {"num_classes", rep.num_classes},
              {"avg_length", rep.avg_length},
              {"warnings", rep.warnings}};
}

struct CommonOpts {
  std::string config_path, data_path, test_path, out_dir, checkpoint;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string precision;
  int channels = 0;
  bool rv_flag = false;
  std::size_t k = 10;
};

void apply_overrides(mahnn::TrainConfig& cfg, const CommonOpts& o) {
  if (o.seed_set) cfg.seed = o.seed;
  if (!o.precision.empty()) {
    if (o.precision != "f64" && o.precision != "f32")
      throw mahnn::ConfigError("--precision must be f64 or f32");
    cfg.precision = o.precision;
  }
  if (o.channels > 0) cfg.channels = o.channels;
  if (o.rv_flag) cfg.rv = true;
}

template <class T>
struct PreparedData {
  mahnn::Corpus corpus;
  mahnn::LoadReport report;
  mahnn::Vocabulary vocab;
  std::size_t max_len = 0;
  mahnn::Tensor<T> embeddings;  // null unless a pretrained file was loaded
  std::size_t matched = 0;
};

template <class T>
PreparedData<T> prepare(const std::string& data_path,
                        const mahnn::TrainConfig& cfg) {
  PreparedData<T> prep;
  prep.corpus = load_corpus(data_path, &prep.report);
  if (prep.corpus.examples.empty())
    throw mahnn::ConfigError("dataset " + data_path + " is empty");
  std::unordered_set<std::string> rare;
  prep.vocab = mahnn::build_vocab(prep.corpus, &rare, cfg.min_token_freq);
  prep.max_len = mahnn::resolve_max_len(prep.corpus, cfg);
  mahnn::Rng rng(mahnn::derive_seed(cfg.seed, 7));
  if (!cfg.embeddings_path.empty()) {
    std::ifstream in(cfg.embeddings_path);
    if (!in)
      throw mahnn::ParseError("cannot open embeddings file " +
                              cfg.embeddings_path);
    auto w2v = mahnn::load_word2vec_text<T>(
        in, static_cast<std::size_t>(cfg.embedding_dim));
    auto built = mahnn::build_embedding_table<T>(
        prep.vocab, cfg.embedding_dim, rng, &w2v, &rare, T(0.25),
        !cfg.freeze_embeddings);
    prep.embeddings = built.table;
    prep.matched = built.matched;
  }
  return prep;
}

template <class T>
int run_train(const CommonOpts& opts, mahnn::TrainConfig cfg) {
  auto prep = prepare<T>(opts.data_path, cfg);
  cfg.max_len = static_cast<int>(prep.max_len);

  ManifestBuilder manifest;
  manifest.command = "train";
  manifest.config = mahnn::to_json(cfg);
  manifest.seed = cfg.seed;
  manifest.inputs.push_back(opts.data_path);

  mahnn::Rng init_rng(mahnn::derive_seed(cfg.seed, 0));
  auto model = mahnn::MahnnModel<T>::random(cfg, prep.vocab, prep.max_len,
                                            prep.corpus.num_classes, init_rng,
                                            prep.embeddings);

  // seeded dev slice
  std::vector<std::size_t> idx(prep.corpus.examples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  mahnn::Rng dev_rng(mahnn::derive_seed(cfg.seed, 3));
  std::shuffle(idx.begin(), idx.end(), dev_rng);
  const std::size_t dev_n = static_cast<std::size_t>(
      cfg.dev_fraction * static_cast<double>(idx.size()));
  std::vector<std::size_t> dev_idx(idx.begin(), idx.begin() + dev_n);
  std::vector<std::size_t> train_idx(idx.begin() + dev_n, idx.end());

  auto train_set =
      mahnn::encode_corpus<T>(prep.corpus, train_idx, prep.max_len, prep.vocab);
  auto dev_set =
      mahnn::encode_corpus<T>(prep.corpus, dev_idx, prep.max_len, prep.vocab);

  auto log = mahnn::train(model, train_set, dev_set);

  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  {
    std::string metrics;
    for (const auto& m : log.epochs) {
      json rec{{"epoch", m.epoch},
               {"train_loss", m.train_loss},
               {"train_acc", m.train_acc},
               {"dev_acc", m.dev_acc}};
      metrics += rec.dump() + "\n";
    }
    write_atomic(out / "metrics.jsonl", metrics);
    manifest.outputs.push_back(out / "metrics.jsonl");
  }
  {
    std::ostringstream rng_state;
    mahnn::Rng rng(mahnn::derive_seed(cfg.seed, 2));
    rng_state << rng;
    mahnn::save_checkpoint(out / "checkpoint", model, rng_state.str());
    for (const char* f :
         {"config.json", "vocab.txt", "manifest.json", "params.bin", "rng.txt"})
      manifest.outputs.push_back(out / "checkpoint" / f);
  }
  write_atomic(out / "load_report.json", report_to_json(prep.report).dump(2) + "\n");
  manifest.outputs.push_back(out / "load_report.json");

  const double train_acc = mahnn::evaluate(model, train_set);
  std::cout << "train accuracy: " << train_acc << "\n";
  if (!dev_set.empty())
    std::cout << "dev accuracy: " << mahnn::evaluate(model, dev_set) << "\n";
  if (!opts.test_path.empty()) {
    mahnn::LoadReport rep;
    auto test_corpus = load_corpus(opts.test_path, &rep);
    std::vector<std::size_t> tidx(test_corpus.examples.size());
    std::iota(tidx.begin(), tidx.end(), std::size_t{0});
    auto test_set =
        mahnn::encode_corpus<T>(test_corpus, tidx, prep.max_len, prep.vocab);
    std::cout << "test accuracy: " << mahnn::evaluate(model, test_set) << "\n";
    manifest.inputs.push_back(opts.test_path);
  }
  if (prep.matched > 0)
    std::cout << "pretrained vectors matched: " << prep.matched << "\n";
  manifest.write(out);
  return 0;
}

template <class T>
int run_eval(const CommonOpts& opts) {
  std::string rng_state;
  auto model = mahnn::load_checkpoint<T>(opts.checkpoint, &rng_state);
  mahnn::LoadReport rep;
  auto corpus = load_corpus(opts.data_path, &rep);
  std::vector<std::size_t> idx(corpus.examples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto data =
      mahnn::encode_corpus<T>(corpus, idx, model.max_len, model.vocab);
  const double acc = mahnn::evaluate(model, data);
  std::cout << "accuracy: " << acc << "\n";
  if (!opts.out_dir.empty()) {
    ManifestBuilder manifest;
    manifest.command = "eval";
    manifest.config = mahnn::to_json(model.cfg);
    manifest.seed = model.cfg.seed;
    manifest.inputs = {opts.checkpoint, opts.data_path};
    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    write_atomic(out / "eval.json", json{{"accuracy", acc}}.dump(2) + "\n");
    manifest.outputs.push_back(out / "eval.json");
    manifest.write(out);
  }
  return 0;
}

template <class T>
int run_cv(const CommonOpts& opts, mahnn::TrainConfig cfg) {
  auto prep = prepare<T>(opts.data_path, cfg);
  cfg.max_len = static_cast<int>(prep.max_len);
  ManifestBuilder manifest;
  manifest.command = "cv";
  manifest.config = mahnn::to_json(cfg);
  manifest.seed = cfg.seed;
  manifest.inputs.push_back(opts.data_path);

  auto result =
      mahnn::kfold_cv<T>(prep.corpus, cfg, opts.k, prep.max_len, prep.vocab);

  std::cout << "fold  accuracy\n";
  for (std::size_t f = 0; f < result.fold_accuracy.size(); ++f) {
    char line[64];
    std::snprintf(line, sizeof(line), "%4zu  %8.4f\n", f + 1,
                  result.fold_accuracy[f]);
    std::cout << line;
  }
  char summary[96];
  std::snprintf(summary, sizeof(summary), "mean  %8.4f  (std %.4f)\n",
                result.mean, result.stddev);
  std::cout << summary;

  if (!opts.out_dir.empty()) {
    const fs::path out(opts.out_dir);
    fs::create_directories(out);
    json j{{"folds", result.fold_accuracy},
           {"mean", result.mean},
           {"stddev", result.stddev},
           {"k", opts.k}};
    write_atomic(out / "cv_results.json", j.dump(2) + "\n");
    manifest.outputs.push_back(out / "cv_results.json");
    manifest.write(out);
  }
  return 0;
}

int run_gradcheck(std::uint64_t seed, double tanh_grad_scale,
                  bool freeze_embeddings) {
  // Extended precision keeps the central-difference noise floor a few orders
  // of magnitude below the 1e-4 tolerance; in plain double the difference of
  // two O(1) losses is only good to ~1e-12, which is marginal for entries
  // whose gradient sits near the relative-error denominator floor.
  using T = long double;
  mahnn::TrainConfig cfg;
  cfg.hidden_size = 4;
  cfg.embedding_dim = 6;
  cfg.channels = 2;
  cfg.filter_sizes = {2, 3};
  cfg.filter_maps = 2;
  cfg.dropout = 0.0;
  cfg.l2 = 0.0005;
  cfg.attn_dim = 4;
  cfg.precision = "f64";
  cfg.seed = seed;
  cfg.freeze_embeddings = freeze_embeddings;

  mahnn::Vocabulary vocab;
  for (const char* w : {"a", "b", "c", "d", "e", "f", "g", "h"}) vocab.add(w);
  const std::size_t n = 5;
  const int num_classes = 3;
  mahnn::Rng rng(mahnn::derive_seed(seed, 0));
  auto model =
      mahnn::MahnnModel<T>::random(cfg, vocab, n, num_classes, rng);
  // Shift the filter biases so every pooled pre-activation starts on the
  // active side of the relu; a filter that is dead at init would contribute
  // an exactly-zero (and thus unchecked) gradient.
  for (auto& grp : model.bank.groups)
    for (auto& v : grp.bias->value) v += T(0.3);

  // A small batch with varied padding: one leading pad (exercising the
  // -99999 masking path), one full-length sentence, and a doubly-padded one.
  struct Example {
    std::vector<int> ids;
    std::vector<bool> pad;
    int label;
  };
  const std::vector<Example> examples = {
      {{vocab.pad_id(), vocab.lookup("a"), vocab.lookup("c"),
        vocab.lookup("e"), vocab.lookup("b")},
       {true, false, false, false, false},
       1},
      {{vocab.lookup("b"), vocab.lookup("d"), vocab.lookup("a"),
        vocab.lookup("f"), vocab.lookup("c")},
       {false, false, false, false, false},
       0},
      {{vocab.pad_id(), vocab.pad_id(), vocab.lookup("e"),
        vocab.lookup("a"), vocab.lookup("d")},
       {true, true, false, false, false},
       2}};

  mahnn::FrozenNoise<T> frozen;
  mahnn::Rng mask_rng(mahnn::derive_seed(seed, 5));
  for (int l = 0; l < cfg.channels; ++l)
    frozen.channel_masks.push_back(mahnn::sample_channel_mask<T>(
        n, cfg.keep_prob_for(l), mask_rng, mahnn::MaskMode::train));

  auto loss_fn = [&](bool with_grad) -> T {
    mahnn::Tape<T> tp;
    tp.tanh_grad_scale = static_cast<T>(tanh_grad_scale);
    mahnn::Rng unused(0);
    mahnn::Tensor<T> loss;
    for (const auto& ex : examples) {
      auto fwd = model.forward(tp, ex.ids, ex.pad, mahnn::MaskMode::train,
                               unused, &frozen);
      auto nll = mahnn::nll_pick(tp, fwd.probs, ex.label);
      loss = loss ? mahnn::add(tp, loss, nll) : nll;
    }
    for (const auto& w : model.regularized_params())
      loss = mahnn::add(
          tp, loss, mahnn::scale(tp, mahnn::sum_squares(tp, w), T(cfg.l2)));
    if (with_grad) tp.backward(loss);
    return loss->value[0];
  };

  struct Group {
    std::string name;
    std::vector<mahnn::Tensor<T>> params;
  };
  std::vector<Group> groups;
  if (!freeze_embeddings) groups.push_back({"embedding", {model.embeddings}});
  groups.push_back({"lstm_fwd", model.lstm_fwd.all()});
  groups.push_back({"lstm_bwd", model.lstm_bwd.all()});
  for (std::size_t l = 0; l < model.syn.size(); ++l)
    groups.push_back({"syn." + std::to_string(l),
                      {model.syn[l].w, model.syn[l].b}});
  for (std::size_t l = 0; l < model.sem.size(); ++l)
    groups.push_back({"sem." + std::to_string(l),
                      {model.sem[l].w1, model.sem[l].w2, model.sem[l].b}});
  {
    Group g{"conv", {}};
    for (const auto& grp : model.bank.groups) {
      g.params.push_back(grp.weight);
      g.params.push_back(grp.bias);
    }
    groups.push_back(std::move(g));
  }
  groups.push_back({"head", {model.head.w, model.head.b}});

  bool ok = true;
  for (const auto& g : groups) {
    const double err = static_cast<double>(
        mahnn::finite_diff_check<T>(loss_fn, g.params));
    const bool pass = err <= 1e-4;
    ok = ok && pass;
    char line[128];
    std::snprintf(line, sizeof(line), "%-12s max_rel_err=%.3e  %s\n",
                  g.name.c_str(), err, pass ? "ok" : "FAIL");
    std::cout << line;
  }
  if (!ok) {
    std::cerr << "gradient check failed\n";
    return 4;
  }
  std::cout << "all parameter groups pass\n";
  return 0;
}

template <class T>
int run_attn(const CommonOpts& opts) {
  auto model = mahnn::load_checkpoint<T>(opts.checkpoint);
  mahnn::LoadReport rep;
  auto corpus = load_corpus(opts.data_path, &rep);
  std::vector<std::size_t> idx(corpus.examples.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto data =
      mahnn::encode_corpus<T>(corpus, idx, model.max_len, model.vocab);

  ManifestBuilder manifest;
  manifest.command = "attn";
  manifest.config = mahnn::to_json(model.cfg);
  manifest.seed = model.cfg.seed;
  manifest.inputs = {opts.checkpoint, opts.data_path};

  const fs::path out(opts.out_dir);
  fs::create_directories(out);
  std::string jsonl;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto rec = mahnn::export_attention(model, data[i]);
    jsonl += mahnn::attention_record_json(rec) + "\n";
    const fs::path csv = out / ("attn_" + std::to_string(i) + ".csv");
    write_atomic(csv, mahnn::attention_record_csv(rec));
    manifest.outputs.push_back(csv);
  }
  write_atomic(out / "attention.jsonl", jsonl);
  manifest.outputs.push_back(out / "attention.jsonl");
  manifest.write(out);
  std::cout << "exported " << data.size() << " records\n";
  return 0;
}

int run_convert(const std::string& format, const std::string& pos,
                const std::string& neg, const std::string& in_path,
                const std::string& out_file) {
  std::ostringstream out;
  auto append_file = [&](const std::string& path, int label) {
    std::ifstream in(path);
    if (!in) throw mahnn::ParseError("cannot open " + path);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) out << label << '\t' << line << '\n';
  };
  if (format == "mr" || format == "mpqa" || format == "subj") {
    if (pos.empty() || neg.empty())
      throw mahnn::ConfigError("convert " + format +
                               ": --pos and --neg are required");
    append_file(neg, 0);
    append_file(pos, 1);
  } else if (format == "sst") {
    if (in_path.empty())
      throw mahnn::ConfigError("convert sst: --in is required");
    std::ifstream in(in_path);
    if (!in) throw mahnn::ParseError("cannot open " + in_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::size_t sp = line.find_first_of(" \t");
      if (sp == std::string::npos)
        throw mahnn::ParseError("sst: line " + std::to_string(lineno) +
                                ": expected \"label sentence\"");
      out << line.substr(0, sp) << '\t' << line.substr(sp + 1) << '\n';
    }
  } else {
    throw mahnn::ConfigError("convert: unknown format \"" + format + "\"");
  }
  std::ofstream of(out_file, std::ios::binary);
  if (!of) throw mahnn::ConfigError("cannot write " + out_file);
  of << out.str();
  return 0;
}

std::string checkpoint_dtype(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in)
    throw mahnn::ConfigError("cannot read checkpoint manifest in " + dir);
  json m;
  in >> m;
  return m.at("dtype").get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MahNN text classification engine"};
  app.require_subcommand(1);

  CommonOpts opts;
  double tanh_grad_scale = 1.0;
  bool freeze_embeddings = false;
  std::string cv_format, cv_pos, cv_neg, cv_in, cv_out_file;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", opts.seed, "override the config seed")
        ->each([&](const std::string&) { opts.seed_set = true; });
  };

  auto* train = app.add_subcommand("train", "train a model");
  train->add_option("--config", opts.config_path, "JSON config file");
  train->add_option("--data", opts.data_path, "label<TAB>text training file")
      ->required();
  train->add_option("--test", opts.test_path, "optional held-out test file");
  train->add_option("--out", opts.out_dir, "output directory")->required();
  train->add_option("--precision", opts.precision, "f64 or f32");
  train->add_option("--channels", opts.channels, "number of channels");
  train->add_flag("--rv", opts.rv_flag, "disable the semantic attention");
  add_seed(train);

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--checkpoint", opts.checkpoint, "checkpoint directory")
      ->required();
  eval->add_option("--data", opts.data_path, "label<TAB>text file")->required();
  eval->add_option("--out", opts.out_dir, "optional output directory");

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
  cv->add_option("--config", opts.config_path, "JSON config file");
  cv->add_option("--data", opts.data_path, "label<TAB>text file")->required();
  cv->add_option("--k", opts.k, "number of folds (default 10)");
  cv->add_option("--out", opts.out_dir, "output directory");
  cv->add_option("--precision", opts.precision, "f64 or f32");
  cv->add_option("--channels", opts.channels, "number of channels");
  cv->add_flag("--rv", opts.rv_flag, "disable the semantic attention");
  add_seed(cv);

  auto* gradcheck =
      app.add_subcommand("gradcheck", "finite-difference gradient audit");
  add_seed(gradcheck);
  gradcheck->add_option(
      "--tanh-grad-scale", tanh_grad_scale,
      "scale the recorded tanh gradient (!= 1 must make the check fail)");
  gradcheck->add_flag("--freeze-embeddings", freeze_embeddings,
                      "exclude the embedding group");

  auto* attn = app.add_subcommand("attn", "export attention weights");
  attn->add_option("--checkpoint", opts.checkpoint, "checkpoint directory")
      ->required();
  attn->add_option("--data", opts.data_path, "label<TAB>text file")->required();
  attn->add_option("--out", opts.out_dir, "output directory")->required();

  auto* convert = app.add_subcommand("convert", "raw corpus -> canonical TSV");
  convert->add_option("--format", cv_format, "mr | subj | mpqa | sst")
      ->required();
  convert->add_option("--pos", cv_pos, "positive-class file (mr-style)");
  convert->add_option("--neg", cv_neg, "negative-class file (mr-style)");
  convert->add_option("--in", cv_in, "input file (sst)");
  convert->add_option("--out-file", cv_out_file, "output TSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      auto cfg = load_config(opts.config_path);
      apply_overrides(cfg, opts);
      return cfg.precision == "f32" ? run_train<float>(opts, cfg)
                                    : run_train<double>(opts, cfg);
    }
    if (eval->parsed()) {
      return checkpoint_dtype(opts.checkpoint) == "f32"
                 ? run_eval<float>(opts)
                 : run_eval<double>(opts);
    }
    if (cv->parsed()) {
      auto cfg = load_config(opts.config_path);
      apply_overrides(cfg, opts);
      return cfg.precision == "f32" ? run_cv<float>(opts, cfg)
                                    : run_cv<double>(opts, cfg);
    }
    if (gradcheck->parsed())
      return run_gradcheck(opts.seed_set ? opts.seed : 42, tanh_grad_scale,
                           freeze_embeddings);
    if (attn->parsed()) {
      return checkpoint_dtype(opts.checkpoint) == "f32"
                 ? run_attn<float>(opts)
                 : run_attn<double>(opts);
    }
    if (convert->parsed())
      return run_convert(cv_format, cv_pos, cv_neg, cv_in, cv_out_file);
  } catch (const mahnn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const mahnn::ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const mahnn::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
