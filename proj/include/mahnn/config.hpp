#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "mahnn/errors.hpp"

namespace mahnn {

// Every hyper-parameter with its default; "channels" selects the variant
// (1/3/5/7 channels), "rv" disables the semantic attention.
struct TrainConfig {
  int hidden_size = 100;
  int embedding_dim = 300;
  int channels = 3;
  bool rv = false;
  double l2 = 0.0005;
  std::vector<int> filter_sizes = {3, 4, 5};
  int filter_maps = 100;
  double dropout = 0.5;
  std::vector<double> keep_probs;  // per-channel mask keep probability
  int attn_dim = -1;               // d_a; -1 means hidden_size
  double learning_rate = 1e-3;
  int batch_size = 32;
  int epochs = 25;
  std::uint64_t seed = 42;
  std::string precision = "f64";  // f64 for verification, f32 for speed
  std::string optimizer = "adam";
  int patience = 10;               // early stopping on dev accuracy
  double dev_fraction = 0.1;
  int max_len = -1;                // -1: max training-set sentence length
  std::string sem_softmax_axis = "positions";  // or "dimensions"
  int min_token_freq = 1;          // words this rare get reinitialized rows
  std::string embeddings_path;     // optional word2vec text file
  bool freeze_embeddings = false;
  double stop_at_train_acc = 2.0;  // > 1 disables the early exit

  double keep_prob_for(int channel) const {
    if (keep_probs.empty()) return 0.9;
    return keep_probs[static_cast<std::size_t>(channel) % keep_probs.size()];
  }
  int attention_dim() const { return attn_dim > 0 ? attn_dim : hidden_size; }
};

inline nlohmann::json to_json(const TrainConfig& c) {
  return nlohmann::json{{"hidden_size", c.hidden_size},
                        {"embedding_dim", c.embedding_dim},
                        {"channels", c.channels},
                        {"rv", c.rv},
                        {"l2", c.l2},
                        {"filter_sizes", c.filter_sizes},
                        {"filter_maps", c.filter_maps},
                        {"dropout", c.dropout},
                        {"keep_probs", c.keep_probs},
                        {"attn_dim", c.attn_dim},
                        {"learning_rate", c.learning_rate},
                        {"batch_size", c.batch_size},
                        {"epochs", c.epochs},
                        {"seed", c.seed},
                        {"precision", c.precision},
                        {"optimizer", c.optimizer},
                        {"patience", c.patience},
                        {"dev_fraction", c.dev_fraction},
                        {"max_len", c.max_len},
                        {"sem_softmax_axis", c.sem_softmax_axis},
                        {"min_token_freq", c.min_token_freq},
                        {"embeddings_path", c.embeddings_path},
                        {"freeze_embeddings", c.freeze_embeddings},
                        {"stop_at_train_acc", c.stop_at_train_acc}};
}

// Parses and validates, collecting every violation rather than stopping at
// the first. Unknown keys are reported too.
inline TrainConfig config_from_json(const nlohmann::json& j,
                                    std::vector<std::string>& errors) {
  TrainConfig c;
  const std::vector<std::string> known = {
      "hidden_size", "embedding_dim", "channels", "rv", "l2", "filter_sizes",
      "filter_maps", "dropout", "keep_probs", "attn_dim", "learning_rate",
      "batch_size", "epochs", "seed", "precision", "optimizer", "patience",
      "dev_fraction", "max_len", "sem_softmax_axis", "min_token_freq",
      "embeddings_path", "freeze_embeddings", "stop_at_train_acc"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      errors.push_back("unknown config key: \"" + it.key() + "\"");

  auto get = [&](const char* key, auto& slot) {
    if (!j.contains(key)) return;
    try {
      slot = j.at(key).get<std::decay_t<decltype(slot)>>();
    } catch (const nlohmann::json::exception&) {
      errors.push_back(std::string("config key \"") + key +
                       "\" has the wrong type");
    }
  };
  get("hidden_size", c.hidden_size);
  get("embedding_dim", c.embedding_dim);
  get("channels", c.channels);
  get("rv", c.rv);
  get("l2", c.l2);
  get("filter_sizes", c.filter_sizes);
  get("filter_maps", c.filter_maps);
  get("dropout", c.dropout);
  get("keep_probs", c.keep_probs);
  get("attn_dim", c.attn_dim);
  get("learning_rate", c.learning_rate);
  get("batch_size", c.batch_size);
  get("epochs", c.epochs);
  get("seed", c.seed);
  get("precision", c.precision);
  get("optimizer", c.optimizer);
  get("patience", c.patience);
  get("dev_fraction", c.dev_fraction);
  get("max_len", c.max_len);
  get("sem_softmax_axis", c.sem_softmax_axis);
  get("min_token_freq", c.min_token_freq);
  get("embeddings_path", c.embeddings_path);
  get("freeze_embeddings", c.freeze_embeddings);
  get("stop_at_train_acc", c.stop_at_train_acc);

  if (c.hidden_size < 1) errors.push_back("hidden_size must be >= 1");
  if (c.embedding_dim < 1) errors.push_back("embedding_dim must be >= 1");
  if (c.channels < 1) errors.push_back("channels must be >= 1");
  if (c.l2 < 0) errors.push_back("l2 must be >= 0");
  if (c.filter_sizes.empty()) errors.push_back("filter_sizes must be nonempty");
  for (const int w : c.filter_sizes)
    if (w < 1) errors.push_back("filter width " + std::to_string(w) + " < 1");
  if (c.filter_maps < 1) errors.push_back("filter_maps must be >= 1");
  if (c.dropout < 0 || c.dropout >= 1)
    errors.push_back("dropout must lie in [0, 1)");
  for (const double p : c.keep_probs)
    if (!(p > 0.0) || p > 1.0)
      errors.push_back("keep probability " + std::to_string(p) +
                       " outside (0, 1]");
  if (!(c.learning_rate >= 0)) errors.push_back("learning_rate must be >= 0");
  if (c.batch_size < 1) errors.push_back("batch_size must be >= 1");
  if (c.epochs < 1) errors.push_back("epochs must be >= 1");
  if (c.precision != "f64" && c.precision != "f32")
    errors.push_back("precision must be \"f64\" or \"f32\"");
  if (c.optimizer != "adam" && c.optimizer != "sgd")
    errors.push_back("optimizer must be \"adam\" or \"sgd\"");
  if (c.patience < 0) errors.push_back("patience must be >= 0");
  if (c.dev_fraction < 0 || c.dev_fraction >= 1)
    errors.push_back("dev_fraction must lie in [0, 1)");
  if (c.sem_softmax_axis != "positions" && c.sem_softmax_axis != "dimensions")
    errors.push_back("sem_softmax_axis must be \"positions\" or \"dimensions\"");
  if (c.min_token_freq < 0) errors.push_back("min_token_freq must be >= 0");
  return c;
}

}  // namespace mahnn
