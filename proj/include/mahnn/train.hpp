#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mahnn/data.hpp"
#include "mahnn/model.hpp"
#include "mahnn/optim.hpp"
#include "mahnn/vocab.hpp"

namespace mahnn {

struct EncodedExample {
  std::vector<int> ids;
  std::vector<bool> pad_mask;
  int label = 0;
};

inline std::size_t worker_count() {
  if (const char* env = std::getenv("MAHNN_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

template <class T>
std::vector<EncodedExample> encode_corpus(const Corpus& corpus,
                                          const std::vector<std::size_t>& idx,
                                          std::size_t len,
                                          const Vocabulary& vocab) {
  std::vector<EncodedExample> out;
  out.reserve(idx.size());
  for (const std::size_t i : idx) {
    const auto& ex = corpus.examples[i];
    auto enc = encode_and_pad(ex.tokens, len, vocab);
    out.push_back({std::move(enc.ids), std::move(enc.pad_mask), ex.label});
  }
  return out;
}

template <class T>
int predict(const MahnnModel<T>& model, const EncodedExample& ex) {
  Tape<T> tp;
  tp.recording = false;
  Rng rng(0);  // unused in infer mode
  auto fwd = model.forward(tp, ex.ids, ex.pad_mask, MaskMode::infer, rng);
  const auto& y = fwd.probs->value;
  // ties break toward the lowest class index
  std::size_t best = 0;
  for (std::size_t c = 1; c < y.size(); ++c)
    if (y[c] > y[best]) best = c;
  return static_cast<int>(best);
}

// Infer-mode accuracy; embarrassingly parallel, capped by MAHNN_THREADS.
template <class T>
double evaluate(const MahnnModel<T>& model,
                const std::vector<EncodedExample>& data) {
  if (data.empty()) return 0.0;
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), data.size());
  std::atomic<std::size_t> correct{0};
  if (workers <= 1) {
    std::size_t ok = 0;
    for (const auto& ex : data)
      if (predict(model, ex) == ex.label) ++ok;
    correct = ok;
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        std::size_t ok = 0;
        for (std::size_t i = w; i < data.size(); i += workers)
          if (predict(model, data[i]) == data[i].label) ++ok;
        correct += ok;
      });
    for (auto& t : pool) t.join();
  }
  return static_cast<double>(correct.load()) /
         static_cast<double>(data.size());
}

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double dev_acc = 0.0;
};

template <class T>
struct TrainLog {
  std::vector<EpochMetrics> epochs;
  int best_epoch = -1;
  double best_dev_acc = 0.0;
};

template <class T>
std::vector<std::vector<T>> snapshot_params(const MahnnModel<T>& model) {
  std::vector<std::vector<T>> out;
  for (const auto& [name, p] : model.named_params()) out.push_back(p->value);
  return out;
}

template <class T>
void restore_params(MahnnModel<T>& model,
                    const std::vector<std::vector<T>>& snap) {
  std::size_t i = 0;
  for (const auto& [name, p] : model.named_params()) p->value = snap[i++];
}

// Mini-batch loop with shuffling, dropout and mask resampling, per-epoch
// metrics, early stopping on dev accuracy, and best-dev weight restoration.
// The L2 term enters analytically (2*lambda*W added to the data gradient) so
// it is applied once per step, not once per example.
template <class T>
TrainLog<T> train(MahnnModel<T>& model,
                  const std::vector<EncodedExample>& train_set,
                  const std::vector<EncodedExample>& dev_set) {
  if (train_set.empty()) throw ConfigError("train: empty dataset");
  const TrainConfig& cfg = model.cfg;
  auto named = model.named_params();

  AdamOptimizer<T> adam(static_cast<T>(cfg.learning_rate));
  SgdOptimizer<T> sgd(static_cast<T>(cfg.learning_rate));
  const bool use_adam = cfg.optimizer != "sgd";

  Rng shuffle_rng(derive_seed(cfg.seed, 1));
  Rng noise_rng(derive_seed(cfg.seed, 2));

  TrainLog<T> log;
  std::vector<std::vector<T>> best;
  int since_best = 0;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  const auto reg = model.regularized_params();
  const T lambda = static_cast<T>(cfg.l2);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += cfg.batch_size) {
      const std::size_t stop =
          std::min(order.size(), start + cfg.batch_size);
      for (const auto& [name, p] : named) p->zero_grad();
      const T inv_batch = T(1) / static_cast<T>(stop - start);
      for (std::size_t bi = start; bi < stop; ++bi) {
        const auto& ex = train_set[order[bi]];
        Tape<T> tp;
        auto fwd =
            model.forward(tp, ex.ids, ex.pad_mask, MaskMode::train, noise_rng);
        auto data_loss = nll_pick(tp, fwd.probs, ex.label);
        auto scaled = scale(tp, data_loss, inv_batch);
        tp.backward(scaled);
        loss_sum += static_cast<double>(data_loss->value[0]);
        ++seen;
      }
      if (lambda > T(0))
        for (const auto& w : reg)
          for (std::size_t i = 0; i < w->size(); ++i)
            w->grad[i] += T(2) * lambda * w->value[i];
      if (use_adam)
        adam.step(named);
      else
        sgd.step(named);
    }

    EpochMetrics m;
    m.epoch = epoch;
    m.train_loss = loss_sum / static_cast<double>(seen);
    m.train_acc = evaluate(model, train_set);
    m.dev_acc = dev_set.empty() ? m.train_acc : evaluate(model, dev_set);
    log.epochs.push_back(m);

    if (log.best_epoch < 0 || m.dev_acc > log.best_dev_acc) {
      log.best_epoch = epoch;
      log.best_dev_acc = m.dev_acc;
      best = snapshot_params(model);
      since_best = 0;
    } else if (++since_best >= cfg.patience && cfg.patience > 0) {
      break;
    }
    if (m.train_acc >= cfg.stop_at_train_acc) break;
  }
  if (!best.empty()) restore_params(model, best);
  return log;
}

struct CvResult {
  std::vector<double> fold_accuracy;
  double mean = 0.0;
  double stddev = 0.0;
};

// k-fold protocol: each fold serves once as the test set; a seeded slice of
// each training fold becomes the dev set for early stopping.
template <class T>
CvResult kfold_cv(const Corpus& corpus, const TrainConfig& cfg, std::size_t k,
                  std::size_t max_len, const Vocabulary& vocab) {
  auto plan = make_cv_splits(corpus.examples.size(), k, cfg.seed);
  CvResult result;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train_idx;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f)
        train_idx.insert(train_idx.end(), plan.folds[g].begin(),
                         plan.folds[g].end());
    // seeded dev slice off the front of a shuffled copy
    Rng dev_rng(derive_seed(cfg.seed, 100 + f));
    std::shuffle(train_idx.begin(), train_idx.end(), dev_rng);
    const std::size_t dev_n = static_cast<std::size_t>(
        cfg.dev_fraction * static_cast<double>(train_idx.size()));
    std::vector<std::size_t> dev_idx(train_idx.begin(),
                                     train_idx.begin() + dev_n);
    train_idx.erase(train_idx.begin(), train_idx.begin() + dev_n);

    auto train_set = encode_corpus<T>(corpus, train_idx, max_len, vocab);
    auto dev_set = encode_corpus<T>(corpus, dev_idx, max_len, vocab);
    auto test_set = encode_corpus<T>(corpus, plan.folds[f], max_len, vocab);

    TrainConfig fold_cfg = cfg;
    fold_cfg.seed = derive_seed(cfg.seed, 200 + f);
    Rng init_rng(derive_seed(fold_cfg.seed, 0));
    auto model = MahnnModel<T>::random(fold_cfg, vocab, max_len,
                                       corpus.num_classes, init_rng);
    train(model, train_set, dev_set);
    result.fold_accuracy.push_back(evaluate(model, test_set));
  }
  const double n = static_cast<double>(result.fold_accuracy.size());
  result.mean = std::accumulate(result.fold_accuracy.begin(),
                                result.fold_accuracy.end(), 0.0) / n;
  double var = 0.0;
  for (const double a : result.fold_accuracy)
    var += (a - result.mean) * (a - result.mean);
  result.stddev = std::sqrt(var / n);
  return result;
}

// Padded length rule: the maximum training-set sentence length unless the
// config pins one.
inline std::size_t resolve_max_len(const Corpus& corpus,
                                   const TrainConfig& cfg) {
  if (cfg.max_len > 0) return static_cast<std::size_t>(cfg.max_len);
  std::size_t len = 1;
  for (const auto& ex : corpus.examples)
    len = std::max(len, ex.tokens.size());
  return len;
}

// Vocabulary over the training corpus; also reports tokens at or below the
// rare-word threshold (their pretrained rows get reinitialized).
inline Vocabulary build_vocab(const Corpus& corpus,
                              std::unordered_set<std::string>* rare = nullptr,
                              int min_freq = 1) {
  Vocabulary vocab;
  std::unordered_map<std::string, std::size_t> freq;
  for (const auto& ex : corpus.examples)
    for (const auto& tok : ex.tokens) {
      vocab.add(tok);
      ++freq[tok];
    }
  if (rare)
    for (const auto& [tok, count] : freq)
      if (count <= static_cast<std::size_t>(min_freq)) rare->insert(tok);
  return vocab;
}

}  // namespace mahnn
