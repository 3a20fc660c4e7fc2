#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mahnn/attention.hpp"
#include "mahnn/classifier.hpp"
#include "mahnn/config.hpp"
#include "mahnn/embedding.hpp"
#include "mahnn/lstm.hpp"
#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"
#include "mahnn/vocab.hpp"

namespace mahnn {

// Pre-sampled noise so a forward pass becomes a pure function of the
// parameters (finite-difference checks, monotone-descent tests).
template <class T>
struct FrozenNoise {
  std::vector<std::vector<T>> channel_masks;  // one n*n mask per channel
  bool dropout_enabled = false;
};

// Bi-LSTM encoder + multi-granularity attention channels + multichannel
// convolution + softmax head, assembled from one config.
template <class T>
struct MahnnModel {
  TrainConfig cfg;
  Vocabulary vocab;
  std::size_t max_len = 0;
  Tensor<T> embeddings;  // V x d
  LstmParams<T> lstm_fwd, lstm_bwd;
  std::vector<SyntacticChannelParams<T>> syn;
  std::vector<SemanticChannelParams<T>> sem;  // empty when cfg.rv
  ConvFilterBank<T> bank;
  SoftmaxHead<T> head;
  int num_classes = 0;

  static MahnnModel random(const TrainConfig& cfg, Vocabulary vocab,
                           std::size_t max_len, int num_classes, Rng& rng,
                           Tensor<T> pretrained_embeddings = nullptr) {
    MahnnModel m;
    m.cfg = cfg;
    m.vocab = std::move(vocab);
    m.max_len = max_len;
    m.num_classes = num_classes;
    const std::size_t h = cfg.hidden_size, d = cfg.embedding_dim;
    const std::size_t dim2h = 2 * h;
    if (pretrained_embeddings) {
      m.embeddings = std::move(pretrained_embeddings);
    } else {
      auto built = build_embedding_table<T>(m.vocab, d, rng);
      m.embeddings = built.table;
    }
    m.embeddings->requires_grad = !cfg.freeze_embeddings;
    m.lstm_fwd = LstmParams<T>::random(h, d, rng);
    m.lstm_bwd = LstmParams<T>::random(h, d, rng);
    for (int l = 0; l < cfg.channels; ++l) {
      m.syn.push_back(SyntacticChannelParams<T>::random(
          dim2h, cfg.keep_prob_for(l), rng));
      if (!cfg.rv)
        m.sem.push_back(SemanticChannelParams<T>::random(
            cfg.attention_dim(), dim2h, rng));
    }
    // the attention stage scales states by two softmax factors of ~1/n, so
    // widen the filter init accordingly or the relu features start flat
    m.bank = ConvFilterBank<T>::random(cfg.filter_sizes, cfg.filter_maps,
                                       cfg.channels, dim2h, max_len, rng,
                                       T(0.08) * T(max_len));
    m.head = SoftmaxHead<T>::random(num_classes, m.bank.total_filters(), rng);
    return m;
  }

  // Parameter manifest; names are stable and variant-revealing (channel
  // count, rv, filter widths all show up structurally).
  std::vector<std::pair<std::string, Tensor<T>>> named_params() const {
    std::vector<std::pair<std::string, Tensor<T>>> out;
    out.emplace_back("embedding", embeddings);
    auto lstm = [&](const char* prefix, const LstmParams<T>& p) {
      out.emplace_back(std::string(prefix) + ".w_f", p.w_f);
      out.emplace_back(std::string(prefix) + ".w_i", p.w_i);
      out.emplace_back(std::string(prefix) + ".w_o", p.w_o);
      out.emplace_back(std::string(prefix) + ".w_c", p.w_c);
      out.emplace_back(std::string(prefix) + ".b_f", p.b_f);
      out.emplace_back(std::string(prefix) + ".b_i", p.b_i);
      out.emplace_back(std::string(prefix) + ".b_o", p.b_o);
      out.emplace_back(std::string(prefix) + ".b_c", p.b_c);
    };
    lstm("lstm_fwd", lstm_fwd);
    lstm("lstm_bwd", lstm_bwd);
    for (std::size_t l = 0; l < syn.size(); ++l) {
      const std::string p = "syn." + std::to_string(l);
      out.emplace_back(p + ".w", syn[l].w);
      out.emplace_back(p + ".b", syn[l].b);
    }
    for (std::size_t l = 0; l < sem.size(); ++l) {
      const std::string p = "sem." + std::to_string(l);
      out.emplace_back(p + ".w1", sem[l].w1);
      out.emplace_back(p + ".w2", sem[l].w2);
      out.emplace_back(p + ".b", sem[l].b);
    }
    for (const auto& g : bank.groups) {
      const std::string p = "conv.w" + std::to_string(g.width);
      out.emplace_back(p + ".weight", g.weight);
      out.emplace_back(p + ".bias", g.bias);
    }
    out.emplace_back("head.w", head.w);
    out.emplace_back("head.b", head.b);
    return out;
  }

  std::vector<Tensor<T>> trainable_params() const {
    std::vector<Tensor<T>> out;
    for (auto& [name, t] : named_params())
      if (t->requires_grad) out.push_back(t);
    return out;
  }

  // L2 set: weight matrices only; biases and the embedding table exempt.
  std::vector<Tensor<T>> regularized_params() const {
    std::vector<Tensor<T>> out;
    for (const auto& t : lstm_fwd.weights()) out.push_back(t);
    for (const auto& t : lstm_bwd.weights()) out.push_back(t);
    for (const auto& s : syn) out.push_back(s.w);
    for (const auto& s : sem) {
      out.push_back(s.w1);
      out.push_back(s.w2);
    }
    for (const auto& g : bank.groups) out.push_back(g.weight);
    out.push_back(head.w);
    return out;
  }

  SemanticAxis semantic_axis() const {
    return cfg.sem_softmax_axis == "dimensions" ? SemanticAxis::dimensions
                                                : SemanticAxis::positions;
  }

  struct ForwardResult {
    Tensor<T> probs;  // c x 1
    ChannelSet<T> attention;
  };

  ForwardResult forward(Tape<T>& tp, const std::vector<int>& ids,
                        const std::vector<bool>& pad_mask, MaskMode mode,
                        Rng& rng,
                        const FrozenNoise<T>* frozen = nullptr) const {
    const bool train = mode == MaskMode::train;
    const bool use_dropout =
        cfg.dropout > 0 && train && (!frozen || frozen->dropout_enabled);

    auto x_rows = row_select(tp, embeddings, ids);
    if (use_dropout) x_rows = apply_dropout(tp, x_rows, rng);
    auto seq = bilstm_encode_embedded(tp, x_rows, pad_mask, lstm_fwd, lstm_bwd);

    auto channels = build_channels(
        tp, seq, syn, sem, mode, rng, semantic_axis(),
        frozen ? &frozen->channel_masks : nullptr);
    std::vector<Tensor<T>> conv_in = channels.channels;
    if (use_dropout)
      for (auto& c : conv_in) c = apply_dropout(tp, c, rng);

    auto features = conv_maxpool(tp, conv_in, bank);
    if (use_dropout) features = apply_dropout(tp, features, rng);

    ForwardResult out;
    out.probs = classify(tp, features, head);
    out.attention = std::move(channels);
    return out;
  }

  Tensor<T> loss_on(Tape<T>& tp, const Tensor<T>& probs, int label) const {
    return classification_loss(tp, probs, label, regularized_params(),
                               static_cast<T>(cfg.l2));
  }

 private:
  // Inverted dropout: scale kept entries by 1/keep at train time.
  Tensor<T> apply_dropout(Tape<T>& tp, const Tensor<T>& t, Rng& rng) const {
    const double keep = 1.0 - cfg.dropout;
    std::bernoulli_distribution bern(keep);
    std::vector<T> mask(t->size());
    const T inv = static_cast<T>(1.0 / keep);
    for (auto& v : mask) v = bern(rng) ? inv : T(0);
    return mul_const(tp, t, std::move(mask));
  }
};

}  // namespace mahnn
