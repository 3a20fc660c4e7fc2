#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "mahnn/model.hpp"
#include "mahnn/train.hpp"

namespace mahnn {

// Fixed float formatting so repeated exports are byte-identical.
inline std::string fmt_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct AttentionRecord {
  std::vector<std::string> tokens;                      // pads excluded
  std::vector<std::vector<double>> syn_weights;         // [channel][token]
  std::vector<std::vector<double>> sem_column_means;    // [channel][dim 2h]
};

// Infer-mode attention for one example. Pad positions are dropped from the
// exported rows; the syntactic weights at those positions are ~0 by the mask
// contract anyway.
template <class T>
AttentionRecord export_attention(const MahnnModel<T>& model,
                                 const EncodedExample& ex) {
  Tape<T> tp;
  tp.recording = false;
  Rng rng(0);
  auto fwd = model.forward(tp, ex.ids, ex.pad_mask, MaskMode::infer, rng);
  AttentionRecord rec;
  for (std::size_t i = 0; i < ex.ids.size(); ++i)
    if (!ex.pad_mask[i]) rec.tokens.push_back(model.vocab.token(ex.ids[i]));
  for (const auto& a : fwd.attention.syn_weights) {
    std::vector<double> w;
    for (std::size_t i = 0; i < ex.ids.size(); ++i)
      if (!ex.pad_mask[i]) w.push_back(static_cast<double>(a->value[i]));
    rec.syn_weights.push_back(std::move(w));
  }
  for (const auto& abar : fwd.attention.sem_weights) {
    std::vector<double> means(abar->cols, 0.0);
    for (std::size_t i = 0; i < abar->rows; ++i)
      for (std::size_t j = 0; j < abar->cols; ++j)
        means[j] += static_cast<double>(abar->value[i * abar->cols + j]);
    for (auto& m : means) m /= static_cast<double>(abar->rows);
    rec.sem_column_means.push_back(std::move(means));
  }
  return rec;
}

inline std::string attention_record_json(const AttentionRecord& rec) {
  // hand-assembled so float formatting stays under our control
  std::string out = "{\"tokens\":[";
  for (std::size_t i = 0; i < rec.tokens.size(); ++i) {
    if (i) out += ",";
    out += nlohmann::json(rec.tokens[i]).dump();
  }
  out += "],\"syntactic\":{";
  for (std::size_t l = 0; l < rec.syn_weights.size(); ++l) {
    if (l) out += ",";
    out += "\"" + std::to_string(l) + "\":[";
    for (std::size_t i = 0; i < rec.syn_weights[l].size(); ++i) {
      if (i) out += ",";
      out += fmt_float(rec.syn_weights[l][i]);
    }
    out += "]";
  }
  out += "},\"semantic_column_means\":{";
  for (std::size_t l = 0; l < rec.sem_column_means.size(); ++l) {
    if (l) out += ",";
    out += "\"" + std::to_string(l) + "\":[";
    for (std::size_t i = 0; i < rec.sem_column_means[l].size(); ++i) {
      if (i) out += ",";
      out += fmt_float(rec.sem_column_means[l][i]);
    }
    out += "]";
  }
  out += "}}";
  return out;
}

// Channel-by-token matrix for heatmap tools: header row of tokens, one row
// of syntactic weights per channel.
inline std::string attention_record_csv(const AttentionRecord& rec) {
  std::string out = "channel";
  for (const auto& t : rec.tokens) {
    std::string esc = t;
    for (auto& c : esc)
      if (c == ',' || c == '"') c = '_';
    out += "," + esc;
  }
  out += "\n";
  for (std::size_t l = 0; l < rec.syn_weights.size(); ++l) {
    out += std::to_string(l);
    for (const double w : rec.syn_weights[l]) out += "," + fmt_float(w);
    out += "\n";
  }
  return out;
}

}  // namespace mahnn
