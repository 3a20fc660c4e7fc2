#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mahnn/errors.hpp"
#include "mahnn/rng.hpp"
#include "mahnn/tensor.hpp"
#include "mahnn/vocab.hpp"

namespace mahnn {

template <class T>
struct Word2VecFile {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<T>> vectors;
};

// word2vec TEXT format: header "V d", then V lines "token v1 ... vd".
template <class T>
Word2VecFile<T> load_word2vec_text(std::istream& in, std::size_t expect_dim) {
  Word2VecFile<T> out;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line))
    throw ParseError("word2vec: empty input, expected \"V d\" header");
  ++lineno;
  {
    std::istringstream hs(line);
    long long v = -1, d = -1;
    if (!(hs >> v >> d) || v < 0 || d <= 0)
      throw ParseError("word2vec: malformed header at line 1: \"" + line + "\"");
    out.count = static_cast<std::size_t>(v);
    out.dim = static_cast<std::size_t>(d);
  }
  if (out.dim != expect_dim)
    throw ConfigError("word2vec: file dimension " + std::to_string(out.dim) +
                      " does not match configured " +
                      std::to_string(expect_dim));
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    ls >> token;
    std::vector<T> vec;
    vec.reserve(out.dim);
    double v;
    while (ls >> v) vec.push_back(static_cast<T>(v));
    if (vec.size() != out.dim)
      throw ParseError("word2vec: line " + std::to_string(lineno) + ": got " +
                       std::to_string(vec.size()) + " values, expected " +
                       std::to_string(out.dim));
    out.vectors[token] = std::move(vec);
  }
  return out;
}

template <class T>
struct EmbeddingBuildResult {
  Tensor<T> table;           // V x d, rows aligned with vocabulary ids
  std::size_t matched = 0;   // tokens taken from the pre-trained file
};

// Rows for tokens found in the pre-trained file are copied; everything else
// (specials, OOV, rare words) is drawn i.i.d. from U[-range, range].
template <class T>
EmbeddingBuildResult<T> build_embedding_table(
    const Vocabulary& vocab, std::size_t dim, Rng& rng,
    const Word2VecFile<T>* pretrained = nullptr,
    const std::unordered_set<std::string>* rare_tokens = nullptr,
    T range = T(0.25), bool trainable = true) {
  EmbeddingBuildResult<T> out;
  out.table = make_tensor<T>(vocab.size(), dim, trainable);
  out.table->name = "embedding";
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const std::string& tok = vocab.token(static_cast<int>(id));
    const std::vector<T>* vec = nullptr;
    if (pretrained && static_cast<int>(id) != vocab.pad_id() &&
        static_cast<int>(id) != vocab.unk_id() &&
        !(rare_tokens && rare_tokens->count(tok))) {
      auto it = pretrained->vectors.find(tok);
      if (it != pretrained->vectors.end()) vec = &it->second;
    }
    if (vec) {
      std::copy(vec->begin(), vec->end(), out.table->value.begin() + id * dim);
      ++out.matched;
    } else {
      for (std::size_t j = 0; j < dim; ++j)
        out.table->value[id * dim + j] = uniform<T>(rng, -range, range);
    }
  }
  return out;
}

}  // namespace mahnn
