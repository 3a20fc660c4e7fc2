#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <numeric>
#include <string>
#include <vector>

#include "mahnn/errors.hpp"
#include "mahnn/rng.hpp"

namespace mahnn {

struct LabeledExample {
  std::vector<std::string> tokens;
  int label = 0;
  std::size_t line = 0;  // 1-based line in the source file
};

struct LoadReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t replaced_bytes = 0;  // invalid UTF-8 bytes replaced
  std::vector<std::string> warnings;
  int num_classes = 0;
  double avg_length = 0.0;
};

struct Corpus {
  std::vector<LabeledExample> examples;
  std::vector<std::string> class_names;  // empty when labels are integers
  int num_classes = 0;
};

// Lowercase, split punctuation into standalone tokens, then whitespace-split.
inline std::vector<std::string> tokenize(const std::string& text) {
  std::string spaced;
  spaced.reserve(text.size() * 2);
  for (const char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    if (c < 128 && std::ispunct(c)) {
      spaced.push_back(' ');
      spaced.push_back(ch);
      spaced.push_back(' ');
    } else {
      spaced.push_back(static_cast<char>(c < 128 ? std::tolower(c) : c));
    }
  }
  std::vector<std::string> tokens;
  std::string cur;
  for (const char ch : spaced) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) {
        tokens.push_back(cur);
        cur.clear();
      }
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

namespace detail {

// Replace bytes that do not form valid UTF-8 sequences with U+FFFD.
inline std::string sanitize_utf8(const std::string& in, std::size_t* replaced) {
  static const char kReplacement[] = "\xef\xbf\xbd";
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const unsigned char c = static_cast<unsigned char>(in[i]);
    std::size_t len = 0;
    if (c < 0x80) len = 1;
    else if ((c & 0xe0) == 0xc0) len = 2;
    else if ((c & 0xf0) == 0xe0) len = 3;
    else if ((c & 0xf8) == 0xf0) len = 4;
    bool ok = len > 0 && i + len <= in.size();
    for (std::size_t j = 1; ok && j < len; ++j)
      ok = (static_cast<unsigned char>(in[i + j]) & 0xc0) == 0x80;
    if (ok) {
      out.append(in, i, len);
      i += len;
    } else {
      out.append(kReplacement);
      if (replaced) ++*replaced;
      ++i;
    }
  }
  return out;
}

}  // namespace detail

// Canonical ingest format: one "label<TAB>text" per line. Labels are either
// non-negative integers or names resolved through `class_names`.
inline Corpus load_tsv(std::istream& in,
                       const std::vector<std::string>* class_names = nullptr,
                       LoadReport* report = nullptr) {
  Corpus corpus;
  if (class_names) corpus.class_names = *class_names;
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  std::string raw;
  std::size_t lineno = 0;
  int max_label = -1;
  std::size_t total_tokens = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty()) continue;
    const std::string line = detail::sanitize_utf8(raw, &rep.replaced_bytes);
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("tsv: line " + std::to_string(lineno) +
                       ": missing tab separator");
    const std::string label_str = line.substr(0, tab);
    const std::string text = line.substr(tab + 1);
    int label = -1;
    const bool numeric =
        !label_str.empty() &&
        std::all_of(label_str.begin(), label_str.end(),
                    [](unsigned char c) { return std::isdigit(c); });
    if (numeric) {
      label = std::stoi(label_str);
    } else if (class_names) {
      auto it = std::find(class_names->begin(), class_names->end(), label_str);
      if (it == class_names->end())
        throw ParseError("tsv: line " + std::to_string(lineno) +
                         ": label \"" + label_str +
                         "\" not in the class-name schema");
      label = static_cast<int>(it - class_names->begin());
    } else {
      throw ParseError("tsv: line " + std::to_string(lineno) +
                       ": non-integer label \"" + label_str +
                       "\" and no class-name schema given");
    }
    LabeledExample ex;
    ex.tokens = tokenize(text);
    ex.label = label;
    ex.line = lineno;
    if (ex.tokens.empty()) {
      ++rep.rejected;
      rep.warnings.push_back("line " + std::to_string(lineno) +
                             ": empty text after tokenization, skipped");
      continue;
    }
    max_label = std::max(max_label, label);
    total_tokens += ex.tokens.size();
    corpus.examples.push_back(std::move(ex));
    ++rep.accepted;
  }
  corpus.num_classes = class_names
                           ? static_cast<int>(class_names->size())
                           : max_label + 1;
  rep.num_classes = corpus.num_classes;
  rep.avg_length = corpus.examples.empty()
                       ? 0.0
                       : static_cast<double>(total_tokens) /
                             static_cast<double>(corpus.examples.size());
  return corpus;
}

struct SplitPlan {
  // fixed_test: train/test filled, folds empty. cv: folds filled.
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> folds;
};

// cv(k): seeded shuffle, then k near-equal contiguous slices (sizes differ by
// at most one). fixed_test: file order preserved, the caller supplies the
// test set separately.
inline SplitPlan make_cv_splits(std::size_t n, std::size_t k,
                                std::uint64_t seed) {
  if (k < 2) throw ConfigError("cv: k must be >= 2");
  if (k > n)
    throw ConfigError("cv: k=" + std::to_string(k) + " exceeds dataset size " +
                      std::to_string(n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, 0xf01d));
  std::shuffle(order.begin(), order.end(), rng);
  SplitPlan plan;
  const std::size_t base = n / k, rem = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t len = base + (f < rem ? 1 : 0);
    plan.folds.emplace_back(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  return plan;
}

inline SplitPlan make_fixed_split(std::size_t n_train, std::size_t n_test) {
  SplitPlan plan;
  plan.train.resize(n_train);
  std::iota(plan.train.begin(), plan.train.end(), std::size_t{0});
  plan.test.resize(n_test);
  std::iota(plan.test.begin(), plan.test.end(), std::size_t{0});
  return plan;
}

}  // namespace mahnn
