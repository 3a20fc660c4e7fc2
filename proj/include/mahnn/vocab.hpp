#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "mahnn/errors.hpp"

namespace mahnn {

// Token <-> id map with distinct PAD and UNK specials. PAD is a dedicated
// symbol (not UNK) so the attention pad mask can tell padding apart from
// out-of-vocabulary words.
class Vocabulary {
 public:
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kUnkToken = "<unk>";

  Vocabulary() {
    add(kPadToken);
    add(kUnkToken);
  }

  int pad_id() const { return 0; }
  int unk_id() const { return 1; }

  int add(const std::string& token) {
    auto it = index_.find(token);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(tokens_.size());
    index_.emplace(token, id);
    tokens_.push_back(token);
    return id;
  }

  // UNK for unseen tokens.
  int lookup(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? unk_id() : it->second;
  }

  bool contains(const std::string& token) const {
    return index_.count(token) != 0;
  }

  const std::string& token(int id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  bool has_words() const { return tokens_.size() > 2; }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> tokens_;
};

struct EncodedTokens {
  std::vector<int> ids;
  std::vector<bool> pad_mask;  // true exactly at pad positions
};

// Front-pad short sequences to `len`, keep the first `len` tokens of long
// ones. Unknown words map to UNK with pad_mask false.
inline EncodedTokens encode_and_pad(const std::vector<std::string>& tokens,
                                    std::size_t len, const Vocabulary& vocab) {
  if (len < 1) throw ConfigError("encode_and_pad: len must be >= 1");
  if (!vocab.has_words())
    throw ConfigError("encode_and_pad: empty vocabulary");
  EncodedTokens out;
  out.ids.assign(len, vocab.pad_id());
  out.pad_mask.assign(len, true);
  const std::size_t n = std::min(tokens.size(), len);
  const std::size_t offset = len - n;
  for (std::size_t i = 0; i < n; ++i) {
    out.ids[offset + i] = vocab.lookup(tokens[i]);
    out.pad_mask[offset + i] = false;
  }
  return out;
}

}  // namespace mahnn
