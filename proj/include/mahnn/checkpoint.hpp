#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mahnn/config.hpp"
#include "mahnn/model.hpp"

namespace mahnn {

// Checkpoint layout (directory):
//   config.json    - full TrainConfig plus num_classes / max_len
//   vocab.txt      - one token per line, id order (specials included)
//   manifest.json  - format version, dtype, named tensor shapes and offsets
//   params.bin     - raw little-endian tensor data, manifest order
//   rng.txt        - serialized mt19937_64 state
constexpr int kCheckpointVersion = 1;

namespace detail {

template <class T>
const char* dtype_name() {
  return sizeof(T) == 8 ? "f64" : "f32";
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

template <class T>
void save_checkpoint(const std::filesystem::path& dir,
                     const MahnnModel<T>& model, const std::string& rng_state) {
  std::filesystem::create_directories(dir);

  nlohmann::json config = to_json(model.cfg);
  config["num_classes"] = model.num_classes;
  config["resolved_max_len"] = model.max_len;
  detail::write_file(dir / "config.json", config.dump(2) + "\n");

  std::string vocab_text;
  for (const auto& tok : model.vocab.tokens()) vocab_text += tok + "\n";
  detail::write_file(dir / "vocab.txt", vocab_text);

  nlohmann::json manifest;
  manifest["format_version"] = kCheckpointVersion;
  manifest["dtype"] = detail::dtype_name<T>();
  manifest["tensors"] = nlohmann::json::array();
  std::ofstream bin(dir / "params.bin", std::ios::binary);
  if (!bin) throw ConfigError("cannot write " + (dir / "params.bin").string());
  std::size_t offset = 0;
  for (const auto& [name, t] : model.named_params()) {
    manifest["tensors"].push_back({{"name", name},
                                   {"rows", t->rows},
                                   {"cols", t->cols},
                                   {"offset", offset},
                                   {"trainable", t->requires_grad}});
    bin.write(reinterpret_cast<const char*>(t->value.data()),
              static_cast<std::streamsize>(t->size() * sizeof(T)));
    offset += t->size() * sizeof(T);
  }
  bin.close();
  detail::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  detail::write_file(dir / "rng.txt", rng_state + "\n");
}

template <class T>
MahnnModel<T> load_checkpoint(const std::filesystem::path& dir,
                              std::string* rng_state = nullptr) {
  const auto config_json =
      nlohmann::json::parse(detail::read_file(dir / "config.json"));
  const auto manifest =
      nlohmann::json::parse(detail::read_file(dir / "manifest.json"));
  if (manifest.at("format_version").get<int>() != kCheckpointVersion)
    throw ConfigError("checkpoint: unsupported format version");
  if (manifest.at("dtype").get<std::string>() != detail::dtype_name<T>())
    throw ConfigError("checkpoint: dtype " +
                      manifest.at("dtype").get<std::string>() +
                      " does not match requested " + detail::dtype_name<T>());

  std::vector<std::string> errors;
  TrainConfig cfg = config_from_json(config_json, errors);
  // extra checkpoint-only keys are expected
  const int num_classes = config_json.at("num_classes").get<int>();
  const std::size_t max_len =
      config_json.at("resolved_max_len").get<std::size_t>();

  Vocabulary vocab;
  {
    std::istringstream vs(detail::read_file(dir / "vocab.txt"));
    std::string tok;
    std::size_t idx = 0;
    while (std::getline(vs, tok)) {
      if (idx >= 2) vocab.add(tok);  // specials are pre-seeded
      ++idx;
    }
  }

  Rng dummy(0);
  auto model =
      MahnnModel<T>::random(cfg, std::move(vocab), max_len, num_classes, dummy);
  const std::string blob = detail::read_file(dir / "params.bin");
  for (const auto& [name, t] : model.named_params()) {
    bool found = false;
    for (const auto& entry : manifest.at("tensors")) {
      if (entry.at("name").get<std::string>() != name) continue;
      found = true;
      const std::size_t rows = entry.at("rows").get<std::size_t>();
      const std::size_t cols = entry.at("cols").get<std::size_t>();
      if (rows != t->rows || cols != t->cols)
        throw ConfigError("checkpoint: tensor \"" + name + "\" has shape " +
                          std::to_string(rows) + "x" + std::to_string(cols) +
                          ", model expects " + shape_str(t));
      const std::size_t offset = entry.at("offset").get<std::size_t>();
      if (offset + t->size() * sizeof(T) > blob.size())
        throw ConfigError("checkpoint: params.bin truncated at \"" + name +
                          "\"");
      std::memcpy(t->value.data(), blob.data() + offset, t->size() * sizeof(T));
      break;
    }
    if (!found)
      throw ConfigError("checkpoint: tensor \"" + name + "\" missing");
  }
  if (rng_state) {
    std::string s = detail::read_file(dir / "rng.txt");
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    *rng_state = s;
  }
  return model;
}

}  // namespace mahnn
