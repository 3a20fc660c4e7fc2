#pragma once

#include <stdexcept>
#include <string>

namespace mahnn {

// Shape disagreement between tensor operands.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN/Inf where a finite value is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse (non-scalar loss, label out of range, ...).
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration value or inconsistent model setup.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (TSV, word2vec text, ...).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mahnn
