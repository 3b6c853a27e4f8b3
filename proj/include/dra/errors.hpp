#pragma once

#include <stdexcept>
#include <string>

namespace dra {

// Error taxonomy, one class per CLI exit code.
//   ConfigError  -> exit 2  (bad CLI usage, bad config values, invalid parameters)
//   DataError    -> exit 3  (bad/corrupt input files, malformed datasets, invalid data)
//   NumericError -> exit 4  (non-finite values, failed convergence, numeric breakdown)

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

}  // namespace dra
