#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "hamvf/cloud.hpp"
#include "hamvf/corpus.hpp"

namespace testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("hamvf-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Uniform-ish index below `size` (bias irrelevant for sampling tests).
inline hamvf::BigInt random_index(hamvf::SplitMix64& rng, const hamvf::BigInt& size) {
  hamvf::BigInt v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 64) + rng.next();
  return v % size;
}

// Uniform in [lo, hi).
inline double uniform(hamvf::SplitMix64& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_unit(); }

}  // namespace testing
