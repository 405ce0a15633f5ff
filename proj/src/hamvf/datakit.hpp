#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamvf/corpus.hpp"
#include "hamvf/raster.hpp"

namespace hamvf {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kManifestFormat = 1;

using Json = nlohmann::ordered_json;

struct GenerateOptions {
  std::optional<std::uint64_t> limit;  // first `limit` corpus members
  unsigned shard_index = 0;
  unsigned shard_count = 1;
  RenderConfig render;
  Rational split_fraction{3, 4};
  unsigned workers = 1;
  bool write_png = true;
  std::uint64_t cap = 10'000'000;  // max members without an explicit limit
  std::size_t points = kDefaultCloudPoints;
};

enum class Split : std::uint8_t { train, test };

// train iff splitmix64(master_seed ^ sample_id) mod q >= q - p for the
// fraction p/q; 3/4 gives "mod 4 != 0".
Split assign_split(std::uint64_t master_seed, std::uint64_t sample_id, const Rational& train_fraction);

struct SampleRecord {
  std::uint64_t sample_id = 0;
  BigInt corpus_index;
  std::string hamiltonian;
  std::string field_dx;
  std::string field_dy;
  unsigned cloud_id = 0;
  std::vector<std::size_t> token_indices;
  std::string tensor_path;             // relative to the dataset root
  std::vector<std::string> png_paths;  // relative; empty with --no-png
  Split split = Split::train;
  std::size_t nan_points = 0;

  Json to_json() const;
  static SampleRecord from_json(const Json& j);
};

// Header of one generated shard (manifest.json or manifest-k-of-m.json).
struct DatasetManifest {
  BasisSpec spec;
  std::uint64_t master_seed = 0;
  RenderConfig render;
  std::size_t points = kDefaultCloudPoints;
  unsigned clouds = kCloudCount;
  Rational split_fraction{3, 4};
  std::optional<std::uint64_t> limit;
  BigInt corpus_size;     // cardinality of the basis
  BigInt members;         // corpus members in the whole dataset
  unsigned shard_index = 0;
  unsigned shard_count = 1;
  BigInt shard_lo;        // corpus index range of this shard
  BigInt shard_hi;
  std::uint64_t records = 0;
  std::string records_path;
  std::string vocabulary_path = "vocab.json";
  std::string tool_version = kToolVersion;
  std::string generated_at;  // informational, excluded from determinism

  Json to_json() const;
  static DatasetManifest from_json(const Json& j);
};

std::string manifest_file_name(unsigned shard_index, unsigned shard_count);
std::string records_file_name(unsigned shard_index, unsigned shard_count);

// Builds the symbolic, numerical and visual records of every (corpus member,
// cloud) pair in the shard.
DatasetManifest generate(const BasisSpec& spec, std::uint64_t master_seed, const std::filesystem::path& out_dir,
                         const GenerateOptions& options);

struct Dataset {
  std::filesystem::path root;
  std::vector<DatasetManifest> manifests;  // sorted by shard index
  std::vector<SampleRecord> records;       // concatenated in shard order
};

// Reads every manifest*.json in `dir` and its records file.
Dataset load_dataset(const std::filesystem::path& dir);

struct VerifyReport {
  struct Check {
    std::string name;
    bool passed;
    std::string detail;
  };
  struct Mismatch {
    std::uint64_t sample_id;
    std::string reason;
  };
  std::vector<Check> checks;
  std::vector<Mismatch> mismatches;
  std::size_t records_checked = 0;
  std::size_t tensors_compared = 0;

  bool ok() const;
  Json to_json() const;
};

// Re-derives every record's symbolic content and token indices, re-renders
// the `fraction` of samples selected by a hash of sample_id and byte-compares
// tensors (and PNGs), and checks record counts against the cardinality law.
VerifyReport verify(const std::filesystem::path& dir, double fraction = 1.0, unsigned workers = 1);

struct ScoreReport {
  std::size_t count = 0;
  std::size_t exact = 0;
  std::size_t unparsable = 0;
  double mean_distance = 0.0;
  double mean_jaccard = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double max_distance = 0.0;  // sqrt(N), charged to unparsable predictions
  std::size_t vocab_size = 0;

  double exact_match_rate() const { return count ? static_cast<double>(exact) / static_cast<double>(count) : 0.0; }
  Json to_json() const;
};

// predictions: JSON Lines of {"sample_id": u64, "predicted": "<H>"}.
ScoreReport score_predictions(const std::filesystem::path& dataset_dir, const std::filesystem::path& predictions);

}  // namespace hamvf
