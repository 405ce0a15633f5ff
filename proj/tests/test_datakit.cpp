#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "hamvf/datakit.hpp"
#include "hamvf/error.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using hamvf::BasisSpec;
using hamvf::GenerateOptions;

namespace {

GenerateOptions small_options() {
  GenerateOptions opt;
  opt.render.resolution = 32;
  return opt;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p);
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("split assignment") {
  const hamvf::Rational three_quarters(3, 4);
  std::size_t train = 0;
  for (std::uint64_t id = 0; id < 12100; ++id) {
    auto s = hamvf::assign_split(42, id, three_quarters);
    CHECK((s == hamvf::Split::train) == (hamvf::splitmix64(42 ^ id) % 4 != 0));
    train += s == hamvf::Split::train;
  }
  CHECK(std::abs(static_cast<double>(train) / 12100 - 0.75) <= 0.01);
  CHECK(hamvf::assign_split(1, 5, hamvf::Rational(1)) == hamvf::Split::train);
  CHECK(hamvf::assign_split(1, 5, hamvf::Rational(0)) == hamvf::Split::test);
}

TEST_CASE("generate (B1, delta3)") {
  testing::TempDir dir("gen");
  auto m = hamvf::generate(BasisSpec::from_names("b1", "d3", false), 42, dir.path(), small_options());
  CHECK(m.records == 400);
  CHECK(m.members == 8);
  auto ds = hamvf::load_dataset(dir.path());
  REQUIRE(ds.records.size() == 400);
  std::set<std::uint64_t> ids;
  for (const auto& r : ds.records) {
    ids.insert(r.sample_id);
    CHECK(r.sample_id == r.corpus_index.convert_to<std::uint64_t>() * 50 + r.cloud_id);
    CHECK(fs::exists(dir.path() / r.tensor_path));
    CHECK(r.png_paths.size() == 3);
  }
  CHECK(ids.size() == 400);
  CHECK(ds.records[0].hamiltonian == "-x");
  CHECK(ds.records[0].field_dx == "0");
  CHECK(ds.records[0].field_dy == "-1");
  CHECK(ds.records[399].hamiltonian == "x + y");
  CHECK(fs::exists(dir.path() / "vocab.json"));

  auto report = hamvf::verify(dir.path());
  CHECK(report.ok());
  CHECK(report.tensors_compared == 400);

  // manifest round trip
  auto again = hamvf::DatasetManifest::from_json(m.to_json());
  CHECK(again.to_json() == m.to_json());
}

TEST_CASE("limit, cap and shard validation") {
  testing::TempDir dir("limit");
  auto opt = small_options();
  opt.limit = 3;
  opt.write_png = false;
  auto m = hamvf::generate(BasisSpec::from_names("b2", "d3", false), 1, dir.path(), opt);
  CHECK(m.records == 150);
  CHECK(hamvf::load_dataset(dir.path()).records.back().png_paths.empty());
  CHECK(hamvf::verify(dir.path()).ok());

  opt = small_options();
  opt.cap = 100;
  CHECK_THROWS_AS(hamvf::generate(BasisSpec::from_names("b2", "d3", false), 1, dir.path() / "x", opt),
                  hamvf::ValidationError);
  opt = small_options();
  opt.shard_index = 2;
  opt.shard_count = 2;
  CHECK_THROWS_AS(hamvf::generate(BasisSpec::from_names("b1", "d3", false), 1, dir.path() / "y", opt),
                  hamvf::ValidationError);
}

TEST_CASE("two shards equal the unsharded dataset") {
  testing::TempDir whole("whole"), sharded("sharded");
  auto spec = BasisSpec::from_names("b1", "d5", false);
  auto opt = small_options();
  opt.write_png = false;
  hamvf::generate(spec, 9, whole.path(), opt);
  for (unsigned k = 0; k < 2; ++k) {
    opt.shard_index = k;
    opt.shard_count = 2;
    opt.workers = 2;
    hamvf::generate(spec, 9, sharded.path(), opt);
  }
  auto a = hamvf::load_dataset(whole.path());
  auto b = hamvf::load_dataset(sharded.path());
  REQUIRE(b.manifests.size() == 2);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].to_json() == b.records[i].to_json());
    CHECK(testing::slurp(whole.path() / a.records[i].tensor_path) == testing::slurp(sharded.path() / b.records[i].tensor_path));
  }
  CHECK(hamvf::verify(sharded.path(), 0.2, 2).ok());
}

TEST_CASE("verify reports corruption") {
  testing::TempDir dir("corrupt");
  auto opt = small_options();
  hamvf::generate(BasisSpec::from_names("b1", "d3", false), 42, dir.path(), opt);
  auto ds = hamvf::load_dataset(dir.path());

  SUBCASE("flipped tensor byte") {
    const auto& victim = ds.records[123];
    fs::path p = dir.path() / victim.tensor_path;
    std::string bytes = testing::slurp(p);
    bytes[bytes.size() / 2] ^= 0x01;
    std::ofstream(p, std::ios::binary) << bytes;
    auto report = hamvf::verify(dir.path());
    CHECK_FALSE(report.ok());
    REQUIRE(report.mismatches.size() == 1);
    CHECK(report.mismatches[0].sample_id == victim.sample_id);
  }
  SUBCASE("altered PNG") {
    const auto& victim = ds.records[7];
    hamvf::Raster blank(32, 32, 3);
    hamvf::export_png(blank, dir.path() / "png" / "tmp");
    fs::rename(dir.path() / "png" / "tmp_h.png", dir.path() / victim.png_paths[2]);
    auto report = hamvf::verify(dir.path());
    REQUIRE(report.mismatches.size() == 1);
    CHECK(report.mismatches[0].sample_id == victim.sample_id);
  }
  SUBCASE("wrong token indices") {
    auto lines = lines_of(dir.path() / "records.jsonl");
    auto j = hamvf::Json::parse(lines[42]);
    j["token_indices"] = {3};
    lines[42] = j.dump();
    write_lines(dir.path() / "records.jsonl", lines);
    auto report = hamvf::verify(dir.path(), 0.0);
    REQUIRE(report.mismatches.size() == 1);
    CHECK(report.mismatches[0].sample_id == 42);
    CHECK(report.tensors_compared == 0);
  }
  SUBCASE("missing record") {
    auto lines = lines_of(dir.path() / "records.jsonl");
    lines.pop_back();
    write_lines(dir.path() / "records.jsonl", lines);
    auto report = hamvf::verify(dir.path(), 0.0);
    CHECK_FALSE(report.ok());
  }
  SUBCASE("manifest count off") {
    auto j = hamvf::Json::parse(testing::slurp(dir.path() / "manifest.json"));
    j["records"] = 399;
    std::ofstream(dir.path() / "manifest.json") << j.dump(2);
    auto report = hamvf::verify(dir.path(), 0.0);
    CHECK_FALSE(report.ok());
    bool count_failed = false;
    for (const auto& c : report.checks) count_failed |= c.name == "record_count" && !c.passed;
    CHECK(count_failed);
  }
}

TEST_CASE("score predictions") {
  testing::TempDir dir("score");
  auto opt = small_options();
  opt.write_png = false;
  hamvf::generate(BasisSpec::from_names("b1", "d3", false), 42, dir.path(), opt);
  auto ds = hamvf::load_dataset(dir.path());
  fs::path pred = dir.path() / "pred.jsonl";

  auto write_pred = [&](auto&& predicted) {
    std::ofstream out(pred);
    for (const auto& r : ds.records)
      out << hamvf::Json{{"sample_id", r.sample_id}, {"predicted", predicted(r)}}.dump() << '\n';
  };

  write_pred([](const hamvf::SampleRecord& r) { return r.hamiltonian; });
  auto perfect = hamvf::score_predictions(dir.path(), pred);
  CHECK(perfect.count == 400);
  CHECK(perfect.exact_match_rate() == 1.0);
  CHECK(perfect.mean_distance == 0.0);
  CHECK(perfect.f1 == 1.0);

  // "-x" (first 50 samples) mispredicted as "x": one token out, one in
  write_pred([](const hamvf::SampleRecord& r) { return r.hamiltonian == "-x" ? std::string("x") : r.hamiltonian; });
  auto one_off = hamvf::score_predictions(dir.path(), pred);
  CHECK(one_off.exact == 350);
  CHECK(one_off.mean_distance == doctest::Approx(50 * std::sqrt(2.0) / 400));

  write_pred([](const hamvf::SampleRecord& r) { return r.sample_id == 0 ? std::string("x +") : r.hamiltonian; });
  auto garbled = hamvf::score_predictions(dir.path(), pred);
  CHECK(garbled.unparsable == 1);
  CHECK(garbled.mean_distance == doctest::Approx(2.0 / 400));  // sqrt(N) with N = 4

  std::ofstream(pred, std::ios::trunc).flush();
  CHECK_THROWS_AS(hamvf::score_predictions(dir.path(), pred), hamvf::ValidationError);
  std::ofstream(pred, std::ios::trunc) << R"({"sample_id": 999999, "predicted": "x"})" << '\n';
  CHECK_THROWS_AS(hamvf::score_predictions(dir.path(), pred), hamvf::ValidationError);
  std::ofstream(pred, std::ios::trunc) << R"({"sample_id": 1, "predicted": "x"})" << '\n'
                                       << R"({"sample_id": 1, "predicted": "x"})" << '\n';
  CHECK_THROWS_AS(hamvf::score_predictions(dir.path(), pred), hamvf::ValidationError);
  CHECK_THROWS_AS(hamvf::score_predictions(dir.path(), dir.path() / "nope.jsonl"), hamvf::IoError);
}
