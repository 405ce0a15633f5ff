#include "hamvf/datakit.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hamvf/error.hpp"
#include "hamvf/hamfield.hpp"
#include "hamvf/parallel.hpp"
#include "hamvf/tokens.hpp"

namespace hamvf {

namespace fs = std::filesystem;

Split assign_split(std::uint64_t master_seed, std::uint64_t sample_id, const Rational& train_fraction) {
  const auto p = static_cast<std::uint64_t>(train_fraction.num());
  const auto q = static_cast<std::uint64_t>(train_fraction.den());
  return splitmix64(master_seed ^ sample_id) % q >= q - p ? Split::train : Split::test;
}

namespace {

const char* split_name(Split s) { return s == Split::train ? "train" : "test"; }

Split split_from_name(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "test") return Split::test;
  throw ValidationError("unknown split '" + s + "'");
}

std::string sample_stem(std::uint64_t sample_id) {
  std::string digits = std::to_string(sample_id);
  if (digits.size() < 12) digits.insert(0, 12 - digits.size(), '0');
  return digits;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

Json render_to_json(const RenderConfig& r) {
  return {{"resolution", r.resolution}, {"stream_seeds", r.stream_seeds}, {"rk4_step", r.rk4_step}, {"max_steps", r.max_steps}};
}

RenderConfig render_from_json(const Json& j) {
  RenderConfig r;
  r.resolution = j.at("resolution").get<unsigned>();
  r.stream_seeds = j.at("stream_seeds").get<unsigned>();
  r.rk4_step = j.at("rk4_step").get<double>();
  r.max_steps = j.at("max_steps").get<unsigned>();
  return r;
}

bool same_render(const RenderConfig& a, const RenderConfig& b) {
  return a.resolution == b.resolution && a.stream_seeds == b.stream_seeds && a.rk4_step == b.rk4_step &&
         a.max_steps == b.max_steps;
}

std::uint64_t to_u64(const BigInt& v, const char* what) {
  if (v < 0 || v > BigInt(std::numeric_limits<std::uint64_t>::max()))
    throw ValidationError(std::string(what) + " does not fit in 64 bits");
  return v.convert_to<std::uint64_t>();
}

}  // namespace

std::string manifest_file_name(unsigned shard_index, unsigned shard_count) {
  if (shard_count == 1) return "manifest.json";
  return "manifest-" + std::to_string(shard_index) + "-of-" + std::to_string(shard_count) + ".json";
}

std::string records_file_name(unsigned shard_index, unsigned shard_count) {
  if (shard_count == 1) return "records.jsonl";
  return "records-" + std::to_string(shard_index) + "-of-" + std::to_string(shard_count) + ".jsonl";
}

Json SampleRecord::to_json() const {
  return {{"sample_id", sample_id},
          {"corpus_index", to_string(corpus_index)},
          {"cloud_id", cloud_id},
          {"hamiltonian", hamiltonian},
          {"field_dx", field_dx},
          {"field_dy", field_dy},
          {"token_indices", token_indices},
          {"tensor_path", tensor_path},
          {"png_paths", png_paths},
          {"split", split_name(split)},
          {"nan_points", nan_points}};
}

SampleRecord SampleRecord::from_json(const Json& j) {
  SampleRecord r;
  r.sample_id = j.at("sample_id").get<std::uint64_t>();
  r.corpus_index = parse_bigint(j.at("corpus_index").get<std::string>());
  r.cloud_id = j.at("cloud_id").get<unsigned>();
  r.hamiltonian = j.at("hamiltonian").get<std::string>();
  r.field_dx = j.at("field_dx").get<std::string>();
  r.field_dy = j.at("field_dy").get<std::string>();
  r.token_indices = j.at("token_indices").get<std::vector<std::size_t>>();
  r.tensor_path = j.at("tensor_path").get<std::string>();
  r.png_paths = j.at("png_paths").get<std::vector<std::string>>();
  r.split = split_from_name(j.at("split").get<std::string>());
  r.nan_points = j.value("nan_points", std::size_t{0});
  return r;
}

Json DatasetManifest::to_json() const {
  Json delta = Json::array();
  for (const auto& c : spec.delta) delta.push_back(c.to_string());
  return {{"format", kManifestFormat},
          {"tool_version", tool_version},
          {"basis",
           {{"name", spec.name()},
            {"max_degree", spec.max_degree},
            {"trig", spec.trig},
            {"delta", delta},
            {"delta_name", spec.delta_name}}},
          {"master_seed", master_seed},
          {"clouds", clouds},
          {"points", points},
          {"render", render_to_json(render)},
          {"split_fraction", split_fraction.to_fraction_string()},
          {"limit", limit ? Json(*limit) : Json(nullptr)},
          {"corpus_size", to_string(corpus_size)},
          {"members", to_string(members)},
          {"shard", {{"index", shard_index}, {"count", shard_count}, {"lo", to_string(shard_lo)}, {"hi", to_string(shard_hi)}}},
          {"records", records},
          {"records_path", records_path},
          {"vocabulary_path", vocabulary_path},
          {"generated_at", generated_at}};
}

DatasetManifest DatasetManifest::from_json(const Json& j) {
  if (j.at("format").get<int>() != kManifestFormat) throw ValidationError("unsupported manifest format");
  DatasetManifest m;
  const Json& basis = j.at("basis");
  std::vector<Rational> delta;
  for (const auto& c : basis.at("delta")) delta.push_back(Rational::parse(c.get<std::string>()));
  m.spec = BasisSpec::make(basis.at("max_degree").get<unsigned>(), std::move(delta), basis.at("trig").get<bool>());
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.clouds = j.at("clouds").get<unsigned>();
  m.points = j.at("points").get<std::size_t>();
  m.render = render_from_json(j.at("render"));
  m.split_fraction = Rational::parse(j.at("split_fraction").get<std::string>());
  if (!j.at("limit").is_null()) m.limit = j.at("limit").get<std::uint64_t>();
  m.corpus_size = parse_bigint(j.at("corpus_size").get<std::string>());
  m.members = parse_bigint(j.at("members").get<std::string>());
  const Json& shard = j.at("shard");
  m.shard_index = shard.at("index").get<unsigned>();
  m.shard_count = shard.at("count").get<unsigned>();
  m.shard_lo = parse_bigint(shard.at("lo").get<std::string>());
  m.shard_hi = parse_bigint(shard.at("hi").get<std::string>());
  m.records = j.at("records").get<std::uint64_t>();
  m.records_path = j.at("records_path").get<std::string>();
  m.vocabulary_path = j.at("vocabulary_path").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.generated_at = j.value("generated_at", "");
  return m;
}

// ---------------------------------------------------------------------------
// generate

DatasetManifest generate(const BasisSpec& spec, std::uint64_t master_seed, const fs::path& out_dir,
                         const GenerateOptions& options) {
  options.render.validate();
  if (options.shard_count == 0 || options.shard_index >= options.shard_count)
    throw ValidationError("shard " + std::to_string(options.shard_index) + "/" + std::to_string(options.shard_count) +
                          " is not valid");
  const Rational& fraction = options.split_fraction;
  if (fraction.sign() < 0 || fraction > Rational(1)) throw ValidationError("split fraction must be in [0, 1]");

  const Corpus corpus(spec);
  const TokenVocab vocab(spec);
  const unsigned clouds = kCloudCount;

  BigInt members = corpus.size();
  if (options.limit) {
    members = std::min(members, BigInt(*options.limit));
  } else if (members > options.cap) {
    throw ValidationError("corpus " + spec.name() + " has " + to_string(members) + " members, above the cap of " +
                          std::to_string(options.cap) + "; pass a limit");
  }
  to_u64(members * clouds, "sample id range");

  DatasetManifest m;
  m.spec = spec;
  m.master_seed = master_seed;
  m.render = options.render;
  m.points = options.points;
  m.clouds = clouds;
  m.split_fraction = fraction;
  m.limit = options.limit;
  m.corpus_size = corpus.size();
  m.members = members;
  m.shard_index = options.shard_index;
  m.shard_count = options.shard_count;
  m.shard_lo = members * options.shard_index / options.shard_count;
  m.shard_hi = members * (options.shard_index + 1) / options.shard_count;
  m.records_path = records_file_name(options.shard_index, options.shard_count);

  std::error_code ec;
  fs::create_directories(out_dir / "tensors", ec);
  if (options.write_png) fs::create_directories(out_dir / "png", ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_file(out_dir / m.vocabulary_path, vocab.to_json() + "\n");

  const std::vector<PointCloud> suite = cloud_suite(master_seed, options.points, clouds);

  std::ofstream records(out_dir / m.records_path, std::ios::binary | std::ios::trunc);
  if (!records) throw IoError("cannot open " + (out_dir / m.records_path).string());

  struct Member {
    std::uint64_t index;
    HamFunction function;
    FieldExpr field;
    std::string dx;
    std::string dy;
    std::vector<std::size_t> tokens;
    Raster layers;  // streamline and heatmap channels are cloud-independent
  };

  constexpr std::size_t kBatch = 64;
  CorpusEnumerator members_in_shard(corpus, m.shard_lo, m.shard_hi);
  std::uint64_t next_index = to_u64(m.shard_lo, "corpus index");
  for (;;) {
    std::vector<Member> batch;
    while (batch.size() < kBatch) {
      auto f = members_in_shard.next();
      if (!f) break;
      FieldExpr field = hamiltonian_field(f->to_expr());
      std::string dx = field.dx.to_string();
      std::string dy = field.dy.to_string();
      auto tokens = vocab.vectorize(*f).indices();
      batch.push_back({next_index++, std::move(*f), std::move(field), std::move(dx), std::move(dy), std::move(tokens), {}});
    }
    if (batch.empty()) break;

    parallel_for(batch.size(), options.workers,
                 [&](std::size_t i) { batch[i].layers = render_field_layers(batch[i].field, options.render); });

    std::vector<std::string> lines(batch.size() * clouds);
    parallel_for(lines.size(), options.workers, [&](std::size_t i) {
      const Member& member = batch[i / clouds];
      const unsigned cloud_id = static_cast<unsigned>(i % clouds);
      SampleRecord rec;
      rec.sample_id = member.index * clouds + cloud_id;
      rec.corpus_index = member.index;
      rec.cloud_id = cloud_id;
      rec.hamiltonian = member.function.to_string();
      rec.field_dx = member.dx;
      rec.field_dy = member.dy;
      rec.token_indices = member.tokens;
      rec.split = assign_split(master_seed, rec.sample_id, fraction);

      FieldSample sample = eval_field(member.field, suite[cloud_id]);
      rec.nan_points = sample.nan_count;
      Raster raster = member.layers;
      render_quiver_layer(sample, raster);

      const std::string stem = sample_stem(rec.sample_id);
      rec.tensor_path = "tensors/" + stem + ".symf";
      export_tensor(raster, out_dir / rec.tensor_path);
      if (options.write_png) {
        export_png(raster, out_dir / "png" / stem);
        for (const auto& p : png_paths(fs::path("png") / stem)) rec.png_paths.push_back(p.generic_string());
      }
      lines[i] = rec.to_json().dump();
    });

    for (const auto& line : lines) records << line << '\n';
    m.records += lines.size();
  }
  records.close();
  if (!records) throw IoError("write failed: " + (out_dir / m.records_path).string());

  m.generated_at = utc_timestamp();
  write_file(out_dir / manifest_file_name(options.shard_index, options.shard_count), m.to_json().dump(2) + "\n");
  return m;
}

// ---------------------------------------------------------------------------
// loading

Dataset load_dataset(const fs::path& dir) {
  Dataset ds;
  ds.root = dir;
  if (!fs::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
  std::vector<fs::path> manifest_files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.starts_with("manifest") && name.ends_with(".json")) manifest_files.push_back(entry.path());
  }
  if (manifest_files.empty()) throw IoError("no manifest in " + dir.string());
  for (const auto& path : manifest_files) {
    try {
      ds.manifests.push_back(DatasetManifest::from_json(Json::parse(read_file(path))));
    } catch (const Json::exception& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
  }
  std::sort(ds.manifests.begin(), ds.manifests.end(),
            [](const DatasetManifest& a, const DatasetManifest& b) { return a.shard_index < b.shard_index; });
  for (const auto& m : ds.manifests) {
    std::ifstream in(dir / m.records_path);
    if (!in) throw IoError("cannot open " + (dir / m.records_path).string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        ds.records.push_back(SampleRecord::from_json(Json::parse(line)));
      } catch (const Json::exception& e) {
        throw ValidationError(m.records_path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return ds;
}

// ---------------------------------------------------------------------------
// verify

bool VerifyReport::ok() const {
  return mismatches.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json VerifyReport::to_json() const {
  Json checks_json = Json::array();
  for (const auto& c : checks) checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  Json bad = Json::array();
  for (const auto& mm : mismatches) bad.push_back({{"sample_id", mm.sample_id}, {"reason", mm.reason}});
  return {{"ok", ok()},
          {"records_checked", records_checked},
          {"tensors_compared", tensors_compared},
          {"checks", checks_json},
          {"mismatches", bad}};
}

namespace {

bool selected_for_render(std::uint64_t sample_id, double fraction) {
  if (fraction >= 1.0) return true;
  return SplitMix64(sample_id ^ 0xA5A5A5A5A5A5A5A5ULL).next_unit() < fraction;
}

std::optional<std::string> compare_sample(const Dataset& ds, const DatasetManifest& m, const SampleRecord& rec,
                                          const std::vector<PointCloud>& suite) {
  const Corpus corpus(m.spec);  // cheap: shapes + one power
  HamFunction f = corpus.function_at(rec.corpus_index);
  FieldExpr field = hamiltonian_field(f.to_expr());
  Raster expected = render(eval_field(field, suite.at(rec.cloud_id)), field, m.render);
  auto bytes = encode_tensor(expected);
  std::string actual;
  try {
    actual = read_file(ds.root / rec.tensor_path);
  } catch (const IoError& e) {
    return std::string("tensor missing: ") + e.what();
  }
  if (actual.size() != bytes.size() || !std::equal(bytes.begin(), bytes.end(), actual.begin(),
                                                   [](std::uint8_t a, char b) { return a == static_cast<std::uint8_t>(b); }))
    return std::string("tensor bytes differ from re-render");
  for (std::size_t c = 0; c < rec.png_paths.size(); ++c) {
    unsigned w = 0, h = 0;
    std::vector<std::uint8_t> pixels;
    try {
      pixels = read_gray_png(ds.root / rec.png_paths[c], w, h);
    } catch (const Error& e) {
      return std::string("png unreadable: ") + e.what();
    }
    if (w != expected.width() || h != expected.height()) return "png " + rec.png_paths[c] + " has wrong size";
    auto plane = expected.channel(static_cast<unsigned>(c));
    for (std::size_t i = 0; i < plane.size(); ++i)
      if (pixels[i] != static_cast<std::uint8_t>(std::lround(255.0 * plane[i])))
        return "png " + rec.png_paths[c] + " differs from re-render";
  }
  return std::nullopt;
}

}  // namespace

VerifyReport verify(const fs::path& dir, double fraction, unsigned workers) {
  VerifyReport report;
  Dataset ds = load_dataset(dir);
  const DatasetManifest& head = ds.manifests.front();

  // manifests agree with each other
  {
    bool consistent = true;
    std::set<unsigned> shards;
    for (const auto& m : ds.manifests) {
      consistent &= m.spec == head.spec && m.master_seed == head.master_seed && same_render(m.render, head.render) &&
                    m.points == head.points && m.clouds == head.clouds && m.split_fraction == head.split_fraction &&
                    m.limit == head.limit && m.shard_count == head.shard_count && m.members == head.members;
      consistent &= shards.insert(m.shard_index).second;
    }
    report.checks.push_back({"manifest_consistency", consistent,
                             std::to_string(ds.manifests.size()) + " manifest(s) for " + head.spec.name()});
  }

  // cardinality law
  {
    BigInt card = cardinality(head.spec);
    BigInt expected_members = head.limit ? std::min(card, BigInt(*head.limit)) : card;
    bool ok = head.corpus_size == card && head.members == expected_members;
    report.checks.push_back({"cardinality", ok,
                             "corpus_size " + to_string(head.corpus_size) + " (formula " + to_string(card) +
                                 "), members " + to_string(head.members) + " (expected " + to_string(expected_members) + ")"});
  }

  // record counts
  {
    bool ok = true;
    std::string detail;
    std::map<unsigned, std::uint64_t> lines_per_shard;
    std::size_t cursor = 0;
    BigInt total_expected = 0;
    std::uint64_t total = 0;
    for (const auto& m : ds.manifests) {
      BigInt lo = m.members * m.shard_index / m.shard_count;
      BigInt hi = m.members * (m.shard_index + 1) / m.shard_count;
      BigInt expected = (hi - lo) * m.clouds;
      ok &= m.shard_lo == lo && m.shard_hi == hi;
      if (BigInt(m.records) != expected) {
        ok = false;
        detail += "manifest " + std::to_string(m.shard_index) + " declares " + std::to_string(m.records) +
                  " records, expected " + to_string(expected) + "; ";
      }
      total_expected += expected;
      total += m.records;
    }
    cursor = ds.records.size();
    if (BigInt(cursor) != BigInt(total)) {
      ok = false;
      detail += "records files hold " + std::to_string(cursor) + " lines, manifests declare " + std::to_string(total) + "; ";
    }
    if (ds.manifests.size() == head.shard_count && BigInt(cursor) != head.members * head.clouds) {
      ok = false;
      detail += "dataset holds " + std::to_string(cursor) + " records, cardinality law gives " +
                to_string(head.members * head.clouds) + "; ";
    }
    if (detail.empty()) detail = std::to_string(cursor) + " records";
    report.checks.push_back({"record_count", ok, detail});
  }

  // vocabulary file
  {
    const TokenVocab vocab(head.spec);
    bool ok = false;
    std::string detail;
    try {
      std::string text = read_file(dir / head.vocabulary_path);
      ok = text == vocab.to_json() + "\n";
      detail = ok ? std::to_string(vocab.size()) + " tokens" : "vocabulary differs from the analytic vocabulary";
    } catch (const IoError& e) {
      detail = e.what();
    }
    report.checks.push_back({"vocabulary", ok, detail});
  }

  // per-record re-derivation
  const Corpus corpus(head.spec);
  const TokenVocab vocab(head.spec);
  const std::vector<PointCloud> suite = cloud_suite(head.master_seed, head.points, head.clouds);
  std::vector<const DatasetManifest*> owner(ds.records.size());
  {
    std::size_t i = 0;
    for (const auto& m : ds.manifests)
      for (std::uint64_t k = 0; k < m.records && i < ds.records.size(); ++k) owner[i++] = &m;
    for (; i < ds.records.size(); ++i) owner[i] = &ds.manifests.back();
  }

  std::vector<std::optional<std::string>> problems(ds.records.size());
  std::vector<char> rendered(ds.records.size(), 0);
  parallel_for(ds.records.size(), workers, [&](std::size_t i) {
    const SampleRecord& rec = ds.records[i];
    const DatasetManifest& m = *owner[i];
    auto fail = [&](std::string why) { problems[i] = std::move(why); };
    if (rec.cloud_id >= m.clouds) return fail("cloud_id out of range");
    if (rec.corpus_index < m.shard_lo || rec.corpus_index >= m.shard_hi) return fail("corpus_index outside shard range");
    if (BigInt(rec.sample_id) != rec.corpus_index * m.clouds + rec.cloud_id) return fail("sample_id inconsistent");
    HamFunction f = corpus.function_at(rec.corpus_index);
    if (f.to_string() != rec.hamiltonian) return fail("hamiltonian differs from corpus member");
    FieldExpr field = hamiltonian_field(f.to_expr());
    if (field.dx.to_string() != rec.field_dx || field.dy.to_string() != rec.field_dy)
      return fail("vector field differs from derivation");
    if (vocab.vectorize(f).indices() != rec.token_indices) return fail("token_indices differ from tokenization");
    if (assign_split(m.master_seed, rec.sample_id, m.split_fraction) != rec.split) return fail("split assignment differs");
    if (selected_for_render(rec.sample_id, fraction)) {
      rendered[i] = 1;
      if (auto why = compare_sample(ds, m, rec, suite)) return fail(*why);
    }
  });

  std::set<std::pair<BigInt, unsigned>> seen;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const SampleRecord& rec = ds.records[i];
    if (!seen.insert({rec.corpus_index, rec.cloud_id}).second && !problems[i])
      problems[i] = "duplicate (corpus_index, cloud_id)";
    if (problems[i]) report.mismatches.push_back({rec.sample_id, *problems[i]});
    report.tensors_compared += static_cast<std::size_t>(rendered[i]);
  }
  report.records_checked = ds.records.size();
  report.checks.push_back({"records", report.mismatches.empty(),
                           std::to_string(report.mismatches.size()) + " mismatching record(s), " +
                               std::to_string(report.tensors_compared) + " tensor(s) re-rendered"});
  return report;
}

// ---------------------------------------------------------------------------
// score

Json ScoreReport::to_json() const {
  return {{"count", count},
          {"exact_match_rate", exact_match_rate()},
          {"mean_distance", mean_distance},
          {"token_precision", precision},
          {"token_recall", recall},
          {"token_f1", f1},
          {"mean_jaccard_distance", mean_jaccard},
          {"unparsable", unparsable},
          {"max_distance", max_distance},
          {"vocab_size", vocab_size}};
}

ScoreReport score_predictions(const fs::path& dataset_dir, const fs::path& predictions) {
  Dataset ds = load_dataset(dataset_dir);
  const TokenVocab vocab(ds.manifests.front().spec);
  std::map<std::uint64_t, const SampleRecord*> by_id;
  for (const auto& r : ds.records) by_id[r.sample_id] = &r;

  std::ifstream in(predictions);
  if (!in) throw IoError("cannot open " + predictions.string());

  ScoreReport report;
  report.vocab_size = vocab.size();
  report.max_distance = std::sqrt(static_cast<double>(vocab.size()));
  std::set<std::uint64_t> scored;
  double distance_sum = 0.0;
  double jaccard_sum = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::uint64_t id = 0;
    std::string predicted;
    try {
      Json j = Json::parse(line);
      id = j.at("sample_id").get<std::uint64_t>();
      predicted = j.at("predicted").get<std::string>();
    } catch (const Json::exception& e) {
      throw ValidationError(predictions.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("unknown sample_id " + std::to_string(id));
    if (!scored.insert(id).second) throw ValidationError("duplicate prediction for sample_id " + std::to_string(id));

    HamFunction truth = HamFunction::parse(it->second->hamiltonian);
    TokenVector truth_vec = vocab.vectorize(truth);
    ++report.count;
    std::optional<TokenVector> pred_vec;
    try {
      pred_vec = vocab.vectorize(HamFunction::parse(predicted));
    } catch (const ValidationError&) {
    }
    if (!pred_vec) {
      ++report.unparsable;
      distance_sum += report.max_distance;
      jaccard_sum += 1.0;
      fn += truth_vec.popcount();
      continue;
    }
    double d = distance_euclid(truth_vec, *pred_vec);
    distance_sum += d;
    report.exact += d == 0.0 ? 1 : 0;
    std::size_t common = 0;
    for (auto i : truth_vec.indices()) common += pred_vec->test(i) ? 1 : 0;
    tp += common;
    fp += pred_vec->popcount() - common;
    fn += truth_vec.popcount() - common;
    std::size_t uni = truth_vec.popcount() + pred_vec->popcount() - common;
    jaccard_sum += uni ? 1.0 - static_cast<double>(common) / static_cast<double>(uni) : 0.0;
  }
  if (report.count == 0) throw ValidationError("predictions file " + predictions.string() + " is empty");
  report.mean_distance = distance_sum / static_cast<double>(report.count);
  report.mean_jaccard = jaccard_sum / static_cast<double>(report.count);
  report.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  report.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  report.f1 = report.precision + report.recall > 0 ? 2 * report.precision * report.recall / (report.precision + report.recall) : 0.0;
  return report;
}

}  // namespace hamvf
