// hamvf command-line front end. Talks to the library only through hamvf.h.

#include <hamvf/hamvf.h>

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

using Json = nlohmann::ordered_json;

// Exit codes; a library status maps onto the same numbers.
enum Exit : int { kOk = 0, kUsage = 1, kValidation = 2, kVerification = 3, kIo = 4, kInternal = 5 };

struct Failure {
  int code;
  std::string message;
};

void check(hamvf_status s) {
  if (s != HAMVF_OK) throw Failure{static_cast<int>(s), hamvf_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using ExprPtr = std::unique_ptr<hamvf_expr, Deleter<hamvf_expr, hamvf_expr_free>>;
using FieldPtr = std::unique_ptr<hamvf_field, Deleter<hamvf_field, hamvf_field_free>>;
using BasisPtr = std::unique_ptr<hamvf_basis, Deleter<hamvf_basis, hamvf_basis_free>>;
using EnumPtr = std::unique_ptr<hamvf_enum, Deleter<hamvf_enum, hamvf_enum_free>>;
using CloudPtr = std::unique_ptr<hamvf_cloud, Deleter<hamvf_cloud, hamvf_cloud_free>>;
using RasterPtr = std::unique_ptr<hamvf_raster, Deleter<hamvf_raster, hamvf_raster_free>>;
using VocabPtr = std::unique_ptr<hamvf_vocab, Deleter<hamvf_vocab, hamvf_vocab_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  hamvf_string_free(s);
  return out;
}

std::string str(const hamvf_expr* e) {
  char* s = nullptr;
  check(hamvf_expr_to_string(e, &s));
  return take(s);
}

// Shortest representation that round-trips.
std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct BasisFlags {
  std::string basis;
  std::string delta = "d3";
  bool trig = false;

  void add(CLI::App* app) {
    app->add_option("--basis", basis, "basis b1..b5 (b2* adds sin/cos)")->required();
    app->add_option("--delta", delta, "coefficient set d3|d5|d7|d9")->capture_default_str();
    app->add_flag("--trig", trig, "add sin(x), sin(y), cos(x), cos(y) to the basis");
  }
  BasisPtr open() const {
    hamvf_basis* b = nullptr;
    check(hamvf_basis_create(basis.c_str(), delta.c_str(), trig ? 1 : 0, &b));
    return BasisPtr(b);
  }
};

// "name=value" pairs for --const.
ExprPtr parse_with_constants(const std::string& text, const std::vector<std::string>& consts) {
  std::vector<std::string> names, values;
  for (const auto& c : consts) {
    auto eq = c.find('=');
    if (eq == std::string::npos || eq == 0) throw Failure{kUsage, "--const expects name=value, got '" + c + "'"};
    names.push_back(c.substr(0, eq));
    values.push_back(c.substr(eq + 1));
  }
  std::vector<const char*> n, v;
  for (size_t i = 0; i < names.size(); ++i) {
    n.push_back(names[i].c_str());
    v.push_back(values[i].c_str());
  }
  hamvf_expr* e = nullptr;
  check(hamvf_expr_parse(text.c_str(), n.data(), v.data(), n.size(), &e));
  return ExprPtr(e);
}

// One Hamiltonian given by --ham, --demo or --basis/--index.
struct SourceFlags {
  std::string ham;
  std::vector<std::string> consts;
  std::string demo;
  std::string index;
  BasisFlags basis;

  void add(CLI::App* app, bool allow_index) {
    auto* h = app->add_option("--ham", ham, "Hamiltonian in the expression grammar");
    app->add_option("--const", consts, "named constant, name=value (repeatable)");
    auto* d = app->add_option("--demo", demo, "demo system: harmonic | pendulum | sis | lotka-volterra");
    h->excludes(d);
    if (allow_index) {
      auto* i = app->add_option("--index", index, "corpus index (with --basis/--delta)");
      app->add_option("--basis", basis.basis, "basis for --index");
      app->add_option("--delta", basis.delta, "coefficient set for --index")->capture_default_str();
      app->add_flag("--trig", basis.trig, "trig shapes for --index");
      i->excludes(h)->excludes(d);
    }
  }
  ExprPtr resolve() const {
    if (!ham.empty()) return parse_with_constants(ham, consts);
    if (!demo.empty()) {
      hamvf_expr* e = nullptr;
      check(hamvf_demo_expr(demo.c_str(), &e));
      return ExprPtr(e);
    }
    if (!index.empty()) {
      if (basis.basis.empty()) throw Failure{kUsage, "--index needs --basis"};
      auto b = basis.open();
      hamvf_expr* e = nullptr;
      check(hamvf_basis_function_at(b.get(), index.c_str(), &e));
      return ExprPtr(e);
    }
    throw Failure{kUsage, "give one of --ham, --demo or --index"};
  }
};

FieldPtr field_of(const hamvf_expr* h) {
  hamvf_field* f = nullptr;
  check(hamvf_field_create(h, &f));
  return FieldPtr(f);
}

std::string component(const hamvf_field* f, int c) {
  hamvf_expr* e = nullptr;
  check(hamvf_field_component(f, c, &e));
  ExprPtr owned(e);
  return str(e);
}

void add_render_flags(CLI::App* app, hamvf_render_config& cfg) {
  app->add_option("--resolution", cfg.resolution, "raster side in pixels")->capture_default_str()->check(CLI::Range(32, 1024));
  app->add_option("--stream-seeds", cfg.stream_seeds, "streamline seeds per side")->capture_default_str();
  app->add_option("--rk4-step", cfg.rk4_step, "streamline arc-length step")->capture_default_str();
  app->add_option("--max-steps", cfg.max_steps, "streamline steps per direction")->capture_default_str();
}

Json render_json(const hamvf_render_config& cfg) {
  return {{"resolution", cfg.resolution}, {"stream_seeds", cfg.stream_seeds}, {"rk4_step", cfg.rk4_step}, {"max_steps", cfg.max_steps}};
}

// Splices "key = value" lines of a --config file into the argument list as
// --key value, skipping keys also given as flags. Blank lines and lines
// starting with '#' are ignored; "true"/"false" toggle flags.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return {args.rbegin(), args.rend()};
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  auto given = [&](const std::string& key) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == "--" + key || a.starts_with("--" + key + "="); });
  };
  auto trim = [](std::string t) {
    t.erase(0, t.find_first_not_of(" \t\r"));
    t.erase(t.find_last_not_of(" \t\r") + 1);
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = t.substr(1, t.size() - 2);
    return t;
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ConversionError(path + ":" + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "config" || given(key)) continue;
    if (value == "true") {
      extra.push_back("--" + key);
    } else if (value != "false") {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return {args.rbegin(), args.rend()};  // CLI11 consumes the vector from the back
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hamvf: Hamiltonian vector fields, corpora and datasets", "hamvf"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hamvf_version());

  // card
  BasisFlags card_basis;
  auto* card = app.add_subcommand("card", "print the number of functions in Ham(B, delta)");
  card_basis.add(card);

  // enum
  BasisFlags enum_basis;
  std::string enum_from = "0";
  std::optional<std::string> enum_to;
  bool enum_indexed = false;
  auto* enumerate = app.add_subcommand("enum", "stream canonical strings for an index range");
  enum_basis.add(enumerate);
  enumerate->add_option("--from", enum_from, "first index")->capture_default_str();
  enumerate->add_option("--to", enum_to, "one past the last index (default: end of corpus)");
  enumerate->add_flag("--with-index", enum_indexed, "prefix each line with its index and a tab");

  // field
  SourceFlags field_src;
  bool field_json = false;
  auto* field = app.add_subcommand("field", "print the Hamiltonian vector field X_H = (-H_y, H_x)");
  field_src.add(field, true);
  field->add_flag("--json", field_json, "print {\"dx\": ..., \"dy\": ...}");

  // render
  SourceFlags render_src;
  hamvf_render_config render_cfg;
  hamvf_render_config_default(&render_cfg);
  unsigned render_cloud = 0;
  std::uint64_t render_seed = 0;
  std::size_t render_points = 441;
  std::string render_out;
  bool render_no_png = false;
  auto* render = app.add_subcommand("render", "rasterize one Hamiltonian over a point cloud");
  render_src.add(render, true);
  add_render_flags(render, render_cfg);
  render->add_option("--cloud", render_cloud, "cloud id; 0 is the integer lattice")->capture_default_str();
  render->add_option("--seed", render_seed, "master seed of the random clouds")->capture_default_str();
  render->add_option("--points", render_points, "cloud size (perfect square)")->capture_default_str();
  render->add_option("--out", render_out, "output prefix; writes <out>.symf and <out>_{q,s,h}.png")->required();
  render->add_flag("--no-png", render_no_png, "skip the PNG previews");

  // gen
  BasisFlags gen_basis;
  hamvf_generate_options gen_opt;
  hamvf_generate_options_default(&gen_opt);
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  std::optional<std::uint64_t> gen_limit;
  std::string gen_shard = "0/1";
  std::string gen_split = "3/4";
  bool gen_no_png = false;
  auto* gen = app.add_subcommand("gen", "generate a dataset shard");
  gen_basis.add(gen);
  gen->add_option("--seed", gen_seed, "master seed")->required();
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--limit", gen_limit, "only the first N corpus members");
  gen->add_option("--shard", gen_shard, "shard k/m (0-based k)")->capture_default_str();
  gen->add_option("--workers", gen_opt.workers, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  gen->add_option("--split-fraction", gen_split, "training fraction as p/q or decimal")->capture_default_str();
  gen->add_option("--cap", gen_opt.cap, "largest corpus generated without --limit")->capture_default_str();
  gen->add_option("--points", gen_opt.points, "points per cloud (perfect square)")->capture_default_str();
  gen->add_flag("--no-png", gen_no_png, "skip the PNG previews");
  add_render_flags(gen, gen_opt.render);

  // verify
  std::string verify_dir;
  double verify_fraction = 1.0;
  unsigned verify_workers = 1;
  auto* verify = app.add_subcommand("verify", "re-derive a dataset and compare");
  verify->add_option("--dir", verify_dir, "dataset directory")->required();
  verify->add_option("--fraction", verify_fraction, "fraction of samples re-rendered")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  verify->add_option("--workers", verify_workers, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  // dist
  std::string dist_a, dist_b, dist_metric = "euclid";
  auto* dist = app.add_subcommand("dist", "distance between two Hamiltonians");
  dist->add_option("--a", dist_a, "first Hamiltonian")->required();
  dist->add_option("--b", dist_b, "second Hamiltonian")->required();
  dist->add_option("--metric", dist_metric, "euclid | jaccard | levenshtein")
      ->capture_default_str()
      ->check(CLI::IsMember({"euclid", "jaccard", "levenshtein"}));

  // vocab
  BasisFlags vocab_basis;
  std::string vocab_out;
  auto* vocab = app.add_subcommand("vocab", "write the token vocabulary as JSON");
  vocab_basis.add(vocab);
  vocab->add_option("--out", vocab_out, "output file (default: stdout)");

  // score
  std::string score_dir, score_pred;
  auto* score = app.add_subcommand("score", "score a predictions file against a dataset");
  score->add_option("--dir", score_dir, "dataset directory")->required();
  score->add_option("--predictions", score_pred, "JSON Lines of {sample_id, predicted}")->required();

  std::string config_file;
  for (CLI::App* sub : app.get_subcommands({}))
    sub->add_option("--config", config_file, "read flags from a key = value file; command-line flags win");

  try {
    app.parse(expand_config(argc, argv));
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    app.exit(e);
    return kIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  // resolved configuration of the chosen subcommand, including defaults
  CLI::App* chosen = app.get_subcommands().front();
  std::cerr << "# hamvf " << hamvf_version() << " " << chosen->get_name() << "\n" << chosen->config_to_str(true, false);

  try {
    if (card->parsed()) {
      auto b = card_basis.open();
      char* s = nullptr;
      check(hamvf_basis_cardinality(b.get(), &s));
      std::cout << take(s) << '\n';
    } else if (enumerate->parsed()) {
      auto b = enum_basis.open();
      hamvf_enum* it = nullptr;
      check(hamvf_enum_create(b.get(), enum_from.c_str(), enum_to ? enum_to->c_str() : nullptr, &it));
      EnumPtr owned(it);
      // index column computed alongside, since indices can exceed 64 bits
      char* idx = nullptr;
      std::string index = enum_from;
      for (;;) {
        hamvf_expr* e = nullptr;
        check(hamvf_enum_next(it, &e));
        if (!e) break;
        ExprPtr f(e);
        if (enum_indexed) {
          check(hamvf_basis_index_of(b.get(), e, &idx));
          index = take(idx);
          std::cout << index << '\t';
        }
        std::cout << str(e) << '\n';
      }
    } else if (field->parsed()) {
      auto h = field_src.resolve();
      auto f = field_of(h.get());
      std::string dx = component(f.get(), 0), dy = component(f.get(), 1);
      if (field_json)
        std::cout << Json{{"hamiltonian", str(h.get())}, {"dx", dx}, {"dy", dy}}.dump() << '\n';
      else
        std::cout << "dx: " << dx << "\ndy: " << dy << '\n';
    } else if (render->parsed()) {
      auto h = render_src.resolve();
      auto f = field_of(h.get());
      hamvf_cloud* c = nullptr;
      check(hamvf_cloud_create(render_seed, render_cloud, render_points, &c));
      CloudPtr cloud(c);
      hamvf_raster* r = nullptr;
      check(hamvf_render(f.get(), cloud.get(), &render_cfg, &r));
      RasterPtr raster(r);
      std::string tensor = render_out + ".symf";
      check(hamvf_raster_write_tensor(r, tensor.c_str()));
      Json pngs = Json::array();
      if (!render_no_png) {
        check(hamvf_raster_write_png(r, render_out.c_str()));
        for (const char* s : {"_q.png", "_s.png", "_h.png"}) pngs.push_back(render_out + s);
      }
      std::vector<double> xy(2 * hamvf_cloud_size(c));
      check(hamvf_cloud_points(c, xy.data()));
      std::size_t nan_points = 0;
      for (std::size_t i = 0; i < xy.size(); i += 2) {
        double vx = 0, vy = 0;
        check(hamvf_field_eval(f.get(), xy[i], xy[i + 1], &vx, &vy));
        nan_points += std::isnan(vx) || std::isnan(vy);
      }
      Json out{{"hamiltonian", str(h.get())},
               {"dx", component(f.get(), 0)},
               {"dy", component(f.get(), 1)},
               {"cloud_id", render_cloud},
               {"seed", render_seed},
               {"points", render_points},
               {"nan_points", nan_points},
               {"render", render_json(render_cfg)},
               {"tensor", tensor},
               {"png", pngs}};
      std::cout << out.dump(2) << '\n';
    } else if (gen->parsed()) {
      auto b = gen_basis.open();
      unsigned k = 0, m = 0;
      char slash = 0;
      if (std::sscanf(gen_shard.c_str(), "%u%c%u", &k, &slash, &m) != 3 || slash != '/')
        throw Failure{kUsage, "--shard expects k/m, got '" + gen_shard + "'"};
      gen_opt.shard_index = k;
      gen_opt.shard_count = m;
      gen_opt.has_limit = gen_limit.has_value();
      gen_opt.limit = gen_limit.value_or(0);
      gen_opt.split_fraction = gen_split.c_str();
      gen_opt.write_png = gen_no_png ? 0 : 1;
      char* manifest = nullptr;
      check(hamvf_generate(b.get(), gen_seed, gen_out.c_str(), &gen_opt, &manifest));
      std::cout << take(manifest) << '\n';
    } else if (verify->parsed()) {
      char* report = nullptr;
      hamvf_status s = hamvf_verify(verify_dir.c_str(), verify_fraction, verify_workers, &report);
      if (report) std::cout << take(report) << '\n';
      check(s);
    } else if (dist->parsed()) {
      auto a = parse_with_constants(dist_a, {});
      auto b = parse_with_constants(dist_b, {});
      hamvf_metric metric = dist_metric == "euclid"    ? HAMVF_METRIC_EUCLID
                            : dist_metric == "jaccard" ? HAMVF_METRIC_JACCARD
                                                       : HAMVF_METRIC_LEVENSHTEIN;
      double d = 0;
      check(hamvf_distance(a.get(), b.get(), metric, &d));
      std::cout << format_double(d) << '\n';
    } else if (vocab->parsed()) {
      auto b = vocab_basis.open();
      hamvf_vocab* v = nullptr;
      check(hamvf_vocab_create(b.get(), &v));
      VocabPtr owned(v);
      char* s = nullptr;
      check(hamvf_vocab_to_json(v, &s));
      std::string text = take(s);
      if (vocab_out.empty()) {
        std::cout << text << '\n';
      } else {
        std::FILE* out = std::fopen(vocab_out.c_str(), "wb");
        if (!out) throw Failure{kIo, "cannot open " + vocab_out + " for writing"};
        bool ok = std::fputs((text + "\n").c_str(), out) >= 0;
        ok &= std::fclose(out) == 0;
        if (!ok) throw Failure{kIo, "write failed: " + vocab_out};
      }
    } else if (score->parsed()) {
      char* report = nullptr;
      check(hamvf_score(score_dir.c_str(), score_pred.c_str(), &report));
      std::cout << take(report) << '\n';
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  std::cout.flush();
  return std::cout ? kOk : kIo;
}
