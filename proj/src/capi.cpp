#include "hamvf/hamvf.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "hamvf/datakit.hpp"
#include "hamvf/error.hpp"
#include "hamvf/hamfield.hpp"
#include "hamvf/raster.hpp"
#include "hamvf/tokens.hpp"

struct hamvf_expr {
  hamvf::Expr e;
};
struct hamvf_field {
  hamvf::FieldExpr f;
};
struct hamvf_basis {
  hamvf::Corpus corpus;
};
struct hamvf_enum {
  std::unique_ptr<hamvf::Corpus> corpus;
  hamvf::CorpusEnumerator it;
};
struct hamvf_cloud {
  hamvf::PointCloud cloud;
};
struct hamvf_raster {
  hamvf::Raster r;
};
struct hamvf_vocab {
  hamvf::TokenVocab v;
};

namespace {

thread_local std::string g_last_error;

// usage errors raised at the boundary itself
struct UsageError : hamvf::Error {
  using hamvf::Error::Error;
};

hamvf_status fail(hamvf_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
hamvf_status guarded(F&& f) noexcept {
  try {
    f();
    return HAMVF_OK;
  } catch (const UsageError& e) {
    return fail(HAMVF_E_USAGE, e.what());
  } catch (const hamvf::ValidationError& e) {
    return fail(HAMVF_E_VALIDATION, e.what());
  } catch (const hamvf::VerificationError& e) {
    return fail(HAMVF_E_VERIFICATION, e.what());
  } catch (const hamvf::IoError& e) {
    return fail(HAMVF_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(HAMVF_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HAMVF_E_INTERNAL, e.what());
  } catch (...) {
    return fail(HAMVF_E_INTERNAL, "unknown error");
  }
}

template <class T>
void require(const T* p, const char* name) {
  if (!p) throw UsageError(std::string(name) + " is NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hamvf::RenderConfig to_cfg(const hamvf_render_config* c) {
  hamvf::RenderConfig cfg;
  if (c) {
    cfg.resolution = c->resolution;
    cfg.stream_seeds = c->stream_seeds;
    cfg.rk4_step = c->rk4_step;
    cfg.max_steps = c->max_steps;
  }
  return cfg;
}

std::vector<hamvf::Token> token_set(const hamvf::Expr& e) {
  return hamvf::HamFunction::from_expr(e).terms();
}

}  // namespace

extern "C" {

const char* hamvf_version(void) { return hamvf::kToolVersion; }

const char* hamvf_last_error(void) { return g_last_error.c_str(); }

void hamvf_string_free(char* s) { std::free(s); }

// ---- expressions

hamvf_status hamvf_expr_parse(const char* text, const char* const* names, const char* const* values, size_t n,
                              hamvf_expr** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    hamvf::Constants constants;
    for (size_t i = 0; i < n; ++i) {
      require(names, "names");
      require(values, "values");
      require(names[i], "constant name");
      require(values[i], "constant value");
      constants[names[i]] = hamvf::Rational::parse(values[i]);
    }
    *out = new hamvf_expr{hamvf::parse_expr(text, constants)};
  });
}

hamvf_status hamvf_demo_expr(const char* name, hamvf_expr** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto* demo = hamvf::find_demo(name);
    if (!demo) throw UsageError(std::string("unknown demo system '") + name + "'");
    *out = new hamvf_expr{demo->expr()};
  });
}

hamvf_status hamvf_demo_list(char** out) {
  return guarded([&] {
    require(out, "out");
    std::string s;
    for (const auto& d : hamvf::demo_systems()) s += d.name + "\t" + d.hamiltonian + "\n";
    *out = dup(s);
  });
}

hamvf_status hamvf_expr_to_string(const hamvf_expr* e, char** out) {
  return guarded([&] {
    require(e, "expr");
    require(out, "out");
    *out = dup(e->e.to_string());
  });
}

hamvf_status hamvf_expr_diff(const hamvf_expr* e, char var, hamvf_expr** out) {
  return guarded([&] {
    require(e, "expr");
    require(out, "out");
    if (var != 'x' && var != 'y') throw UsageError("variable must be 'x' or 'y'");
    *out = new hamvf_expr{hamvf::differentiate(e->e, var == 'x' ? hamvf::Var::x : hamvf::Var::y)};
  });
}

hamvf_status hamvf_expr_eval(const hamvf_expr* e, double x, double y, double* out) {
  return guarded([&] {
    require(e, "expr");
    require(out, "out");
    *out = hamvf::evaluate(e->e, x, y);
  });
}

int hamvf_expr_equal(const hamvf_expr* a, const hamvf_expr* b) { return a && b && a->e == b->e; }

void hamvf_expr_free(hamvf_expr* e) { delete e; }

// ---- fields

hamvf_status hamvf_field_create(const hamvf_expr* hamiltonian, hamvf_field** out) {
  return guarded([&] {
    require(hamiltonian, "hamiltonian");
    require(out, "out");
    *out = new hamvf_field{hamvf::hamiltonian_field(hamiltonian->e)};
  });
}

hamvf_status hamvf_field_component(const hamvf_field* f, int component, hamvf_expr** out) {
  return guarded([&] {
    require(f, "field");
    require(out, "out");
    if (component != 0 && component != 1) throw UsageError("component must be 0 or 1");
    *out = new hamvf_expr{component == 0 ? f->f.dx : f->f.dy};
  });
}

hamvf_status hamvf_field_eval(const hamvf_field* f, double x, double y, double* vx, double* vy) {
  return guarded([&] {
    require(f, "field");
    require(vx, "vx");
    require(vy, "vy");
    *vx = hamvf::evaluate(f->f.dx, x, y);
    *vy = hamvf::evaluate(f->f.dy, x, y);
  });
}

void hamvf_field_free(hamvf_field* f) { delete f; }

// ---- bases

hamvf_status hamvf_basis_create(const char* basis, const char* delta, int trig, hamvf_basis** out) {
  return guarded([&] {
    require(basis, "basis");
    require(delta, "delta");
    require(out, "out");
    *out = new hamvf_basis{hamvf::Corpus(hamvf::BasisSpec::from_names(basis, delta, trig != 0))};
  });
}

hamvf_status hamvf_basis_create_custom(unsigned max_degree, const char* const* coeffs, size_t n, int trig,
                                       hamvf_basis** out) {
  return guarded([&] {
    require(coeffs, "coeffs");
    require(out, "out");
    std::vector<hamvf::Rational> delta;
    for (size_t i = 0; i < n; ++i) {
      require(coeffs[i], "coefficient");
      delta.push_back(hamvf::Rational::parse(coeffs[i]));
    }
    *out = new hamvf_basis{hamvf::Corpus(hamvf::BasisSpec::make(max_degree, std::move(delta), trig != 0))};
  });
}

hamvf_status hamvf_basis_name(const hamvf_basis* b, char** out) {
  return guarded([&] {
    require(b, "basis");
    require(out, "out");
    *out = dup(b->corpus.spec().name());
  });
}

size_t hamvf_basis_shape_count(const hamvf_basis* b) { return b ? b->corpus.spec().shape_count() : 0; }

hamvf_status hamvf_basis_cardinality(const hamvf_basis* b, char** out) {
  return guarded([&] {
    require(b, "basis");
    require(out, "out");
    *out = dup(hamvf::to_string(b->corpus.size()));
  });
}

hamvf_status hamvf_basis_function_at(const hamvf_basis* b, const char* index, hamvf_expr** out) {
  return guarded([&] {
    require(b, "basis");
    require(index, "index");
    require(out, "out");
    *out = new hamvf_expr{b->corpus.function_at(hamvf::parse_bigint(index)).to_expr()};
  });
}

hamvf_status hamvf_basis_index_of(const hamvf_basis* b, const hamvf_expr* e, char** out) {
  return guarded([&] {
    require(b, "basis");
    require(e, "expr");
    require(out, "out");
    *out = dup(hamvf::to_string(b->corpus.index_of(hamvf::HamFunction::from_expr(e->e))));
  });
}

void hamvf_basis_free(hamvf_basis* b) { delete b; }

hamvf_status hamvf_enum_create(const hamvf_basis* b, const char* lo, const char* hi, hamvf_enum** out) {
  return guarded([&] {
    require(b, "basis");
    require(out, "out");
    auto corpus = std::make_unique<hamvf::Corpus>(b->corpus);
    hamvf::BigInt from = lo ? hamvf::parse_bigint(lo) : hamvf::BigInt(0);
    hamvf::BigInt to = hi ? hamvf::parse_bigint(hi) : corpus->size();
    hamvf::CorpusEnumerator it(*corpus, from, to);
    *out = new hamvf_enum{std::move(corpus), std::move(it)};
  });
}

hamvf_status hamvf_enum_next(hamvf_enum* it, hamvf_expr** out) {
  return guarded([&] {
    require(it, "enumerator");
    require(out, "out");
    auto f = it->it.next();
    *out = f ? new hamvf_expr{f->to_expr()} : nullptr;
  });
}

void hamvf_enum_free(hamvf_enum* it) { delete it; }

// ---- clouds

hamvf_status hamvf_cloud_create(uint64_t master_seed, unsigned cloud_id, size_t points, hamvf_cloud** out) {
  return guarded([&] {
    require(out, "out");
    *out = new hamvf_cloud{cloud_id == 0 ? hamvf::canonical_cloud(points)
                                         : hamvf::random_cloud(master_seed, cloud_id, points)};
  });
}

size_t hamvf_cloud_size(const hamvf_cloud* c) { return c ? c->cloud.points.size() : 0; }

hamvf_status hamvf_cloud_points(const hamvf_cloud* c, double* xy) {
  return guarded([&] {
    require(c, "cloud");
    require(xy, "xy");
    for (const auto& p : c->cloud.points) {
      *xy++ = p.x;
      *xy++ = p.y;
    }
  });
}

void hamvf_cloud_free(hamvf_cloud* c) { delete c; }

// ---- rendering

void hamvf_render_config_default(hamvf_render_config* cfg) {
  if (!cfg) return;
  hamvf::RenderConfig d;
  *cfg = {d.resolution, d.stream_seeds, d.rk4_step, d.max_steps};
}

hamvf_status hamvf_render(const hamvf_field* f, const hamvf_cloud* c, const hamvf_render_config* cfg,
                          hamvf_raster** out) {
  return guarded([&] {
    require(f, "field");
    require(c, "cloud");
    require(out, "out");
    *out = new hamvf_raster{hamvf::render(hamvf::eval_field(f->f, c->cloud), f->f, to_cfg(cfg))};
  });
}

void hamvf_raster_shape(const hamvf_raster* r, unsigned* height, unsigned* width, unsigned* channels) {
  if (height) *height = r ? r->r.height() : 0;
  if (width) *width = r ? r->r.width() : 0;
  if (channels) *channels = r ? r->r.channels() : 0;
}

const float* hamvf_raster_data(const hamvf_raster* r) { return r ? r->r.data().data() : nullptr; }

hamvf_status hamvf_raster_write_tensor(const hamvf_raster* r, const char* path) {
  return guarded([&] {
    require(r, "raster");
    require(path, "path");
    hamvf::export_tensor(r->r, path);
  });
}

hamvf_status hamvf_raster_read_tensor(const char* path, hamvf_raster** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new hamvf_raster{hamvf::import_tensor(path)};
  });
}

hamvf_status hamvf_raster_write_png(const hamvf_raster* r, const char* prefix) {
  return guarded([&] {
    require(r, "raster");
    require(prefix, "prefix");
    hamvf::export_png(r->r, prefix);
  });
}

void hamvf_raster_free(hamvf_raster* r) { delete r; }

// ---- tokens

hamvf_status hamvf_vocab_create(const hamvf_basis* b, hamvf_vocab** out) {
  return guarded([&] {
    require(b, "basis");
    require(out, "out");
    *out = new hamvf_vocab{hamvf::TokenVocab(b->corpus.spec())};
  });
}

size_t hamvf_vocab_size(const hamvf_vocab* v) { return v ? v->v.size() : 0; }

hamvf_status hamvf_vocab_to_json(const hamvf_vocab* v, char** out) {
  return guarded([&] {
    require(v, "vocab");
    require(out, "out");
    *out = dup(v->v.to_json());
  });
}

hamvf_status hamvf_vocab_tokenize(const hamvf_vocab* v, const hamvf_expr* e, size_t* indices, size_t capacity,
                                  size_t* count) {
  return guarded([&] {
    require(v, "vocab");
    require(e, "expr");
    require(count, "count");
    auto idx = v->v.vectorize(hamvf::HamFunction::from_expr(e->e)).indices();
    if (capacity > 0) require(indices, "indices");
    for (size_t i = 0; i < idx.size() && i < capacity; ++i) indices[i] = idx[i];
    *count = idx.size();
  });
}

hamvf_status hamvf_vocab_detokenize(const hamvf_vocab* v, const size_t* indices, size_t n, hamvf_expr** out) {
  return guarded([&] {
    require(v, "vocab");
    require(out, "out");
    if (n > 0) require(indices, "indices");
    std::vector<std::size_t> idx(indices, indices + n);
    *out = new hamvf_expr{v->v.from_indices(idx).to_expr()};
  });
}

void hamvf_vocab_free(hamvf_vocab* v) { delete v; }

hamvf_status hamvf_distance(const hamvf_expr* a, const hamvf_expr* b, hamvf_metric metric, double* out) {
  return guarded([&] {
    require(a, "a");
    require(b, "b");
    require(out, "out");
    switch (metric) {
      case HAMVF_METRIC_EUCLID:
        *out = hamvf::distance_euclid(token_set(a->e), token_set(b->e));
        break;
      case HAMVF_METRIC_JACCARD:
        *out = hamvf::distance_jaccard(token_set(a->e), token_set(b->e));
        break;
      case HAMVF_METRIC_LEVENSHTEIN:
        *out = static_cast<double>(hamvf::distance_levenshtein(hamvf::written_tokens(a->e), hamvf::written_tokens(b->e)));
        break;
      default:
        throw UsageError("unknown metric");
    }
  });
}

// ---- datasets

void hamvf_generate_options_default(hamvf_generate_options* opt) {
  if (!opt) return;
  hamvf::GenerateOptions d;
  opt->has_limit = 0;
  opt->limit = 0;
  opt->shard_index = d.shard_index;
  opt->shard_count = d.shard_count;
  hamvf_render_config_default(&opt->render);
  opt->split_fraction = nullptr;
  opt->workers = d.workers;
  opt->write_png = d.write_png;
  opt->cap = d.cap;
  opt->points = d.points;
}

hamvf_status hamvf_generate(const hamvf_basis* b, uint64_t master_seed, const char* out_dir,
                            const hamvf_generate_options* opt, char** manifest_json) {
  return guarded([&] {
    require(b, "basis");
    require(out_dir, "out_dir");
    hamvf::GenerateOptions o;
    if (opt) {
      if (opt->has_limit) o.limit = opt->limit;
      o.shard_index = opt->shard_index;
      o.shard_count = opt->shard_count;
      o.render = to_cfg(&opt->render);
      if (opt->split_fraction) o.split_fraction = hamvf::Rational::parse(opt->split_fraction);
      o.workers = opt->workers == 0 ? 1 : opt->workers;
      o.write_png = opt->write_png != 0;
      o.cap = opt->cap;
      o.points = opt->points;
    }
    auto m = hamvf::generate(b->corpus.spec(), master_seed, out_dir, o);
    if (manifest_json) *manifest_json = dup(m.to_json().dump(2));
  });
}

hamvf_status hamvf_verify(const char* dir, double fraction, unsigned workers, char** report_json) {
  bool ok = true;
  hamvf_status s = guarded([&] {
    require(dir, "dir");
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw UsageError("verification fraction must be in [0, 1]");
    auto report = hamvf::verify(dir, fraction, workers == 0 ? 1 : workers);
    ok = report.ok();
    if (report_json) *report_json = dup(report.to_json().dump(2));
  });
  if (s == HAMVF_OK && !ok) return fail(HAMVF_E_VERIFICATION, "dataset verification failed");
  return s;
}

hamvf_status hamvf_score(const char* dataset_dir, const char* predictions, char** report_json) {
  return guarded([&] {
    require(dataset_dir, "dataset_dir");
    require(predictions, "predictions");
    require(report_json, "report_json");
    *report_json = dup(hamvf::score_predictions(dataset_dir, predictions).to_json().dump(2));
  });
}

}  // extern "C"
