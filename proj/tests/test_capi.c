/* Exercises the C interface from C. */
#include <hamvf/hamvf.h>

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                                  \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: CHECK(%s) failed\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                    \
    }                                                                \
  } while (0)

static int str_eq(char* s, const char* want) {
  int eq = s && strcmp(s, want) == 0;
  if (!eq) fprintf(stderr, "  got '%s', want '%s'\n", s ? s : "(null)", want);
  hamvf_string_free(s);
  return eq;
}

static void expressions(void) {
  hamvf_expr* h = NULL;
  hamvf_expr* d = NULL;
  char* s = NULL;
  double v = 0;
  const char* names[] = {"rho0"};
  const char* values[] = {"3/2"};

  CHECK(hamvf_expr_parse("rho0*x^2", names, values, 1, &h) == HAMVF_OK);
  CHECK(hamvf_expr_to_string(h, &s) == HAMVF_OK && str_eq(s, "3/2*x^2"));
  CHECK(hamvf_expr_diff(h, 'x', &d) == HAMVF_OK);
  CHECK(hamvf_expr_eval(d, 2.0, 0.0, &v) == HAMVF_OK && v == 6.0);
  CHECK(hamvf_expr_diff(h, 'z', &d) == HAMVF_E_USAGE);
  hamvf_expr_free(d);
  hamvf_expr_free(h);

  h = NULL;
  CHECK(hamvf_expr_parse("x + ", NULL, NULL, 0, &h) == HAMVF_E_VALIDATION);
  CHECK(h == NULL);
  CHECK(strstr(hamvf_last_error(), "position 4") != NULL);
  CHECK(hamvf_expr_parse(NULL, NULL, NULL, 0, &h) == HAMVF_E_USAGE);
  CHECK(hamvf_demo_expr("nope", &h) == HAMVF_E_USAGE);
  CHECK(hamvf_demo_list(&s) == HAMVF_OK && strstr(s, "pendulum") != NULL);
  hamvf_string_free(s);
}

static void fields(void) {
  hamvf_expr* h = NULL;
  hamvf_field* f = NULL;
  hamvf_expr* dx = NULL;
  char* s = NULL;
  double vx = 0, vy = 0;
  CHECK(hamvf_demo_expr("pendulum", &h) == HAMVF_OK);
  CHECK(hamvf_field_create(h, &f) == HAMVF_OK);
  CHECK(hamvf_field_component(f, 0, &dx) == HAMVF_OK);
  CHECK(hamvf_expr_to_string(dx, &s) == HAMVF_OK && str_eq(s, "sin(y)"));
  CHECK(hamvf_field_eval(f, 3.0, 0.0, &vx, &vy) == HAMVF_OK && vx == 0.0 && vy == 3.0);
  CHECK(hamvf_field_component(f, 2, &dx) == HAMVF_E_USAGE);
  hamvf_expr_free(dx);
  hamvf_field_free(f);
  hamvf_expr_free(h);
}

static void corpora(void) {
  hamvf_basis* b = NULL;
  hamvf_enum* it = NULL;
  hamvf_expr* e = NULL;
  char* s = NULL;
  int n = 0;
  CHECK(hamvf_basis_create("b2", "d5", 0, &b) == HAMVF_OK);
  CHECK(hamvf_basis_cardinality(b, &s) == HAMVF_OK && str_eq(s, "3124"));
  CHECK(hamvf_basis_shape_count(b) == 5);
  CHECK(hamvf_basis_name(b, &s) == HAMVF_OK && str_eq(s, "b2-d5"));
  CHECK(hamvf_basis_function_at(b, "3124", &e) == HAMVF_E_VALIDATION);
  CHECK(hamvf_basis_function_at(b, "3123", &e) == HAMVF_OK);
  CHECK(hamvf_expr_to_string(e, &s) == HAMVF_OK && str_eq(s, "x + y + x^2 + x*y + y^2"));
  CHECK(hamvf_basis_index_of(b, e, &s) == HAMVF_OK && str_eq(s, "3123"));
  hamvf_expr_free(e);

  CHECK(hamvf_enum_create(b, "10", "20", &it) == HAMVF_OK);
  for (;;) {
    CHECK(hamvf_enum_next(it, &e) == HAMVF_OK);
    if (!e) break;
    hamvf_expr_free(e);
    ++n;
  }
  CHECK(n == 10);
  hamvf_enum_free(it);
  hamvf_basis_free(b);

  CHECK(hamvf_basis_create("b2", "d4", 0, &b) == HAMVF_E_VALIDATION);
  {
    const char* coeffs[] = {"-2", "0", "1/3"};
    CHECK(hamvf_basis_create_custom(1, coeffs, 3, 0, &b) == HAMVF_OK);
    CHECK(hamvf_basis_cardinality(b, &s) == HAMVF_OK && str_eq(s, "8"));
    hamvf_basis_free(b);
  }
}

static void rendering(const char* tmp) {
  hamvf_expr* h = NULL;
  hamvf_field* f = NULL;
  hamvf_cloud* c = NULL;
  hamvf_raster* r = NULL;
  hamvf_raster* back = NULL;
  hamvf_render_config cfg;
  unsigned height = 0, width = 0, channels = 0;
  double xy[2 * 441];
  char path[4096];

  hamvf_render_config_default(&cfg);
  CHECK(cfg.resolution == 128 && cfg.stream_seeds == 7 && cfg.max_steps == 300);
  cfg.resolution = 48;
  CHECK(hamvf_expr_parse("x*y", NULL, NULL, 0, &h) == HAMVF_OK);
  CHECK(hamvf_field_create(h, &f) == HAMVF_OK);
  CHECK(hamvf_cloud_create(42, 3, 441, &c) == HAMVF_OK);
  CHECK(hamvf_cloud_size(c) == 441);
  CHECK(hamvf_cloud_points(c, xy) == HAMVF_OK && xy[0] >= -10 && xy[0] < 10);
  CHECK(hamvf_render(f, c, &cfg, &r) == HAMVF_OK);
  hamvf_raster_shape(r, &height, &width, &channels);
  CHECK(height == 48 && width == 48 && channels == 3);
  CHECK(hamvf_raster_data(r) != NULL);

  snprintf(path, sizeof path, "%s/capi.symf", tmp);
  CHECK(hamvf_raster_write_tensor(r, path) == HAMVF_OK);
  CHECK(hamvf_raster_read_tensor(path, &back) == HAMVF_OK);
  CHECK(memcmp(hamvf_raster_data(r), hamvf_raster_data(back), sizeof(float) * 48 * 48 * 3) == 0);
  snprintf(path, sizeof path, "%s/capi", tmp);
  CHECK(hamvf_raster_write_png(r, path) == HAMVF_OK);
  CHECK(hamvf_raster_read_tensor("/nonexistent/x.symf", &back) == HAMVF_E_IO);

  cfg.resolution = 8;
  CHECK(hamvf_render(f, c, &cfg, &r) == HAMVF_E_VALIDATION);
  CHECK(hamvf_cloud_create(42, 3, 10, &c) == HAMVF_E_VALIDATION);

  hamvf_raster_free(back);
  hamvf_raster_free(r);
  hamvf_cloud_free(c);
  hamvf_field_free(f);
  hamvf_expr_free(h);
}

static void tokens(void) {
  hamvf_basis* b = NULL;
  hamvf_vocab* v = NULL;
  hamvf_expr* a = NULL;
  hamvf_expr* e = NULL;
  size_t idx[8];
  size_t count = 0;
  double d = 0;
  char* s = NULL;

  CHECK(hamvf_basis_create("b2", "d5", 0, &b) == HAMVF_OK);
  CHECK(hamvf_vocab_create(b, &v) == HAMVF_OK);
  CHECK(hamvf_vocab_size(v) == 20);
  CHECK(hamvf_vocab_to_json(v, &s) == HAMVF_OK && strncmp(s, "[{\"coeff\":\"-1/1\",\"shape\":\"x\"}", 29) == 0);
  hamvf_string_free(s);
  CHECK(hamvf_expr_parse("1/2*y^2 + x^2", NULL, NULL, 0, &a) == HAMVF_OK);
  CHECK(hamvf_vocab_tokenize(v, a, NULL, 0, &count) == HAMVF_OK && count == 2);
  CHECK(hamvf_vocab_tokenize(v, a, idx, 8, &count) == HAMVF_OK && idx[0] == 11 && idx[1] == 18);
  CHECK(hamvf_vocab_detokenize(v, idx, count, &e) == HAMVF_OK);
  CHECK(hamvf_expr_to_string(e, &s) == HAMVF_OK && str_eq(s, "x^2 + 1/2*y^2"));
  hamvf_expr_free(e);
  hamvf_expr_free(a);

  CHECK(hamvf_expr_parse("1/2*x^2+cos(y)", NULL, NULL, 0, &a) == HAMVF_OK);
  CHECK(hamvf_expr_parse("x^2+cos(y)", NULL, NULL, 0, &e) == HAMVF_OK);
  CHECK(hamvf_distance(a, e, HAMVF_METRIC_EUCLID, &d) == HAMVF_OK && d == sqrt(2.0));
  CHECK(hamvf_distance(a, e, HAMVF_METRIC_JACCARD, &d) == HAMVF_OK && fabs(d - 2.0 / 3.0) < 1e-15);
  CHECK(hamvf_distance(a, e, HAMVF_METRIC_LEVENSHTEIN, &d) == HAMVF_OK && d == 1.0);
  CHECK(hamvf_distance(a, e, (hamvf_metric)9, &d) == HAMVF_E_USAGE);
  hamvf_expr_free(e);
  CHECK(hamvf_expr_parse("ln(x)", NULL, NULL, 0, &e) == HAMVF_OK);
  CHECK(hamvf_distance(a, e, HAMVF_METRIC_EUCLID, &d) == HAMVF_E_VALIDATION);
  hamvf_expr_free(e);
  hamvf_expr_free(a);
  hamvf_vocab_free(v);
  hamvf_basis_free(b);
}

static void datasets(const char* tmp) {
  hamvf_basis* b = NULL;
  hamvf_generate_options opt;
  char dir[4096], path[4096 + 64];
  char* s = NULL;
  FILE* f = NULL;

  snprintf(dir, sizeof dir, "%s/ds", tmp);
  hamvf_generate_options_default(&opt);
  CHECK(opt.shard_count == 1 && opt.workers == 1 && opt.write_png == 1 && opt.points == 441);
  opt.render.resolution = 32;
  opt.write_png = 0;
  CHECK(hamvf_basis_create("b1", "d3", 0, &b) == HAMVF_OK);
  CHECK(hamvf_generate(b, 42, dir, &opt, &s) == HAMVF_OK && strstr(s, "\"records\": 400") != NULL);
  hamvf_string_free(s);
  CHECK(hamvf_verify(dir, 0.1, 1, &s) == HAMVF_OK && strstr(s, "\"ok\": true") != NULL);
  hamvf_string_free(s);

  snprintf(path, sizeof path, "%s/pred.jsonl", tmp);
  f = fopen(path, "w");
  fputs("{\"sample_id\": 0, \"predicted\": \"-x\"}\n{\"sample_id\": 1, \"predicted\": \"y\"}\n", f);
  fclose(f);
  CHECK(hamvf_score(dir, path, &s) == HAMVF_OK && strstr(s, "\"exact_match_rate\": 0.5") != NULL);
  hamvf_string_free(s);

  /* a trailing blank line is tolerated, a flipped tensor byte is not; the
     report is still produced */
  snprintf(path, sizeof path, "%s/records.jsonl", dir);
  f = fopen(path, "a");
  fputs("\n", f);
  fclose(f);
  snprintf(path, sizeof path, "%s/tensors/000000000005.symf", dir);
  f = fopen(path, "r+b");
  fseek(f, 100, SEEK_SET);
  fputc(0x7f, f);
  fclose(f);
  s = NULL;
  CHECK(hamvf_verify(dir, 1.0, 1, &s) == HAMVF_E_VERIFICATION);
  CHECK(s != NULL && strstr(s, "\"sample_id\": 5") != NULL);
  hamvf_string_free(s);

  opt.shard_count = 0;
  CHECK(hamvf_generate(b, 42, dir, &opt, NULL) == HAMVF_E_VALIDATION);
  CHECK(hamvf_verify("/nonexistent", 1.0, 1, &s) == HAMVF_E_IO);
  hamvf_basis_free(b);
}

int main(int argc, char** argv) {
  if (argc < 2) {
    fprintf(stderr, "usage: %s <scratch-dir>\n", argv[0]);
    return 2;
  }
  CHECK(strcmp(hamvf_version(), "0.1.0") == 0);
  CHECK(strcmp(hamvf_last_error(), "") == 0);
  expressions();
  fields();
  corpora();
  rendering(argv[1]);
  tokens();
  datasets(argv[1]);
  hamvf_expr_free(NULL);
  hamvf_string_free(NULL);
  if (failures) fprintf(stderr, "%d check(s) failed\n", failures);
  else printf("C API: all checks passed\n");
  return failures ? 1 : 0;
}
