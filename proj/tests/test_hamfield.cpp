#include <doctest.h>

#include <cmath>

#include "hamvf/corpus.hpp"
#include "hamvf/hamfield.hpp"
#include "support.hpp"

using hamvf::parse_expr;

namespace {

// Max |a - b| over 100 random points of the box; NaN pairs count as equal.
double max_deviation(const hamvf::Expr& a, const hamvf::Expr& b, double lo, double hi, std::uint64_t seed) {
  hamvf::SplitMix64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double x = testing::uniform(rng, lo, hi), y = testing::uniform(rng, lo, hi);
    double u = hamvf::evaluate(a, x, y), v = hamvf::evaluate(b, x, y);
    if (std::isnan(u) && std::isnan(v)) continue;
    worst = std::max(worst, std::abs(u - v));
    if (std::isnan(u) || std::isnan(v)) return INFINITY;
  }
  return worst;
}

}  // namespace

TEST_CASE("reference fields") {
  struct Golden {
    const char* demo;
    const char* dx;
    const char* dy;
    double lo, hi;
  };
  const Golden cases[] = {
      {"harmonic", "-y", "x", -10, 10},
      {"pendulum", "sin(y)", "x", -10, 10},
      {"sis", "-1*x + x^2 + y^-2", "y*(1 - 2*x)", 0.1, 10},
      {"lotka-volterra", "1/10*x - ln(y) + 1/10", "ln(x) - 1/10*y - 1/10", 0.1, 10},
  };
  for (const auto& g : cases) {
    INFO(g.demo);
    const auto* demo = hamvf::find_demo(g.demo);
    REQUIRE(demo);
    auto field = hamvf::hamiltonian_field(demo->expr());
    CHECK(max_deviation(field.dx, parse_expr(g.dx), g.lo, g.hi, 1) <= 1e-12);
    CHECK(max_deviation(field.dy, parse_expr(g.dy), g.lo, g.hi, 2) <= 1e-12);
  }
  CHECK(hamvf::hamiltonian_field(parse_expr("1/2*(y^2 + x^2)")).dx == parse_expr("-y"));
  CHECK(hamvf::hamiltonian_field(parse_expr("1/2*x^2 + cos(y)")).dx == parse_expr("sin(y)"));
  CHECK(hamvf::hamiltonian_field(parse_expr("1/2*x^2 + cos(y)")).dy == parse_expr("x"));
}

TEST_CASE("eval_field on the lattice") {
  auto field = hamvf::hamiltonian_field(parse_expr("1/2*(x^2 + y^2)"));
  auto sample = hamvf::eval_field(field, hamvf::canonical_cloud());
  REQUIRE(sample.vectors.size() == 441);
  // (0, 0) is index 220; (1, 0) is index 221
  CHECK(sample.vectors[220] == hamvf::Point{0, 0});
  CHECK(sample.vectors[221] == hamvf::Point{0, 1});
  CHECK(sample.nan_count == 0);
}

TEST_CASE("NaN points are flagged and counted, never dropped") {
  auto field = hamvf::hamiltonian_field(hamvf::find_demo("lotka-volterra")->expr());
  auto sample = hamvf::eval_field(field, hamvf::canonical_cloud());
  CHECK(sample.points.size() == 441);
  // ln(x) and ln(y) need x > 0 and y > 0: 10 * 10 lattice points survive
  CHECK(sample.nan_count == 441 - 100);
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < 441; ++i) {
    const auto& p = sample.points[i];
    CHECK(sample.nan[i] == !(p.x > 0 && p.y > 0));
    flagged += sample.nan[i];
  }
  CHECK(flagged == sample.nan_count);
}

TEST_CASE("linearity and conservation on corpus functions") {
  hamvf::Corpus corpus(hamvf::BasisSpec::from_names("b3", "d9", true));
  hamvf::SplitMix64 rng(17);
  auto cloud = hamvf::canonical_cloud();
  for (int i = 0; i < 100; ++i) {
    auto f = corpus.function_at(testing::random_index(rng, corpus.size())).to_expr();
    auto g = corpus.function_at(testing::random_index(rng, corpus.size())).to_expr();
    auto xf = hamvf::hamiltonian_field(f), xg = hamvf::hamiltonian_field(g);
    auto xs = hamvf::hamiltonian_field(hamvf::Expr::add({f, g}));
    CHECK(max_deviation(xs.dx, hamvf::Expr::add({xf.dx, xg.dx}), -10, 10, 3) <= 1e-9);
    CHECK(max_deviation(xs.dy, hamvf::Expr::add({xf.dy, xg.dy}), -10, 10, 4) <= 1e-9);

    auto hx = hamvf::differentiate(f, hamvf::Var::x), hy = hamvf::differentiate(f, hamvf::Var::y);
    for (const auto& p : cloud.points) {
      double gx = hamvf::evaluate(hx, p.x, p.y), gy = hamvf::evaluate(hy, p.x, p.y);
      double vx = hamvf::evaluate(xf.dx, p.x, p.y), vy = hamvf::evaluate(xf.dy, p.x, p.y);
      double dot = gx * vx + gy * vy;
      CHECK(std::abs(dot) <= 1e-9 * (1 + std::hypot(gx, gy) * std::hypot(vx, vy)));
    }
  }
}
