#include "hamvf/hamfield.hpp"

#include <cmath>

namespace hamvf {

FieldExpr hamiltonian_field(const Expr& hamiltonian) {
  return {Expr::neg(differentiate(hamiltonian, Var::y)), differentiate(hamiltonian, Var::x)};
}

FieldSample eval_field(const FieldExpr& field, const PointCloud& cloud) {
  CompiledExpr dx(field.dx);
  CompiledExpr dy(field.dy);
  FieldSample sample;
  sample.points = cloud.points;
  sample.vectors.reserve(cloud.points.size());
  sample.nan.reserve(cloud.points.size());
  for (const Point& p : cloud.points) {
    Point v{dx(p.x, p.y), dy(p.x, p.y)};
    bool bad = std::isnan(v.x) || std::isnan(v.y);
    sample.vectors.push_back(v);
    sample.nan.push_back(bad);
    sample.nan_count += bad ? 1 : 0;
  }
  return sample;
}

const std::vector<DemoSystem>& demo_systems() {
  static const std::vector<DemoSystem> systems = {
      {"harmonic", "1/2*(y^2 + alpha^2*x^2)", {{"alpha", Rational(1)}}},
      {"pendulum", "1/2*x^2 + cos(y)", {}},
      {"sis", "x*y*(rho0 - x) + 1/y", {{"rho0", Rational(1)}}},
      {"lotka-volterra",
       "x*ln(x) + y*ln(y) - a*x - b*y - c*x*y",
       {{"a", Rational(11, 10)}, {"b", Rational(11, 10)}, {"c", Rational(1, 10)}}},
  };
  return systems;
}

const DemoSystem* find_demo(std::string_view name) {
  for (const auto& s : demo_systems())
    if (s.name == name) return &s;
  return nullptr;
}

}  // namespace hamvf
