#pragma once

#include <string>
#include <vector>

#include "hamvf/cloud.hpp"
#include "hamvf/expr.hpp"

namespace hamvf {

// Hamiltonian vector field dx * d/dx + dy * d/dy.
struct FieldExpr {
  Expr dx;
  Expr dy;
};

// X_H = (-dH/dy, dH/dx) for the symplectic form dx ^ dy.
FieldExpr hamiltonian_field(const Expr& hamiltonian);

struct FieldSample {
  std::vector<Point> points;
  std::vector<Point> vectors;  // NaN components kept as-is
  std::vector<bool> nan;       // true where either component is NaN
  std::size_t nan_count = 0;
};

FieldSample eval_field(const FieldExpr& field, const PointCloud& cloud);

// Named example systems with their constants.
struct DemoSystem {
  std::string name;
  std::string hamiltonian;  // grammar text with named constants
  Constants constants;

  Expr expr() const { return parse_expr(hamiltonian, constants); }
};

// harmonic, pendulum, sis (with a 1/y term), lotka-volterra (with logs).
const std::vector<DemoSystem>& demo_systems();
const DemoSystem* find_demo(std::string_view name);

}  // namespace hamvf
