#include "hamvf/cloud.hpp"

#include <cmath>

#include "hamvf/error.hpp"

namespace hamvf {
namespace {

std::size_t lattice_side(std::size_t points) {
  auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(points))));
  if (side < 2 || side * side != points)
    throw ValidationError("point count " + std::to_string(points) + " is not a square of at least 4");
  return side;
}

}  // namespace

double cloud_pitch(std::size_t points) {
  return (kDomainMax - kDomainMin) / static_cast<double>(lattice_side(points) - 1);
}

PointCloud canonical_cloud(std::size_t points) {
  std::size_t side = lattice_side(points);
  PointCloud cloud;
  cloud.kind = CloudKind::canonical;
  cloud.points.reserve(points);
  double pitch = (kDomainMax - kDomainMin) / static_cast<double>(side - 1);
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      // integer multiples keep the default lattice exact
      cloud.points.push_back({kDomainMin + pitch * static_cast<double>(col), kDomainMin + pitch * static_cast<double>(row)});
    }
  }
  return cloud;
}

PointCloud random_cloud(std::uint64_t master_seed, unsigned cloud_id, std::size_t points) {
  if (cloud_id == 0) throw ValidationError("cloud 0 is the canonical lattice");
  lattice_side(points);
  PointCloud cloud;
  cloud.id = cloud_id;
  cloud.kind = CloudKind::random;
  cloud.seed = master_seed;
  cloud.points.reserve(points);
  SplitMix64 rng(master_seed ^ cloud_id);
  constexpr double span = kDomainMax - kDomainMin;
  for (std::size_t i = 0; i < points; ++i) {
    double x = kDomainMin + span * rng.next_unit();
    double y = kDomainMin + span * rng.next_unit();
    cloud.points.push_back({x, y});
  }
  return cloud;
}

std::vector<PointCloud> cloud_suite(std::uint64_t master_seed, std::size_t points, unsigned count) {
  std::vector<PointCloud> suite;
  suite.reserve(count);
  suite.push_back(canonical_cloud(points));
  for (unsigned id = 1; id < count; ++id) suite.push_back(random_cloud(master_seed, id, points));
  return suite;
}

}  // namespace hamvf
