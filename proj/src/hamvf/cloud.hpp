#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hamvf {

inline constexpr double kDomainMin = -10.0;
inline constexpr double kDomainMax = 10.0;
inline constexpr std::size_t kDefaultCloudPoints = 441;
inline constexpr unsigned kCloudCount = 50;

// splitmix64: state advances by the golden-ratio increment, output is the
// mixed state. Integer-exact, identical on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

// First output of a generator seeded with `value`.
inline std::uint64_t splitmix64(std::uint64_t value) noexcept { return SplitMix64(value).next(); }

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

enum class CloudKind : std::uint8_t { canonical, random };

struct PointCloud {
  unsigned id = 0;
  CloudKind kind = CloudKind::canonical;
  std::uint64_t seed = 0;  // master seed; 0 for the lattice
  std::vector<Point> points;
};

// side x side lattice over [-10, 10]^2, rows by ascending y, x ascending
// within a row. The default side 21 gives the integer lattice.
PointCloud canonical_cloud(std::size_t points = kDefaultCloudPoints);

// Uniform points in [-10, 10)^2 drawn from SplitMix64(master_seed ^ cloud_id):
// x then y for each point. Throws ValidationError for cloud_id == 0.
PointCloud random_cloud(std::uint64_t master_seed, unsigned cloud_id, std::size_t points = kDefaultCloudPoints);

// Cloud 0 is the lattice, clouds 1..count-1 are random.
std::vector<PointCloud> cloud_suite(std::uint64_t master_seed, std::size_t points = kDefaultCloudPoints,
                                    unsigned count = kCloudCount);

// Grid pitch of a cloud with `points` points, 20 / (sqrt(points) - 1).
double cloud_pitch(std::size_t points);

}  // namespace hamvf
