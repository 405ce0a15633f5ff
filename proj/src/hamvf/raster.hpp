#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hamvf/hamfield.hpp"

namespace hamvf {

struct RenderConfig {
  unsigned resolution = 128;  // pixels per side, [32, 1024]
  unsigned stream_seeds = 7;  // seeds per side of the streamline grid
  double rk4_step = 0.2;      // arc length per RK4 step, world units
  unsigned max_steps = 300;   // per seed and time direction

  void validate() const;
};

enum Channel : unsigned { kQuiver = 0, kStreamline = 1, kHeatmap = 2 };

// Channel-major float image; values in [0, 1].
class Raster {
 public:
  Raster() = default;
  Raster(unsigned height, unsigned width, unsigned channels)
      : height_(height), width_(width), channels_(channels),
        data_(static_cast<std::size_t>(height) * width * channels, 0.0f) {}

  unsigned height() const noexcept { return height_; }
  unsigned width() const noexcept { return width_; }
  unsigned channels() const noexcept { return channels_; }

  std::span<float> channel(unsigned c) noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * height_ * width_, static_cast<std::size_t>(height_) * width_};
  }
  std::span<const float> channel(unsigned c) const noexcept {
    return {data_.data() + static_cast<std::size_t>(c) * height_ * width_, static_cast<std::size_t>(height_) * width_};
  }
  float at(unsigned c, unsigned row, unsigned col) const noexcept {
    return data_[(static_cast<std::size_t>(c) * height_ + row) * width_ + col];
  }
  const std::vector<float>& data() const noexcept { return data_; }
  std::span<float> mutable_data() noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  unsigned height_ = 0;
  unsigned width_ = 0;
  unsigned channels_ = 0;
  std::vector<float> data_;
};

// Quiver, streamline and heatmap channels of `field` sampled on a cloud.
// Pure: identical inputs give bit-identical output.
Raster render(const FieldSample& sample, const FieldExpr& field, const RenderConfig& cfg);

// The streamline and heatmap channels depend only on the field, so a dataset
// renders them once per function and adds the quiver per cloud.
Raster render_field_layers(const FieldExpr& field, const RenderConfig& cfg);
void render_quiver_layer(const FieldSample& sample, Raster& r);

// Pixel containing a world point; row 0 is y = +10. Points on the upper
// domain edge fall into the last pixel.
struct PixelPos {
  long col;
  long row;
};
PixelPos world_to_pixel(double x, double y, unsigned resolution) noexcept;
Point pixel_center(unsigned col, unsigned row, unsigned resolution) noexcept;

// SYMF tensor: "SYMF", u32 version = 1, u32 H, W, C, then C*H*W f32, all
// little-endian, channel-major.
std::vector<std::uint8_t> encode_tensor(const Raster& r);
Raster decode_tensor(std::span<const std::uint8_t> bytes);
void export_tensor(const Raster& r, const std::filesystem::path& path);
Raster import_tensor(const std::filesystem::path& path);

// Writes <prefix>_q.png, <prefix>_s.png, <prefix>_h.png as 8-bit grayscale
// with value round(255 * v).
void export_png(const Raster& r, const std::filesystem::path& prefix);
std::vector<std::filesystem::path> png_paths(const std::filesystem::path& prefix);

// 8-bit grayscale PNG reader, used by tests and verification.
std::vector<std::uint8_t> read_gray_png(const std::filesystem::path& path, unsigned& width, unsigned& height);

}  // namespace hamvf
