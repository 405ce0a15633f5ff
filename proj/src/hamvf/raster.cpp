#include "hamvf/raster.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include "hamvf/error.hpp"

namespace hamvf {

void RenderConfig::validate() const {
  if (resolution < 32 || resolution > 1024) throw ValidationError("resolution must be in [32, 1024]");
  if (stream_seeds < 1) throw ValidationError("stream_seeds must be positive");
  if (!(rk4_step > 0.0) || !std::isfinite(rk4_step)) throw ValidationError("rk4_step must be positive");
}

PixelPos world_to_pixel(double x, double y, unsigned resolution) noexcept {
  constexpr double span = kDomainMax - kDomainMin;
  auto col = static_cast<long>(std::floor((x - kDomainMin) / span * resolution));
  auto row = static_cast<long>(std::floor((kDomainMax - y) / span * resolution));
  const long last = static_cast<long>(resolution) - 1;
  if (x >= kDomainMin && x <= kDomainMax) col = std::clamp(col, 0L, last);
  if (y >= kDomainMin && y <= kDomainMax) row = std::clamp(row, 0L, last);
  return {col, row};
}

Point pixel_center(unsigned col, unsigned row, unsigned resolution) noexcept {
  constexpr double span = kDomainMax - kDomainMin;
  double pitch = span / resolution;
  return {kDomainMin + (col + 0.5) * pitch, kDomainMax - (row + 0.5) * pitch};
}

namespace {

constexpr double kMinSpeed = 1e-9;
constexpr double kArrowScale = 0.9;

// Bresenham line; pixels outside the image are skipped.
void draw_line(std::span<float> plane, unsigned res, PixelPos a, PixelPos b) {
  long dx = std::abs(b.col - a.col);
  long dy = -std::abs(b.row - a.row);
  long sx = a.col < b.col ? 1 : -1;
  long sy = a.row < b.row ? 1 : -1;
  long err = dx + dy;
  const long n = static_cast<long>(res);
  for (;;) {
    if (a.col >= 0 && a.col < n && a.row >= 0 && a.row < n)
      plane[static_cast<std::size_t>(a.row) * res + static_cast<std::size_t>(a.col)] = 1.0f;
    if (a.col == b.col && a.row == b.row) break;
    long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      a.col += sx;
    }
    if (e2 <= dx) {
      err += dx;
      a.row += sy;
    }
  }
}

bool inside_domain(const Point& p) {
  return p.x >= kDomainMin && p.x <= kDomainMax && p.y >= kDomainMin && p.y <= kDomainMax;
}

void render_quiver(const FieldSample& sample, std::span<float> plane, unsigned res) {
  double vmax = 0.0;
  for (std::size_t i = 0; i < sample.vectors.size(); ++i)
    if (!sample.nan[i]) vmax = std::max(vmax, std::hypot(sample.vectors[i].x, sample.vectors[i].y));
  if (!(vmax > 0.0) || !std::isfinite(vmax)) return;
  const double scale = kArrowScale * cloud_pitch(sample.points.size()) / vmax;
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    if (sample.nan[i]) continue;
    const Point& p = sample.points[i];
    const Point& v = sample.vectors[i];
    draw_line(plane, res, world_to_pixel(p.x, p.y, res), world_to_pixel(p.x + scale * v.x, p.y + scale * v.y, res));
  }
}

class UnitField {
 public:
  explicit UnitField(const FieldExpr& field) : dx_(field.dx), dy_(field.dy) {}

  // Direction of the field at p times `sign`; false when the speed is below
  // threshold or not a number.
  bool operator()(const Point& p, double sign, Point& out) const {
    double vx = dx_(p.x, p.y);
    double vy = dy_(p.x, p.y);
    double speed = std::hypot(vx, vy);
    if (!(speed >= kMinSpeed) || !std::isfinite(speed)) return false;
    out = {sign * vx / speed, sign * vy / speed};
    return true;
  }

 private:
  CompiledExpr dx_;
  CompiledExpr dy_;
};

void render_streamlines(const FieldExpr& field, const RenderConfig& cfg, std::span<float> plane) {
  const unsigned res = cfg.resolution;
  const UnitField f(field);
  const double h = cfg.rk4_step;
  const double spacing = (kDomainMax - kDomainMin) / cfg.stream_seeds;
  for (unsigned i = 0; i < cfg.stream_seeds; ++i) {
    for (unsigned j = 0; j < cfg.stream_seeds; ++j) {
      const Point seed{kDomainMin + (j + 0.5) * spacing, kDomainMin + (i + 0.5) * spacing};
      for (double sign : {1.0, -1.0}) {
        Point p = seed;
        for (unsigned step = 0; step < cfg.max_steps; ++step) {
          Point k1, k2, k3, k4;
          if (!f(p, sign, k1)) break;
          if (!f({p.x + 0.5 * h * k1.x, p.y + 0.5 * h * k1.y}, sign, k2)) break;
          if (!f({p.x + 0.5 * h * k2.x, p.y + 0.5 * h * k2.y}, sign, k3)) break;
          if (!f({p.x + h * k3.x, p.y + h * k3.y}, sign, k4)) break;
          Point next{p.x + h / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
                     p.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y)};
          draw_line(plane, res, world_to_pixel(p.x, p.y, res), world_to_pixel(next.x, next.y, res));
          if (!inside_domain(next)) break;
          p = next;
        }
      }
    }
  }
}

void render_heatmap(const FieldExpr& field, std::span<float> plane, unsigned res) {
  CompiledExpr dx(field.dx);
  CompiledExpr dy(field.dy);
  std::vector<double> magnitude(static_cast<std::size_t>(res) * res, 0.0);
  double max = 0.0;
  for (unsigned row = 0; row < res; ++row) {
    for (unsigned col = 0; col < res; ++col) {
      Point c = pixel_center(col, row, res);
      double m = std::hypot(dx(c.x, c.y), dy(c.x, c.y));
      if (!std::isfinite(m)) m = 0.0;
      magnitude[static_cast<std::size_t>(row) * res + col] = m;
      max = std::max(max, m);
    }
  }
  if (!(max > 0.0)) return;
  for (std::size_t i = 0; i < magnitude.size(); ++i)
    plane[i] = std::clamp(static_cast<float>(magnitude[i] / max), 0.0f, 1.0f);
}

}  // namespace

Raster render_field_layers(const FieldExpr& field, const RenderConfig& cfg) {
  cfg.validate();
  Raster r(cfg.resolution, cfg.resolution, 3);
  render_streamlines(field, cfg, r.channel(kStreamline));
  render_heatmap(field, r.channel(kHeatmap), cfg.resolution);
  return r;
}

void render_quiver_layer(const FieldSample& sample, Raster& r) {
  auto plane = r.channel(kQuiver);
  std::fill(plane.begin(), plane.end(), 0.0f);
  render_quiver(sample, plane, r.width());
}

Raster render(const FieldSample& sample, const FieldExpr& field, const RenderConfig& cfg) {
  Raster r = render_field_layers(field, cfg);
  render_quiver_layer(sample, r);
  return r;
}

// ---------------------------------------------------------------------------
// SYMF tensors

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'S', 'Y', 'M', 'F'};
constexpr std::uint32_t kTensorVersion = 1;
constexpr std::size_t kHeaderSize = 20;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Raster& r) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + r.data().size() * 4);
  for (auto b : kMagic) out.push_back(b);
  put_u32(out, kTensorVersion);
  put_u32(out, r.height());
  put_u32(out, r.width());
  put_u32(out, r.channels());
  for (float f : r.data()) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    put_u32(out, bits);
  }
  return out;
}

Raster decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
    throw ValidationError("not a SYMF tensor");
  if (get_u32(bytes, 4) != kTensorVersion) throw ValidationError("unsupported SYMF version " + std::to_string(get_u32(bytes, 4)));
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint32_t w = get_u32(bytes, 12);
  const std::uint32_t c = get_u32(bytes, 16);
  const std::uint64_t count = static_cast<std::uint64_t>(h) * w * c;
  if (bytes.size() != kHeaderSize + count * 4) throw ValidationError("SYMF payload size does not match header");
  Raster r(h, w, c);
  float* dst = r.mutable_data().data();
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint32_t bits = get_u32(bytes, kHeaderSize + 4 * i);
    std::memcpy(dst + i, &bits, sizeof bits);
  }
  return r;
}

void export_tensor(const Raster& r, const std::filesystem::path& path) {
  auto bytes = encode_tensor(r);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

Raster import_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_tensor(bytes);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// PNG

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_gray_png(const std::filesystem::path& path, std::span<const float> plane, unsigned width, unsigned height) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<png_byte> row(width);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (unsigned y = 0; y < height; ++y) {
    for (unsigned x = 0; x < width; ++x) {
      float v = std::clamp(plane[static_cast<std::size_t>(y) * width + x], 0.0f, 1.0f);
      row[x] = static_cast<png_byte>(std::lround(255.0 * v));
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

std::vector<std::filesystem::path> png_paths(const std::filesystem::path& prefix) {
  std::vector<std::filesystem::path> out;
  for (const char* suffix : {"_q.png", "_s.png", "_h.png"}) out.emplace_back(prefix.string() + suffix);
  return out;
}

void export_png(const Raster& r, const std::filesystem::path& prefix) {
  if (r.channels() != 3) throw ValidationError("PNG export expects 3 channels");
  auto paths = png_paths(prefix);
  for (unsigned c = 0; c < 3; ++c) write_gray_png(paths[c], r.channel(c), r.width(), r.height());
}

std::vector<std::uint8_t> read_gray_png(const std::filesystem::path& path, unsigned& width, unsigned& height) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("libpng initialisation failed");
  }
  std::vector<std::uint8_t> pixels;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("PNG decoding failed: " + path.string());
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  if (png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY || png_get_bit_depth(png, info) != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError(path.string() + " is not 8-bit grayscale");
  }
  pixels.resize(static_cast<std::size_t>(width) * height);
  for (unsigned y = 0; y < height; ++y) png_read_row(png, pixels.data() + static_cast<std::size_t>(y) * width, nullptr);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return pixels;
}

}  // namespace hamvf
