#include "imgprops/cnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>

#include <zlib.h>

#include "imgprops/error.hpp"
#include "imgprops/phog.hpp"

namespace imgprops::cnn {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 3 * 4;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint32_t u32() {
    need(4);
    const std::uint32_t v = static_cast<std::uint32_t>(bytes_[pos_]) |
                            static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8 |
                            static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16 |
                            static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24;
    pos_ += 4;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  [[nodiscard]] std::size_t pos() const noexcept { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw Error(ErrorCode::DimMismatch, "weight file is truncated");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 4;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, bytes.data(), static_cast<uInt>(bytes.size()));
  return static_cast<std::uint32_t>(crc);
}

// Zero mean, unit L2 norm, then scaled.
void finish_filter(std::span<float> f, double scale) {
  double mean = 0.0;
  for (float v : f) mean += v;
  mean /= static_cast<double>(f.size());
  double norm = 0.0;
  for (float v : f) norm += (v - mean) * (v - mean);
  norm = std::sqrt(norm);
  for (float& v : f) v = static_cast<float>((v - mean) / norm * scale);
}

}  // namespace

Conv1Weights parse_conv1_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kWeightMagic, 4) != 0) {
    throw Error(ErrorCode::BadMagic, "weight file does not start with ATB1");
  }
  Reader in(bytes);
  Conv1Weights w;
  w.filters = static_cast<int>(in.u32());
  w.channels = static_cast<int>(in.u32());
  w.kernel_h = static_cast<int>(in.u32());
  w.kernel_w = static_cast<int>(in.u32());
  if (w.filters != kConv1Filters || w.channels != 3 || w.kernel_h != kConv1Kernel ||
      w.kernel_w != kConv1Kernel) {
    throw Error(ErrorCode::DimMismatch, "expected 96x3x11x11 filters, header says " +
                                            std::to_string(w.filters) + "x" + std::to_string(w.channels) +
                                            "x" + std::to_string(w.kernel_h) + "x" +
                                            std::to_string(w.kernel_w));
  }
  const std::size_t expected =
      kHeaderBytes + (w.filter_stride() * w.filters + w.filters) * 4 + 4;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::DimMismatch, "weight file length " + std::to_string(bytes.size()) +
                                            " does not match header (" + std::to_string(expected) + ")");
  }
  for (float& m : w.means) m = in.f32();
  w.weights.resize(w.filter_stride() * w.filters);
  for (float& v : w.weights) v = in.f32();
  w.bias.resize(static_cast<std::size_t>(w.filters));
  for (float& v : w.bias) v = in.f32();
  const std::size_t payload_end = in.pos();
  const std::uint32_t stored = in.u32();
  if (crc_of(bytes.subspan(4, payload_end - 4)) != stored) {
    throw Error(ErrorCode::ChecksumFail, "weight payload CRC32 mismatch");
  }
  for (float v : w.weights) {
    if (!std::isfinite(v)) throw Error(ErrorCode::DimMismatch, "non-finite weight");
  }
  return w;
}

Conv1Weights load_conv1_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::WeightFileMissing, "cannot open weight file " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_conv1_weights(bytes);
}

std::vector<std::uint8_t> serialize_conv1_weights(const Conv1Weights& w) {
  if (w.weights.size() != w.filter_stride() * w.filters || w.bias.size() != static_cast<std::size_t>(w.filters)) {
    throw Error(ErrorCode::DimMismatch, "weight tensor does not match its dimensions");
  }
  std::vector<std::uint8_t> out(kWeightMagic, kWeightMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(w.filters));
  put_u32(out, static_cast<std::uint32_t>(w.channels));
  put_u32(out, static_cast<std::uint32_t>(w.kernel_h));
  put_u32(out, static_cast<std::uint32_t>(w.kernel_w));
  for (float m : w.means) put_f32(out, m);
  for (float v : w.weights) put_f32(out, v);
  for (float v : w.bias) put_f32(out, v);
  put_u32(out, crc_of(std::span<const std::uint8_t>(out).subspan(4)));
  return out;
}

void save_conv1_weights(const Conv1Weights& w, const std::string& path) {
  const auto bytes = serialize_conv1_weights(w);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

Conv1Weights synthetic_conv1_weights() {
  Conv1Weights w;
  w.means = {123.68f, 116.78f, 103.94f};
  const int ks = kConv1Kernel;
  const int half = ks / 2;
  const std::size_t stride = w.filter_stride();
  w.weights.assign(stride * kConv1Filters, 0.0f);
  w.bias.resize(kConv1Filters);
  constexpr double kScale = 0.05;

  // Channel mixes: luminance, red-green, blue-yellow.
  constexpr double kMix[3][3] = {{1.0, 1.0, 1.0}, {1.0, -1.0, 0.0}, {-0.5, -0.5, 1.0}};

  auto gabor = [&](double theta, double wavelength, bool odd, int x, int y) {
    const double sigma = std::min(0.45 * wavelength, 3.0);
    const double xr = x * std::cos(theta) + y * std::sin(theta);
    const double yr = -x * std::sin(theta) + y * std::cos(theta);
    const double env = std::exp(-(xr * xr + yr * yr) / (2.0 * sigma * sigma));
    const double phase = 2.0 * std::numbers::pi * xr / wavelength;
    return env * (odd ? std::sin(phase) : std::cos(phase));
  };
  auto fill = [&](int k, int mix, auto&& profile) {
    std::span<float> f(w.weights.data() + static_cast<std::size_t>(k) * stride, stride);
    for (int c = 0; c < 3; ++c) {
      for (int r = 0; r < ks; ++r) {
        for (int s = 0; s < ks; ++s) {
          f[(static_cast<std::size_t>(c) * ks + r) * ks + s] =
              static_cast<float>(kMix[mix][c] * profile(s - half, r - half));
        }
      }
    }
    finish_filter(f, kScale);
  };

  int k = 0;
  // 48 luminance Gabors: 8 orientations x 3 wavelengths x 2 phases.
  for (int o = 0; o < 8; ++o) {
    for (double lambda : {3.0, 5.0, 8.0}) {
      for (bool odd : {false, true}) {
        const double theta = o * std::numbers::pi / 8.0;
        fill(k++, 0, [&](int x, int y) { return gabor(theta, lambda, odd, x, y); });
      }
    }
  }
  // 2 x 24 colour-opponent filters: 4 orientations x 2 wavelengths x 2
  // phases, then centre-surround blobs of both signs at 4 sizes.
  for (int mix = 1; mix <= 2; ++mix) {
    for (int o = 0; o < 4; ++o) {
      for (double lambda : {5.0, 9.0}) {
        for (bool odd : {false, true}) {
          const double theta = o * std::numbers::pi / 4.0;
          fill(k++, mix, [&](int x, int y) { return gabor(theta, lambda, odd, x, y); });
        }
      }
    }
    for (double sigma : {1.0, 1.5, 2.0, 3.0}) {
      for (double sign : {1.0, -1.0}) {
        fill(k++, mix, [&](int x, int y) {
          const double r2 = x * x + y * y;
          const double centre = std::exp(-r2 / (2.0 * sigma * sigma));
          const double surround = std::exp(-r2 / (8.0 * sigma * sigma)) / 4.0;
          return sign * (centre - surround);
        });
      }
    }
  }
  for (int i = 0; i < kConv1Filters; ++i) w.bias[i] = static_cast<float>(0.1 + 0.05 * (i % 5));
  return w;
}

std::vector<double> Conv1Responses::pooled(int n) const {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "pooling grid must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(filters) * n * n, -std::numeric_limits<double>::infinity());
  for (int k = 0; k < filters; ++k) {
    for (int gy = 0; gy < n; ++gy) {
      const auto [y0, y1] = phog::section_range(height, n, gy);
      for (int gx = 0; gx < n; ++gx) {
        const auto [x0, x1] = phog::section_range(width, n, gx);
        double m = -std::numeric_limits<double>::infinity();
        for (int y = y0; y < y1; ++y) {
          for (int x = x0; x < x1; ++x) m = std::max(m, at(k, x, y));
        }
        out[(static_cast<std::size_t>(k) * n + gy) * n + gx] = m;
      }
    }
  }
  return out;
}

std::array<Plane, 3> prepare_input(const RasterImage& img, const ForwardOptions& options) {
  if (img.space() != ColorSpace::RGB8) throw Error(ErrorCode::WrongColorSpace, "CNN input must be RGB8");
  std::array<Plane, 3> planes;
  for (int c = 0; c < 3; ++c) {
    planes[c] = resize(channel_plane(img, c), options.input_side, options.input_side, options.filter);
  }
  return planes;
}

Conv1Responses conv1_forward(std::span<const Plane> channels, const Conv1Weights& w,
                             const ForwardOptions& options) {
  if (static_cast<int>(channels.size()) != w.channels) {
    throw Error(ErrorCode::DimMismatch, "channel count does not match weights");
  }
  const int in_w = channels[0].width, in_h = channels[0].height;
  if (in_w < w.kernel_w || in_h < w.kernel_h || options.stride < 1) {
    throw Error(ErrorCode::TooSmall, "input smaller than the kernel");
  }
  Conv1Responses out;
  out.filters = w.filters;
  out.width = (in_w - w.kernel_w) / options.stride + 1;
  out.height = (in_h - w.kernel_h) / options.stride + 1;
  out.maps.assign(static_cast<std::size_t>(out.filters) * out.width * out.height, 0.0);

  const std::size_t patch = w.filter_stride();
  std::vector<double> weights(w.weights.begin(), w.weights.end());

#pragma omp parallel
  {
    std::vector<double> col(patch);
#pragma omp for schedule(static)
    for (int oy = 0; oy < out.height; ++oy) {
      for (int ox = 0; ox < out.width; ++ox) {
        // Gather the mean-subtracted receptive field once per position.
        std::size_t p = 0;
        for (int c = 0; c < w.channels; ++c) {
          const double mean = w.means[static_cast<std::size_t>(c)];
          for (int r = 0; r < w.kernel_h; ++r) {
            const double* row = &channels[c].data[static_cast<std::size_t>(oy * options.stride + r) * in_w +
                                                  static_cast<std::size_t>(ox) * options.stride];
            for (int s = 0; s < w.kernel_w; ++s) col[p++] = row[s] - mean;
          }
        }
        for (int k = 0; k < w.filters; ++k) {
          const double* f = weights.data() + static_cast<std::size_t>(k) * patch;
          double acc = 0.0;
          for (std::size_t i = 0; i < patch; ++i) acc += col[i] * f[i];
          acc += w.bias[static_cast<std::size_t>(k)];
          if (options.rectify && acc < 0.0) acc = 0.0;
          out.maps[(static_cast<std::size_t>(k) * out.height + oy) * out.width + ox] = acc;
        }
      }
    }
  }
  return out;
}

Conv1Responses conv1_forward(const RasterImage& img, const Conv1Weights& w, const ForwardOptions& options) {
  const auto planes = prepare_input(img, options);
  return conv1_forward(planes, w, options);
}

double response_symmetry(const Conv1Responses& a, const Conv1Responses& b, double epsilon) {
  if (a.maps.size() != b.maps.size() || a.maps.empty()) {
    throw Error(ErrorCode::DimMismatch, "response sets differ in shape");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.maps.size(); ++i) {
    const double hi = std::max(a.maps[i], b.maps[i]);
    sum += hi < epsilon ? 1.0 : 1.0 - std::abs(a.maps[i] - b.maps[i]) / hi;
  }
  return sum / static_cast<double>(a.maps.size());
}

namespace {

Plane flipped(const Plane& p, bool horizontal) {
  Plane out(p.width, p.height);
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      out.at(x, y) = horizontal ? p.at(p.width - 1 - x, y) : p.at(x, p.height - 1 - y);
    }
  }
  return out;
}

}  // namespace

CnnSymmetry cnn_symmetry(std::span<const Plane> planes, const Conv1Responses& base,
                         const Conv1Weights& w, const ForwardOptions& options) {
  if (planes.size() != 3) throw Error(ErrorCode::InvalidArgument, "cnn_symmetry needs 3 planes");
  const std::array<Plane, 3> lr{flipped(planes[0], true), flipped(planes[1], true), flipped(planes[2], true)};
  const std::array<Plane, 3> ud{flipped(planes[0], false), flipped(planes[1], false), flipped(planes[2], false)};
  CnnSymmetry s;
  s.left_right = response_symmetry(base, conv1_forward(lr, w, options));
  s.up_down = response_symmetry(base, conv1_forward(ud, w, options));
  s.combined = (s.left_right + s.up_down) / 2.0;
  return s;
}

CnnSymmetry cnn_symmetry(const RasterImage& img, const Conv1Weights& w, const ForwardOptions& options) {
  const auto planes = prepare_input(img, options);
  return cnn_symmetry(planes, conv1_forward(planes, w, options), w, options);
}

double cnn_self_similarity(const Conv1Responses& r, int grid) {
  const auto ground_raw = r.pooled(1);
  const auto ground = phog::normalized(ground_raw);
  double total = 0.0;
  for (double v : ground_raw) total += v;
  if (total <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const auto cells = r.pooled(grid);
  std::vector<double> hik;
  hik.reserve(static_cast<std::size_t>(grid) * grid);
  std::vector<double> h(static_cast<std::size_t>(r.filters));
  for (int cell = 0; cell < grid * grid; ++cell) {
    for (int k = 0; k < r.filters; ++k) h[k] = cells[static_cast<std::size_t>(k) * grid * grid + cell];
    hik.push_back(phog::histogram_intersection(phog::normalized(h), ground));
  }
  return median(std::move(hik));
}

double cnn_self_similarity(const RasterImage& img, const Conv1Weights& w, const ForwardOptions& options) {
  return cnn_self_similarity(conv1_forward(img, w, options));
}

double population_variance(std::span<const double> values) noexcept {
  double mean = 0.0, m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  return n > 0 ? m2 / static_cast<double>(n) : 0.0;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

CnnVariances cnn_variances(const Conv1Responses& r, int n) {
  if (n < 2 || n > 30) throw Error(ErrorCode::InvalidArgument, "grid size must be in [2, 30]");
  const auto p = r.pooled(n);
  CnnVariances out;
  out.sparseness = population_variance(p);
  std::vector<double> per_filter(static_cast<std::size_t>(r.filters));
  const std::size_t cells = static_cast<std::size_t>(n) * n;
  for (int k = 0; k < r.filters; ++k) {
    per_filter[k] = population_variance(std::span<const double>(p).subspan(k * cells, cells));
  }
  out.variability = median(std::move(per_filter));
  return out;
}

CnnVariances cnn_variances(const RasterImage& img, const Conv1Weights& w, int n, const ForwardOptions& options) {
  return cnn_variances(conv1_forward(img, w, options), n);
}

}  // namespace imgprops::cnn
