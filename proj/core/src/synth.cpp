#include "abcs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace abcs {

namespace {

using std::numbers::pi;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // Engine output mapped directly so results do not depend on the standard
  // library's distribution implementation.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

void finalize(PixelImage& img) {
  for (double& v : img.data) v = std::clamp(std::round(v), 0.0, 255.0);
}

PixelImage blobs_scene(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PixelImage img(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      img.at(r, c) = 70.0 + 60.0 * c / n + 30.0 * r / n;
    }
  }
  const int blob_count = 24;
  for (int k = 0; k < blob_count; ++k) {
    const double cx = uniform(rng, 0, n), cy = uniform(rng, 0, n);
    const double ax = uniform(rng, n / 30.0, n / 6.0);
    const double ay = uniform(rng, n / 30.0, n / 6.0);
    const double angle = uniform(rng, 0, pi);
    const double amp = uniform(rng, -70, 90);
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const double dx = c - cx, dy = r - cy;
        const double u = (ca * dx + sa * dy) / ax;
        const double v = (-sa * dx + ca * dy) / ay;
        const double q = u * u + v * v;
        if (q < 9.0) img.at(r, c) += amp * std::exp(-q);
      }
    }
  }
  finalize(img);
  return img;
}

PixelImage edges_scene(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PixelImage img(n, n, 180.0);
  const int shape_count = 14;
  for (int k = 0; k < shape_count; ++k) {
    const double level = uniform(rng, 20, 235);
    const bool circle = (rng() & 1ULL) != 0;
    const double cx = uniform(rng, 0, n), cy = uniform(rng, 0, n);
    if (circle) {
      const double radius = uniform(rng, n / 20.0, n / 5.0);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          const double dx = c - cx, dy = r - cy;
          if (dx * dx + dy * dy <= radius * radius) img.at(r, c) = level;
        }
      }
    } else {
      const double a = uniform(rng, n / 16.0, n / 4.0);
      const double b = uniform(rng, n / 16.0, n / 4.0);
      const double angle = uniform(rng, 0, pi);
      const double ca = std::cos(angle), sa = std::sin(angle);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          const double dx = c - cx, dy = r - cy;
          if (std::abs(ca * dx + sa * dy) <= a && std::abs(-sa * dx + ca * dy) <= b) {
            img.at(r, c) = level;
          }
        }
      }
    }
  }
  finalize(img);
  return img;
}

PixelImage waves_scene(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PixelImage img(n, n, 128.0);
  const int wave_count = 7;
  for (int k = 0; k < wave_count; ++k) {
    const double freq = uniform(rng, 0.08, 0.8);
    const double theta = uniform(rng, 0, pi);
    const double phase = uniform(rng, 0, 2 * pi);
    const double amp = uniform(rng, 18, 45);
    const double cx = uniform(rng, 0, n), cy = uniform(rng, 0, n);
    const double spread = uniform(rng, n / 8.0, n / 2.5);
    const double kx = freq * std::cos(theta), ky = freq * std::sin(theta);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        const double dx = c - cx, dy = r - cy;
        const double env = std::exp(-(dx * dx + dy * dy) / (2 * spread * spread));
        img.at(r, c) += amp * env * std::sin(kx * c + ky * r + phase);
      }
    }
  }
  finalize(img);
  return img;
}

PixelImage texture_scene(int n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  PixelImage img(n, n, 0.0);
  const int wave_count = 60;
  for (int k = 0; k < wave_count; ++k) {
    const double freq = uniform(rng, 0.015, 1.1);
    const double theta = uniform(rng, 0, 2 * pi);
    const double phase = uniform(rng, 0, 2 * pi);
    const double amp = 1.0 / (0.05 + 4.0 * freq);  // roughly 1/f spectrum
    const double kx = freq * std::cos(theta), ky = freq * std::sin(theta);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        img.at(r, c) += amp * std::sin(kx * c + ky * r + phase);
      }
    }
  }
  double mean = 0.0;
  for (double v : img.data) mean += v;
  mean /= static_cast<double>(img.data.size());
  double var = 0.0;
  for (double v : img.data) var += (v - mean) * (v - mean);
  const double scale = 42.0 / std::sqrt(var / static_cast<double>(img.data.size()));
  for (double& v : img.data) v = 128.0 + scale * (v - mean);
  finalize(img);
  return img;
}

PixelImage rings_scene(int n, uint64_t) {
  PixelImage img(n, n);
  const double cx = 0.5 * (n - 1), cy = 0.5 * (n - 1);
  // Zone-plate style chirp; instantaneous frequency stays moderate so the
  // scene remains transform-compressible.
  const double k = 0.35 * pi / n;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const double dx = c - cx, dy = r - cy;
      const double r2 = dx * dx + dy * dy;
      img.at(r, c) = 128.0 + 55.0 * std::sin(k * r2 / 8.0) * std::exp(-r2 / (n * n * 0.9));
    }
  }
  finalize(img);
  return img;
}

PixelImage mixed_scene(int n, uint64_t seed) {
  const int h = n / 2;
  const PixelImage blobs = blobs_scene(h, seed ^ 0xB10B5);
  const PixelImage rings = rings_scene(h, seed);
  const PixelImage shapes = edges_scene(h, seed ^ 0xED6E5);
  const PixelImage grain = texture_scene(h, seed ^ 0x7E47);
  PixelImage img(n, n);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < h; ++c) {
      img.at(r, c) = blobs.at(r, c);
      img.at(r, c + h) = rings.at(r, c);
      img.at(r + h, c) = shapes.at(r, c);
      img.at(r + h, c + h) = grain.at(r, c);
    }
  }
  if (n % 2 == 1) {  // odd sizes leave a one-pixel seam
    for (int i = 0; i < n; ++i) {
      img.at(n - 1, i) = img.at(n - 2, i);
      img.at(i, n - 1) = img.at(i, n - 2);
    }
  }
  return img;
}

}  // namespace

std::vector<std::string> test_image_names() {
  return {"blobs", "edges", "waves", "texture", "rings", "mixed"};
}

PixelImage make_test_image(const std::string& name, int size) {
  if (size < 2) throw std::invalid_argument("make_test_image: size must be >= 2");
  const uint64_t seed = 0xABC5'0000ULL + static_cast<uint64_t>(size);
  if (name == "blobs") return blobs_scene(size, seed + 101);
  if (name == "edges") return edges_scene(size, seed + 202);
  if (name == "waves") return waves_scene(size, seed + 303);
  if (name == "texture") return texture_scene(size, seed + 404);
  if (name == "rings") return rings_scene(size, seed + 505);
  if (name == "mixed") return mixed_scene(size, seed + 606);
  throw std::invalid_argument("unknown test image: '" + name + "'");
}

}  // namespace abcs
