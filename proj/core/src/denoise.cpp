#include "abcs/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "abcs/dct.hpp"

namespace abcs {

namespace {

PixelImage gaussian_blur(const PixelImage& in, double spatial_sigma) {
  if (spatial_sigma <= 0.0) return in;
  const int radius = static_cast<int>(std::ceil(3.0 * spatial_sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i * i) / (spatial_sigma * spatial_sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  const int H = in.height, W = in.width;
  auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };

  PixelImage tmp(H, W), out(H, W);
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * in.at(r, clampi(c + i, W));
      }
      tmp.at(r, c) = acc;
    }
  }
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < W; ++c) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        acc += kernel[i + radius] * tmp.at(clampi(r + i, H), c);
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

// Block-DCT soft thresholding with overlapped tiles averaged together; the
// overlap suppresses the tiling artifacts a disjoint partition would imprint.
PixelImage dct_soft_threshold(const PixelImage& in, double threshold, int block) {
  const int H = in.height, W = in.width;
  const int b = std::max(1, std::min({block, H, W}));
  const int stride = std::max(1, b / 2);

  auto origins = [&](int extent) {
    std::vector<int> o;
    for (int p = 0; p + b <= extent; p += stride) o.push_back(p);
    if (o.empty() || o.back() != extent - b) o.push_back(extent - b);
    return o;
  };
  const auto row_origins = origins(H);
  const auto col_origins = origins(W);

  const BlockDct dct(b);
  std::vector<double> pix(static_cast<size_t>(b) * b), coef(pix.size());
  PixelImage acc(H, W, 0.0);
  std::vector<double> weight(in.size(), 0.0);

  for (int r0 : row_origins) {
    for (int c0 : col_origins) {
      for (int r = 0; r < b; ++r) {
        for (int c = 0; c < b; ++c) pix[static_cast<size_t>(r) * b + c] = in.at(r0 + r, c0 + c);
      }
      dct.forward(pix, coef);
      for (size_t k = 1; k < coef.size(); ++k) {  // DC passes through
        const double mag = std::abs(coef[k]) - threshold;
        coef[k] = (mag > 0.0) ? std::copysign(mag, coef[k]) : 0.0;
      }
      dct.inverse(coef, pix);
      for (int r = 0; r < b; ++r) {
        for (int c = 0; c < b; ++c) {
          acc.at(r0 + r, c0 + c) += pix[static_cast<size_t>(r) * b + c];
          weight[static_cast<size_t>(r0 + r) * W + (c0 + c)] += 1.0;
        }
      }
    }
  }
  for (size_t i = 0; i < acc.data.size(); ++i) acc.data[i] /= weight[i];
  return acc;
}

}  // namespace

PixelImage denoise(const DenoiserSpec& spec, const PixelImage& field, double sigma) {
  if (sigma < 0) throw std::invalid_argument("denoise: sigma must be >= 0");
  if (spec.name == "identity") return field;
  if (spec.name == "blur") {
    const double scale = spec.param("sigma_scale", 25.0);
    return gaussian_blur(field, sigma / scale);
  }
  if (spec.name == "dct_threshold") {
    const double k = spec.param("k", 2.7);
    const int block = static_cast<int>(spec.param("block", 8.0));
    return dct_soft_threshold(field, k * sigma, block);
  }
  throw std::invalid_argument("unknown denoiser: '" + spec.name + "'");
}

double divergence(const DenoiserSpec& spec, const PixelImage& field, double sigma,
                  double epsilon, uint64_t seed) {
  if (epsilon <= 0) throw std::invalid_argument("divergence: epsilon must be > 0");
  std::mt19937_64 rng(seed);
  std::vector<double> probe(field.size());
  for (double& p : probe) p = (rng() & 1ULL) ? 1.0 : -1.0;

  PixelImage perturbed = field;
  for (size_t i = 0; i < probe.size(); ++i) perturbed.data[i] += epsilon * probe[i];

  const PixelImage base = denoise(spec, field, sigma);
  const PixelImage moved = denoise(spec, perturbed, sigma);
  double acc = 0.0;
  for (size_t i = 0; i < probe.size(); ++i) {
    acc += probe[i] * (moved.data[i] - base.data[i]);
  }
  return acc / epsilon;
}

}  // namespace abcs
