#include "abcs/dct.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace abcs {

BlockDct::BlockDct(int size) : size_(size) {
  if (size < 1) throw std::invalid_argument("BlockDct: size must be >= 1");
  basis_.resize(static_cast<size_t>(size) * size);
  const double n0 = std::sqrt(1.0 / size);
  const double nk = std::sqrt(2.0 / size);
  for (int k = 0; k < size; ++k) {
    const double scale = (k == 0) ? n0 : nk;
    for (int n = 0; n < size; ++n) {
      basis_[static_cast<size_t>(k) * size + n] =
          scale * std::cos(std::numbers::pi * (2.0 * n + 1.0) * k / (2.0 * size));
    }
  }
}

void BlockDct::forward(std::span<const double> pixels, std::span<double> coeffs) const {
  const int B = size_;
  const size_t n2 = static_cast<size_t>(B) * B;
  if (pixels.size() != n2 || coeffs.size() != n2) {
    throw std::invalid_argument("BlockDct::forward: bad span size");
  }
  std::vector<double> tmp(n2, 0.0);
  // tmp = C * X
  for (int u = 0; u < B; ++u) {
    double* trow = &tmp[static_cast<size_t>(u) * B];
    for (int r = 0; r < B; ++r) {
      const double a = basis_[static_cast<size_t>(u) * B + r];
      const double* xrow = &pixels[static_cast<size_t>(r) * B];
      for (int c = 0; c < B; ++c) trow[c] += a * xrow[c];
    }
  }
  // Y = tmp * C^T
  for (int u = 0; u < B; ++u) {
    const double* trow = &tmp[static_cast<size_t>(u) * B];
    double* yrow = &coeffs[static_cast<size_t>(u) * B];
    for (int v = 0; v < B; ++v) {
      const double* brow = &basis_[static_cast<size_t>(v) * B];
      double acc = 0.0;
      for (int c = 0; c < B; ++c) acc += trow[c] * brow[c];
      yrow[v] = acc;
    }
  }
}

void BlockDct::inverse(std::span<const double> coeffs, std::span<double> pixels) const {
  const int B = size_;
  const size_t n2 = static_cast<size_t>(B) * B;
  if (pixels.size() != n2 || coeffs.size() != n2) {
    throw std::invalid_argument("BlockDct::inverse: bad span size");
  }
  std::vector<double> tmp(n2, 0.0);
  // tmp = C^T * Y
  for (int u = 0; u < B; ++u) {
    const double* yrow = &coeffs[static_cast<size_t>(u) * B];
    for (int r = 0; r < B; ++r) {
      const double a = basis_[static_cast<size_t>(u) * B + r];
      double* trow = &tmp[static_cast<size_t>(r) * B];
      for (int v = 0; v < B; ++v) trow[v] += a * yrow[v];
    }
  }
  // X = tmp * C
  for (int r = 0; r < B; ++r) {
    const double* trow = &tmp[static_cast<size_t>(r) * B];
    double* xrow = &pixels[static_cast<size_t>(r) * B];
    for (int c = 0; c < B; ++c) xrow[c] = 0.0;
    for (int v = 0; v < B; ++v) {
      const double a = trow[v];
      const double* brow = &basis_[static_cast<size_t>(v) * B];
      for (int c = 0; c < B; ++c) xrow[c] += a * brow[c];
    }
  }
}

std::vector<double> dct2(const std::vector<double>& block, int size) {
  BlockDct plan(size);
  std::vector<double> out(block.size());
  plan.forward(block, out);
  return out;
}

std::vector<double> idct2(const std::vector<double>& coeffs, int size) {
  BlockDct plan(size);
  std::vector<double> out(coeffs.size());
  plan.inverse(coeffs, out);
  return out;
}

}  // namespace abcs
