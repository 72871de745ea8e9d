#pragma once

#include <span>
#include <vector>

namespace abcs {

/// Orthonormal 2D DCT-II on square blocks, computed separably from a
/// precomputed 1D basis. With this normalization the transform preserves
/// energy exactly, so block-diagonal coefficient selection has orthonormal
/// rows (forward/adjoint pairs compose to the identity on measurements).
///
/// Immutable after construction; safe to share across threads.
class BlockDct {
 public:
  explicit BlockDct(int size);

  int size() const { return size_; }

  /// pixels -> coefficients, both size*size row-major.
  void forward(std::span<const double> pixels, std::span<double> coeffs) const;
  /// coefficients -> pixels, exact inverse up to floating-point rounding.
  void inverse(std::span<const double> coeffs, std::span<double> pixels) const;

 private:
  int size_;
  std::vector<double> basis_;  // basis_[k*size_+n] = a_k cos(pi (2n+1) k / (2 size_))
};

std::vector<double> dct2(const std::vector<double>& block, int size);
std::vector<double> idct2(const std::vector<double>& coeffs, int size);

}  // namespace abcs
