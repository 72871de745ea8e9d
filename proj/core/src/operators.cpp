#include "abcs/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace abcs {

SensingOperator::SensingOperator(const BlockGrid& grid, std::vector<uint16_t> counts)
    : grid_(grid), counts_(std::move(counts)), dct_(grid.block), scan_(zigzag_order(grid.block)) {
  if (static_cast<int>(counts_.size()) != grid_.count()) {
    throw std::invalid_argument("SensingOperator: counts/grid mismatch");
  }
  const long long block_area = static_cast<long long>(grid_.block) * grid_.block;
  offsets_.reserve(counts_.size() + 1);
  offsets_.push_back(0);
  for (uint16_t c : counts_) {
    if (c > block_area) throw std::invalid_argument("SensingOperator: count exceeds B^2");
    offsets_.push_back(offsets_.back() + c);
  }
  measurements_ = offsets_.back();
}

std::vector<double> SensingOperator::forward(std::span<const double> field) const {
  if (static_cast<long long>(field.size()) != field_size()) {
    throw std::invalid_argument("forward: field size mismatch");
  }
  const int B = grid_.block;
  const int W = field_width();
  std::vector<double> y(measurements_);
  std::vector<double> blockbuf(static_cast<size_t>(B) * B);
  std::vector<double> coefbuf(blockbuf.size());
  for (int br = 0; br < grid_.rows; ++br) {
    for (int bc = 0; bc < grid_.cols; ++bc) {
      const size_t bi = static_cast<size_t>(br) * grid_.cols + bc;
      const int m = counts_[bi];
      if (m == 0) continue;
      for (int r = 0; r < B; ++r) {
        const double* src = &field[static_cast<size_t>(br * B + r) * W +
                                   static_cast<size_t>(bc) * B];
        std::copy(src, src + B, blockbuf.begin() + static_cast<size_t>(r) * B);
      }
      dct_.forward(blockbuf, coefbuf);
      double* dst = &y[offsets_[bi]];
      for (int k = 0; k < m; ++k) dst[k] = coefbuf[scan_.index[k]];
    }
  }
  return y;
}

std::vector<double> SensingOperator::adjoint(std::span<const double> y) const {
  if (static_cast<long long>(y.size()) != measurements_) {
    throw std::invalid_argument("adjoint: measurement vector length mismatch");
  }
  const int B = grid_.block;
  const int W = field_width();
  std::vector<double> field(field_size(), 0.0);
  std::vector<double> blockbuf(static_cast<size_t>(B) * B);
  std::vector<double> coefbuf(blockbuf.size());
  for (int br = 0; br < grid_.rows; ++br) {
    for (int bc = 0; bc < grid_.cols; ++bc) {
      const size_t bi = static_cast<size_t>(br) * grid_.cols + bc;
      const int m = counts_[bi];
      if (m == 0) continue;  // block stays zero
      std::fill(coefbuf.begin(), coefbuf.end(), 0.0);
      const double* src = &y[offsets_[bi]];
      for (int k = 0; k < m; ++k) coefbuf[scan_.index[k]] = src[k];
      dct_.inverse(coefbuf, blockbuf);
      for (int r = 0; r < B; ++r) {
        std::copy(blockbuf.begin() + static_cast<size_t>(r) * B,
                  blockbuf.begin() + static_cast<size_t>(r + 1) * B,
                  &field[static_cast<size_t>(br * B + r) * W + static_cast<size_t>(bc) * B]);
      }
    }
  }
  return field;
}

}  // namespace abcs
