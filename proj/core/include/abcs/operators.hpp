#pragma once

#include <span>
#include <vector>

#include "abcs/dct.hpp"
#include "abcs/image.hpp"
#include "abcs/sensing.hpp"
#include "abcs/zigzag.hpp"

namespace abcs {

/// Matrix-free sensing operator: block-diagonal DCT followed by zigzag-prefix
/// selection. Rows are orthonormal, so forward(adjoint(y)) == y. The operator
/// is never materialized as a dense matrix.
///
/// Immutable once built; forward/adjoint are const and thread-safe.
class SensingOperator {
 public:
  SensingOperator(const BlockGrid& grid, std::vector<uint16_t> counts);

  static SensingOperator from(const MeasurementSet& ms) {
    return SensingOperator(ms.grid(), ms.counts);
  }

  const BlockGrid& grid() const { return grid_; }
  long long measurements() const { return measurements_; }
  long long field_size() const { return grid_.pixel_count(); }
  int field_height() const { return grid_.cropped_height(); }
  int field_width() const { return grid_.cropped_width(); }

  /// y = A x: per block, transform and emit the zigzag prefix; blocks are
  /// concatenated in row-major order. The field must have the cropped
  /// dimensions.
  std::vector<double> forward(std::span<const double> field) const;

  /// x = A* y: scatter each block's measurements into an empty coefficient
  /// grid and invert the transform.
  std::vector<double> adjoint(std::span<const double> y) const;

 private:
  BlockGrid grid_;
  std::vector<uint16_t> counts_;
  std::vector<long long> offsets_;  // prefix sums into the measurement vector
  long long measurements_ = 0;
  BlockDct dct_;
  ZigzagOrder scan_;
};

}  // namespace abcs
