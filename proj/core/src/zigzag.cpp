#include "abcs/zigzag.hpp"

#include <algorithm>
#include <stdexcept>

namespace abcs {

ZigzagOrder zigzag_order(int block) {
  if (block < 1) throw std::invalid_argument("zigzag_order: block must be >= 1");
  const int B = block;
  ZigzagOrder zz;
  zz.block = B;
  zz.index.reserve(static_cast<size_t>(B) * B);
  for (int s = 0; s <= 2 * (B - 1); ++s) {
    int lo = std::max(0, s - B + 1);
    int hi = std::min(s, B - 1);
    if (s % 2 == 0) {
      for (int r = hi; r >= lo; --r) zz.index.push_back(r * B + (s - r));
    } else {
      for (int r = lo; r <= hi; ++r) zz.index.push_back(r * B + (s - r));
    }
  }
  zz.rank.assign(zz.index.size(), 0);
  for (size_t k = 0; k < zz.index.size(); ++k) zz.rank[zz.index[k]] = static_cast<int>(k);
  return zz;
}

}  // namespace abcs
