#pragma once

#include <vector>

namespace abcs {

/// JPEG zigzag scan generalized to B x B. Anti-diagonals are visited from DC
/// toward high frequencies, alternating traversal direction.
struct ZigzagOrder {
  int block = 0;
  std::vector<int> index;  // index[k] = row*B + col of the k-th scanned coefficient
  std::vector<int> rank;   // rank[row*B + col] = scan position (inverse of index)
};

ZigzagOrder zigzag_order(int block);

}  // namespace abcs
