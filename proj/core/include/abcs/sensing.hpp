#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abcs/image.hpp"

namespace abcs {

enum class Algorithm : uint8_t { ZZ = 0, BBV = 1, DD = 2 };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

/// Sensing parameters. The compression ratio C_R = M/N is held as an exact
/// rational so measurement budgets and the compression factor C_F = N/M are
/// integer-exact (C_F boundaries in the DD threshold table compare exactly).
struct SensingConfig {
  int block = 32;
  uint32_t cr_num = 1;
  uint32_t cr_den = 1;
  Algorithm algorithm = Algorithm::ZZ;
  std::optional<double> threshold;  // DD threshold override

  double cr() const { return static_cast<double>(cr_num) / cr_den; }
  double cf() const { return static_cast<double>(cr_den) / cr_num; }
  long long cf_floor() const { return static_cast<long long>(cr_den / cr_num); }

  void validate() const;
  /// M = floor(C_R * N), exact.
  long long target_measurements(long long total_pixels) const;

  /// Parses a decimal such as "0.1" or a fraction such as "1/10" into an
  /// exact rational in lowest terms.
  static std::pair<uint32_t, uint32_t> parse_ratio(const std::string& text);
  SensingConfig& set_cr(const std::string& text);
  SensingConfig& set_cr(uint32_t num, uint32_t den);
};

/// Per-block measurement allocation. phase1/phase2 follow the two-phase
/// adaptive schemes; for BBV the phase-1 entries are boundary probes (pixel
/// differences, kept as side data), for DD they are zigzag-prefix transform
/// coefficients. shared_overhead counts BBV probes on the image's right and
/// bottom edges, which belong to the frame as a whole rather than to one
/// block's budget.
struct AllocationPlan {
  int block_size = 0;
  bool phase1_is_dct = false;
  std::vector<int> phase1;
  std::vector<int> phase2;
  long long target = 0;
  long long shared_overhead = 0;

  long long actual() const;
  int coeff_count(int i) const {
    return (phase1_is_dct ? phase1[i] : 0) + phase2[i];
  }
};

/// Phase-1 state of the block boundary variation estimator.
struct BbvParams {
  long long stride = 0;    // L
  int offset = 0;          // X_0 = Y_0
  int per_side = 0;        // n_S
  long long phase1_total = 0;  // M_BBV
  std::vector<double> variation;     // BBV_i per block
  std::vector<double> side_values;   // the measured |P1 - P2| scalars, block-major
};

/// Encoded result: header information plus per-block zigzag-prefix DCT
/// coefficients at full precision. Side data carries the BBV probes.
struct MeasurementSet {
  int height = 0;
  int width = 0;
  int block = 0;
  Algorithm algorithm = Algorithm::ZZ;
  uint32_t cr_num = 1;
  uint32_t cr_den = 1;
  double threshold = 0.0;  // DD threshold, 0 when unused
  std::vector<uint16_t> counts;  // per block, row-major block order
  std::vector<double> coeffs;    // concatenated zigzag prefixes
  std::vector<double> side;      // BBV boundary differences, empty otherwise

  BlockGrid grid() const { return make_grid(height, width, block); }
  long long total_coeffs() const;
};

struct BudgetSummary {
  long long target = 0;
  long long actual = 0;
};

/// Sensing entry point; dispatches on cfg.algorithm and applies the BBV/DD
/// fallback rules. A human-readable note is appended to *warning when a
/// fallback fires.
MeasurementSet sense(const PixelImage& img, const SensingConfig& cfg,
                     std::string* warning = nullptr);

MeasurementSet sense_zz(const PixelImage& img, const SensingConfig& cfg);
MeasurementSet sense_dd(const PixelImage& img, const SensingConfig& cfg);

BbvParams bbv_measure(const PixelImage& img, const SensingConfig& cfg);
AllocationPlan allocate_bbv(const BbvParams& bbv, long long total_budget,
                            int n_blocks, int block);

MeasurementSet apply_plan(const PixelImage& img, const AllocationPlan& plan,
                          const SensingConfig& cfg);

/// DD threshold from image height and C_F (table lookup with exact rational
/// comparisons; heights below 384 use the 256 column, otherwise the 512 one).
double dd_threshold(int image_height, uint32_t cr_num, uint32_t cr_den);

/// Splits an integer budget proportionally to non-negative weights: floor
/// each share, hand out leftovers by largest fractional part (ties to the
/// lower index), clamp to caps and redistribute excess among non-full blocks
/// until the budget is placed. An all-zero weight vector splits uniformly.
std::vector<int> largest_remainder_allocate(const std::vector<double>& weights,
                                            long long budget,
                                            const std::vector<int>& caps);

/// Target and achieved measurement counts for an encoded set (for BBV the
/// achieved count includes the phase-1 probe budget M_BBV).
BudgetSummary measurement_budget(const MeasurementSet& ms);

}  // namespace abcs
