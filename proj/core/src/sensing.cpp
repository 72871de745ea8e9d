#include "abcs/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "abcs/dct.hpp"
#include "abcs/zigzag.hpp"

namespace abcs {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::ZZ:
      return "zz";
    case Algorithm::BBV:
      return "bbv";
    case Algorithm::DD:
      return "dd";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "zz") return Algorithm::ZZ;
  if (name == "bbv") return Algorithm::BBV;
  if (name == "dd") return Algorithm::DD;
  return std::nullopt;
}

void SensingConfig::validate() const {
  if (block < 2 || block > 255) {
    throw std::invalid_argument("block size must be in [2, 255]");
  }
  if (cr_num == 0 || cr_den == 0) throw std::invalid_argument("C_R must be positive");
  if (cr_num > cr_den) throw std::invalid_argument("C_R must be in (0, 1]");
  if (threshold && *threshold < 0) throw std::invalid_argument("threshold must be >= 0");
}

long long SensingConfig::target_measurements(long long total_pixels) const {
  return static_cast<long long>(static_cast<unsigned long long>(cr_num) * total_pixels /
                                cr_den);
}

std::pair<uint32_t, uint32_t> SensingConfig::parse_ratio(const std::string& text) {
  auto fail = [&] { throw std::invalid_argument("cannot parse ratio: '" + text + "'"); };
  unsigned long long num = 0, den = 1;
  size_t slash = text.find('/');
  auto digits = [&](const std::string& s) -> unsigned long long {
    if (s.empty() || s.size() > 9) fail();
    unsigned long long v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') fail();
      v = v * 10 + static_cast<unsigned long long>(c - '0');
    }
    return v;
  };
  if (slash != std::string::npos) {
    num = digits(text.substr(0, slash));
    den = digits(text.substr(slash + 1));
  } else {
    size_t dot = text.find('.');
    std::string whole = (dot == std::string::npos) ? text : text.substr(0, dot);
    std::string frac = (dot == std::string::npos) ? "" : text.substr(dot + 1);
    if (whole.empty() && frac.empty()) fail();
    if (frac.size() > 9) fail();
    unsigned long long scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    num = (whole.empty() ? 0 : digits(whole)) * scale +
          (frac.empty() ? 0 : digits(frac));
    den = scale;
  }
  if (num == 0 || den == 0) fail();
  unsigned long long g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (num > UINT32_MAX || den > UINT32_MAX) fail();
  return {static_cast<uint32_t>(num), static_cast<uint32_t>(den)};
}

SensingConfig& SensingConfig::set_cr(const std::string& text) {
  auto [n, d] = parse_ratio(text);
  cr_num = n;
  cr_den = d;
  return *this;
}

SensingConfig& SensingConfig::set_cr(uint32_t num, uint32_t den) {
  uint32_t g = std::gcd(num, den);
  if (g == 0) throw std::invalid_argument("C_R must be positive");
  cr_num = num / g;
  cr_den = den / g;
  return *this;
}

long long AllocationPlan::actual() const {
  long long total = shared_overhead;
  for (int v : phase1) total += v;
  for (int v : phase2) total += v;
  return total;
}

long long MeasurementSet::total_coeffs() const {
  long long total = 0;
  for (uint16_t c : counts) total += c;
  return total;
}

std::vector<int> largest_remainder_allocate(const std::vector<double>& weights,
                                            long long budget,
                                            const std::vector<int>& caps) {
  const size_t n = weights.size();
  if (caps.size() != n) throw std::invalid_argument("allocate: weights/caps size mismatch");
  if (budget < 0) throw std::invalid_argument("allocate: negative budget");
  long long capacity = 0;
  for (size_t i = 0; i < n; ++i) {
    if (weights[i] < 0 || !std::isfinite(weights[i])) {
      throw std::invalid_argument("allocate: weights must be finite and >= 0");
    }
    if (caps[i] < 0) throw std::invalid_argument("allocate: negative cap");
    capacity += caps[i];
  }
  if (budget > capacity) throw std::invalid_argument("allocate: budget exceeds capacity");

  std::vector<int> alloc(n, 0);
  long long remaining = budget;
  std::vector<size_t> active;
  for (size_t i = 0; i < n; ++i) {
    if (caps[i] > 0) active.push_back(i);
  }

  while (remaining > 0) {
    long double total_weight = 0.0L;
    for (size_t i : active) total_weight += weights[i];
    const bool uniform = (total_weight <= 0.0L);
    if (uniform) total_weight = static_cast<long double>(active.size());

    std::vector<long long> give(active.size(), 0);
    std::vector<std::pair<long double, size_t>> fractions;  // (frac, position in active)
    long long handed = 0;
    for (size_t k = 0; k < active.size(); ++k) {
      const long double w = uniform ? 1.0L : static_cast<long double>(weights[active[k]]);
      const long double share = static_cast<long double>(remaining) * w / total_weight;
      const long long whole = static_cast<long long>(share);
      give[k] = whole;
      handed += whole;
      fractions.emplace_back(share - static_cast<long double>(whole), k);
    }
    std::sort(fractions.begin(), fractions.end(),
              [&](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return active[a.second] < active[b.second];
              });
    long long leftover = remaining - handed;
    for (size_t j = 0; j < fractions.size() && leftover > 0; ++j, --leftover) {
      ++give[fractions[j].second];
    }

    // Clamp to caps; capped blocks leave the pool, their excess re-enters
    // the budget for the next round.
    std::vector<size_t> still_open;
    for (size_t k = 0; k < active.size(); ++k) {
      const size_t i = active[k];
      const long long room = caps[i] - alloc[i];
      const long long taken = std::min(give[k], room);
      alloc[i] += static_cast<int>(taken);
      remaining -= taken;
      if (alloc[i] < caps[i]) still_open.push_back(i);
    }
    active = std::move(still_open);
    if (remaining > 0 && active.empty()) {
      throw std::logic_error("allocate: capacity exhausted before budget placed");
    }
  }
  return alloc;
}

namespace {

std::vector<int> balanced_counts(long long measurements, int n_blocks, int block) {
  const long long per_block = measurements / n_blocks;
  const long long extra = measurements % n_blocks;
  std::vector<int> counts(n_blocks);
  for (int i = 0; i < n_blocks; ++i) {
    long long c = per_block + (i < extra ? 1 : 0);
    counts[i] = static_cast<int>(std::min<long long>(c, static_cast<long long>(block) * block));
  }
  return counts;
}

MeasurementSet gather_prefixes(const PixelImage& img, const BlockGrid& grid,
                               const std::vector<int>& counts, const SensingConfig& cfg,
                               Algorithm algo, double threshold) {
  const int B = grid.block;
  const BlockDct dct(B);
  const ZigzagOrder zz = zigzag_order(B);
  MeasurementSet ms;
  ms.height = img.height;
  ms.width = img.width;
  ms.block = B;
  ms.algorithm = algo;
  ms.cr_num = cfg.cr_num;
  ms.cr_den = cfg.cr_den;
  ms.threshold = threshold;
  ms.counts.assign(counts.begin(), counts.end());

  long long total = 0;
  for (int c : counts) total += c;
  ms.coeffs.reserve(total);

  std::vector<double> blockbuf(static_cast<size_t>(B) * B);
  std::vector<double> coefbuf(blockbuf.size());
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      for (int r = 0; r < B; ++r) {
        const double* src = &img.data[static_cast<size_t>(br * B + r) * img.width +
                                      static_cast<size_t>(bc) * B];
        std::copy(src, src + B, blockbuf.begin() + static_cast<size_t>(r) * B);
      }
      dct.forward(blockbuf, coefbuf);
      const int m = counts[static_cast<size_t>(br) * grid.cols + bc];
      for (int k = 0; k < m; ++k) ms.coeffs.push_back(coefbuf[zz.index[k]]);
    }
  }
  return ms;
}

}  // namespace

MeasurementSet sense_zz(const PixelImage& img, const SensingConfig& cfg) {
  cfg.validate();
  const BlockGrid grid = make_grid(img.height, img.width, cfg.block);
  const long long m_target = cfg.target_measurements(grid.pixel_count());
  const auto counts = balanced_counts(m_target, grid.count(), cfg.block);
  return gather_prefixes(img, grid, counts, cfg, Algorithm::ZZ, 0.0);
}

BbvParams bbv_measure(const PixelImage& img, const SensingConfig& cfg) {
  cfg.validate();
  const BlockGrid grid = make_grid(img.height, img.width, cfg.block);
  const int B = grid.block;
  const long long L = cfg.cf_floor();

  BbvParams bbv;
  bbv.stride = L;
  bbv.offset = static_cast<int>(L / 2);
  bbv.per_side = (L > B) ? 0 : static_cast<int>(B / L);
  bbv.variation.assign(grid.count(), 0.0);
  if (bbv.per_side == 0) {
    bbv.phase1_total = 0;
    return bbv;  // caller falls back to non-adaptive sensing
  }

  const long long cropped_extent = grid.cropped_height() + grid.cropped_width();
  bbv.phase1_total = 2LL * bbv.per_side * grid.count() + (cropped_extent + L - 1) / L;

  // One probe is |P(p+1) - P(p)| in 1-based in-block coordinates; probes whose
  // indices leave the block (possible only for L = 1, offset 0) are skipped.
  auto probe_cols = [&](int j) -> std::pair<int, int> {
    const long long p = bbv.offset + static_cast<long long>(j) * L;  // 1-based
    if (p < 1 || p + 1 > B) return {-1, -1};
    return {static_cast<int>(p - 1), static_cast<int>(p)};  // 0-based pair
  };

  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const size_t bi = static_cast<size_t>(br) * grid.cols + bc;
      const int r0 = br * B;
      const int c0 = bc * B;
      // Bottom/right probes come from the first row/column of the adjacent
      // block; blocks on the image edge measure their own last row/column.
      const int bottom_row = (br + 1 < grid.rows) ? r0 + B : r0 + B - 1;
      const int right_col = (bc + 1 < grid.cols) ? c0 + B : c0 + B - 1;

      double sum = 0.0;
      for (int j = 0; j < bbv.per_side; ++j) {
        auto [a, b] = probe_cols(j);
        if (a < 0) continue;
        const double top = std::abs(img.at(r0, c0 + b) - img.at(r0, c0 + a));
        const double left = std::abs(img.at(r0 + b, c0) - img.at(r0 + a, c0));
        const double bottom = std::abs(img.at(bottom_row, c0 + b) - img.at(bottom_row, c0 + a));
        const double right = std::abs(img.at(r0 + b, right_col) - img.at(r0 + a, right_col));
        sum += top + left + bottom + right;
        // Unique probes only: top/left belong to this block, bottom/right are
        // shared with the neighbour except on the image edge.
        bbv.side_values.push_back(top);
        bbv.side_values.push_back(left);
        if (br + 1 == grid.rows) bbv.side_values.push_back(bottom);
        if (bc + 1 == grid.cols) bbv.side_values.push_back(right);
      }
      bbv.variation[bi] = sum;
    }
  }
  return bbv;
}

AllocationPlan allocate_bbv(const BbvParams& bbv, long long total_budget, int n_blocks,
                            int block) {
  if (static_cast<int>(bbv.variation.size()) != n_blocks) {
    throw std::invalid_argument("allocate_bbv: variation/block count mismatch");
  }
  if (total_budget <= bbv.phase1_total) {
    throw std::invalid_argument(
        "allocate_bbv: measurement budget does not cover the phase-1 probes (M <= M_BBV)");
  }
  const int per_block_probes = 2 * bbv.per_side;
  const int cap = block * block - per_block_probes;
  if (cap < 0) throw std::invalid_argument("allocate_bbv: probes exceed block capacity");

  AllocationPlan plan;
  plan.block_size = block;
  plan.phase1_is_dct = false;
  plan.phase1.assign(n_blocks, per_block_probes);
  plan.target = total_budget;
  plan.shared_overhead =
      bbv.phase1_total - static_cast<long long>(per_block_probes) * n_blocks;
  plan.phase2 = largest_remainder_allocate(bbv.variation, total_budget - bbv.phase1_total,
                                           std::vector<int>(n_blocks, cap));
  return plan;
}

MeasurementSet sense_dd(const PixelImage& img, const SensingConfig& cfg) {
  cfg.validate();
  const BlockGrid grid = make_grid(img.height, img.width, cfg.block);
  const int B = grid.block;
  const int n_blocks = grid.count();
  const long long phase1 = static_cast<long long>(B) * B * cfg.cr_num / (2ULL * cfg.cr_den);
  const double T = cfg.threshold ? *cfg.threshold
                                 : dd_threshold(img.height, cfg.cr_num, cfg.cr_den);

  const BlockDct dct(B);
  const ZigzagOrder zz = zigzag_order(B);

  // Full scan per block so phase 2 can extend the prefix without a second
  // transform pass.
  std::vector<double> scanned(static_cast<size_t>(n_blocks) * B * B);
  std::vector<double> significant(n_blocks, 0.0);  // n_i of the allocation rule
  std::vector<double> blockbuf(static_cast<size_t>(B) * B);
  std::vector<double> coefbuf(blockbuf.size());
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const size_t bi = static_cast<size_t>(br) * grid.cols + bc;
      for (int r = 0; r < B; ++r) {
        const double* src = &img.data[static_cast<size_t>(br * B + r) * img.width +
                                      static_cast<size_t>(bc) * B];
        std::copy(src, src + B, blockbuf.begin() + static_cast<size_t>(r) * B);
      }
      dct.forward(blockbuf, coefbuf);
      double* dst = &scanned[bi * blockbuf.size()];
      for (size_t k = 0; k < blockbuf.size(); ++k) dst[k] = coefbuf[zz.index[k]];
      int n_i = 0;
      for (long long k = 0; k < phase1; ++k) {
        if (std::abs(dst[k]) > T) ++n_i;
      }
      significant[bi] = n_i;
    }
  }

  const int cap = static_cast<int>(static_cast<long long>(B) * B - phase1);
  const auto phase2 = largest_remainder_allocate(significant, n_blocks * phase1,
                                                 std::vector<int>(n_blocks, cap));

  MeasurementSet ms;
  ms.height = img.height;
  ms.width = img.width;
  ms.block = B;
  ms.algorithm = Algorithm::DD;
  ms.cr_num = cfg.cr_num;
  ms.cr_den = cfg.cr_den;
  ms.threshold = T;
  ms.counts.resize(n_blocks);
  long long total = 0;
  for (int i = 0; i < n_blocks; ++i) {
    ms.counts[i] = static_cast<uint16_t>(phase1 + phase2[i]);
    total += ms.counts[i];
  }
  ms.coeffs.reserve(total);
  for (int i = 0; i < n_blocks; ++i) {
    const double* src = &scanned[static_cast<size_t>(i) * B * B];
    ms.coeffs.insert(ms.coeffs.end(), src, src + ms.counts[i]);
  }
  return ms;
}

MeasurementSet apply_plan(const PixelImage& img, const AllocationPlan& plan,
                          const SensingConfig& cfg) {
  cfg.validate();
  const BlockGrid grid = make_grid(img.height, img.width, cfg.block);
  if (plan.block_size != cfg.block ||
      static_cast<int>(plan.phase2.size()) != grid.count() ||
      plan.phase1.size() != plan.phase2.size()) {
    throw std::invalid_argument("apply_plan: plan does not match image/config");
  }
  std::vector<int> counts(grid.count());
  for (int i = 0; i < grid.count(); ++i) {
    counts[i] = plan.coeff_count(i);
    if (counts[i] < 0 || counts[i] > cfg.block * cfg.block) {
      throw std::invalid_argument("apply_plan: per-block count out of range");
    }
  }
  return gather_prefixes(img, grid, counts, cfg, cfg.algorithm, cfg.threshold.value_or(0.0));
}

double dd_threshold(int image_height, uint32_t cr_num, uint32_t cr_den) {
  // C_F = cr_den / cr_num, compared exactly against the tabulated breakpoints.
  const unsigned long long num = cr_num, den = cr_den;
  if (image_height < 384) {
    if (den <= 2 * num) return 15.0;
    if (100 * den < 333 * num) return 30.0;
    return 60.0;
  }
  if (den <= 2 * num) return 15.0;
  if (den < 10 * num) return 30.0;
  return 60.0;
}

MeasurementSet sense(const PixelImage& img, const SensingConfig& cfg, std::string* warning) {
  cfg.validate();
  auto warn = [&](const std::string& msg) {
    if (warning) {
      if (!warning->empty()) *warning += "\n";
      *warning += msg;
    }
  };
  auto fall_back = [&](const std::string& why) {
    warn(why + "; reverting to non-adaptive zz");
    SensingConfig zz_cfg = cfg;
    zz_cfg.algorithm = Algorithm::ZZ;
    zz_cfg.threshold.reset();
    return sense_zz(img, zz_cfg);
  };

  switch (cfg.algorithm) {
    case Algorithm::ZZ: {
      MeasurementSet ms = sense_zz(img, cfg);
      // Balanced rounding hands the remainder to the leading blocks, so a
      // starved allocation shows up at the back.
      if (!ms.counts.empty() && ms.counts.back() == 0) {
        warn("C_R is so low that some blocks receive zero coefficients");
      }
      return ms;
    }
    case Algorithm::BBV: {
      if (cfg.cr_num == cfg.cr_den) {
        return fall_back("full-rate sensing leaves nothing to adapt");
      }
      if (cfg.cf_floor() > cfg.block) {
        return fall_back("floor(C_F) = " + std::to_string(cfg.cf_floor()) +
                         " exceeds block size " + std::to_string(cfg.block));
      }
      const BlockGrid grid = make_grid(img.height, img.width, cfg.block);
      BbvParams bbv = bbv_measure(img, cfg);
      AllocationPlan plan = allocate_bbv(bbv, cfg.target_measurements(grid.pixel_count()),
                                         grid.count(), cfg.block);
      MeasurementSet ms = apply_plan(img, plan, cfg);
      ms.side = std::move(bbv.side_values);
      return ms;
    }
    case Algorithm::DD: {
      const long long phase1 =
          static_cast<long long>(cfg.block) * cfg.block * cfg.cr_num / (2ULL * cfg.cr_den);
      if (phase1 == 0) {
        return fall_back("phase-1 budget floor(B^2/(2 C_F)) is zero at this C_R");
      }
      return sense_dd(img, cfg);
    }
  }
  throw std::logic_error("sense: unknown algorithm");
}

BudgetSummary measurement_budget(const MeasurementSet& ms) {
  const BlockGrid grid = ms.grid();
  BudgetSummary summary;
  summary.target = static_cast<long long>(
      static_cast<unsigned long long>(ms.cr_num) * grid.pixel_count() / ms.cr_den);
  summary.actual = ms.total_coeffs();
  if (ms.algorithm == Algorithm::BBV) {
    const long long L = static_cast<long long>(ms.cr_den / ms.cr_num);
    if (L >= 1 && L <= grid.block) {
      const long long per_side = grid.block / L;
      const long long extent = grid.cropped_height() + grid.cropped_width();
      summary.actual += 2 * per_side * grid.count() + (extent + L - 1) / L;
    }
  }
  return summary;
}

}  // namespace abcs
