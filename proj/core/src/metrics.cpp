#include "abcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "abcs/dct.hpp"
#include "abcs/zigzag.hpp"

namespace abcs {

namespace {

void require_same_dims(const PixelImage& a, const PixelImage& b) {
  if (a.height != b.height || a.width != b.width) {
    throw std::invalid_argument("metric: image dimensions differ");
  }
}

constexpr int kWindow = 11;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

// Gaussian-window means over every valid (fully interior) window position.
std::vector<double> windowed_mean(const std::vector<double>& img, int H, int W,
                                  const std::vector<double>& kernel) {
  const int Hv = H - kWindow + 1;
  const int Wv = W - kWindow + 1;
  std::vector<double> horiz(static_cast<size_t>(H) * Wv);
  for (int r = 0; r < H; ++r) {
    for (int c = 0; c < Wv; ++c) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += kernel[i] * img[static_cast<size_t>(r) * W + c + i];
      horiz[static_cast<size_t>(r) * Wv + c] = acc;
    }
  }
  std::vector<double> out(static_cast<size_t>(Hv) * Wv);
  for (int r = 0; r < Hv; ++r) {
    for (int c = 0; c < Wv; ++c) {
      double acc = 0.0;
      for (int j = 0; j < kWindow; ++j) acc += kernel[j] * horiz[static_cast<size_t>(r + j) * Wv + c];
      out[static_cast<size_t>(r) * Wv + c] = acc;
    }
  }
  return out;
}

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

}  // namespace

double mse(const PixelImage& ref, const PixelImage& test) {
  require_same_dims(ref, test);
  double acc = 0.0;
  for (size_t i = 0; i < ref.data.size(); ++i) {
    const double d = ref.data[i] - test.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(ref.data.size());
}

double psnr(const PixelImage& ref, const PixelImage& test) {
  const double err = mse(ref, test);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(255.0 * 255.0 / err);
}

double ssim(const PixelImage& ref, const PixelImage& test) {
  require_same_dims(ref, test);
  if (ref.height < kWindow || ref.width < kWindow) {
    throw std::invalid_argument("ssim: images smaller than the 11x11 window");
  }
  std::vector<double> kernel(kWindow);
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    kernel[i] = std::exp(-0.5 * d * d / (1.5 * 1.5));
    sum += kernel[i];
  }
  for (double& k : kernel) k /= sum;

  const int H = ref.height, W = ref.width;
  const size_t n = ref.data.size();
  std::vector<double> xx(n), yy(n), xy(n);
  for (size_t i = 0; i < n; ++i) {
    xx[i] = ref.data[i] * ref.data[i];
    yy[i] = test.data[i] * test.data[i];
    xy[i] = ref.data[i] * test.data[i];
  }
  const auto mu_x = windowed_mean(ref.data, H, W, kernel);
  const auto mu_y = windowed_mean(test.data, H, W, kernel);
  const auto m_xx = windowed_mean(xx, H, W, kernel);
  const auto m_yy = windowed_mean(yy, H, W, kernel);
  const auto m_xy = windowed_mean(xy, H, W, kernel);

  double acc = 0.0;
  for (size_t i = 0; i < mu_x.size(); ++i) {
    const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
    const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
    const double cov = m_xy[i] - mu_x[i] * mu_y[i];
    acc += ((2.0 * mu_x[i] * mu_y[i] + kC1) * (2.0 * cov + kC2)) /
           ((mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + kC1) * (var_x + var_y + kC2));
  }
  return acc / static_cast<double>(mu_x.size());
}

QualityReport quality(const PixelImage& ref, const PixelImage& test) {
  QualityReport report;
  report.mse = mse(ref, test);
  report.psnr_db = (report.mse == 0.0) ? std::numeric_limits<double>::infinity()
                                       : 10.0 * std::log10(255.0 * 255.0 / report.mse);
  report.ssim = ssim(ref, test);
  return report;
}

namespace {

// Shared THB/THI machinery: full per-block transform, keep a chosen subset of
// coefficients, invert.
ThresholdDecode threshold_decode(const PixelImage& img, const SensingConfig& cfg,
                                 bool global) {
  cfg.validate();
  const BlockGrid grid = make_grid(img.height, img.width, cfg.block);
  const int B = grid.block;
  const int n_blocks = grid.count();
  const size_t area = static_cast<size_t>(B) * B;
  const long long m_target = cfg.target_measurements(grid.pixel_count());

  const BlockDct dct(B);
  const ZigzagOrder zz = zigzag_order(B);

  std::vector<double> all(static_cast<size_t>(n_blocks) * area);
  std::vector<double> blockbuf(area), coefbuf(area);
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const size_t bi = static_cast<size_t>(br) * grid.cols + bc;
      for (int r = 0; r < B; ++r) {
        const double* src = &img.data[static_cast<size_t>(br * B + r) * img.width +
                                      static_cast<size_t>(bc) * B];
        std::copy(src, src + B, blockbuf.begin() + static_cast<size_t>(r) * B);
      }
      dct.forward(blockbuf, coefbuf);
      std::copy(coefbuf.begin(), coefbuf.end(), all.begin() + bi * area);
    }
  }

  std::vector<char> keep(all.size(), 0);
  ThresholdDecode out;
  out.counts.assign(n_blocks, 0);

  if (global) {
    std::vector<long long> order(all.size());
    std::iota(order.begin(), order.end(), 0LL);
    auto better = [&](long long a, long long b) {
      const double ma = std::abs(all[a]), mb = std::abs(all[b]);
      if (ma != mb) return ma > mb;
      const int ra = zz.rank[a % area], rb = zz.rank[b % area];
      if (ra != rb) return ra < rb;
      return a / static_cast<long long>(area) < b / static_cast<long long>(area);
    };
    const long long m = std::min<long long>(m_target, static_cast<long long>(all.size()));
    std::nth_element(order.begin(), order.begin() + m, order.end(), better);
    std::sort(order.begin(), order.begin() + m, better);
    for (long long i = 0; i < m; ++i) {
      keep[order[i]] = 1;
      ++out.counts[order[i] / static_cast<long long>(area)];
    }
  } else {
    const auto counts = balanced_counts(m_target, n_blocks, B);
    std::vector<int> order(area);
    for (int bi = 0; bi < n_blocks; ++bi) {
      const double* c = &all[static_cast<size_t>(bi) * area];
      std::iota(order.begin(), order.end(), 0);
      const int m = counts[bi];
      auto better = [&](int a, int b) {
        const double ma = std::abs(c[a]), mb = std::abs(c[b]);
        if (ma != mb) return ma > mb;
        return zz.rank[a] < zz.rank[b];
      };
      std::nth_element(order.begin(), order.begin() + m, order.end(), better);
      for (int i = 0; i < m; ++i) keep[static_cast<size_t>(bi) * area + order[i]] = 1;
      out.counts[bi] = m;
    }
  }

  PixelImage decoded(grid.cropped_height(), grid.cropped_width());
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const size_t bi = static_cast<size_t>(br) * grid.cols + bc;
      for (size_t k = 0; k < area; ++k) {
        coefbuf[k] = keep[bi * area + k] ? all[bi * area + k] : 0.0;
      }
      dct.inverse(coefbuf, blockbuf);
      for (int r = 0; r < B; ++r) {
        std::copy(blockbuf.begin() + static_cast<size_t>(r) * B,
                  blockbuf.begin() + static_cast<size_t>(r + 1) * B,
                  &decoded.data[static_cast<size_t>(br * B + r) * decoded.width +
                                static_cast<size_t>(bc) * B]);
      }
    }
  }
  out.image = std::move(decoded);
  return out;
}

}  // namespace

ThresholdDecode thb(const PixelImage& img, const SensingConfig& cfg) {
  return threshold_decode(img, cfg, /*global=*/false);
}

ThresholdDecode thi(const PixelImage& img, const SensingConfig& cfg) {
  return threshold_decode(img, cfg, /*global=*/true);
}

}  // namespace abcs
