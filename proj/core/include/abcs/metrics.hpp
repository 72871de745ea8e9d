#pragma once

#include <vector>

#include "abcs/image.hpp"
#include "abcs/sensing.hpp"

namespace abcs {

struct QualityReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  double mse = 0.0;
};

/// Mean squared error over equal-sized images.
double mse(const PixelImage& ref, const PixelImage& test);

/// 10 log10(255^2 / mse); +infinity when the images match exactly.
double psnr(const PixelImage& ref, const PixelImage& test);

/// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5), K1 = 0.01,
/// K2 = 0.03, dynamic range 255. Requires min(H, W) >= 11.
double ssim(const PixelImage& ref, const PixelImage& test);

QualityReport quality(const PixelImage& ref, const PixelImage& test);

/// Full-sensing oracle decodes: keep the largest-magnitude transform
/// coefficients at their true positions, per block (THB) or globally across
/// the image (THI), then invert. Ties prefer the lower zigzag index, then
/// the lower block index.
struct ThresholdDecode {
  PixelImage image;
  std::vector<int> counts;  // retained coefficients per block
};

ThresholdDecode thb(const PixelImage& img, const SensingConfig& cfg);
ThresholdDecode thi(const PixelImage& img, const SensingConfig& cfg);

}  // namespace abcs
