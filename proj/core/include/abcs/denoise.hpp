#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "abcs/image.hpp"

namespace abcs {

/// Named denoiser D_sigma with a scalar parameter map. Shipped denoisers:
///   "identity"       passes the field through unchanged
///   "blur"           separable Gaussian, spatial width sigma/sigma_scale
///                    (sigma_scale default 25)
///   "dct_threshold"  8x8 block-DCT soft thresholding at k*sigma with
///                    half-block overlap aggregation, DC passes through
///                    (k default 2.7, block default 8)
struct DenoiserSpec {
  std::string name = "dct_threshold";
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
};

/// Applies D_sigma. Shape-preserving, deterministic, operates on unclamped
/// real fields. Throws std::invalid_argument for unknown names.
PixelImage denoise(const DenoiserSpec& spec, const PixelImage& field, double sigma);

/// Monte-Carlo divergence estimate of D_sigma at the given field:
///   div ~= (1/eps) <b, D(x + eps b) - D(x)>
/// with b a Rademacher probe drawn from the seed. Deterministic given
/// (spec, field, sigma, epsilon, seed).
double divergence(const DenoiserSpec& spec, const PixelImage& field, double sigma,
                  double epsilon, uint64_t seed);

}  // namespace abcs
