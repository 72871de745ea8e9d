#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abcs/denoise.hpp"
#include "abcs/image.hpp"
#include "abcs/operators.hpp"
#include "abcs/sensing.hpp"

namespace abcs {

enum class ReconMethod { Idct, Ista, Amp, Damp, DampD, Ida };

const char* recon_method_name(ReconMethod m);
std::optional<ReconMethod> recon_method_from_name(const std::string& name);

/// Thrown when an iterative solver produces non-finite values or an estimate
/// with sup-norm beyond 1e6.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

struct ReconConfig {
  ReconMethod method = ReconMethod::Idct;
  int iterations = 15;
  double damping = 2.0;  // D_F
  DenoiserSpec denoiser;
  double lambda = 1.0;  // soft-threshold multiplier for ISTA/AMP
  uint64_t seed = 42;   // divergence-probe seed

  void validate() const;
};

/// Solver state. The estimate lives in the pixel domain (the sparsifying
/// transform is folded into the operator); z is the residual recursion and
/// sigma the noise-level estimate ||z|| / sqrt(M), refreshed after every step.
struct ReconState {
  std::vector<double> x;
  std::vector<double> z;
  double sigma = 0.0;
  int iteration = 0;
};

/// Real-time decode: scatter each block's zigzag prefix and invert the block
/// transform. Identical to SensingOperator::adjoint on the payload.
PixelImage decode_idct(const MeasurementSet& ms);

/// warm = true starts from the direct decode x0 = A* y (z0 = y - A x0 is then
/// zero to rounding); warm = false starts from x0 = 0, z0 = y. Either way the
/// initial noise estimate is ||y|| / sqrt(M), the residual level of the zero
/// estimate, which seeds the denoiser annealing schedule.
ReconState init_state(const SensingOperator& op, std::span<const double> y, bool warm);

void ista_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
               double lambda);
void amp_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
              double lambda);
void damp_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
               const DenoiserSpec& denoiser, ReconMethod variant, double damping,
               uint64_t seed);

struct TraceRow {
  int iteration = 0;
  double residual_norm = 0.0;  // ||z||
  double sigma = 0.0;
  double psnr_db = 0.0;  // NaN when no reference was supplied
};

struct ReconResult {
  PixelImage image;
  std::vector<TraceRow> trace;
};

/// Runs the configured decoder. Iterative methods warm-start from the direct
/// decode and clamp the final estimate to [0, 255]; method Idct returns
/// decode_idct output bit-exactly. When a reference image is supplied the
/// trace carries per-iteration PSNR against its cropped region.
ReconResult reconstruct(const MeasurementSet& ms, const ReconConfig& cfg,
                        const PixelImage* reference = nullptr);

}  // namespace abcs
