#include "abcs/recon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "abcs/metrics.hpp"

namespace abcs {

const char* recon_method_name(ReconMethod m) {
  switch (m) {
    case ReconMethod::Idct:
      return "idct";
    case ReconMethod::Ista:
      return "ista";
    case ReconMethod::Amp:
      return "amp";
    case ReconMethod::Damp:
      return "damp";
    case ReconMethod::DampD:
      return "dampd";
    case ReconMethod::Ida:
      return "ida";
  }
  return "?";
}

std::optional<ReconMethod> recon_method_from_name(const std::string& name) {
  if (name == "idct") return ReconMethod::Idct;
  if (name == "ista") return ReconMethod::Ista;
  if (name == "amp") return ReconMethod::Amp;
  if (name == "damp") return ReconMethod::Damp;
  if (name == "dampd") return ReconMethod::DampD;
  if (name == "ida") return ReconMethod::Ida;
  return std::nullopt;
}

void ReconConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (damping < 1.0) throw std::invalid_argument("damping factor D_F must be >= 1");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
}

namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

void check_finite(const ReconState& state) {
  const int it = state.iteration;
  for (double v : state.x) {
    if (!std::isfinite(v)) {
      throw DivergenceError("solver diverged (non-finite estimate) at iteration " +
                                std::to_string(it),
                            it);
    }
    if (std::abs(v) > 1e6) {
      throw DivergenceError("solver diverged (|x| > 1e6) at iteration " + std::to_string(it),
                            it);
    }
  }
  for (double v : state.z) {
    if (!std::isfinite(v)) {
      throw DivergenceError("solver diverged (non-finite residual) at iteration " +
                                std::to_string(it),
                            it);
    }
  }
}

std::vector<double> pseudo_data(const ReconState& state, const SensingOperator& op) {
  std::vector<double> pseudo = op.adjoint(state.z);
  for (size_t i = 0; i < pseudo.size(); ++i) pseudo[i] += state.x[i];
  return pseudo;
}

void finish_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
                 std::vector<double> new_x, double onsager_coef) {
  const std::vector<double> ax = op.forward(new_x);
  std::vector<double> new_z(y.size());
  for (size_t i = 0; i < new_z.size(); ++i) {
    new_z[i] = y[i] - ax[i] + onsager_coef * state.z[i];
  }
  state.x = std::move(new_x);
  state.z = std::move(new_z);
  state.sigma = norm2(state.z) / std::sqrt(static_cast<double>(op.measurements()));
  ++state.iteration;
  check_finite(state);
}

uint64_t probe_seed_for(uint64_t seed, int iteration) {
  // splitmix64-style mix keeps probes independent per iteration while staying
  // reproducible for any two runs with equal (seed, iteration).
  uint64_t v = seed + 0x9E3779B97F4A7C15ULL * static_cast<uint64_t>(iteration + 1);
  v ^= v >> 30;
  v *= 0xBF58476D1CE4E5B9ULL;
  v ^= v >> 27;
  v *= 0x94D049BB133111EBULL;
  v ^= v >> 31;
  return v;
}

}  // namespace

PixelImage decode_idct(const MeasurementSet& ms) {
  const SensingOperator op = SensingOperator::from(ms);
  if (static_cast<long long>(ms.coeffs.size()) != op.measurements()) {
    throw FormatError("decode: payload length does not match counts");
  }
  PixelImage img(op.field_height(), op.field_width());
  img.data = op.adjoint(ms.coeffs);
  return img;
}

ReconState init_state(const SensingOperator& op, std::span<const double> y, bool warm) {
  if (static_cast<long long>(y.size()) != op.measurements()) {
    throw std::invalid_argument("init_state: measurement vector length mismatch");
  }
  ReconState state;
  state.x = warm ? op.adjoint(y) : std::vector<double>(op.field_size(), 0.0);
  const std::vector<double> ax = op.forward(state.x);
  state.z.resize(y.size());
  for (size_t i = 0; i < y.size(); ++i) state.z[i] = y[i] - ax[i];
  state.sigma = norm2(y) / std::sqrt(static_cast<double>(op.measurements()));
  state.iteration = 0;
  return state;
}

void ista_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
               double lambda) {
  std::vector<double> pseudo = pseudo_data(state, op);
  const double threshold = lambda * state.sigma;
  for (double& v : pseudo) {
    const double mag = std::abs(v) - threshold;
    v = (mag > 0.0) ? std::copysign(mag, v) : 0.0;
  }
  finish_step(state, op, y, std::move(pseudo), 0.0);
}

void amp_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
              double lambda) {
  const std::vector<double> pseudo = pseudo_data(state, op);
  const double threshold = lambda * state.sigma;
  std::vector<double> thresholded(pseudo.size());
  long long active = 0;
  for (size_t i = 0; i < pseudo.size(); ++i) {
    const double mag = std::abs(pseudo[i]) - threshold;
    if (mag > 0.0) {
      thresholded[i] = std::copysign(mag, pseudo[i]);
      ++active;
    }
  }
  // Onsager correction (1/delta) <eta'> z; by convention absent on the first
  // iteration, which therefore matches a plain ISTA step.
  double onsager = 0.0;
  if (state.iteration > 0) {
    const double delta =
        static_cast<double>(op.measurements()) / static_cast<double>(op.field_size());
    const double mean_derivative =
        static_cast<double>(active) / static_cast<double>(pseudo.size());
    onsager = mean_derivative / delta;
  }
  finish_step(state, op, y, std::move(thresholded), onsager);
}

void damp_step(ReconState& state, const SensingOperator& op, std::span<const double> y,
               const DenoiserSpec& denoiser, ReconMethod variant, double damping,
               uint64_t seed) {
  if (variant != ReconMethod::Damp && variant != ReconMethod::DampD &&
      variant != ReconMethod::Ida) {
    throw std::invalid_argument("damp_step: variant must be damp, dampd or ida");
  }
  const std::vector<double> pseudo = pseudo_data(state, op);
  PixelImage field(op.field_height(), op.field_width());
  field.data = pseudo;
  PixelImage denoised = denoise(denoiser, field, state.sigma);

  double onsager = 0.0;
  if (variant == ReconMethod::Ida) {
    onsager = 1.0 / damping;
  } else {
    double peak = 0.0;
    for (double v : pseudo) peak = std::max(peak, std::abs(v));
    const double epsilon = peak * 1e-3 + 1e-6;
    const double div = divergence(denoiser, field, state.sigma, epsilon,
                                  probe_seed_for(seed, state.iteration));
    const double delta =
        static_cast<double>(op.measurements()) / static_cast<double>(op.field_size());
    onsager = div / (delta * static_cast<double>(op.measurements()));
    if (variant == ReconMethod::DampD) onsager /= damping;
  }
  finish_step(state, op, y, std::move(denoised.data), onsager);
}

ReconResult reconstruct(const MeasurementSet& ms, const ReconConfig& cfg,
                        const PixelImage* reference) {
  cfg.validate();
  ReconResult result;

  std::optional<PixelImage> ref_cropped;
  if (reference) {
    const BlockGrid grid = ms.grid();
    if (reference->height < grid.cropped_height() ||
        reference->width < grid.cropped_width()) {
      throw std::invalid_argument("reconstruct: reference smaller than decoded image");
    }
    ref_cropped = crop_to_grid(*reference, grid);
  }
  auto trace_psnr = [&](const PixelImage& img) {
    return ref_cropped ? psnr(*ref_cropped, img) : std::numeric_limits<double>::quiet_NaN();
  };

  if (cfg.method == ReconMethod::Idct) {
    result.image = decode_idct(ms);
    if (ref_cropped) {
      result.trace.push_back({0, 0.0, 0.0, trace_psnr(result.image)});
    }
    return result;
  }

  const SensingOperator op = SensingOperator::from(ms);
  const std::span<const double> y(ms.coeffs);
  ReconState state = init_state(op, y, /*warm=*/true);

  PixelImage current(op.field_height(), op.field_width());
  auto record = [&](const ReconState& s) {
    current.data = s.x;
    result.trace.push_back({s.iteration, norm2(s.z), s.sigma, trace_psnr(current)});
  };
  record(state);

  for (int t = 0; t < cfg.iterations; ++t) {
    switch (cfg.method) {
      case ReconMethod::Ista:
        ista_step(state, op, y, cfg.lambda);
        break;
      case ReconMethod::Amp:
        amp_step(state, op, y, cfg.lambda);
        break;
      case ReconMethod::Damp:
      case ReconMethod::DampD:
      case ReconMethod::Ida:
        damp_step(state, op, y, cfg.denoiser, cfg.method, cfg.damping, cfg.seed);
        break;
      default:
        throw std::logic_error("reconstruct: unexpected method");
    }
    record(state);
  }

  result.image = PixelImage(op.field_height(), op.field_width());
  result.image.data = std::move(state.x);
  for (double& v : result.image.data) v = std::clamp(v, 0.0, 255.0);
  return result;
}

}  // namespace abcs
