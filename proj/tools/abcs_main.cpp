// Command-line front end: sense images into measurement containers, decode
// them back, and sweep benchmark grids.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "abcs/container.hpp"
#include "abcs/image.hpp"
#include "abcs/metrics.hpp"
#include "abcs/recon.hpp"
#include "abcs/sensing.hpp"
#include "abcs/synth.hpp"

namespace fs = std::filesystem;
using namespace abcs;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

std::string fmt(double value, int precision) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

template <typename Fn>
double median_ms(Fn&& fn, int runs = 5) {
  std::vector<long long> us(runs);
  for (int i = 0; i < runs; ++i) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    us[i] = std::chrono::duration_cast<std::chrono::microseconds>(stop - start).count();
  }
  std::sort(us.begin(), us.end());
  return static_cast<double>(us[runs / 2]) / 1000.0;
}

struct SenseArgs {
  std::string input;
  std::string output;
  std::string algo = "zz";
  std::string cr;
  int block = 32;
  double threshold = -1.0;
};

int run_sense(const SenseArgs& args) {
  SensingConfig cfg;
  cfg.block = args.block;
  cfg.set_cr(args.cr);
  const auto algo = algorithm_from_name(args.algo);
  if (!algo) throw std::invalid_argument("unknown algorithm: " + args.algo);
  cfg.algorithm = *algo;
  if (args.threshold >= 0) cfg.threshold = args.threshold;
  cfg.validate();

  const PixelImage img = load_pgm(args.input);
  std::string warning;
  const MeasurementSet ms = sense(img, cfg, &warning);
  if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
  write_measurement_set(ms, args.output);

  const BudgetSummary budget = measurement_budget(ms);
  std::cout << "algorithm:  " << algorithm_name(ms.algorithm) << "\n"
            << "image:      " << img.width << "x" << img.height << ", block " << ms.block
            << " (" << ms.grid().count() << " blocks)\n"
            << "M_target:   " << budget.target << "\n"
            << "M_actual:   " << budget.actual << "\n";

  uint16_t lo = ms.counts.front(), hi = ms.counts.front();
  long long sum = 0;
  for (uint16_t c : ms.counts) {
    lo = std::min(lo, c);
    hi = std::max(hi, c);
    sum += c;
  }
  std::cout << "coeffs/block: min " << lo << ", mean "
            << fmt(static_cast<double>(sum) / ms.counts.size(), 1) << ", max " << hi << "\n";
  const int bins = 8;
  const int span = ms.block * ms.block;
  std::vector<int> hist(bins, 0);
  for (uint16_t c : ms.counts) {
    int b = static_cast<int>(static_cast<long long>(c) * bins / (span + 1));
    ++hist[std::min(b, bins - 1)];
  }
  for (int b = 0; b < bins; ++b) {
    const int from = b * span / bins;
    const int to = (b + 1) * span / bins - 1;
    std::printf("  [%5d..%5d] %d\n", from, to, hist[b]);
  }
  std::cout << "wrote " << args.output << "\n";
  return kExitOk;
}

struct ReconstructArgs {
  std::string input;
  std::string output;
  std::string method = "idct";
  std::string denoiser = "dct_threshold";
  double df = 2.0;
  int iters = 15;
  double lambda = 1.0;
  uint64_t seed = 42;
  std::string ref;
  std::string trace;
};

int run_reconstruct(const ReconstructArgs& args) {
  if (!args.trace.empty() && args.ref.empty()) {
    throw std::invalid_argument("--trace requires --ref for the PSNR column");
  }
  ReconConfig cfg;
  const auto method = recon_method_from_name(args.method);
  if (!method) throw std::invalid_argument("unknown method: " + args.method);
  cfg.method = *method;
  cfg.iterations = args.iters;
  cfg.damping = args.df;
  cfg.lambda = args.lambda;
  cfg.seed = args.seed;
  cfg.denoiser.name = args.denoiser;
  cfg.validate();

  const MeasurementSet ms = read_measurement_set(args.input);
  PixelImage ref;
  const bool have_ref = !args.ref.empty();
  if (have_ref) ref = load_pgm(args.ref);

  const ReconResult result = reconstruct(ms, cfg, have_ref ? &ref : nullptr);
  save_pgm(result.image, args.output);
  std::cout << "method: " << recon_method_name(cfg.method) << ", wrote " << args.output
            << " (" << result.image.width << "x" << result.image.height << ")\n";

  if (have_ref) {
    const PixelImage cropped = crop_to_grid(ref, ms.grid());
    const QualityReport q = quality(cropped, result.image);
    std::cout << "PSNR: " << fmt(q.psnr_db, 2) << " dB  SSIM: " << fmt(q.ssim, 4)
              << "  MSE: " << fmt(q.mse, 4) << "\n";
  }
  if (!args.trace.empty()) {
    std::ofstream out(args.trace);
    if (!out) throw std::runtime_error("cannot create trace file: " + args.trace);
    out << "iteration,residual_norm,sigma_hat,psnr_db\n";
    for (const TraceRow& row : result.trace) {
      out << row.iteration << "," << fmt(row.residual_norm, 6) << "," << fmt(row.sigma, 6)
          << "," << fmt(row.psnr_db, 4) << "\n";
    }
    std::cout << "trace: " << args.trace << " (" << result.trace.size() << " rows)\n";
  }
  return kExitOk;
}

struct BenchArgs {
  std::string dir;
  std::string out;
  std::vector<std::string> algos = {"zz", "bbv", "dd"};
  std::vector<std::string> crs = {"0.01", "0.02", "0.04", "0.10",
                                  "0.20", "0.30", "0.40", "0.50"};
  std::vector<std::string> methods = {"idct"};
  std::string denoiser = "dct_threshold";
  double df = 2.0;
  int iters = 15;
  double lambda = 1.0;
  uint64_t seed = 42;
  int block = 32;
};

struct BenchCell {
  std::string image;
  std::string algo;
  std::string cr;
  double cr_value = 0.0;
  std::string method;
  double psnr_db = 0.0;
  double ssim_v = 0.0;
  long long m_target = 0;
  long long m_actual = 0;
  double sense_ms = 0.0;
  double decode_ms = 0.0;
};

int run_bench(const BenchArgs& args) {
  std::vector<fs::path> files;
  if (!fs::is_directory(args.dir)) {
    throw std::runtime_error("not a directory: " + args.dir);
  }
  for (const auto& entry : fs::directory_iterator(args.dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no .pgm images in " + args.dir);

  std::vector<BenchCell> cells;
  for (const fs::path& file : files) {
    PixelImage img;
    try {
      img = load_pgm(file);
    } catch (const FormatError& e) {
      std::cerr << "warning: skipping " << file << ": " << e.what() << "\n";
      continue;
    }
    for (const std::string& algo_name : args.algos) {
      const auto algo = algorithm_from_name(algo_name);
      if (!algo) throw std::invalid_argument("unknown algorithm: " + algo_name);
      for (const std::string& cr_text : args.crs) {
        SensingConfig cfg;
        cfg.block = args.block;
        cfg.set_cr(cr_text);
        cfg.algorithm = *algo;
        cfg.validate();

        MeasurementSet ms;
        const double sense_ms_v = median_ms([&] { ms = sense(img, cfg); });
        const BudgetSummary budget = measurement_budget(ms);
        const PixelImage cropped = crop_to_grid(img, ms.grid());

        for (const std::string& method_name : args.methods) {
          const auto method = recon_method_from_name(method_name);
          if (!method) throw std::invalid_argument("unknown method: " + method_name);
          ReconConfig rc;
          rc.method = *method;
          rc.iterations = args.iters;
          rc.damping = args.df;
          rc.lambda = args.lambda;
          rc.seed = args.seed;
          rc.denoiser.name = args.denoiser;

          PixelImage decoded;
          const double decode_ms_v =
              median_ms([&] { decoded = reconstruct(ms, rc).image; });

          BenchCell cell;
          cell.image = file.stem().string();
          cell.algo = algorithm_name(ms.algorithm);
          cell.cr = cr_text;
          cell.cr_value = cfg.cr();
          cell.method = method_name;
          cell.psnr_db = psnr(cropped, decoded);
          cell.ssim_v = ssim(cropped, decoded);
          cell.m_target = budget.target;
          cell.m_actual = budget.actual;
          cell.sense_ms = sense_ms_v;
          cell.decode_ms = decode_ms_v;
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  std::sort(cells.begin(), cells.end(), [](const BenchCell& a, const BenchCell& b) {
    if (a.image != b.image) return a.image < b.image;
    if (a.algo != b.algo) return a.algo < b.algo;
    if (a.cr_value != b.cr_value) return a.cr_value < b.cr_value;
    return a.method < b.method;
  });

  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot create CSV: " + args.out);
  out << "image,algorithm,cr,method,denoiser,df,iterations,lambda,seed,block,"
         "m_target,m_actual,psnr_db,ssim,sense_ms,decode_ms\n";
  const std::string config_echo = args.denoiser + "," + fmt(args.df, 2) + "," +
                                  std::to_string(args.iters) + "," + fmt(args.lambda, 2) +
                                  "," + std::to_string(args.seed) + "," +
                                  std::to_string(args.block);
  for (const BenchCell& c : cells) {
    out << c.image << "," << c.algo << "," << c.cr << "," << c.method << "," << config_echo
        << "," << c.m_target << "," << c.m_actual << "," << fmt(c.psnr_db, 4) << ","
        << fmt(c.ssim_v, 4) << "," << fmt(c.sense_ms, 3) << "," << fmt(c.decode_ms, 3)
        << "\n";
  }

  // Per-C_R averages over images, then the low/high C_R band averages.
  struct Key {
    std::string algo, cr, method;
    double cr_value;
    bool operator<(const Key& o) const {
      if (algo != o.algo) return algo < o.algo;
      if (cr_value != o.cr_value) return cr_value < o.cr_value;
      return method < o.method;
    }
  };
  std::map<Key, std::vector<const BenchCell*>> groups;
  for (const BenchCell& c : cells) {
    groups[{c.algo, c.cr, c.method, c.cr_value}].push_back(&c);
  }
  auto emit_average = [&](const std::string& algo, const std::string& label,
                          const std::string& method,
                          const std::vector<const BenchCell*>& group) {
    if (group.empty()) return;
    double p = 0, s = 0, sm = 0, dm = 0;
    for (const BenchCell* c : group) {
      p += c->psnr_db;
      s += c->ssim_v;
      sm += c->sense_ms;
      dm += c->decode_ms;
    }
    const double n = static_cast<double>(group.size());
    out << "(average)," << algo << "," << label << "," << method << "," << config_echo
        << ",,," << fmt(p / n, 4) << "," << fmt(s / n, 4) << "," << fmt(sm / n, 3) << ","
        << fmt(dm / n, 3) << "\n";
  };
  for (const auto& [key, group] : groups) emit_average(key.algo, key.cr, key.method, group);

  std::map<std::pair<std::string, std::string>, std::vector<const BenchCell*>> low, high;
  for (const BenchCell& c : cells) {
    if (c.cr_value <= 0.045) low[{c.algo, c.method}].push_back(&c);
    if (c.cr_value >= 0.095 && c.cr_value <= 0.505) high[{c.algo, c.method}].push_back(&c);
  }
  for (const auto& [key, group] : low) emit_average(key.first, "0.01-0.04", key.second, group);
  for (const auto& [key, group] : high) emit_average(key.first, "0.10-0.50", key.second, group);

  std::cout << "wrote " << args.out << " (" << cells.size() << " cells, "
            << files.size() << " images)\n";
  return kExitOk;
}

struct FixturesArgs {
  std::string out;
  std::vector<int> sizes = {256, 512};
};

int run_fixtures(const FixturesArgs& args) {
  fs::create_directories(args.out);
  for (int size : args.sizes) {
    for (const std::string& name : test_image_names()) {
      const fs::path path = fs::path(args.out) / (name + "_" + std::to_string(size) + ".pgm");
      save_pgm(make_test_image(name, size), path);
      std::cout << path.string() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive block compressive image sensing codec"};
  app.require_subcommand(1);

  SenseArgs sense_args;
  CLI::App* sense_cmd = app.add_subcommand("sense", "Encode an image into a measurement container");
  sense_cmd->add_option("-i,--input", sense_args.input, "Input PGM image")->required();
  sense_cmd->add_option("-o,--output", sense_args.output, "Output container")->required();
  sense_cmd->add_option("--algo", sense_args.algo, "Sensing algorithm: zz|bbv|dd")
      ->check(CLI::IsMember({"zz", "bbv", "dd"}));
  sense_cmd->add_option("--cr", sense_args.cr, "Compression ratio M/N, e.g. 0.1 or 1/10")
      ->required();
  sense_cmd->add_option("--block", sense_args.block, "Block size (default 32)");
  sense_cmd->add_option("--threshold", sense_args.threshold,
                        "DD significance threshold override");

  ReconstructArgs rec_args;
  CLI::App* rec_cmd = app.add_subcommand("reconstruct", "Decode a measurement container");
  rec_cmd->add_option("-i,--input", rec_args.input, "Input container")->required();
  rec_cmd->add_option("-o,--output", rec_args.output, "Output PGM image")->required();
  rec_cmd->add_option("--method", rec_args.method,
                      "Decoder: idct|ista|amp|damp|dampd|ida")
      ->check(CLI::IsMember({"idct", "ista", "amp", "damp", "dampd", "ida"}));
  rec_cmd->add_option("--denoiser", rec_args.denoiser,
                      "Denoiser: identity|blur|dct_threshold");
  rec_cmd->add_option("--df", rec_args.df, "Damping factor D_F (default 2.0)");
  rec_cmd->add_option("--iters", rec_args.iters, "Iterations (default 15)");
  rec_cmd->add_option("--lambda", rec_args.lambda, "ISTA/AMP threshold multiplier");
  rec_cmd->add_option("--seed", rec_args.seed, "Divergence-probe seed");
  rec_cmd->add_option("--ref", rec_args.ref, "Reference image for quality metrics");
  rec_cmd->add_option("--trace", rec_args.trace, "Per-iteration trace CSV (needs --ref)");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Sweep a directory of images");
  bench_cmd->add_option("--dir", bench_args.dir, "Directory of PGM images")->required();
  bench_cmd->add_option("--out", bench_args.out, "Output CSV")->required();
  bench_cmd->add_option("--algos", bench_args.algos, "Algorithms to run");
  bench_cmd->add_option("--crs", bench_args.crs, "Compression ratios");
  bench_cmd->add_option("--methods", bench_args.methods, "Decoders to run");
  bench_cmd->add_option("--denoiser", bench_args.denoiser, "Denoiser for iterative decoders");
  bench_cmd->add_option("--df", bench_args.df, "Damping factor D_F");
  bench_cmd->add_option("--iters", bench_args.iters, "Iterations for iterative decoders");
  bench_cmd->add_option("--lambda", bench_args.lambda, "ISTA/AMP threshold multiplier");
  bench_cmd->add_option("--seed", bench_args.seed, "Divergence-probe seed (echoed in CSV)");
  bench_cmd->add_option("--block", bench_args.block, "Block size");

  FixturesArgs fix_args;
  CLI::App* fix_cmd = app.add_subcommand("fixtures", "Write the bundled synthetic test images");
  fix_cmd->add_option("--out", fix_args.out, "Output directory")->required();
  fix_cmd->add_option("--sizes", fix_args.sizes, "Image sizes (default 256 512)");

  try {
    app.parse(argc, argv);
    if (sense_cmd->parsed()) return run_sense(sense_args);
    if (rec_cmd->parsed()) return run_reconstruct(rec_args);
    if (bench_cmd->parsed()) return run_bench(bench_args);
    if (fix_cmd->parsed()) return run_fixtures(fix_args);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
