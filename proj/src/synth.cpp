#include "pansharp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "pansharp/errors.hpp"

namespace pansharp {

SynthPair generate_pair(const RasterCube& x, const SynthSpec& spec) {
  if (spec.scale < 2) throw InvalidArgument("synthetic scale must be >= 2");
  const std::size_t bands = x.bands();
  if (bands == 0) throw ShapeError("reference cube has no bands");

  Matrix a(static_cast<Eigen::Index>(bands), 1);
  if (spec.pan_weights.empty()) {
    a.setConstant(1.0 / static_cast<double>(bands));
  } else {
    if (spec.pan_weights.size() != bands) {
      throw InvalidArgument("explicit pan weights have " +
                            std::to_string(spec.pan_weights.size()) +
                            " entries for " + std::to_string(bands) + " bands");
    }
    for (std::size_t i = 0; i < bands; ++i)
      a(static_cast<Eigen::Index>(i), 0) = spec.pan_weights[i];
  }

  const auto down = SpatialOperator::block_mean_down(x.shape(), spec.scale);
  const auto xm = x.matrix();
  SynthPair out;
  out.pan = RasterCube::from_matrix(xm * a, x.height(), x.width());
  out.ms = RasterCube::from_matrix(down.apply(xm), down.out_shape().height,
                                   down.out_shape().width);
  out.a_true = a;
  return out;
}

RasterCube random_cube(std::size_t height, std::size_t width, std::size_t bands,
                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  constexpr int kWaves = 4;

  struct Wave {
    double fy, fx, phase, amp;
  };
  auto draw_waves = [&](double amp_scale) {
    std::vector<Wave> waves(kWaves);
    for (auto& w : waves) {
      w.fy = 0.5 + 2.5 * unit(rng);
      w.fx = 0.5 + 2.5 * unit(rng);
      w.phase = kTwoPi * unit(rng);
      w.amp = amp_scale * (0.5 + unit(rng));
    }
    return waves;
  };
  auto evaluate = [&](const std::vector<Wave>& waves, double v, double u) {
    double sum = 0.0;
    for (const auto& w : waves)
      sum += w.amp * std::sin(kTwoPi * (w.fy * v + w.fx * u) + w.phase);
    return sum;
  };

  const auto base = draw_waves(60.0);
  RasterCube cube(height, width, bands);
  for (std::size_t b = 0; b < bands; ++b) {
    const double offset = 300.0 + 400.0 * unit(rng);
    const double gain = 0.5 + unit(rng);
    const auto own = draw_waves(40.0);
    for (std::size_t i = 0; i < height; ++i) {
      const double v = static_cast<double>(i) / static_cast<double>(height);
      for (std::size_t j = 0; j < width; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(width);
        cube.at(i, j, b) = offset + gain * evaluate(base, v, u) +
                           evaluate(own, v, u) + 5.0 * (unit(rng) - 0.5);
      }
    }
  }
  return cube;
}

std::vector<AblationRow> run_ablation(const CubePair& pair,
                                      const AblationOptions& options) {
  std::optional<Matrix> truth;
  if (options.truth != nullptr) truth = Matrix(options.truth->matrix());

  constexpr Method kOrder[] = {Method::kMtfGlpCbd, Method::kGsa, Method::kPcs,
                               Method::kPmra};
  std::vector<AblationRow> rows;
  rows.reserve(8);
  const FusionSetup off = prepare_fusion(pair, false, options.upsampler);
  const FusionSetup on = prepare_fusion(pair, true, options.upsampler);
  const auto y = pair.pan.matrix();
  const auto z = pair.ms.matrix();
  // Depends only on (Y, Z, A, B): one value per configuration.
  const double consistent_off = consistent_rmse(z, off.a.a, off.b, y);
  const double consistent_on = consistent_rmse(z, on.a.a, on.b, y);

  for (Method m : kOrder) {
    for (const FusionSetup* setup : {&off, &on}) {
      const FusionResult fused = fuse_with(*setup, pair, m, options.box);
      const auto x = fused.x.matrix();
      AblationRow row;
      row.method = m;
      row.dse = setup->dse;
      row.metrics.consistent_rmse = setup->dse ? consistent_on : consistent_off;
      row.metrics.spatial_rmse = spatial_rmse(x, setup->a.a, y);
      row.metrics.spectral_rmse = spectral_rmse(setup->b, x, z);
      row.metrics.inverse_ability = inverse_ability(fused.a_inv_used, setup->a.a);
      if (truth) row.metrics.rmse = rmse(*truth, x);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<std::uint8_t> percentile_stretch(std::span<const double> values,
                                             double lo_pct, double hi_pct) {
  std::vector<std::uint8_t> out(values.size(), 128);
  if (values.empty()) return out;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double pct) {
    const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  const double lo = percentile(lo_pct);
  const double hi = percentile(hi_pct);
  if (!(hi > lo)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = std::clamp((values[i] - lo) / (hi - lo), 0.0, 1.0);
    out[i] = static_cast<std::uint8_t>(std::lround(255.0 * t));
  }
  return out;
}

void render_composite(const RasterCube& x, std::span<const std::size_t> bands,
                      const std::filesystem::path& out_path) {
  if (bands.size() != 3) {
    throw InvalidArgument("composite needs exactly 3 bands, got " +
                          std::to_string(bands.size()));
  }
  const RasterCube rgb = band_select(x, bands);
  const std::size_t n = rgb.pixels();
  std::vector<std::vector<std::uint8_t>> channels;
  for (std::size_t c = 0; c < 3; ++c)
    channels.push_back(percentile_stretch(rgb.data().subspan(c * n, n)));

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw Error(ErrorKind::kData, "io", "cannot open " + out_path.string());
  }
  out << "P6\n" << rgb.width() << ' ' << rgb.height() << "\n255\n";
  std::vector<char> interleaved(n * 3);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t c = 0; c < 3; ++c)
      interleaved[p * 3 + c] = static_cast<char>(channels[c][p]);
  out.write(interleaved.data(), static_cast<std::streamsize>(interleaved.size()));
  if (!out) throw Error(ErrorKind::kData, "io", "write failed: " + out_path.string());
}

}  // namespace pansharp
