#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "pansharp/fusion.hpp"
#include "pansharp/metrics.hpp"
#include "pansharp/raster_cube.hpp"

namespace pansharp {

/// Degradation protocol for building a Pan/MS pair from a reference cube.
struct SynthSpec {
  std::size_t scale = 2;
  /// Empty means equal weights 1/S.
  std::vector<double> pan_weights;
  std::uint64_t seed = 0;
};

struct SynthPair {
  RasterCube pan;
  RasterCube ms;
  Matrix a_true;  // S x 1
};

/// Y = X·A_true, Z = block_mean_down(r)(X).
SynthPair generate_pair(const RasterCube& x, const SynthSpec& spec);

/// Seeded cube with smooth spatial structure: a few low-frequency sinusoids
/// per band on a shared base pattern, plus small uniform noise. Values are
/// positive (roughly 100..1000).
RasterCube random_cube(std::size_t height, std::size_t width, std::size_t bands,
                       std::uint64_t seed);

struct AblationRow {
  Method method = Method::kPcs;
  bool dse = false;
  MetricReport metrics;
};

struct AblationOptions {
  PriorBox box{};
  Upsampler upsampler = Upsampler::kReplicate;
  /// Reference image for the RMSE column.
  const RasterCube* truth = nullptr;
};

/// {CBD, GSA, PCS, PMRA} x {DSE off, DSE on}, ordered by method then DSE.
std::vector<AblationRow> run_ablation(const CubePair& pair,
                                      const AblationOptions& options = {});

/// Maps values to 8 bits with a linear stretch between the lo/hi
/// percentiles (linear interpolation between order statistics). A flat
/// band maps to 128.
std::vector<std::uint8_t> percentile_stretch(std::span<const double> values,
                                             double lo_pct = 2.0,
                                             double hi_pct = 98.0);

/// Writes a binary PPM (P6) preview from three 0-based band indices.
void render_composite(const RasterCube& x, std::span<const std::size_t> bands,
                      const std::filesystem::path& out_path);

}  // namespace pansharp
