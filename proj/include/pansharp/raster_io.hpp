#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pansharp/errors.hpp"
#include "pansharp/raster_cube.hpp"
#include "pansharp/synth.hpp"

namespace pansharp {

enum class Dtype { kF32, kF64, kU8, kU16 };

std::string_view dtype_name(Dtype d);
std::size_t dtype_size(Dtype d);

/// Raster file problems. Each code maps to a distinct failure mode.
class RasterError : public Error {
 public:
  enum class Code {
    kMissingSidecar,
    kSizeMismatch,
    kUnknownDtype,
    kMalformedHeader,
    kIo,
    kRangeViolation,
  };

  RasterError(Code code, const std::string& message);
  Code raster_code() const { return raster_code_; }

 private:
  Code raster_code_;
};

/// Sidecar record describing a raw planar little-endian payload.
///
///   height = 64
///   width = 64
///   bands = 8
///   dtype = f64
///   layout = planar
///   byte_order = little-endian
///
/// Any other `key = value` lines are kept in `extra`.
struct RasterHeader {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t bands = 0;
  Dtype dtype = Dtype::kF64;
  std::map<std::string, std::string> extra;
};

/// `<payload>.hdr`
std::filesystem::path sidecar_path(const std::filesystem::path& payload);

RasterHeader read_header(const std::filesystem::path& payload);

/// Reads a raster into double precision; integer samples widen exactly.
RasterCube read_raster(const std::filesystem::path& payload,
                       RasterHeader* header = nullptr);

/// Writes payload and sidecar through temporary files renamed into place.
/// Integer targets round half to even; values outside the dtype range are a
/// kRangeViolation unless `clamp` is set.
void write_raster(const RasterCube& cube, const std::filesystem::path& payload,
                  Dtype dtype = Dtype::kF64, bool clamp = false,
                  const std::map<std::string, std::string>& extra = {});

Dtype parse_dtype(std::string_view name);

/// Shortest round-trip decimal text for a double.
std::string format_number(double v);

/// Comma-separated shortest round-trip values.
std::string format_row(const Eigen::Ref<const Matrix>& m);
/// Inverse of format_row into a flat vector.
std::vector<double> parse_numbers(std::string_view text);

/// Whitespace-separated matrix text: one line per row.
void write_matrix_text(const Eigen::Ref<const Matrix>& m,
                       const std::filesystem::path& path);
Matrix read_matrix_text(const std::filesystem::path& path);

inline constexpr std::string_view kMetricsCsvHeader =
    "method,dse,consistent_rmse,spatial_rmse,spectral_rmse,inverse_ability,rmse";

/// One CSV line (no newline). NaN inverse ability and absent RMSE print as
/// empty fields.
std::string format_csv_row(std::string_view method, bool dse,
                           const MetricReport& m);

/// Header plus one line per row, full precision.
std::string format_ablation_csv(const std::vector<AblationRow>& rows);

/// Fixed-width text table with two decimals.
std::string format_ablation_table(const std::vector<AblationRow>& rows);

/// `key  value` lines with two decimals.
std::string format_metric_table(const MetricReport& m);

}  // namespace pansharp
