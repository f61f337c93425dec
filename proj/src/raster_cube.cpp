#include "pansharp/raster_cube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pansharp/errors.hpp"

namespace pansharp {

RasterCube::RasterCube(std::size_t height, std::size_t width, std::size_t bands)
    : height_(height),
      width_(width),
      bands_(bands),
      data_(height * width * bands, 0.0) {}

RasterCube::RasterCube(std::size_t height, std::size_t width, std::size_t bands,
                       std::vector<double> data)
    : height_(height), width_(width), bands_(bands), data_(std::move(data)) {
  if (data_.size() != height_ * width_ * bands_) {
    throw ShapeError("cube data length " + std::to_string(data_.size()) +
                     " != " + std::to_string(height_) + "x" +
                     std::to_string(width_) + "x" + std::to_string(bands_));
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw InvalidArgument("cube contains non-finite sample");
  }
}

RasterCube RasterCube::from_matrix(const Eigen::Ref<const Matrix>& m,
                                   std::size_t height, std::size_t width) {
  if (static_cast<std::size_t>(m.rows()) != height * width) {
    throw ShapeError("matrix has " + std::to_string(m.rows()) +
                     " rows, expected " + std::to_string(height * width));
  }
  std::vector<double> data(m.size());
  Eigen::Map<Matrix>(data.data(), m.rows(), m.cols()) = m;
  return RasterCube(height, width, static_cast<std::size_t>(m.cols()),
                    std::move(data));
}

MatrixView RasterCube::matrix() {
  return MatrixView(data_.data(), static_cast<Eigen::Index>(pixels()),
                    static_cast<Eigen::Index>(bands_));
}

ConstMatrixView RasterCube::matrix() const {
  return ConstMatrixView(data_.data(), static_cast<Eigen::Index>(pixels()),
                         static_cast<Eigen::Index>(bands_));
}

RasterCube band_select(const RasterCube& cube,
                       std::span<const std::size_t> indices) {
  RasterCube out(cube.height(), cube.width(), indices.size());
  const std::size_t n = cube.pixels();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= cube.bands()) {
      throw InvalidArgument("band index " + std::to_string(indices[i]) +
                            " out of range for " +
                            std::to_string(cube.bands()) + "-band cube");
    }
    auto src = cube.data().subspan(indices[i] * n, n);
    std::copy(src.begin(), src.end(), out.data().begin() + i * n);
  }
  return out;
}

void CubePair::validate() const {
  if (scale < 2) throw ShapeError("scale ratio must be >= 2");
  if (pan.height() != scale * ms.height() || pan.width() != scale * ms.width()) {
    throw ShapeError("pan " + std::to_string(pan.height()) + "x" +
                     std::to_string(pan.width()) + " is not " +
                     std::to_string(scale) + "x the MS " +
                     std::to_string(ms.height()) + "x" +
                     std::to_string(ms.width()));
  }
}

CubePair pair_cubes(RasterCube pan, RasterCube ms) {
  if (ms.height() == 0 || pan.height() % ms.height() != 0) {
    throw ShapeError("pan height is not an integer multiple of MS height");
  }
  CubePair pair{std::move(pan), std::move(ms), 0};
  pair.scale = pair.pan.height() / pair.ms.height();
  pair.validate();
  return pair;
}

}  // namespace pansharp
