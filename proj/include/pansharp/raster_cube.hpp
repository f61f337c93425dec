#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pansharp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using MatrixView = Eigen::Map<Matrix>;
using ConstMatrixView = Eigen::Map<const Matrix>;

/// Spatial extent of an image in pixels.
struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t pixels() const { return height * width; }
  bool operator==(const Shape&) const = default;
};

/// Planar multiband raster stored in double precision.
///
/// Samples are laid out band-major: band b occupies the contiguous range
/// [b*H*W, (b+1)*H*W), and inside a band pixels are row-major. This is the
/// column-major layout of the (H*W) x bands pixel matrix, so `matrix()` is a
/// zero-copy view where row p is pixel p = row*W + col and column b is band b.
class RasterCube {
 public:
  RasterCube() = default;

  /// Zero-filled cube.
  RasterCube(std::size_t height, std::size_t width, std::size_t bands);

  /// Takes ownership of planar samples. Throws if the length is wrong or any
  /// sample is not finite.
  RasterCube(std::size_t height, std::size_t width, std::size_t bands,
             std::vector<double> data);

  /// Builds a cube from a pixel matrix with `height*width` rows.
  static RasterCube from_matrix(const Eigen::Ref<const Matrix>& m,
                                std::size_t height, std::size_t width);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t bands() const { return bands_; }
  Shape shape() const { return {height_, width_}; }
  std::size_t pixels() const { return height_ * width_; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double& at(std::size_t row, std::size_t col, std::size_t band) {
    return data_[band * pixels() + row * width_ + col];
  }
  double at(std::size_t row, std::size_t col, std::size_t band) const {
    return data_[band * pixels() + row * width_ + col];
  }

  /// (H*W) x bands view; writes through the view modify the cube.
  MatrixView matrix();
  ConstMatrixView matrix() const;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t bands_ = 0;
  std::vector<double> data_;
};

/// Pixel-matrix view of a cube.
inline MatrixView as_matrix(RasterCube& cube) { return cube.matrix(); }
inline ConstMatrixView as_matrix(const RasterCube& cube) {
  return cube.matrix();
}

/// New cube holding the listed bands (0-based) in the given order.
RasterCube band_select(const RasterCube& cube,
                       std::span<const std::size_t> indices);

/// Pan/MS pair at an integer scale ratio.
struct CubePair {
  RasterCube pan;
  RasterCube ms;
  std::size_t scale = 0;

  /// Throws ShapeError unless pan dims are exactly `scale` times the MS dims
  /// and scale >= 2.
  void validate() const;
};

/// Infers the scale from the height ratio and validates.
CubePair pair_cubes(RasterCube pan, RasterCube ms);

}  // namespace pansharp
