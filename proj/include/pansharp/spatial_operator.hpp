#pragma once

#include <cstddef>
#include <memory>
#include <variant>

#include "pansharp/raster_cube.hpp"

namespace pansharp {

/// Default ceiling on out_pixels * in_pixels for dense materialization.
inline constexpr std::size_t kMaterializeCap = std::size_t{1} << 20;

/// Linear map between pixel grids, applied column-wise to pixel matrices.
///
/// Down-samplers map an (H, W) grid to (H/r, W/r); up-samplers go the other
/// way. Operators are immutable and cheap to copy; the DSE variant shares
/// its inner operator and caches Z and Z⁺.
class SpatialOperator {
 public:
  enum class Kind {
    kBlockMeanDown,
    kReplicateUp,
    kBilinearUp,
    kDseWrapped,
    kExplicit,
  };

  /// r x r block average; `in` must be divisible by r.
  static SpatialOperator block_mean_down(Shape in, std::size_t r);
  /// Copies each source pixel into an r x r block.
  static SpatialOperator replicate_up(Shape in, std::size_t r);
  /// Bilinear interpolation at half-pixel centers with edge clamping.
  static SpatialOperator bilinear_up(Shape in, std::size_t r);
  /// Dense out_pixels x in_pixels matrix.
  static SpatialOperator explicit_matrix(Matrix m, Shape in, Shape out);

  Kind kind() const { return kind_; }
  Shape in_shape() const { return in_; }
  Shape out_shape() const { return out_; }
  /// Integer ratio for the structural kinds, 0 for explicit operators.
  std::size_t scale() const { return scale_; }

  /// Applies the operator to every column of an in_pixels x k matrix.
  Matrix apply(const Eigen::Ref<const Matrix>& x) const;

  /// Dense matrix D with apply(x) == D * x. Throws CapExceededError when
  /// out_pixels * in_pixels exceeds `cap`.
  Matrix materialize(std::size_t cap = kMaterializeCap) const;

  // DSE accessors; only meaningful when kind() == kDseWrapped.
  const SpatialOperator* inner() const;
  const Matrix& z() const;
  const Matrix& z_pinv() const;
  /// True when Z was rank deficient and Z⁺ came from the SVD route.
  bool rank_deficient() const;

 private:
  struct Dse {
    std::shared_ptr<const SpatialOperator> inner;
    Matrix z;
    Matrix z_pinv;
    bool rank_deficient = false;
  };

  SpatialOperator(Kind kind, Shape in, Shape out, std::size_t scale)
      : kind_(kind), in_(in), out_(out), scale_(scale) {}

  Kind kind_;
  Shape in_;
  Shape out_;
  std::size_t scale_ = 0;
  std::variant<std::monostate, Matrix, Dse> payload_;

  friend SpatialOperator dse_wrap(const SpatialOperator&,
                                  const Eigen::Ref<const Matrix>&);
};

/// Pseudoinverse of a data matrix, preferring the full-rank normal-equations
/// route and falling back to the SVD. Shared by the DSE operator and the
/// spectral response estimate so both produce the same floating-point Z⁺.
struct DataPinv {
  Matrix pinv;
  bool full_rank = true;
};
DataPinv data_pinv(const Eigen::Ref<const Matrix>& z);

/// Down-sampling enhancement: x ↦ Z (Z⁺ (B̂ x)), i.e. B = Z Z⁺ B̂.
SpatialOperator dse_wrap(const SpatialOperator& bhat,
                         const Eigen::Ref<const Matrix>& z);

}  // namespace pansharp
