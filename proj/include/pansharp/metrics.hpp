#pragma once

#include <optional>

#include "pansharp/raster_cube.hpp"
#include "pansharp/spatial_operator.hpp"

namespace pansharp {

/// The five fusion quality indices. All RMSE values are in image-value units.
struct MetricReport {
  double consistent_rmse = 0.0;
  double spatial_rmse = 0.0;
  double spectral_rmse = 0.0;
  /// A⁻A at s = 1; ideal value 1.
  double inverse_ability = 0.0;
  /// Only present when a reference image is supplied.
  std::optional<double> rmse;
};

/// sqrt(‖lhs − rhs‖²_F / element count), accumulated with Neumaier
/// compensated summation. Empty arrays give 0.
double rms_difference(const Eigen::Ref<const Matrix>& lhs,
                      const Eigen::Ref<const Matrix>& rhs);

/// sqrt(‖ZA − BY‖²_F / (hw·s)).
double consistent_rmse(const Eigen::Ref<const Matrix>& z,
                       const Eigen::Ref<const Matrix>& a,
                       const SpatialOperator& b,
                       const Eigen::Ref<const Matrix>& y);

/// sqrt(‖X A − Y‖²_F / (HW·s)).
double spatial_rmse(const Eigen::Ref<const Matrix>& x,
                    const Eigen::Ref<const Matrix>& a,
                    const Eigen::Ref<const Matrix>& y);

/// sqrt(‖B X − Z‖²_F / (hw·S)).
double spectral_rmse(const SpatialOperator& b, const Eigen::Ref<const Matrix>& x,
                     const Eigen::Ref<const Matrix>& z);

/// A⁻ · A for a 1 x S row and an S x 1 column.
double inverse_ability(const Eigen::Ref<const Matrix>& a_inv,
                       const Eigen::Ref<const Matrix>& a);

/// sqrt(‖X − X_rec‖²_F / (HW·S)).
double rmse(const Eigen::Ref<const Matrix>& truth,
            const Eigen::Ref<const Matrix>& recovered);

/// Computes every index for one fusion run.
MetricReport evaluate(const Eigen::Ref<const Matrix>& x,
                      const Eigen::Ref<const Matrix>& y,
                      const Eigen::Ref<const Matrix>& z,
                      const Eigen::Ref<const Matrix>& a,
                      const Eigen::Ref<const Matrix>& a_inv,
                      const SpatialOperator& b,
                      const Matrix* truth = nullptr);

}  // namespace pansharp
