#pragma once

#include <array>

#include "pansharp/raster_cube.hpp"

namespace pansharp {

/// Default relative singular-value cutoff for pseudoinverses.
inline constexpr double kPinvRelTolerance = 1e-12;
/// Default relative tolerance for generalized-inverse condition checks.
inline constexpr double kPenroseTolerance = 1e-8;

/// Moore–Penrose pseudoinverse via SVD. Singular values at or below
/// `rel_tolerance * sigma_max` are treated as zero.
Matrix moore_penrose(const Eigen::Ref<const Matrix>& m,
                     double rel_tolerance = kPinvRelTolerance);

/// Left inverse (MᵀM)⁻¹Mᵀ for full-column-rank M. Throws RankDeficiencyError
/// when MᵀM is singular or too badly conditioned to trust; callers then fall
/// back to moore_penrose.
Matrix full_rank_left_pinv(const Eigen::Ref<const Matrix>& m);

/// Numerical rank: count of singular values above rel_tolerance * sigma_max.
Eigen::Index numerical_rank(const Eigen::Ref<const Matrix>& m,
                            double rel_tolerance);

/// Result of checking G against the four Penrose conditions for A:
///   1. A G A = A   2. G A G = G   3. (A G)ᵀ = A G   4. (G A)ᵀ = G A
struct PenroseReport {
  bool is_gen_inverse = false;
  std::array<bool, 4> penrose_conditions{};
  std::array<double, 4> residuals{};
  double max_residual = 0.0;

  bool is_moore_penrose() const {
    return penrose_conditions[0] && penrose_conditions[1] &&
           penrose_conditions[2] && penrose_conditions[3];
  }
};

/// Each residual is ‖lhs − rhs‖_F / max(1, ‖rhs‖_F).
PenroseReport check_generalized_inverse(const Eigen::Ref<const Matrix>& a,
                                        const Eigen::Ref<const Matrix>& g,
                                        double tol = kPenroseTolerance);

/// ‖lhs − rhs‖_F / max(1, ‖rhs‖_F).
double relative_deviation(const Eigen::Ref<const Matrix>& lhs,
                          const Eigen::Ref<const Matrix>& rhs);

/// Throws InvalidArgument if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Matrix>& m, const char* what);

}  // namespace pansharp
