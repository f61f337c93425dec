#pragma once

#include <cstddef>

#include "pansharp/raster_cube.hpp"
#include "pansharp/spatial_operator.hpp"

namespace pansharp {

/// Spectral response A (S x s) mapping MS bands to Pan intensity.
struct SpectralResponse {
  enum class Source { kAssumed, kEstimatedDse, kEstimatedLsq };

  Matrix a;
  Source source = Source::kAssumed;
  /// False when Z was rank deficient and the SVD pseudoinverse was used.
  bool full_rank = true;
};

/// A = Z⁺ (B̂ Y): the exact response under down-sampling enhancement and the
/// least-squares minimizer of ‖B̂Y − Z M‖_F otherwise.
SpectralResponse estimate_a_dse(const Eigen::Ref<const Matrix>& y,
                                const Eigen::Ref<const Matrix>& z,
                                const SpatialOperator& bhat);

/// Residuals of the three solvability conditions for Y = XA, Z = BX.
/// Each is a root-mean-square over the compared array's elements.
struct ExistenceReport {
  double consistency_residual = 0.0;    // BY vs ZA
  double y_recoverable_residual = 0.0;  // Y vs Y A⁻ A
  double z_recoverable_residual = 0.0;  // Z vs B B⁻ Z
  bool solvable = false;
};

inline constexpr double kExistenceTolerance = 1e-6;

ExistenceReport existence_check(const Eigen::Ref<const Matrix>& y,
                                const Eigen::Ref<const Matrix>& z,
                                const Eigen::Ref<const Matrix>& a,
                                const SpatialOperator& b,
                                const SpatialOperator& b_inv,
                                const Eigen::Ref<const Matrix>& a_inv,
                                double tol = kExistenceTolerance);

/// Rank diagnostic on the stacked system [Z ⊗ I_s, −I_hw ⊗ Yᵀ] whose kernel
/// holds (vec A, vec B) for every solution of BY = ZA (row-major vec).
struct KroneckerReport {
  Eigen::Index rank = 0;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  /// min(hw·s, S·s + hw·HW).
  Eigen::Index bound = 0;
  /// rank < bound, the literal rank statement.
  bool rank_below_bound = false;
  /// rank < cols: the homogeneous system has a nonzero solution.
  bool nonzero_solution_exists = false;
};

inline constexpr double kKroneckerRankTolerance = 1e-10;
/// Default cap on the number of entries in the assembled system.
inline constexpr std::size_t kKroneckerCap = std::size_t{1} << 22;

/// Dense [Z ⊗ I_s, −I_hw ⊗ Yᵀ]. Throws CapExceededError beyond `max_entries`.
Matrix kronecker_system(const Eigen::Ref<const Matrix>& y,
                        const Eigen::Ref<const Matrix>& z,
                        std::size_t max_entries = kKroneckerCap);

KroneckerReport kronecker_rank_check(const Eigen::Ref<const Matrix>& y,
                                     const Eigen::Ref<const Matrix>& z,
                                     std::size_t max_entries = kKroneckerCap);

/// ‖K [vec A; vec B]‖_F / max(1, ‖[vec A; vec B]‖) for a dense B (hw x HW).
double kronecker_kernel_residual(const Eigen::Ref<const Matrix>& y,
                                 const Eigen::Ref<const Matrix>& z,
                                 const Eigen::Ref<const Matrix>& a,
                                 const Eigen::Ref<const Matrix>& b_dense,
                                 std::size_t max_entries = kKroneckerCap);

}  // namespace pansharp
