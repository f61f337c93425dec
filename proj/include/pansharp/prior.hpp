#pragma once

#include <cstdint>

#include "pansharp/raster_cube.hpp"

namespace pansharp {

/// Box bounds on every component of the spectral generalized inverse.
struct PriorBox {
  double lower = 0.9;
  double upper = 1.4;

  double center() const { return 0.5 * (lower + upper); }
  /// Throws InvalidArgument unless lower < upper and both are finite.
  void validate() const;
};

/// Row vector m (1 x S) intended to satisfy m·A = 1 inside a PriorBox.
struct PriorInverse {
  RowVector m;
  double inverse_ability = 0.0;
  bool feasible = false;
};

/// Point of {m : m·A = 1, lower <= m_i <= upper} closest to center·1.
///
/// When the box cannot reach m·A = 1 the equality-only projection of
/// center·1 is returned with feasible = false. Clipped coordinates equal the
/// bounds exactly. Requires an S x 1 column A; throws DegenerateError for
/// A = 0.
PriorInverse solve_prior_inverse(const Eigen::Ref<const Matrix>& a,
                                 const PriorBox& box = {});

/// Seeded random draw from the same feasible set via hit-and-run started at
/// the deterministic solution. Infeasible inputs return the deterministic
/// (infeasible) answer unchanged.
PriorInverse sample_prior_inverse(const Eigen::Ref<const Matrix>& a,
                                  const PriorBox& box, std::uint64_t seed,
                                  int steps = 64);

/// cov(u, Z) / var(u) with population (1/n) normalization; u is n x 1 and Z
/// is n x S. Throws DegenerateError when u has (numerically) zero variance.
RowVector covariance_weights(const Eigen::Ref<const Matrix>& u,
                             const Eigen::Ref<const Matrix>& z);

/// GSA injection weights W = var(ZA)⁻¹ cov(ZA, Z). Satisfies W·A = 1.
RowVector gsa_weights(const Eigen::Ref<const Matrix>& z,
                      const Eigen::Ref<const Matrix>& a);

}  // namespace pansharp
