#include "pansharp/response.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pansharp/errors.hpp"
#include "pansharp/linalg.hpp"
#include "pansharp/metrics.hpp"

namespace pansharp {

namespace {

std::string dims(const Eigen::Ref<const Matrix>& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

SpectralResponse estimate_a_dse(const Eigen::Ref<const Matrix>& y,
                                const Eigen::Ref<const Matrix>& z,
                                const SpatialOperator& bhat) {
  if (static_cast<std::size_t>(y.rows()) != bhat.in_shape().pixels() ||
      static_cast<std::size_t>(z.rows()) != bhat.out_shape().pixels()) {
    throw ShapeError("estimate_a_dse: Y " + dims(y) + " / Z " + dims(z) +
                     " do not match the down-sampler's pixel counts");
  }
  require_finite(z, "Z");
  require_finite(y, "Y");
  const DataPinv zp = data_pinv(z);
  const Matrix low = bhat.apply(y);
  SpectralResponse out;
  out.a = zp.pinv * low;
  out.source = SpectralResponse::Source::kEstimatedDse;
  out.full_rank = zp.full_rank;
  return out;
}

ExistenceReport existence_check(const Eigen::Ref<const Matrix>& y,
                                const Eigen::Ref<const Matrix>& z,
                                const Eigen::Ref<const Matrix>& a,
                                const SpatialOperator& b,
                                const SpatialOperator& b_inv,
                                const Eigen::Ref<const Matrix>& a_inv,
                                double tol) {
  if (a.rows() != z.cols() || a.cols() != y.cols() ||
      a_inv.rows() != a.cols() || a_inv.cols() != a.rows()) {
    throw ShapeError("existence_check: inconsistent A " + dims(a) + ", A⁻ " +
                     dims(a_inv) + ", Y " + dims(y) + ", Z " + dims(z));
  }
  ExistenceReport r;
  r.consistency_residual = consistent_rmse(z, a, b, y);
  const Matrix y_back = y * (a_inv * a);
  r.y_recoverable_residual = rms_difference(y, y_back);
  const Matrix z_back = b.apply(b_inv.apply(z));
  r.z_recoverable_residual = rms_difference(z, z_back);
  r.solvable = r.consistency_residual <= tol &&
               r.y_recoverable_residual <= tol &&
               r.z_recoverable_residual <= tol;
  return r;
}

Matrix kronecker_system(const Eigen::Ref<const Matrix>& y,
                        const Eigen::Ref<const Matrix>& z,
                        std::size_t max_entries) {
  const Eigen::Index hw = z.rows();
  const Eigen::Index big_s = z.cols();
  const Eigen::Index s = y.cols();
  const Eigen::Index big_hw = y.rows();
  const Eigen::Index rows = hw * s;
  const Eigen::Index cols = big_s * s + hw * big_hw;
  const auto entries = static_cast<double>(rows) * static_cast<double>(cols);
  if (entries > static_cast<double>(max_entries)) {
    throw CapExceededError("Kronecker system " + std::to_string(rows) + "x" +
                           std::to_string(cols) +
                           " exceeds the desk-scale cap of " +
                           std::to_string(max_entries) + " entries");
  }
  Matrix k = Matrix::Zero(rows, cols);
  // Z ⊗ I_s
  for (Eigen::Index i = 0; i < hw; ++i)
    for (Eigen::Index c = 0; c < big_s; ++c)
      for (Eigen::Index t = 0; t < s; ++t) k(i * s + t, c * s + t) = z(i, c);
  // −I_hw ⊗ Yᵀ
  const Eigen::Index off = big_s * s;
  for (Eigen::Index i = 0; i < hw; ++i)
    k.block(i * s, off + i * big_hw, s, big_hw) = -y.transpose();
  return k;
}

KroneckerReport kronecker_rank_check(const Eigen::Ref<const Matrix>& y,
                                     const Eigen::Ref<const Matrix>& z,
                                     std::size_t max_entries) {
  const Matrix k = kronecker_system(y, z, max_entries);
  KroneckerReport r;
  r.rows = k.rows();
  r.cols = k.cols();
  r.rank = numerical_rank(k, kKroneckerRankTolerance);
  r.bound = std::min(r.rows, r.cols);
  r.rank_below_bound = r.rank < r.bound;
  r.nonzero_solution_exists = r.rank < r.cols;
  return r;
}

double kronecker_kernel_residual(const Eigen::Ref<const Matrix>& y,
                                 const Eigen::Ref<const Matrix>& z,
                                 const Eigen::Ref<const Matrix>& a,
                                 const Eigen::Ref<const Matrix>& b_dense,
                                 std::size_t max_entries) {
  if (a.rows() != z.cols() || a.cols() != y.cols() ||
      b_dense.rows() != z.rows() || b_dense.cols() != y.rows()) {
    throw ShapeError("kronecker_kernel_residual: A " + dims(a) + " / B " +
                     dims(b_dense) + " inconsistent with Y " + dims(y) +
                     " and Z " + dims(z));
  }
  const Matrix k = kronecker_system(y, z, max_entries);
  Vector v(k.cols());
  Eigen::Index pos = 0;
  // Row-major vectorization of A then B.
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) v(pos++) = a(i, j);
  for (Eigen::Index i = 0; i < b_dense.rows(); ++i)
    for (Eigen::Index j = 0; j < b_dense.cols(); ++j) v(pos++) = b_dense(i, j);
  return (k * v).norm() / std::max(1.0, v.norm());
}

}  // namespace pansharp
