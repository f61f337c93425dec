#include "pansharp/metrics.hpp"

#include <cmath>
#include <string>

#include "pansharp/errors.hpp"

namespace pansharp {

namespace {

void require_same_shape(const Eigen::Ref<const Matrix>& lhs,
                        const Eigen::Ref<const Matrix>& rhs, const char* what) {
  if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
    throw ShapeError(std::string(what) + ": " + std::to_string(lhs.rows()) +
                     "x" + std::to_string(lhs.cols()) + " vs " +
                     std::to_string(rhs.rows()) + "x" +
                     std::to_string(rhs.cols()));
  }
}

}  // namespace

double rms_difference(const Eigen::Ref<const Matrix>& lhs,
                      const Eigen::Ref<const Matrix>& rhs) {
  require_same_shape(lhs, rhs, "rms_difference");
  if (lhs.size() == 0) return 0.0;
  // Neumaier summation, fixed column-major order.
  double sum = 0.0;
  double carry = 0.0;
  for (Eigen::Index c = 0; c < lhs.cols(); ++c) {
    for (Eigen::Index r = 0; r < lhs.rows(); ++r) {
      const double d = lhs(r, c) - rhs(r, c);
      const double term = d * d;
      const double t = sum + term;
      if (std::abs(sum) >= std::abs(term)) {
        carry += (sum - t) + term;
      } else {
        carry += (term - t) + sum;
      }
      sum = t;
    }
  }
  return std::sqrt((sum + carry) / static_cast<double>(lhs.size()));
}

double consistent_rmse(const Eigen::Ref<const Matrix>& z,
                       const Eigen::Ref<const Matrix>& a,
                       const SpatialOperator& b,
                       const Eigen::Ref<const Matrix>& y) {
  if (a.rows() != z.cols()) throw ShapeError("consistent_rmse: A rows != bands of Z");
  const Matrix za = z * a;
  const Matrix by = b.apply(y);
  require_same_shape(za, by, "consistent_rmse");
  return rms_difference(za, by);
}

double spatial_rmse(const Eigen::Ref<const Matrix>& x,
                    const Eigen::Ref<const Matrix>& a,
                    const Eigen::Ref<const Matrix>& y) {
  if (a.rows() != x.cols()) throw ShapeError("spatial_rmse: A rows != bands of X");
  const Matrix xa = x * a;
  require_same_shape(xa, y, "spatial_rmse");
  return rms_difference(xa, y);
}

double spectral_rmse(const SpatialOperator& b, const Eigen::Ref<const Matrix>& x,
                     const Eigen::Ref<const Matrix>& z) {
  const Matrix bx = b.apply(x);
  require_same_shape(bx, z, "spectral_rmse");
  return rms_difference(bx, z);
}

double inverse_ability(const Eigen::Ref<const Matrix>& a_inv,
                       const Eigen::Ref<const Matrix>& a) {
  if (a_inv.rows() != 1 || a.cols() != 1 || a_inv.cols() != a.rows()) {
    throw ShapeError("inverse_ability needs a 1xS row and an Sx1 column");
  }
  return (a_inv * a)(0, 0);
}

double rmse(const Eigen::Ref<const Matrix>& truth,
            const Eigen::Ref<const Matrix>& recovered) {
  return rms_difference(truth, recovered);
}

MetricReport evaluate(const Eigen::Ref<const Matrix>& x,
                      const Eigen::Ref<const Matrix>& y,
                      const Eigen::Ref<const Matrix>& z,
                      const Eigen::Ref<const Matrix>& a,
                      const Eigen::Ref<const Matrix>& a_inv,
                      const SpatialOperator& b, const Matrix* truth) {
  MetricReport m;
  m.consistent_rmse = consistent_rmse(z, a, b, y);
  m.spatial_rmse = spatial_rmse(x, a, y);
  m.spectral_rmse = spectral_rmse(b, x, z);
  m.inverse_ability = inverse_ability(a_inv, a);
  if (truth != nullptr) m.rmse = rmse(*truth, x);
  return m;
}

}  // namespace pansharp
