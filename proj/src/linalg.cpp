#include "pansharp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pansharp/errors.hpp"

namespace pansharp {

namespace {

// Reciprocal condition of MᵀM below which the normal equations are refused.
// cond(MᵀM) = cond(M)², so this admits cond(M) up to ~1e6.
constexpr double kNormalEquationsMinRcond = 1e-12;

struct Svd {
  Matrix u;
  Vector sigma;
  Matrix v;
};

// Eigen 3.4.0's divide-and-conquer SVD can return a wrong factorization for
// some rank-deficient inputs, so the result is checked and redone with the
// one-sided Jacobi SVD when it does not reproduce the input.
Svd thin_svd(const Eigen::Ref<const Matrix>& m) {
  constexpr unsigned kFlags = Eigen::ComputeThinU | Eigen::ComputeThinV;
  Eigen::BDCSVD<Matrix> bdc(m, kFlags);
  Svd out{bdc.matrixU(), bdc.singularValues(), bdc.matrixV()};
  const double scale = std::max(m.norm(), std::numeric_limits<double>::min());
  const double recon =
      (out.u * out.sigma.asDiagonal() * out.v.transpose() - m).norm() / scale;
  if (recon <= 1e-12 * std::sqrt(double(std::max(m.rows(), m.cols())))) return out;
  Eigen::JacobiSVD<Matrix> jac(m, kFlags);
  return {jac.matrixU(), jac.singularValues(), jac.matrixV()};
}

}  // namespace

void require_finite(const Eigen::Ref<const Matrix>& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidArgument(std::string(what) + " contains non-finite entries");
  }
}

Matrix moore_penrose(const Eigen::Ref<const Matrix>& m, double rel_tolerance) {
  require_finite(m, "pseudoinverse input");
  if (!(rel_tolerance > 0.0)) {
    throw InvalidArgument("pseudoinverse tolerance must be positive");
  }
  if (m.size() == 0) return Matrix::Zero(m.cols(), m.rows());

  const Svd svd = thin_svd(m);
  const Vector& sigma = svd.sigma;
  const double cutoff = rel_tolerance * (sigma.size() > 0 ? sigma(0) : 0.0);

  Vector inv_sigma = Vector::Zero(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) inv_sigma(i) = 1.0 / sigma(i);
  }
  return svd.v * inv_sigma.asDiagonal() * svd.u.transpose();
}

Matrix full_rank_left_pinv(const Eigen::Ref<const Matrix>& m) {
  require_finite(m, "left pseudoinverse input");
  if (m.rows() < m.cols()) {
    throw RankDeficiencyError("matrix with " + std::to_string(m.rows()) +
                              " rows cannot have full column rank " +
                              std::to_string(m.cols()));
  }
  const Matrix gram = m.transpose() * m;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success || !(llt.rcond() > kNormalEquationsMinRcond)) {
    throw RankDeficiencyError("normal matrix is singular or ill-conditioned");
  }
  return llt.solve(m.transpose());
}

Eigen::Index numerical_rank(const Eigen::Ref<const Matrix>& m,
                            double rel_tolerance) {
  if (m.size() == 0) return 0;
  const Vector sigma = thin_svd(m).sigma;
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double cutoff = rel_tolerance * sigma(0);
  return (sigma.array() > cutoff).count();
}

double relative_deviation(const Eigen::Ref<const Matrix>& lhs,
                          const Eigen::Ref<const Matrix>& rhs) {
  return (lhs - rhs).norm() / std::max(1.0, rhs.norm());
}

PenroseReport check_generalized_inverse(const Eigen::Ref<const Matrix>& a,
                                        const Eigen::Ref<const Matrix>& g,
                                        double tol) {
  if (g.rows() != a.cols() || g.cols() != a.rows()) {
    throw ShapeError("generalized inverse of a " + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " matrix must be " +
                     std::to_string(a.cols()) + "x" + std::to_string(a.rows()));
  }
  const Matrix ag = a * g;
  const Matrix ga = g * a;

  PenroseReport report;
  report.residuals[0] = relative_deviation(ag * a, a);
  report.residuals[1] = relative_deviation(ga * g, g);
  report.residuals[2] = relative_deviation(ag.transpose(), ag);
  report.residuals[3] = relative_deviation(ga.transpose(), ga);
  for (std::size_t i = 0; i < 4; ++i) {
    report.penrose_conditions[i] = report.residuals[i] <= tol;
    report.max_residual = std::max(report.max_residual, report.residuals[i]);
  }
  report.is_gen_inverse = report.penrose_conditions[0];
  return report;
}

}  // namespace pansharp
