#include "pansharp/prior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "pansharp/errors.hpp"
#include "pansharp/linalg.hpp"

namespace pansharp {

namespace {

void require_column(const Eigen::Ref<const Matrix>& a) {
  if (a.cols() != 1 || a.rows() < 1) {
    throw ShapeError("prior inverse needs an S x 1 spectral response, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  require_finite(a, "spectral response");
  if ((a.array() == 0.0).all()) {
    throw DegenerateError("spectral response is zero; m·A = 1 has no solution");
  }
}

// m_i = clip(center + lambda * a_i).
double clipped(double center, double lambda, double ai, const PriorBox& box) {
  return std::clamp(center + lambda * ai, box.lower, box.upper);
}

double constraint_value(const Vector& a, double lambda, const PriorBox& box) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    sum += a(i) * clipped(box.center(), lambda, a(i), box);
  return sum;
}

RowVector equality_projection(const Vector& a, double center) {
  const double lambda = (1.0 - center * a.sum()) / a.squaredNorm();
  return (RowVector::Constant(a.size(), center) + lambda * a.transpose());
}

}  // namespace

void PriorBox::validate() const {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw InvalidArgument("prior box needs finite lower < upper, got [" +
                          std::to_string(lower) + ", " +
                          std::to_string(upper) + "]");
  }
}

PriorInverse solve_prior_inverse(const Eigen::Ref<const Matrix>& a_in,
                                 const PriorBox& box) {
  box.validate();
  require_column(a_in);
  const Vector a = a_in.col(0);
  const Eigen::Index n = a.size();
  const double c = box.center();

  double lo_sum = 0.0;
  double hi_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    lo_sum += std::min(a(i) * box.lower, a(i) * box.upper);
    hi_sum += std::max(a(i) * box.lower, a(i) * box.upper);
  }

  PriorInverse out;
  if (!(lo_sum <= 1.0 && 1.0 <= hi_sum)) {
    out.m = equality_projection(a, c);
    out.inverse_ability = out.m.dot(a.transpose());
    out.feasible = false;
    return out;
  }

  // m(λ)·A is nondecreasing and piecewise linear in λ with kinks where a
  // coordinate reaches a bound. Locate the segment holding the root.
  std::vector<double> kinks;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (a(i) == 0.0) continue;
    kinks.push_back((box.lower - c) / a(i));
    kinks.push_back((box.upper - c) / a(i));
  }
  std::sort(kinks.begin(), kinks.end());

  std::size_t k = 0;
  while (k < kinks.size() && constraint_value(a, kinks[k], box) < 1.0) ++k;

  double probe;
  if (k == 0) {
    probe = kinks.front();
  } else if (k == kinks.size()) {
    probe = kinks.back();
  } else {
    probe = 0.5 * (kinks[k - 1] + kinks[k]);
  }

  // Fix the coordinates that are at a bound on this segment and solve the
  // equality constraint in closed form on the rest.
  out.m.resize(n);
  std::vector<Eigen::Index> free;
  double fixed_dot = 0.0;
  double free_a = 0.0;
  double free_a2 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = c + probe * a(i);
    if (a(i) != 0.0 && v > box.lower && v < box.upper) {
      free.push_back(i);
      free_a += a(i);
      free_a2 += a(i) * a(i);
    } else {
      out.m(i) = a(i) == 0.0 ? c : (v <= box.lower ? box.lower : box.upper);
      fixed_dot += out.m(i) * a(i);
    }
  }
  const double lambda =
      free.empty() ? probe : (1.0 - fixed_dot - c * free_a) / free_a2;
  for (Eigen::Index i : free) {
    out.m(i) = std::clamp(c + lambda * a(i), box.lower, box.upper);
  }

  out.inverse_ability = out.m.dot(a.transpose());
  out.feasible = std::abs(out.inverse_ability - 1.0) <= 1e-10;
  return out;
}

PriorInverse sample_prior_inverse(const Eigen::Ref<const Matrix>& a_in,
                                  const PriorBox& box, std::uint64_t seed,
                                  int steps) {
  PriorInverse start = solve_prior_inverse(a_in, box);
  const Vector a = a_in.col(0);
  if (!start.feasible || a.size() < 2) return start;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  RowVector m = start.m;
  const double a2 = a.squaredNorm();
  for (int step = 0; step < steps; ++step) {
    RowVector d(a.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = gauss(rng);
    d -= (d.dot(a.transpose()) / a2) * a.transpose();
    const double len = d.norm();
    if (len == 0.0) continue;
    d /= len;

    // Chord of the box along d through m.
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (d(i) == 0.0) continue;
      const double t1 = (box.lower - m(i)) / d(i);
      const double t2 = (box.upper - m(i)) / d(i);
      t_lo = std::max(t_lo, std::min(t1, t2));
      t_hi = std::min(t_hi, std::max(t1, t2));
    }
    if (!(t_lo < t_hi)) continue;
    std::uniform_real_distribution<double> uni(t_lo, t_hi);
    m += uni(rng) * d;
    for (Eigen::Index i = 0; i < m.size(); ++i)
      m(i) = std::clamp(m(i), box.lower, box.upper);
  }
  PriorInverse out;
  out.m = m;
  out.inverse_ability = m.dot(a.transpose());
  out.feasible = std::abs(out.inverse_ability - 1.0) <= 1e-8;
  return out;
}

RowVector covariance_weights(const Eigen::Ref<const Matrix>& u,
                             const Eigen::Ref<const Matrix>& z) {
  if (u.cols() != 1 || u.rows() != z.rows() || u.rows() == 0) {
    throw ShapeError("covariance_weights: intensity must be an n x 1 column "
                     "matching Z's " + std::to_string(z.rows()) + " rows");
  }
  const double n = static_cast<double>(u.rows());
  const Vector uc = u.col(0).array() - u.col(0).mean();
  const double var = uc.squaredNorm() / n;
  const double scale = u.cwiseAbs().maxCoeff();
  if (!(var > (1e-12 * scale) * (1e-12 * scale)) || var == 0.0) {
    throw DegenerateError("intensity image has zero variance");
  }
  const Matrix zc = z.rowwise() - z.colwise().mean();
  const RowVector cov = (uc.transpose() * zc) / n;
  return cov / var;
}

RowVector gsa_weights(const Eigen::Ref<const Matrix>& z,
                      const Eigen::Ref<const Matrix>& a) {
  if (a.cols() != 1 || a.rows() != z.cols()) {
    throw ShapeError("gsa_weights: A must be " + std::to_string(z.cols()) +
                     "x1");
  }
  const Matrix za = z * a;
  return covariance_weights(za, z);
}

}  // namespace pansharp
