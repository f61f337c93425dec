#include "pansharp/fusion.hpp"

#include <cmath>
#include <string>

#include "pansharp/errors.hpp"
#include "pansharp/linalg.hpp"
#include "pansharp/metrics.hpp"

namespace pansharp {

namespace {

constexpr double kInverseAbilityTolerance = 1e-8;

void check_up_shapes(const Eigen::Ref<const Matrix>& y,
                     const Eigen::Ref<const Matrix>& z,
                     const SpatialOperator& v) {
  if (static_cast<std::size_t>(z.rows()) != v.in_shape().pixels() ||
      static_cast<std::size_t>(y.rows()) != v.out_shape().pixels()) {
    throw ShapeError("fusion: Y has " + std::to_string(y.rows()) +
                     " pixels and Z has " + std::to_string(z.rows()) +
                     ", but the up-sampler maps " +
                     std::to_string(v.in_shape().pixels()) + " to " +
                     std::to_string(v.out_shape().pixels()));
  }
}

void check_row(const Eigen::Ref<const RowVector>& row,
               const Eigen::Ref<const Matrix>& z, const char* what) {
  if (row.size() != z.cols()) {
    throw ShapeError(std::string(what) + " has " + std::to_string(row.size()) +
                     " entries for " + std::to_string(z.cols()) + " bands");
  }
}

// VZ + detail * row, detail being HW x 1.
RasterCube inject(const Matrix& vz, const Matrix& detail,
                  const Eigen::Ref<const RowVector>& row, Shape shape) {
  Matrix x = vz;
  x.noalias() += detail * row;
  return RasterCube::from_matrix(x, shape.height, shape.width);
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void note_inverse_ability(FusionResult& r, const Eigen::Ref<const Matrix>& a) {
  if (a.size() == 0 || a.cols() != 1) return;
  const double ia = (r.a_inv_used * a)(0, 0);
  if (std::abs(ia - 1.0) > kInverseAbilityTolerance) {
    r.warnings.push_back("injection row is not a generalized inverse of A "
                         "(A⁻A = " + std::to_string(ia) + ")");
  }
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kPcs: return "pcs";
    case Method::kPmra: return "pmra";
    case Method::kGsa: return "gsa";
    case Method::kMtfGlpCbd: return "cbd";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "pcs") return Method::kPcs;
  if (name == "pmra") return Method::kPmra;
  if (name == "gsa") return Method::kGsa;
  if (name == "cbd" || name == "mtf-glp-cbd") return Method::kMtfGlpCbd;
  throw InvalidArgument("unknown fusion method '" + std::string(name) + "'");
}

FusionForm form_of(Method m) {
  return (m == Method::kPcs || m == Method::kGsa)
             ? FusionForm::kComponentSubstitution
             : FusionForm::kMultiresolution;
}

std::string_view upsampler_name(Upsampler u) {
  return u == Upsampler::kReplicate ? "replicate" : "bilinear";
}

Upsampler parse_upsampler(std::string_view name) {
  if (name == "replicate") return Upsampler::kReplicate;
  if (name == "bilinear") return Upsampler::kBilinear;
  throw InvalidArgument("unknown up-sampler '" + std::string(name) + "'");
}

FusionResult fuse_pcs(const Eigen::Ref<const Matrix>& y,
                      const Eigen::Ref<const Matrix>& z,
                      const SpatialOperator& v,
                      const Eigen::Ref<const Matrix>& a,
                      const Eigen::Ref<const RowVector>& a_inv) {
  check_up_shapes(y, z, v);
  check_row(a_inv, z, "A⁻");
  if (a.rows() != z.cols() || a.cols() != y.cols() || y.cols() != 1) {
    throw ShapeError("fuse_pcs: A must be " + std::to_string(z.cols()) +
                     "x1 and Y single-band");
  }
  const Matrix vz = v.apply(z);
  const Matrix intensity = z * a;
  const Matrix detail = y - v.apply(intensity);

  FusionResult r;
  r.x = inject(vz, detail, a_inv, v.out_shape());
  r.method = Method::kPcs;
  r.a_used.a = a;
  r.a_inv_used = a_inv;
  note_inverse_ability(r, a);
  return r;
}

FusionResult fuse_pmra(const Eigen::Ref<const Matrix>& y,
                       const Eigen::Ref<const Matrix>& z,
                       const SpatialOperator& b, const SpatialOperator& v,
                       const Eigen::Ref<const RowVector>& a_inv) {
  check_up_shapes(y, z, v);
  check_row(a_inv, z, "A⁻");
  if (y.cols() != 1) throw ShapeError("fuse_pmra: Y must be single-band");
  const Matrix vz = v.apply(z);
  const Matrix low_pan = b.apply(y);
  const Matrix detail = y - v.apply(low_pan);

  FusionResult r;
  r.x = inject(vz, detail, a_inv, v.out_shape());
  r.method = Method::kPmra;
  r.dse = b.kind() == SpatialOperator::Kind::kDseWrapped;
  r.a_inv_used = a_inv;
  return r;
}

FusionResult fuse_gsa(const Eigen::Ref<const Matrix>& y,
                      const Eigen::Ref<const Matrix>& z,
                      const SpatialOperator& v,
                      const Eigen::Ref<const Matrix>& a) {
  const RowVector w = gsa_weights(z, a);
  FusionResult r = fuse_pcs(y, z, v, a, w);
  r.method = Method::kGsa;
  r.w_used = w;
  return r;
}

FusionResult fuse_mtf_glp_cbd(const Eigen::Ref<const Matrix>& y,
                              const Eigen::Ref<const Matrix>& z,
                              const SpatialOperator& b,
                              const SpatialOperator& v) {
  check_up_shapes(y, z, v);
  if (y.cols() != 1) throw ShapeError("fuse_mtf_glp_cbd: Y must be single-band");
  const Matrix low_pan = b.apply(y);
  const RowVector gains = covariance_weights(low_pan, z);
  FusionResult r = fuse_pmra(y, z, b, v, gains);
  r.method = Method::kMtfGlpCbd;
  r.w_used = gains;
  return r;
}

IdentityReport residual_identities(FusionForm form,
                                   const Eigen::Ref<const Matrix>& x,
                                   const Eigen::Ref<const Matrix>& y,
                                   const Eigen::Ref<const Matrix>& z,
                                   const Eigen::Ref<const Matrix>& a,
                                   const SpatialOperator& b,
                                   const SpatialOperator& v,
                                   const Eigen::Ref<const Matrix>& w) {
  if (a.rows() != z.cols() || a.cols() != y.cols() || w.rows() != a.cols() ||
      w.cols() != a.rows() || x.cols() != z.cols() || x.rows() != y.rows()) {
    throw ShapeError("residual_identities: inconsistent operand shapes");
  }
  const Eigen::Index s = a.cols();
  const Matrix i_minus_wa = Matrix::Identity(s, s) - w * a;
  const Matrix za = z * a;
  const Matrix by = b.apply(y);
  const Matrix bvz = b.apply(v.apply(z));

  Matrix spatial_rhs;
  Matrix spectral_rhs;
  if (form == FusionForm::kComponentSubstitution) {
    const Matrix vza = v.apply(za);
    spatial_rhs = (vza - y) * i_minus_wa;
    spectral_rhs = (bvz - z) + (by - b.apply(vza)) * w;
  } else {
    const Matrix vby = v.apply(by);
    spatial_rhs = v.apply(za - by) - (y - vby) * i_minus_wa;
    spectral_rhs = (bvz - z) + (by - b.apply(vby)) * w;
  }

  const Matrix spatial_lhs = x * a - y;
  const Matrix spectral_lhs = b.apply(x) - z;

  IdentityReport r;
  r.form = form;
  r.spatial_deviation = max_abs(spatial_lhs - spatial_rhs);
  r.spectral_deviation = max_abs(spectral_lhs - spectral_rhs);
  r.predicted_spatial_rmse =
      rms_difference(spatial_rhs, Matrix::Zero(spatial_rhs.rows(), spatial_rhs.cols()));
  r.predicted_spectral_rmse =
      rms_difference(spectral_rhs, Matrix::Zero(spectral_rhs.rows(), spectral_rhs.cols()));
  return r;
}

double total_error_check(const Eigen::Ref<const Matrix>& x_truth,
                         const Eigen::Ref<const Matrix>& y,
                         const Eigen::Ref<const Matrix>& z,
                         const SpatialOperator& b, const SpatialOperator& v,
                         const Eigen::Ref<const Matrix>& a,
                         const Eigen::Ref<const RowVector>& a_inv) {
  const FusionResult mra = fuse_pmra(y, z, b, v, a_inv);
  if (mra.x.matrix().rows() != x_truth.rows() ||
      mra.x.matrix().cols() != x_truth.cols()) {
    throw ShapeError("total_error_check: reference image shape mismatch");
  }
  const Matrix lhs = x_truth - mra.x.matrix();
  const Matrix high = x_truth - v.apply(b.apply(x_truth));
  const Matrix rhs = high - (high * a) * a_inv;
  return max_abs(lhs - rhs);
}

FusionSetup prepare_fusion(const CubePair& pair, bool dse, Upsampler upsampler) {
  pair.validate();
  if (pair.pan.bands() != 1) {
    throw ShapeError("pan image must be single-band, got " +
                     std::to_string(pair.pan.bands()) + " bands");
  }
  const auto r = pair.scale;
  auto bhat = SpatialOperator::block_mean_down(pair.pan.shape(), r);
  auto v = upsampler == Upsampler::kReplicate
               ? SpatialOperator::replicate_up(pair.ms.shape(), r)
               : SpatialOperator::bilinear_up(pair.ms.shape(), r);
  const auto y = pair.pan.matrix();
  const auto z = pair.ms.matrix();
  SpectralResponse a = estimate_a_dse(y, z, bhat);
  SpatialOperator b = dse ? dse_wrap(bhat, z) : bhat;
  return FusionSetup{std::move(bhat), std::move(b), std::move(v), std::move(a),
                     dse};
}

FusionResult fuse_with(const FusionSetup& setup, const CubePair& pair,
                       Method method, const PriorBox& box) {
  const auto y = pair.pan.matrix();
  const auto z = pair.ms.matrix();
  const Matrix& a = setup.a.a;

  FusionResult r;
  switch (method) {
    case Method::kPcs:
    case Method::kPmra: {
      const PriorInverse prior = solve_prior_inverse(a, box);
      r = method == Method::kPcs ? fuse_pcs(y, z, setup.v, a, prior.m)
                                 : fuse_pmra(y, z, setup.b, setup.v, prior.m);
      if (!prior.feasible) {
        r.warnings.push_back(
            "prior box admits no A⁻ with A⁻A = 1; using the equality-only "
            "projection");
      }
      break;
    }
    case Method::kGsa:
      r = fuse_gsa(y, z, setup.v, a);
      break;
    case Method::kMtfGlpCbd:
      r = fuse_mtf_glp_cbd(y, z, setup.b, setup.v);
      break;
  }
  r.method = method;
  r.dse = setup.dse;
  r.a_used = setup.a;
  if (!setup.a.full_rank) {
    r.warnings.push_back("MS matrix is rank deficient; used SVD pseudoinverse");
  }
  const double ia = (r.a_inv_used * a)(0, 0);
  if (std::abs(ia - 1.0) > kInverseAbilityTolerance) {
    if (method == Method::kPmra || method == Method::kMtfGlpCbd) {
      note_inverse_ability(r, a);
    }
    r.identities = residual_identities(form_of(method), r.x.matrix(), y, z, a,
                                       setup.b, setup.v, r.a_inv_used);
  }
  return r;
}

FusionResult fuse(const CubePair& pair, const FusionOptions& options) {
  const FusionSetup setup = prepare_fusion(pair, options.dse, options.upsampler);
  return fuse_with(setup, pair, options.method, options.box);
}

}  // namespace pansharp
