#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pansharp/prior.hpp"
#include "pansharp/raster_cube.hpp"
#include "pansharp/response.hpp"
#include "pansharp/spatial_operator.hpp"

namespace pansharp {

enum class Method { kPcs, kPmra, kGsa, kMtfGlpCbd };

/// Short lowercase name used on the command line and in CSV output:
/// "pcs", "pmra", "gsa", "cbd".
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

/// Which detail-injection form a fused image was built with.
enum class FusionForm {
  kComponentSubstitution,  // X = VZ + (Y − V(ZA)) W
  kMultiresolution,        // X = VZ + (Y − V(BY)) W
};

FusionForm form_of(Method m);

/// Both sides of the two error identities for one fused image, plus the
/// root-mean-square of their right-hand sides.
struct IdentityReport {
  FusionForm form = FusionForm::kComponentSubstitution;
  /// max |(X A − Y) − predicted| elementwise.
  double spatial_deviation = 0.0;
  /// max |(B X − Z) − predicted| elementwise.
  double spectral_deviation = 0.0;
  double predicted_spatial_rmse = 0.0;
  double predicted_spectral_rmse = 0.0;
};

struct FusionResult {
  RasterCube x;
  Method method = Method::kPcs;
  bool dse = false;
  SpectralResponse a_used;
  /// The row actually injected: A⁻ for PCS/PMRA, W for GSA, g for CBD.
  RowVector a_inv_used;
  /// GSA / CBD weights; empty for PCS and PMRA.
  RowVector w_used;
  std::vector<std::string> warnings;
  /// Error decomposition, filled when the injected row is not a generalized
  /// inverse of A (|A⁻A − 1| > 1e-8).
  std::optional<IdentityReport> identities;
};

/// X = VZ + (Y − V(ZA)) A⁻.
FusionResult fuse_pcs(const Eigen::Ref<const Matrix>& y,
                      const Eigen::Ref<const Matrix>& z,
                      const SpatialOperator& v,
                      const Eigen::Ref<const Matrix>& a,
                      const Eigen::Ref<const RowVector>& a_inv);

/// X = VZ + (Y − V(BY)) A⁻.
FusionResult fuse_pmra(const Eigen::Ref<const Matrix>& y,
                       const Eigen::Ref<const Matrix>& z,
                       const SpatialOperator& b, const SpatialOperator& v,
                       const Eigen::Ref<const RowVector>& a_inv);

/// CS form with W = var(ZA)⁻¹ cov(ZA, Z).
FusionResult fuse_gsa(const Eigen::Ref<const Matrix>& y,
                      const Eigen::Ref<const Matrix>& z,
                      const SpatialOperator& v,
                      const Eigen::Ref<const Matrix>& a);

/// MRA form with per-band gains g_k = cov(BY, Z_k) / var(BY).
FusionResult fuse_mtf_glp_cbd(const Eigen::Ref<const Matrix>& y,
                              const Eigen::Ref<const Matrix>& z,
                              const SpatialOperator& b,
                              const SpatialOperator& v);

/// Evaluates the CS-form (spatial: (VZA − Y)(I − WA); spectral:
/// (BV − I)Z + (BY − BVZA)W) or MRA-form (spatial: V(ZA − BY) −
/// (I − VB)Y(I − WA); spectral: (BV − I)Z + (B − BVB)YW) identities for a
/// fused X built with injection row W.
IdentityReport residual_identities(FusionForm form,
                                   const Eigen::Ref<const Matrix>& x,
                                   const Eigen::Ref<const Matrix>& y,
                                   const Eigen::Ref<const Matrix>& z,
                                   const Eigen::Ref<const Matrix>& a,
                                   const SpatialOperator& b,
                                   const SpatialOperator& v,
                                   const Eigen::Ref<const Matrix>& w);

/// max |(X − X_mra) − (I − VB) X (I − A A⁻)| elementwise, where X_mra is
/// fuse_pmra on the supplied (Y, Z). Only meaningful when Y = XA and Z = BX.
double total_error_check(const Eigen::Ref<const Matrix>& x_truth,
                         const Eigen::Ref<const Matrix>& y,
                         const Eigen::Ref<const Matrix>& z,
                         const SpatialOperator& b, const SpatialOperator& v,
                         const Eigen::Ref<const Matrix>& a,
                         const Eigen::Ref<const RowVector>& a_inv);

enum class Upsampler { kReplicate, kBilinear };

std::string_view upsampler_name(Upsampler u);
Upsampler parse_upsampler(std::string_view name);

/// Operators and spectral response shared by every method on one pair.
struct FusionSetup {
  SpatialOperator bhat;  // block-mean down-sampler
  SpatialOperator b;     // bhat, or Z Z⁺ bhat under DSE
  SpatialOperator v;     // up-sampler standing in for B⁻
  SpectralResponse a;    // Z⁺ bhat Y
  bool dse = false;
};

FusionSetup prepare_fusion(const CubePair& pair, bool dse,
                           Upsampler upsampler = Upsampler::kReplicate);

struct FusionOptions {
  Method method = Method::kPcs;
  bool dse = false;
  PriorBox box{};
  Upsampler upsampler = Upsampler::kReplicate;
};

/// Full pipeline: estimate A, optionally enhance B, choose the injection row
/// for the method, fuse. Pan must be single-band.
FusionResult fuse(const CubePair& pair, const FusionOptions& options);

/// Same as `fuse` but reuses a prepared setup.
FusionResult fuse_with(const FusionSetup& setup, const CubePair& pair,
                       Method method, const PriorBox& box);

}  // namespace pansharp
