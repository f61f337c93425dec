#include "pansharp/spatial_operator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pansharp/errors.hpp"
#include "pansharp/linalg.hpp"

namespace pansharp {

namespace {

std::string shape_str(Shape s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width);
}

void require_scale(std::size_t r) {
  if (r < 1) throw InvalidArgument("sampling ratio must be >= 1");
}

void block_mean(const Eigen::Ref<const Matrix>& x, Shape in, std::size_t r,
                Matrix& out) {
  const std::size_t oh = in.height / r;
  const std::size_t ow = in.width / r;
  const double norm = 1.0 / static_cast<double>(r * r);
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double* src = x.col(k).data();
    double* dst = out.col(k).data();
    for (std::size_t i = 0; i < oh; ++i) {
      for (std::size_t j = 0; j < ow; ++j) {
        double sum = 0.0;
        for (std::size_t di = 0; di < r; ++di) {
          const double* row = src + (i * r + di) * in.width + j * r;
          for (std::size_t dj = 0; dj < r; ++dj) sum += row[dj];
        }
        dst[i * ow + j] = sum * norm;
      }
    }
  }
}

void replicate(const Eigen::Ref<const Matrix>& x, Shape in, std::size_t r,
               Matrix& out) {
  const std::size_t ow = in.width * r;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double* src = x.col(k).data();
    double* dst = out.col(k).data();
    for (std::size_t i = 0; i < in.height * r; ++i) {
      for (std::size_t j = 0; j < ow; ++j) {
        dst[i * ow + j] = src[(i / r) * in.width + j / r];
      }
    }
  }
}

// Source coordinate of output sample `o` for half-pixel-centered resampling.
struct Tap {
  std::size_t lo;
  std::size_t hi;
  double frac;
};

Tap bilinear_tap(std::size_t o, std::size_t r, std::size_t n) {
  double pos = (static_cast<double>(o) + 0.5) / static_cast<double>(r) - 0.5;
  pos = std::clamp(pos, 0.0, static_cast<double>(n - 1));
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, n - 1);
  return {lo, hi, pos - static_cast<double>(lo)};
}

void bilinear(const Eigen::Ref<const Matrix>& x, Shape in, std::size_t r,
              Matrix& out) {
  const std::size_t oh = in.height * r;
  const std::size_t ow = in.width * r;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double* src = x.col(k).data();
    double* dst = out.col(k).data();
    for (std::size_t i = 0; i < oh; ++i) {
      const Tap ty = bilinear_tap(i, r, in.height);
      for (std::size_t j = 0; j < ow; ++j) {
        const Tap tx = bilinear_tap(j, r, in.width);
        const double top = (1.0 - tx.frac) * src[ty.lo * in.width + tx.lo] +
                           tx.frac * src[ty.lo * in.width + tx.hi];
        const double bottom = (1.0 - tx.frac) * src[ty.hi * in.width + tx.lo] +
                              tx.frac * src[ty.hi * in.width + tx.hi];
        dst[i * ow + j] = (1.0 - ty.frac) * top + ty.frac * bottom;
      }
    }
  }
}

}  // namespace

SpatialOperator SpatialOperator::block_mean_down(Shape in, std::size_t r) {
  require_scale(r);
  if (in.height % r != 0 || in.width % r != 0) {
    throw ShapeError("image " + shape_str(in) + " is not divisible by " +
                     std::to_string(r));
  }
  return SpatialOperator(Kind::kBlockMeanDown, in,
                         {in.height / r, in.width / r}, r);
}

SpatialOperator SpatialOperator::replicate_up(Shape in, std::size_t r) {
  require_scale(r);
  return SpatialOperator(Kind::kReplicateUp, in,
                         {in.height * r, in.width * r}, r);
}

SpatialOperator SpatialOperator::bilinear_up(Shape in, std::size_t r) {
  require_scale(r);
  if (in.pixels() == 0) throw ShapeError("bilinear source must be non-empty");
  return SpatialOperator(Kind::kBilinearUp, in, {in.height * r, in.width * r},
                         r);
}

SpatialOperator SpatialOperator::explicit_matrix(Matrix m, Shape in,
                                                 Shape out) {
  if (static_cast<std::size_t>(m.rows()) != out.pixels() ||
      static_cast<std::size_t>(m.cols()) != in.pixels()) {
    throw ShapeError("explicit operator is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", expected " +
                     std::to_string(out.pixels()) + "x" +
                     std::to_string(in.pixels()));
  }
  require_finite(m, "explicit operator");
  SpatialOperator op(Kind::kExplicit, in, out, 0);
  op.payload_ = std::move(m);
  return op;
}

Matrix SpatialOperator::apply(const Eigen::Ref<const Matrix>& x) const {
  if (static_cast<std::size_t>(x.rows()) != in_.pixels()) {
    throw ShapeError("operator expects " + std::to_string(in_.pixels()) +
                     " pixel rows (" + shape_str(in_) + "), got " +
                     std::to_string(x.rows()));
  }
  Matrix out(static_cast<Eigen::Index>(out_.pixels()), x.cols());
  switch (kind_) {
    case Kind::kBlockMeanDown:
      block_mean(x, in_, scale_, out);
      break;
    case Kind::kReplicateUp:
      replicate(x, in_, scale_, out);
      break;
    case Kind::kBilinearUp:
      bilinear(x, in_, scale_, out);
      break;
    case Kind::kExplicit:
      out.noalias() = std::get<Matrix>(payload_) * x;
      break;
    case Kind::kDseWrapped: {
      const Dse& dse = std::get<Dse>(payload_);
      const Matrix low = dse.inner->apply(x);
      const Matrix coeffs = dse.z_pinv * low;
      out = dse.z * coeffs;
      break;
    }
  }
  return out;
}

Matrix SpatialOperator::materialize(std::size_t cap) const {
  const std::size_t n_in = in_.pixels();
  const std::size_t n_out = out_.pixels();
  if (n_in != 0 && n_out > cap / n_in) {
    throw CapExceededError("materializing " + std::to_string(n_out) + "x" +
                           std::to_string(n_in) + " operator exceeds cap " +
                           std::to_string(cap));
  }
  if (kind_ == Kind::kExplicit) return std::get<Matrix>(payload_);

  Matrix dense(static_cast<Eigen::Index>(n_out), static_cast<Eigen::Index>(n_in));
  constexpr Eigen::Index kChunk = 256;
  const auto total = static_cast<Eigen::Index>(n_in);
  for (Eigen::Index start = 0; start < total; start += kChunk) {
    const Eigen::Index len = std::min(kChunk, total - start);
    Matrix probe = Matrix::Zero(total, len);
    for (Eigen::Index c = 0; c < len; ++c) probe(start + c, c) = 1.0;
    dense.middleCols(start, len) = apply(probe);
  }
  return dense;
}

const SpatialOperator* SpatialOperator::inner() const {
  const auto* dse = std::get_if<Dse>(&payload_);
  return dse ? dse->inner.get() : nullptr;
}

const Matrix& SpatialOperator::z() const {
  const auto* dse = std::get_if<Dse>(&payload_);
  if (!dse) throw InvalidArgument("operator is not DSE-wrapped");
  return dse->z;
}

const Matrix& SpatialOperator::z_pinv() const {
  const auto* dse = std::get_if<Dse>(&payload_);
  if (!dse) throw InvalidArgument("operator is not DSE-wrapped");
  return dse->z_pinv;
}

bool SpatialOperator::rank_deficient() const {
  const auto* dse = std::get_if<Dse>(&payload_);
  return dse != nullptr && dse->rank_deficient;
}

DataPinv data_pinv(const Eigen::Ref<const Matrix>& z) {
  try {
    return {full_rank_left_pinv(z), true};
  } catch (const RankDeficiencyError&) {
    return {moore_penrose(z), false};
  }
}

SpatialOperator dse_wrap(const SpatialOperator& bhat,
                         const Eigen::Ref<const Matrix>& z) {
  if (static_cast<std::size_t>(z.rows()) != bhat.out_shape().pixels()) {
    throw ShapeError("Z has " + std::to_string(z.rows()) +
                     " pixel rows but the down-sampler produces " +
                     std::to_string(bhat.out_shape().pixels()));
  }
  DataPinv zp = data_pinv(z);
  SpatialOperator op(SpatialOperator::Kind::kDseWrapped, bhat.in_shape(),
                     bhat.out_shape(), bhat.scale());
  op.payload_ = SpatialOperator::Dse{std::make_shared<const SpatialOperator>(bhat),
                                     Matrix(z), std::move(zp.pinv),
                                     !zp.full_rank};
  return op;
}

}  // namespace pansharp
