#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "pansharp/errors.hpp"
#include "pansharp/raster_cube.hpp"
#include "test_support.hpp"

using namespace pansharp;

TEST(RasterCube, SingletonMatrix) {
  RasterCube c(1, 1, 1, {5.0});
  auto m = as_matrix(c);
  ASSERT_EQ(m.rows(), 1);
  ASSERT_EQ(m.cols(), 1);
  EXPECT_EQ(m(0, 0), 5.0);
}

TEST(RasterCube, RowMajorPixelOrder) {
  // Rows [[1,2],[3,4]].
  RasterCube c(2, 2, 1, {1, 2, 3, 4});
  auto m = as_matrix(c);
  ASSERT_EQ(m.rows(), 4);
  for (int p = 0; p < 4; ++p) EXPECT_EQ(m(p, 0), p + 1.0);
  EXPECT_EQ(c.at(1, 0, 0), 3.0);
}

TEST(RasterCube, ColumnIsBand) {
  // 2x1x3 cube; enumerate (p, b) against the planar layout formula.
  std::vector<double> data(6);
  for (int i = 0; i < 6; ++i) data[i] = 10.0 * i;
  RasterCube c(2, 1, 3, data);
  auto m = as_matrix(c);
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 3);
  for (int b = 0; b < 3; ++b)
    for (int p = 0; p < 2; ++p) EXPECT_EQ(m(p, b), data[b * 2 + p]);
}

TEST(RasterCube, ViewWritesPropagate) {
  RasterCube c(2, 2, 2);
  as_matrix(c)(3, 1) = 7.5;
  EXPECT_EQ(c.at(1, 1, 1), 7.5);
}

TEST(RasterCube, RejectsWrongLengthAndNonFinite) {
  EXPECT_THROW(RasterCube(2, 2, 1, {1, 2, 3}), ShapeError);
  EXPECT_THROW(RasterCube(1, 1, 1, {std::numeric_limits<double>::quiet_NaN()}),
               InvalidArgument);
  EXPECT_THROW(RasterCube(1, 1, 1, {std::numeric_limits<double>::infinity()}),
               InvalidArgument);
}

TEST(RasterCube, MatrixRoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index h = 1 + rng() % 7, w = 1 + rng() % 7, s = 1 + rng() % 5;
    const Matrix m = oracle::random_matrix(h * w, s, rng, -100, 100);
    const RasterCube c = RasterCube::from_matrix(m, h, w);
    EXPECT_EQ(Matrix(as_matrix(c)), m);
  }
}

TEST(BandSelect, IdentityOnSingleBand) {
  RasterCube c(2, 2, 1, {1, 2, 3, 4});
  const std::vector<std::size_t> idx{0};
  const RasterCube s = band_select(c, idx);
  EXPECT_EQ(std::vector<double>(s.data().begin(), s.data().end()),
            std::vector<double>(c.data().begin(), c.data().end()));
}

TEST(BandSelect, ReordersConstantBands) {
  RasterCube c(1, 2, 3, {10, 10, 20, 20, 30, 30});
  const std::vector<std::size_t> idx{2, 0};
  const RasterCube s = band_select(c, idx);
  ASSERT_EQ(s.bands(), 2u);
  EXPECT_EQ(s.at(0, 1, 0), 30.0);
  EXPECT_EQ(s.at(0, 0, 1), 10.0);
}

TEST(BandSelect, RgbCompositeOf128Bands) {
  // 1-based 60,40,21 -> 0-based 59,39,20.
  RasterCube c(2, 2, 128);
  for (std::size_t b = 0; b < 128; ++b)
    for (std::size_t p = 0; p < 4; ++p) c.at(p / 2, p % 2, b) = double(b);
  const std::vector<std::size_t> idx{59, 39, 20};
  const RasterCube rgb = band_select(c, idx);
  ASSERT_EQ(rgb.bands(), 3u);
  EXPECT_EQ(rgb.at(0, 0, 0), 59.0);
  EXPECT_EQ(rgb.at(1, 1, 1), 39.0);
  EXPECT_EQ(rgb.at(0, 1, 2), 20.0);
}

TEST(BandSelect, IsColumnSelectionProperty) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index s = 1 + rng() % 6;
    const Matrix m = oracle::random_matrix(12, s, rng);
    const RasterCube c = RasterCube::from_matrix(m, 3, 4);
    std::vector<std::size_t> idx(1 + rng() % 5);
    for (auto& i : idx) i = rng() % s;
    const RasterCube sel = band_select(c, idx);
    for (std::size_t k = 0; k < idx.size(); ++k)
      EXPECT_EQ(Matrix(as_matrix(sel).col(k)), Matrix(m.col(idx[k])));
  }
}

TEST(BandSelect, OutOfRange) {
  RasterCube c(1, 1, 2);
  const std::vector<std::size_t> idx{2};
  EXPECT_THROW(band_select(c, idx), InvalidArgument);
}

TEST(CubePair, ValidatesScale) {
  EXPECT_NO_THROW(pair_cubes(RasterCube(4, 6, 1), RasterCube(2, 3, 4)));
  EXPECT_EQ(pair_cubes(RasterCube(4, 6, 1), RasterCube(2, 3, 4)).scale, 2u);
  EXPECT_THROW(pair_cubes(RasterCube(4, 5, 1), RasterCube(2, 3, 4)), ShapeError);
  EXPECT_THROW(pair_cubes(RasterCube(2, 3, 1), RasterCube(2, 3, 4)), ShapeError);
}
