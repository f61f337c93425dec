#include <gtest/gtest.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "pansharp/raster_io.hpp"
#include "pansharp/synth.hpp"

using namespace pansharp;
namespace fs = std::filesystem;

namespace {

class RasterIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pansharp_io_" + std::to_string(::testing::UnitTest::GetInstance()
                                                ->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  static std::vector<char> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
};

RasterError::Code code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const RasterError& e) {
    return e.raster_code();
  }
  ADD_FAILURE() << "expected RasterError";
  return RasterError::Code::kIo;
}

}  // namespace

TEST_F(RasterIo, F64RoundTripIsBitExact) {
  const RasterCube c = random_cube(5, 7, 3, 1);
  write_raster(c, path("a.raw"));
  const RasterCube back = read_raster(path("a.raw"));
  ASSERT_EQ(back.height(), 5u);
  ASSERT_EQ(back.width(), 7u);
  ASSERT_EQ(back.bands(), 3u);
  EXPECT_EQ(std::memcmp(back.data().data(), c.data().data(), c.data().size_bytes()), 0);

  write_raster(back, path("b.raw"));
  EXPECT_EQ(slurp(path("a.raw")), slurp(path("b.raw")));
  EXPECT_EQ(slurp(sidecar_path(path("a.raw"))), slurp(sidecar_path(path("b.raw"))));
}

TEST_F(RasterIo, U16WidensExactly) {
  RasterCube c(1, 2, 1, {65535.0, 0.0});
  write_raster(c, path("u.raw"), Dtype::kU16);
  EXPECT_EQ(fs::file_size(path("u.raw")), 4u);
  const RasterCube back = read_raster(path("u.raw"));
  EXPECT_EQ(back.at(0, 0, 0), 65535.0);
  EXPECT_EQ(back.at(0, 1, 0), 0.0);
}

TEST_F(RasterIo, IntegerRoundingIsHalfEven) {
  RasterCube c(1, 4, 1, {0.5, 1.5, 2.5, 2.4});
  write_raster(c, path("r.raw"), Dtype::kU8);
  const RasterCube back = read_raster(path("r.raw"));
  EXPECT_EQ(back.at(0, 0, 0), 0.0);
  EXPECT_EQ(back.at(0, 1, 0), 2.0);
  EXPECT_EQ(back.at(0, 2, 0), 2.0);
  EXPECT_EQ(back.at(0, 3, 0), 2.0);
}

TEST_F(RasterIo, RangeViolationUnlessClamped) {
  RasterCube c(1, 2, 1, {-3.0, 300.0});
  EXPECT_EQ(code_of([&] { write_raster(c, path("v.raw"), Dtype::kU8); }),
            RasterError::Code::kRangeViolation);
  EXPECT_FALSE(fs::exists(path("v.raw")));
  write_raster(c, path("v.raw"), Dtype::kU8, true);
  const RasterCube back = read_raster(path("v.raw"));
  EXPECT_EQ(back.at(0, 0, 0), 0.0);
  EXPECT_EQ(back.at(0, 1, 0), 255.0);
}

TEST_F(RasterIo, F32) {
  RasterCube c(1, 1, 2, {0.25, -3.5});
  write_raster(c, path("f.raw"), Dtype::kF32);
  EXPECT_EQ(fs::file_size(path("f.raw")), 8u);
  const RasterCube back = read_raster(path("f.raw"));
  EXPECT_EQ(back.at(0, 0, 1), -3.5);
}

TEST_F(RasterIo, TruncatedPayloadNamesByteCounts) {
  write_raster(RasterCube(2, 2, 2), path("t.raw"));
  fs::resize_file(path("t.raw"), 60);
  try {
    read_raster(path("t.raw"));
    FAIL() << "expected size mismatch";
  } catch (const RasterError& e) {
    EXPECT_EQ(e.raster_code(), RasterError::Code::kSizeMismatch);
    EXPECT_NE(std::string(e.what()).find("64"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("60"), std::string::npos);
  }
}

TEST_F(RasterIo, DistinctErrorCodes) {
  std::ofstream(path("nohdr.raw")) << "x";
  EXPECT_EQ(code_of([&] { read_raster(path("nohdr.raw")); }),
            RasterError::Code::kMissingSidecar);

  write_raster(RasterCube(1, 1, 1), path("d.raw"));
  std::ofstream(sidecar_path(path("d.raw")))
      << "height = 1\nwidth = 1\nbands = 1\ndtype = c64\n";
  EXPECT_EQ(code_of([&] { read_raster(path("d.raw")); }),
            RasterError::Code::kUnknownDtype);

  std::ofstream(sidecar_path(path("d.raw"))) << "height = 1\nwidth\n";
  EXPECT_EQ(code_of([&] { read_raster(path("d.raw")); }),
            RasterError::Code::kMalformedHeader);

  std::ofstream(sidecar_path(path("d.raw"))) << "height = 1\nwidth = 1\nbands = 1\n";
  EXPECT_EQ(code_of([&] { read_raster(path("d.raw")); }),
            RasterError::Code::kMalformedHeader);
}

TEST_F(RasterIo, ExtraKeysSurvive) {
  write_raster(RasterCube(1, 1, 1), path("e.raw"), Dtype::kF64, false,
               {{"method", "gsa"}, {"a_inv_used", "1,2"}});
  RasterHeader h;
  read_raster(path("e.raw"), &h);
  EXPECT_EQ(h.extra.at("method"), "gsa");
  EXPECT_EQ(parse_numbers(h.extra.at("a_inv_used")), (std::vector<double>{1, 2}));
  EXPECT_FALSE(fs::exists(path("e.raw.tmp")));
}

TEST_F(RasterIo, MatrixTextRoundTrip) {
  Matrix m(3, 1);
  m << 0.125, 1.0 / 3, -2e-9;
  write_matrix_text(m, path("a.txt"));
  EXPECT_EQ(read_matrix_text(path("a.txt")), m);
}

TEST(Formatting, CsvRowsAndNumbers) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.1), "0.1");
  MetricReport m;
  m.inverse_ability = 1.0;
  EXPECT_EQ(format_csv_row("gsa", true, m), "gsa,true,0,0,0,1,");
  m.rmse = 2.5;
  EXPECT_EQ(format_csv_row("pcs", false, m), "pcs,false,0,0,0,1,2.5");
  m.inverse_ability = std::nan("");
  EXPECT_EQ(format_csv_row("pcs", false, m), "pcs,false,0,0,0,,2.5");
  EXPECT_NE(format_metric_table(m).find("2.50"), std::string::npos);
}
