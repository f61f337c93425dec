#include "pansharp/raster_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace pansharp {

namespace fs = std::filesystem;

namespace {

std::string_view code_tag(RasterError::Code c) {
  switch (c) {
    case RasterError::Code::kMissingSidecar: return "missing_sidecar";
    case RasterError::Code::kSizeMismatch: return "size_mismatch";
    case RasterError::Code::kUnknownDtype: return "unknown_dtype";
    case RasterError::Code::kMalformedHeader: return "malformed_header";
    case RasterError::Code::kIo: return "io";
    case RasterError::Code::kRangeViolation: return "range_violation";
  }
  return "io";
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t out = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw RasterError(RasterError::Code::kMalformedHeader,
                      "header field '" + key + "' is not a count: " + value);
  }
  return out;
}

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
}

template <typename T>
void decode(const std::vector<char>& raw, std::vector<double>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    T v;
    std::memcpy(&v, raw.data() + i * sizeof(T), sizeof(T));
    out[i] = static_cast<double>(to_little(v));
  }
}

template <typename T>
void encode_float(std::span<const double> in, std::vector<char>& raw) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    const T v = to_little(static_cast<T>(in[i]));
    std::memcpy(raw.data() + i * sizeof(T), &v, sizeof(T));
  }
}

template <typename T>
void encode_int(std::span<const double> in, std::vector<char>& raw, bool clamp) {
  constexpr double lo = static_cast<double>(std::numeric_limits<T>::min());
  constexpr double hi = static_cast<double>(std::numeric_limits<T>::max());
  for (std::size_t i = 0; i < in.size(); ++i) {
    double r = std::nearbyint(in[i]);  // default mode: ties to even
    if (r < lo || r > hi) {
      if (!clamp) {
        throw RasterError(RasterError::Code::kRangeViolation,
                          "sample " + format_number(in[i]) + " at index " +
                              std::to_string(i) + " is outside [" +
                              format_number(lo) + ", " + format_number(hi) +
                              "]");
      }
      r = std::clamp(r, lo, hi);
    }
    const T v = to_little(static_cast<T>(r));
    std::memcpy(raw.data() + i * sizeof(T), &v, sizeof(T));
  }
}

void write_file(const fs::path& path, const char* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw RasterError(RasterError::Code::kIo, "cannot open " + path.string());
  }
  out.write(data, static_cast<std::streamsize>(size));
  out.close();
  if (!out) {
    throw RasterError(RasterError::Code::kIo, "write failed: " + path.string());
  }
}

void commit(const fs::path& tmp, const fs::path& dst) {
  std::error_code ec;
  fs::rename(tmp, dst, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw RasterError(RasterError::Code::kIo,
                      "cannot move " + tmp.string() + " to " + dst.string());
  }
}

std::string fixed2(double v) {
  if (std::isnan(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // Avoid "-0.00" for tiny negative values.
  if (std::strcmp(buf, "-0.00") == 0) return "0.00";
  return buf;
}

}  // namespace

RasterError::RasterError(Code code, const std::string& message)
    : Error(ErrorKind::kData, std::string(code_tag(code)), message),
      raster_code_(code) {}

std::string_view dtype_name(Dtype d) {
  switch (d) {
    case Dtype::kF32: return "f32";
    case Dtype::kF64: return "f64";
    case Dtype::kU8: return "u8";
    case Dtype::kU16: return "u16";
  }
  return "f64";
}

std::size_t dtype_size(Dtype d) {
  switch (d) {
    case Dtype::kF32: return 4;
    case Dtype::kF64: return 8;
    case Dtype::kU8: return 1;
    case Dtype::kU16: return 2;
  }
  return 8;
}

Dtype parse_dtype(std::string_view name) {
  if (name == "f32") return Dtype::kF32;
  if (name == "f64") return Dtype::kF64;
  if (name == "u8") return Dtype::kU8;
  if (name == "u16") return Dtype::kU16;
  throw RasterError(RasterError::Code::kUnknownDtype,
                    "unknown dtype '" + std::string(name) + "'");
}

fs::path sidecar_path(const fs::path& payload) {
  fs::path p = payload;
  p += ".hdr";
  return p;
}

RasterHeader read_header(const fs::path& payload) {
  const fs::path hdr = sidecar_path(payload);
  std::ifstream in(hdr);
  if (!in) {
    throw RasterError(RasterError::Code::kMissingSidecar,
                      "missing sidecar header " + hdr.string());
  }
  RasterHeader h;
  bool have_h = false, have_w = false, have_b = false, have_d = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw RasterError(RasterError::Code::kMalformedHeader,
                        hdr.string() + ":" + std::to_string(line_no) +
                            ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key == "height") {
      h.height = parse_count(key, value);
      have_h = true;
    } else if (key == "width") {
      h.width = parse_count(key, value);
      have_w = true;
    } else if (key == "bands") {
      h.bands = parse_count(key, value);
      have_b = true;
    } else if (key == "dtype") {
      h.dtype = parse_dtype(value);
      have_d = true;
    } else if (key == "layout") {
      if (value != "planar") {
        throw RasterError(RasterError::Code::kMalformedHeader,
                          "unsupported layout '" + value + "'");
      }
    } else if (key == "byte_order") {
      if (value != "little-endian") {
        throw RasterError(RasterError::Code::kMalformedHeader,
                          "unsupported byte order '" + value + "'");
      }
    } else {
      h.extra[key] = value;
    }
  }
  if (!(have_h && have_w && have_b && have_d)) {
    throw RasterError(RasterError::Code::kMalformedHeader,
                      hdr.string() + " lacks one of height/width/bands/dtype");
  }
  return h;
}

RasterCube read_raster(const fs::path& payload, RasterHeader* header) {
  RasterHeader h = read_header(payload);
  const std::size_t count = h.height * h.width * h.bands;
  const std::size_t expected = count * dtype_size(h.dtype);

  std::error_code ec;
  const auto actual = fs::file_size(payload, ec);
  if (ec) {
    throw RasterError(RasterError::Code::kIo, "cannot stat " + payload.string());
  }
  if (actual != expected) {
    throw RasterError(RasterError::Code::kSizeMismatch,
                      payload.string() + ": expected " +
                          std::to_string(expected) + " bytes, found " +
                          std::to_string(actual));
  }
  std::vector<char> raw(expected);
  std::ifstream in(payload, std::ios::binary);
  if (!in.read(raw.data(), static_cast<std::streamsize>(expected))) {
    throw RasterError(RasterError::Code::kIo, "read failed: " + payload.string());
  }
  std::vector<double> data(count);
  switch (h.dtype) {
    case Dtype::kF32: decode<float>(raw, data); break;
    case Dtype::kF64: decode<double>(raw, data); break;
    case Dtype::kU8: decode<std::uint8_t>(raw, data); break;
    case Dtype::kU16: decode<std::uint16_t>(raw, data); break;
  }
  RasterCube cube(h.height, h.width, h.bands, std::move(data));
  if (header != nullptr) *header = std::move(h);
  return cube;
}

void write_raster(const RasterCube& cube, const fs::path& payload, Dtype dtype,
                  bool clamp, const std::map<std::string, std::string>& extra) {
  const auto samples = cube.data();
  std::vector<char> raw(samples.size() * dtype_size(dtype));
  switch (dtype) {
    case Dtype::kF32: encode_float<float>(samples, raw); break;
    case Dtype::kF64: encode_float<double>(samples, raw); break;
    case Dtype::kU8: encode_int<std::uint8_t>(samples, raw, clamp); break;
    case Dtype::kU16: encode_int<std::uint16_t>(samples, raw, clamp); break;
  }

  std::ostringstream hdr;
  hdr << "height = " << cube.height() << "\n"
      << "width = " << cube.width() << "\n"
      << "bands = " << cube.bands() << "\n"
      << "dtype = " << dtype_name(dtype) << "\n"
      << "layout = planar\n"
      << "byte_order = little-endian\n";
  for (const auto& [key, value] : extra) hdr << key << " = " << value << "\n";
  const std::string hdr_text = hdr.str();

  fs::path tmp_payload = payload;
  tmp_payload += ".tmp";
  const fs::path hdr_path = sidecar_path(payload);
  fs::path tmp_hdr = hdr_path;
  tmp_hdr += ".tmp";
  write_file(tmp_payload, raw.data(), raw.size());
  write_file(tmp_hdr, hdr_text.data(), hdr_text.size());
  commit(tmp_payload, payload);
  commit(tmp_hdr, hdr_path);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string format_row(const Eigen::Ref<const Matrix>& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (i) out += ',';
    out += format_number(m(i / m.cols(), i % m.cols()));
  }
  return out;
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    const std::string item = trim(text.substr(pos, next - pos));
    if (!item.empty()) {
      double v = 0.0;
      const auto* end = item.data() + item.size();
      auto [ptr, ec] = std::from_chars(item.data(), end, v);
      if (ec != std::errc() || ptr != end) {
        throw InvalidArgument("not a number: '" + item + "'");
      }
      out.push_back(v);
    }
    pos = next + 1;
  }
  return out;
}

void write_matrix_text(const Eigen::Ref<const Matrix>& m, const fs::path& path) {
  std::ostringstream os;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << format_number(m(i, j));
    }
    os << '\n';
  }
  const std::string text = os.str();
  fs::path tmp = path;
  tmp += ".tmp";
  write_file(tmp, text.data(), text.size());
  commit(tmp, path);
}

Matrix read_matrix_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw RasterError(RasterError::Code::kIo, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      const auto parsed = parse_numbers(tok);
      row.insert(row.end(), parsed.begin(), parsed.end());
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) return Matrix();
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) {
      throw RasterError(RasterError::Code::kMalformedHeader,
                        path.string() + ": ragged matrix rows");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string format_csv_row(std::string_view method, bool dse,
                           const MetricReport& m) {
  std::string out(method);
  out += dse ? ",true," : ",false,";
  out += format_number(m.consistent_rmse) + ",";
  out += format_number(m.spatial_rmse) + ",";
  out += format_number(m.spectral_rmse) + ",";
  if (!std::isnan(m.inverse_ability)) out += format_number(m.inverse_ability);
  out += ",";
  if (m.rmse) out += format_number(*m.rmse);
  return out;
}

std::string format_ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out(kMetricsCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += format_csv_row(method_name(r.method), r.dse, r.metrics);
    out += '\n';
  }
  return out;
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %-4s %12s %12s %12s %8s %10s\n",
                "method", "dse", "consistent", "spatial", "spectral", "A-A",
                "rmse");
  os << buf;
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    std::snprintf(buf, sizeof(buf), "%-8s %-4s %12s %12s %12s %8s %10s\n",
                  std::string(method_name(r.method)).c_str(),
                  r.dse ? "yes" : "no", fixed2(m.consistent_rmse).c_str(),
                  fixed2(m.spatial_rmse).c_str(),
                  fixed2(m.spectral_rmse).c_str(),
                  fixed2(m.inverse_ability).c_str(),
                  m.rmse ? fixed2(*m.rmse).c_str() : "-");
    os << buf;
  }
  return os.str();
}

std::string format_metric_table(const MetricReport& m) {
  std::ostringstream os;
  os << "consistent_rmse  " << fixed2(m.consistent_rmse) << "\n"
     << "spatial_rmse     " << fixed2(m.spatial_rmse) << "\n"
     << "spectral_rmse    " << fixed2(m.spectral_rmse) << "\n"
     << "inverse_ability  " << fixed2(m.inverse_ability) << "\n";
  if (m.rmse) os << "rmse             " << fixed2(*m.rmse) << "\n";
  return os.str();
}

}  // namespace pansharp
