#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "pansharp/errors.hpp"
#include "pansharp/fusion.hpp"
#include "pansharp/linalg.hpp"
#include "pansharp/prior.hpp"
#include "pansharp/response.hpp"
#include "pansharp/synth.hpp"

namespace py = pybind11;
using namespace pansharp;

namespace {

using CubeArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// (bands, height, width) C-order is the planar layout RasterCube stores.
RasterCube to_cube(const CubeArray& a) {
  if (a.ndim() == 2) {
    const auto h = static_cast<std::size_t>(a.shape(0));
    const auto w = static_cast<std::size_t>(a.shape(1));
    return RasterCube(h, w, 1, std::vector<double>(a.data(), a.data() + a.size()));
  }
  if (a.ndim() != 3) throw ShapeError("expected a (bands, height, width) array");
  const auto b = static_cast<std::size_t>(a.shape(0));
  const auto h = static_cast<std::size_t>(a.shape(1));
  const auto w = static_cast<std::size_t>(a.shape(2));
  return RasterCube(h, w, b, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const RasterCube& c) {
  py::array_t<double> out({c.bands(), c.height(), c.width()});
  std::memcpy(out.mutable_data(), c.data().data(), c.data().size_bytes());
  return out;
}

py::dict metrics_dict(const MetricReport& m) {
  py::dict d;
  d["consistent_rmse"] = m.consistent_rmse;
  d["spatial_rmse"] = m.spatial_rmse;
  d["spectral_rmse"] = m.spectral_rmse;
  d["inverse_ability"] = m.inverse_ability;
  d["rmse"] = m.rmse ? py::cast(*m.rmse) : py::none();
  return d;
}

}  // namespace

PYBIND11_MODULE(_pansharp, m) {
  m.doc() = "Pan-sharpening with exact generalized-inverse fusion.";

  static py::exception<Error> base(m, "PansharpError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, (std::string(e.code()) + ": " + e.what()).c_str());
    }
  });

  m.def("moore_penrose", [](const Matrix& a) { return moore_penrose(a); },
        py::arg("a"));
  m.def("full_rank_left_pinv", &full_rank_left_pinv, py::arg("a"));
  m.def("numerical_rank",
        [](const Matrix& a) { return numerical_rank(a, kPinvRelTolerance); }, py::arg("a"));
  m.def(
      "penrose_residuals",
      [](const Matrix& a, const Matrix& g) {
        const PenroseReport r = check_generalized_inverse(a, g);
        return std::vector<double>(r.residuals.begin(), r.residuals.end());
      },
      py::arg("a"), py::arg("g"));

  m.def(
      "solve_prior_inverse",
      [](const Matrix& a, double lower, double upper) {
        const PriorInverse p = solve_prior_inverse(a, PriorBox{lower, upper});
        return py::make_tuple(Matrix(p.m), p.feasible);
      },
      py::arg("a"), py::arg("lower") = 0.9, py::arg("upper") = 1.4);
  m.def("gsa_weights",
        [](const Matrix& z, const Matrix& a) { return Matrix(gsa_weights(z, a)); },
        py::arg("z"), py::arg("a"));

  m.def(
      "random_cube",
      [](std::size_t h, std::size_t w, std::size_t b, std::uint64_t seed) {
        return to_array(random_cube(h, w, b, seed));
      },
      py::arg("height"), py::arg("width"), py::arg("bands"), py::arg("seed") = 0);
  m.def(
      "generate_pair",
      [](const CubeArray& x, std::size_t scale, std::vector<double> weights) {
        const SynthPair p = generate_pair(to_cube(x), SynthSpec{scale, std::move(weights), 0});
        return py::make_tuple(to_array(p.pan), to_array(p.ms), p.a_true);
      },
      py::arg("x"), py::arg("scale") = 2, py::arg("weights") = std::vector<double>{});

  m.def(
      "estimate_response",
      [](const CubeArray& pan, const CubeArray& ms, bool dse) {
        const CubePair pair = pair_cubes(to_cube(pan), to_cube(ms));
        return prepare_fusion(pair, dse).a.a;
      },
      py::arg("pan"), py::arg("ms"), py::arg("dse") = true);
  m.def(
      "fuse",
      [](const CubeArray& pan, const CubeArray& ms, const std::string& method,
         bool dse, const std::string& upsampler) {
        FusionOptions opt;
        opt.method = parse_method(method);
        opt.dse = dse;
        opt.upsampler = parse_upsampler(upsampler);
        return to_array(fuse(pair_cubes(to_cube(pan), to_cube(ms)), opt).x);
      },
      py::arg("pan"), py::arg("ms"), py::arg("method") = "gsa",
      py::arg("dse") = true, py::arg("upsampler") = "replicate");
  m.def(
      "ablate",
      [](const CubeArray& pan, const CubeArray& ms, const std::string& upsampler,
         std::optional<CubeArray> truth) {
        AblationOptions opt;
        opt.upsampler = parse_upsampler(upsampler);
        std::optional<RasterCube> t;
        if (truth) t = to_cube(*truth);
        opt.truth = t ? &*t : nullptr;
        py::list rows;
        for (const AblationRow& r : run_ablation(pair_cubes(to_cube(pan), to_cube(ms)), opt)) {
          py::dict d = metrics_dict(r.metrics);
          d["method"] = std::string(method_name(r.method));
          d["dse"] = r.dse;
          rows.append(d);
        }
        return rows;
      },
      py::arg("pan"), py::arg("ms"), py::arg("upsampler") = "replicate",
      py::arg("truth") = py::none());
}
