#include "pansharp/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "pansharp/errors.hpp"
#include "pansharp/fusion.hpp"
#include "pansharp/metrics.hpp"
#include "pansharp/prior.hpp"
#include "pansharp/raster_io.hpp"
#include "pansharp/response.hpp"
#include "pansharp/synth.hpp"

namespace pansharp {

namespace {

PriorBox parse_box(const std::string& text) {
  const auto v = parse_numbers(text);
  if (v.size() != 2) throw InvalidArgument("--box expects 'lower,upper'");
  PriorBox box{v[0], v[1]};
  box.validate();
  return box;
}

std::vector<std::size_t> parse_bands_one_based(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_numbers(text)) {
    if (v < 1 || v != std::floor(v)) {
      throw InvalidArgument("band numbers are 1-based integers");
    }
    out.push_back(static_cast<std::size_t>(v) - 1);
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw RasterError(RasterError::Code::kIo, "cannot open " + path);
  f << text;
  if (!f) throw RasterError(RasterError::Code::kIo, "write failed: " + path);
}

CubePair load_pair(const std::string& pan, const std::string& ms) {
  return pair_cubes(read_raster(pan), read_raster(ms));
}

struct SynthArgs {
  std::string input;
  std::string generate;
  std::uint64_t seed = 0;
  std::size_t scale = 2;
  std::string weights = "equal";
  std::string out_pan;
  std::string out_ms;
  std::string out_truth;
  std::string dtype = "f64";
};

int run_synth(const SynthArgs& a, std::ostream& out) {
  RasterCube x;
  if (!a.generate.empty()) {
    std::size_t h = 0, w = 0, s = 0;
    char x1 = 0, x2 = 0;
    std::istringstream is(a.generate);
    if (!(is >> h >> x1 >> w >> x2 >> s) || x1 != 'x' || x2 != 'x') {
      throw InvalidArgument("--generate expects HxWxS, e.g. 64x64x8");
    }
    x = random_cube(h, w, s, a.seed);
  } else if (!a.input.empty()) {
    x = read_raster(a.input);
  } else {
    throw InvalidArgument("synth needs --input or --generate");
  }

  SynthSpec spec;
  spec.scale = a.scale;
  spec.seed = a.seed;
  if (a.weights != "equal") spec.pan_weights = parse_numbers(a.weights);
  const SynthPair pair = generate_pair(x, spec);
  const Dtype dtype = parse_dtype(a.dtype);
  write_raster(pair.pan, a.out_pan, dtype);
  write_raster(pair.ms, a.out_ms, dtype);
  if (!a.out_truth.empty()) write_raster(x, a.out_truth, dtype);
  out << "pan " << pair.pan.height() << "x" << pair.pan.width() << "x1, ms "
      << pair.ms.height() << "x" << pair.ms.width() << "x" << pair.ms.bands()
      << ", scale " << spec.scale << "\n";
  return kExitOk;
}

struct EstimateArgs {
  std::string pan;
  std::string ms;
  bool dse = false;
  std::string out_a;
  std::string box = "0.9,1.4";
};

int run_estimate(const EstimateArgs& a, std::ostream& out) {
  const CubePair pair = load_pair(a.pan, a.ms);
  const FusionSetup setup = prepare_fusion(pair, a.dse);
  const Matrix& resp = setup.a.a;
  const PriorInverse prior = solve_prior_inverse(resp, parse_box(a.box));
  const ExistenceReport ex =
      existence_check(pair.pan.matrix(), pair.ms.matrix(), resp, setup.b,
                      setup.v, prior.m);
  if (!a.out_a.empty()) write_matrix_text(resp, a.out_a);

  out << "A = [" << format_row(resp.transpose()) << "]\n";
  out << "A- = [" << format_row(prior.m) << "]  (feasible: "
      << (prior.feasible ? "yes" : "no") << ")\n";
  out << "consistency_residual    " << format_number(ex.consistency_residual) << "\n"
      << "y_recoverable_residual  " << format_number(ex.y_recoverable_residual) << "\n"
      << "z_recoverable_residual  " << format_number(ex.z_recoverable_residual) << "\n"
      << "solvable                " << (ex.solvable ? "yes" : "no") << "\n";
  return kExitOk;
}

struct FuseArgs {
  std::string method;
  std::string pan;
  std::string ms;
  bool dse = false;
  std::string box = "0.9,1.4";
  std::string upsampler = "replicate";
  std::string out;
  std::string dtype = "f64";
  bool clamp = false;
};

int run_fuse(const FuseArgs& a, std::ostream& out, std::ostream& err) {
  const CubePair pair = load_pair(a.pan, a.ms);
  FusionOptions opt;
  opt.method = parse_method(a.method);
  opt.dse = a.dse;
  opt.box = parse_box(a.box);
  opt.upsampler = parse_upsampler(a.upsampler);
  const FusionResult r = fuse(pair, opt);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";

  std::map<std::string, std::string> provenance{
      {"method", std::string(method_name(r.method))},
      {"dse", r.dse ? "true" : "false"},
      {"upsampler", std::string(upsampler_name(opt.upsampler))},
      {"a_used", format_row(r.a_used.a.transpose())},
      {"a_inv_used", format_row(r.a_inv_used)},
  };
  write_raster(r.x, a.out, parse_dtype(a.dtype), a.clamp, provenance);
  out << method_name(r.method) << (r.dse ? " (dse)" : "") << ": wrote "
      << r.x.height() << "x" << r.x.width() << "x" << r.x.bands() << " to "
      << a.out << "\n";
  out << "A-A = " << format_number((r.a_inv_used * r.a_used.a)(0, 0)) << "\n";
  return kExitOk;
}

struct MetricsArgs {
  std::string pan;
  std::string ms;
  std::string fused;
  std::string truth;
  std::string csv;
  bool dse = false;
};

int run_metrics(const MetricsArgs& a, std::ostream& out) {
  const CubePair pair = load_pair(a.pan, a.ms);
  RasterHeader fused_header;
  const RasterCube x = read_raster(a.fused, &fused_header);
  const auto& extra = fused_header.extra;

  bool dse = a.dse;
  if (auto it = extra.find("dse"); it != extra.end()) dse = it->second == "true";
  const FusionSetup setup = prepare_fusion(pair, dse);

  std::optional<Matrix> truth;
  if (!a.truth.empty()) truth = Matrix(read_raster(a.truth).matrix());

  const auto y = pair.pan.matrix();
  const auto z = pair.ms.matrix();
  MetricReport m;
  m.consistent_rmse = consistent_rmse(z, setup.a.a, setup.b, y);
  m.spatial_rmse = spatial_rmse(x.matrix(), setup.a.a, y);
  m.spectral_rmse = spectral_rmse(setup.b, x.matrix(), z);
  m.inverse_ability = std::numeric_limits<double>::quiet_NaN();
  if (auto it = extra.find("a_inv_used"); it != extra.end()) {
    const auto row = parse_numbers(it->second);
    if (row.size() == static_cast<std::size_t>(setup.a.a.rows())) {
      m.inverse_ability = inverse_ability(
          Eigen::Map<const RowVector>(row.data(), static_cast<Eigen::Index>(row.size())),
          setup.a.a);
    }
  }
  if (truth) m.rmse = rmse(*truth, x.matrix());

  std::string method = "unknown";
  if (auto it = extra.find("method"); it != extra.end()) method = it->second;
  out << format_metric_table(m);
  if (!a.csv.empty()) {
    write_text(a.csv, std::string(kMetricsCsvHeader) + "\n" +
                          format_csv_row(method, dse, m) + "\n");
  }
  return kExitOk;
}

struct AblateArgs {
  std::string pan;
  std::string ms;
  std::string csv;
  std::string truth;
  std::string box = "0.9,1.4";
  std::string upsampler = "replicate";
};

int run_ablate(const AblateArgs& a, std::ostream& out) {
  const CubePair pair = load_pair(a.pan, a.ms);
  std::optional<RasterCube> truth;
  if (!a.truth.empty()) truth = read_raster(a.truth);
  AblationOptions opt;
  opt.box = parse_box(a.box);
  opt.upsampler = parse_upsampler(a.upsampler);
  opt.truth = truth ? &*truth : nullptr;
  const auto rows = run_ablation(pair, opt);
  out << format_ablation_table(rows);
  if (!a.csv.empty()) write_text(a.csv, format_ablation_csv(rows));
  return kExitOk;
}

struct RenderArgs {
  std::string cube;
  std::string bands = "60,40,21";
  std::string out;
};

int run_render(const RenderArgs& a, std::ostream& out) {
  const RasterCube cube = read_raster(a.cube);
  const auto bands = parse_bands_one_based(a.bands);
  render_composite(cube, bands, a.out);
  out << "wrote " << a.out << "\n";
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return kExitUsage;
    case ErrorKind::kData: return kExitData;
    case ErrorKind::kNumerical: return kExitNumerical;
  }
  return kExitData;
}

void report(std::ostream& err, int code, std::string_view tag,
            std::string_view message) {
  err << "error: exit=" << code << " code=" << tag << " message=" << message
      << "\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Generalized-inverse pan-sharpening toolkit", "pansharp"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Degrade a reference cube into a Pan/MS pair");
  auto* in_opt = synth_cmd->add_option("--input", synth.input, "Reference raster");
  auto* gen_opt = synth_cmd->add_option("--generate", synth.generate,
                                        "Generate a seeded HxWxS cube instead");
  in_opt->excludes(gen_opt);
  synth_cmd->add_option("--seed", synth.seed, "Seed for --generate");
  synth_cmd->add_option("--scale", synth.scale, "Down-sampling ratio")->check(CLI::Range(2, 1 << 16));
  synth_cmd->add_option("--weights", synth.weights, "'equal' or comma-separated band weights");
  synth_cmd->add_option("--out-pan", synth.out_pan)->required();
  synth_cmd->add_option("--out-ms", synth.out_ms)->required();
  synth_cmd->add_option("--out-truth", synth.out_truth, "Also write the reference cube");
  synth_cmd->add_option("--dtype", synth.dtype, "f32|f64|u8|u16");

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Estimate A and check solvability");
  est_cmd->add_option("--pan", est.pan)->required();
  est_cmd->add_option("--ms", est.ms)->required();
  est_cmd->add_flag("--dse", est.dse, "Use the down-sampling enhanced B");
  est_cmd->add_option("--out-A", est.out_a, "Write A as text");
  est_cmd->add_option("--box", est.box, "Prior bounds lower,upper");

  FuseArgs fz;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse a Pan/MS pair");
  fuse_cmd->add_option("--method", fz.method)->required()->check(
      CLI::IsMember({"pcs", "pmra", "gsa", "cbd"}));
  fuse_cmd->add_option("--pan", fz.pan)->required();
  fuse_cmd->add_option("--ms", fz.ms)->required();
  fuse_cmd->add_flag("--dse", fz.dse);
  fuse_cmd->add_option("--box", fz.box, "Prior bounds lower,upper");
  fuse_cmd->add_option("--upsampler", fz.upsampler)->check(
      CLI::IsMember({"replicate", "bilinear"}));
  fuse_cmd->add_option("--out", fz.out)->required();
  fuse_cmd->add_option("--dtype", fz.dtype, "f32|f64|u8|u16");
  fuse_cmd->add_flag("--clamp", fz.clamp, "Clamp to the integer dtype range");

  MetricsArgs mt;
  auto* metrics_cmd = app.add_subcommand("metrics", "Score a fused image");
  metrics_cmd->add_option("--pan", mt.pan)->required();
  metrics_cmd->add_option("--ms", mt.ms)->required();
  metrics_cmd->add_option("--fused", mt.fused)->required();
  metrics_cmd->add_option("--truth", mt.truth);
  metrics_cmd->add_option("--csv", mt.csv);
  metrics_cmd->add_flag("--dse", mt.dse, "Score against the enhanced B when the fused header lacks provenance");

  AblateArgs ab;
  auto* ablate_cmd = app.add_subcommand("ablate", "Run every method with and without DSE");
  ablate_cmd->add_option("--pan", ab.pan)->required();
  ablate_cmd->add_option("--ms", ab.ms)->required();
  ablate_cmd->add_option("--csv", ab.csv);
  ablate_cmd->add_option("--truth", ab.truth);
  ablate_cmd->add_option("--box", ab.box);
  ablate_cmd->add_option("--upsampler", ab.upsampler)->check(
      CLI::IsMember({"replicate", "bilinear"}));

  RenderArgs rd;
  auto* render_cmd = app.add_subcommand("render", "Write an 8-bit colour preview (PPM)");
  render_cmd->add_option("--cube", rd.cube)->required();
  render_cmd->add_option("--bands", rd.bands, "Three 1-based band numbers");
  render_cmd->add_option("--out", rd.out)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, kExitUsage, "usage", e.what());
    return kExitUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth, out);
    if (*est_cmd) return run_estimate(est, out);
    if (*fuse_cmd) return run_fuse(fz, out, err);
    if (*metrics_cmd) return run_metrics(mt, out);
    if (*ablate_cmd) return run_ablate(ab, out);
    if (*render_cmd) return run_render(rd, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    report(err, code, e.code(), e.what());
    return code;
  } catch (const std::exception& e) {
    report(err, kExitData, "internal", e.what());
    return kExitData;
  }
  return kExitUsage;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace pansharp
