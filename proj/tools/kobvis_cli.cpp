#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "kobvis/experiments.hpp"

using namespace kobvis;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kNumeric = 3, kIo = 4 };

struct ProfileArgs {
  std::string kind = "exp_power";
  double alpha = 1, c = 1, slope = 1;
  int j_max = kDefaultChordLevels;
};

void add_profile_options(CLI::App* app, ProfileArgs& p, const std::string& c_flag) {
  app->add_option("--profile", p.kind, "exp_power | piecewise_max | mollified | flat | wedge")->capture_default_str();
  app->add_option("--alpha", p.alpha, "exponent alpha of exp(-c / |x|^alpha)")->capture_default_str();
  app->add_option(c_flag, p.c, "constant c of exp(-c / |x|^alpha)")->capture_default_str();
  app->add_option("--slope", p.slope, "wedge slope")->capture_default_str();
  app->add_option("--j-max", p.j_max, "chord levels for piecewise profiles")->capture_default_str();
}

ProfileFunction build(const ProfileArgs& a) {
  ProfileSpec s;
  s.kind = a.kind;
  s.alpha = a.alpha;
  s.c = a.c;
  s.slope = a.slope;
  s.j_max = a.j_max;
  return make_profile(s);
}

std::pair<Real, Real> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stold(text), 0};
    return {std::stold(text.substr(0, comma)), std::stold(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "expected a,b but got '" + text + "'");
  }
}

int exit_code(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::BadParameters:
    case ErrorCode::NotOnBoundary:
    case ErrorCode::PointOutsideDomain:
    case ErrorCode::ZeroDirection:
      return kInvalid;
    case ErrorCode::IoError:
      return kIo;
    default:
      return kNumeric;
  }
}

void print(const char* key, Real value) { std::printf("%s: %.12Lg\n", key, value); }

int cmd_classify(const ProfileArgs& pa, const std::string& point, double eps) {
  const DomainOracle oracle(build(pa));
  auto [x, y] = parse_pair(point);
  if (point.find(',') == std::string::npos) y = oracle.profile()(x);
  ClassifyOptions opts;
  opts.eps = eps;
  const auto rep = classify_point(oracle, CPoint{x, 0, y, 0}, opts);
  std::printf("profile: %s\n", oracle.profile().describe().c_str());
  std::printf("summary: %s\n", rep.summary.c_str());
  std::printf("local: %s (%s)\n", to_string(rep.local.status), rep.local.rule.c_str());
  std::printf("weakly: %s (%s)\n", to_string(rep.weakly.status), rep.weakly.rule.c_str());
  std::printf("strongly_non: %s (%s)\n", to_string(rep.strongly_non.status), rep.strongly_non.rule.c_str());
  std::printf("sampled_directions: %d\nshell_points: %d\n", rep.sampled_directions, rep.shell_points);
  return kOk;
}

int cmd_geodesic(const ProfileArgs& pa, double c, double f0, double span, double lambda, int pair_grid) {
  const DomainOracle oracle(build(pa));
  TangentialOptions opts;
  opts.span = span;
  const auto pred = predicted_terminal_depth(oracle.profile(), c, f0, span);
  print("predicted_D", pred.D);
  std::printf("predicted_flag: %s\n", to_string(pred.flag));
  SampledCurve curve;
  try {
    curve = construct_tangential_geodesic(oracle, c, f0, opts);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EscapedDepthCap) throw;
    std::printf("flag: Escaped\n");
    return kOk;
  }
  std::printf("flag: Reached\n");
  print("D", curve.points.back().re2);
  print("max_residual", curve.max_residual);
  print("max_delta", max_boundary_distance(oracle, curve));
  if (lambda > 0) {
    const auto cert = certify_lambda_geodesic(oracle, curve, lambda, 0, pair_grid);
    std::printf("certificate: %s\n", to_string(cert.status));
    print("lambda_target", cert.lambda_target);
    print("sup_ratio", cert.observed_sup_ratio);
  }
  return kOk;
}

int cmd_kdist(const ProfileArgs& pa, const std::string& from, const std::string& to, double h) {
  const DomainOracle oracle(build(pa));
  const auto [s1, y1] = parse_pair(from);
  const auto [s2, y2] = parse_pair(to);
  const CPoint a{0, s1, y1, 0}, b{0, s2, y2, 0};
  GridSpec gs;
  gs.h = h;
  gs.y_min = std::min(y1, y2) / 4;
  gs.y_max = std::max({y1, y2, std::min(Real(1), oracle.origin_capture_height())});
  const Real lo = std::min(s1, s2), hi = std::max(s1, s2), pad = std::max(Real(0.5), (hi - lo) / 2);
  gs.s_min = lo - pad;
  gs.s_max = hi + pad;
  const DistanceGrid grid(std::make_shared<ModelSlice>(oracle), gs);
  print("lower", kdist_lower(oracle, a, b));
  print("upper", grid.distance(a, b));
  return kOk;
}

int cmd_run(const std::string& path, const std::string& out, bool counterexample) {
  ExperimentConfig cfg = load_config(path);
  if (!out.empty()) cfg.output_dir = out;
  const ExperimentReport rep = counterexample ? run_counterexample_suite(cfg) : run_visibility_family(cfg);
  for (const auto& file : emit(rep, cfg.output_dir)) std::printf("wrote %s\n", file.c_str());
  bool all_pass = true;
  for (const auto& c : rep.checks) {
    std::printf("check %s: %s\n", c.name.c_str(), c.passed ? "pass" : "fail");
    all_pass = all_pass && c.passed;
  }
  if (rep.quarantined > 0) std::printf("quarantined: %d\n", rep.quarantined);
  return rep.quarantined > 0 || !all_pass ? kNumeric : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kobayashi visibility diagnostics on model domains"};
  app.require_subcommand(1);

  ProfileArgs cls_profile, geo_profile, kd_profile;
  std::string point = "0,0";
  double cls_eps = 1e-2;
  auto* classify = app.add_subcommand("classify", "Goldilocks verdicts at a boundary point");
  add_profile_options(classify, cls_profile, "--c");
  classify->add_option("--point", point, "Re z1[,Re z2]; Re z2 defaults to the boundary value")->capture_default_str();
  classify->add_option("--eps", cls_eps, "upper limit of the criterion integrals")->capture_default_str();

  double c = 1, f0 = 1e-6, span = 1, lambda = 0;
  int pair_grid = 16;
  auto* geodesic = app.add_subcommand("geodesic", "tangential curve, terminal depth and certificate");
  add_profile_options(geodesic, geo_profile, "--profile-c");
  geodesic->add_option("--c", c, "ODE constant")->capture_default_str();
  geodesic->add_option("--f0", f0, "starting depth")->capture_default_str();
  geodesic->add_option("--span", span, "face segment length")->capture_default_str();
  geodesic->add_option("--certify", lambda, "certify as a (lambda, 0)-geodesic");
  geodesic->add_option("--pair-grid", pair_grid, "certification pair grid")->capture_default_str();

  std::string config_path, out_dir;
  auto* vis = app.add_subcommand("visibility-run", "tangential family report");
  vis->add_option("--config", config_path, "flat key = value config")->required();
  vis->add_option("--out", out_dir, "output directory (overrides output_dir)");

  std::string ce_config, ce_out;
  auto* ce = app.add_subcommand("counterexample", "Psi_0 / Psi_inf suite report");
  ce->add_option("--config", ce_config, "flat key = value config")->required();
  ce->add_option("--out", ce_out, "output directory (overrides output_dir)");

  std::string from = "0,0.01", to = "1,0.01";
  double h = 0.05;
  auto* kdist = app.add_subcommand("kdist", "Kobayashi distance bounds on the slice {Re z1 = 0, Im z2 = 0}");
  add_profile_options(kdist, kd_profile, "--c");
  kdist->add_option("--from", from, "Im z1,Re z2")->capture_default_str();
  kdist->add_option("--to", to, "Im z1,Re z2")->capture_default_str();
  kdist->add_option("--grid", h, "grid spacing")->capture_default_str();

  app.footer("Config keys:\n" + config_keys_help() +
             "Exit codes: 0 success, 2 invalid input, 3 numeric failure (partial report written), 4 I/O.");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*classify) return cmd_classify(cls_profile, point, cls_eps);
    if (*geodesic) return cmd_geodesic(geo_profile, c, f0, span, lambda, pair_grid);
    if (*vis) return cmd_run(config_path, out_dir, false);
    if (*ce) return cmd_run(ce_config, ce_out, true);
    if (*kdist) return cmd_kdist(kd_profile, from, to, h);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e);
  }
  return kOk;
}
