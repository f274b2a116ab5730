#include "kobvis/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

namespace kobvis {

ProfileFunction make_profile(const ProfileSpec& spec) {
  if (spec.kind == "exp_power") return ProfileFunction::exp_power(spec.alpha, spec.c);
  if (spec.kind == "piecewise_max")
    return build_piecewise_max(ProfileFunction::exp_power(spec.alpha, spec.c), spec.j_max);
  if (spec.kind == "mollified")
    return mollify(build_piecewise_max(ProfileFunction::exp_power(spec.alpha, spec.c), spec.j_max), spec.j_max);
  if (spec.kind == "flat") return ProfileFunction::flat_stub();
  if (spec.kind == "wedge") return ProfileFunction::wedge_stub(spec.slope);
  throw Error(ErrorCode::InvalidConfig, "unknown profile kind '" + spec.kind + "'");
}

Real ExperimentConfig::lambda_target() const {
  if (lambda > 0) return lambda;
  return (c < 0.5L ? 1 + 2 * c : Real(4)) * kCertificationSlack;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (schema_version != kConfigSchemaVersion) fail("unsupported schema_version");
  static const char* const kinds[] = {"exp_power", "piecewise_max", "mollified", "flat", "wedge"};
  if (std::find(std::begin(kinds), std::end(kinds), profile.kind) == std::end(kinds))
    fail("unknown profile kind '" + profile.kind + "'");
  if (!(profile.alpha > 0) || !(profile.c > 0) || !(profile.slope > 0)) fail("profile parameters must be positive");
  if (profile.j_max < 2) fail("j_max must be at least 2");
  if (!(c > 0) || !(span > 0)) fail("c and span must be positive");
  if (f0_list.empty()) fail("f0 list is empty");
  for (std::size_t i = 0; i < f0_list.size(); ++i) {
    if (!(f0_list[i] > 0) || !std::isfinite(f0_list[i])) fail("f0 values must be positive");
    if (i > 0 && !(f0_list[i] < f0_list[i - 1])) fail("f0 list must be strictly decreasing");
  }
  if (half_nodes < 4) fail("half_nodes must be at least 4");
  if (!(ode_rel_tol > 0) || !(escape_depth > 0)) fail("ode_rel_tol and escape_depth must be positive");
  if (lambda < 0 || epsilon < 0) fail("lambda and epsilon must be nonnegative");
  if (pair_grid < 8) fail("pair_grid must be at least 8");
  if (!(grid_h > 0) || grid_y_min < 0 || !(grid_y_max > 0) || grid_window < 1) fail("invalid grid parameters");
  if (grid_y_min > 0 && !(grid_y_min < grid_y_max)) fail("grid_y_min must be below grid_y_max");
  if (!(gromov_base_depth > 0) || !(balance_tol > 0)) fail("gromov parameters must be positive");
  if (!(classify_options.eps > 0) || classify_options.levels < 20) fail("invalid classification parameters");
  if (witness_j_min < 1 || witness_j_max < witness_j_min) fail("invalid witness range");
  if (!(witness_r > 0) || inverse_grid_points < 2) fail("invalid witness parameters");
  if (threads < 0) fail("threads must be nonnegative");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Real parse_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const Real x = std::stold(v, &used);
    if (trim(v.substr(used)).empty()) return x;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "': expected a number, got '" + v + "'");
}

long long parse_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw Error(ErrorCode::InvalidConfig, "key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidConfig, "key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<Real> parse_list(const std::string& key, const std::string& v) {
  std::vector<Real> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
  return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, std::pair<Setter, std::string>>& config_keys() {
  auto real = [](Real ExperimentConfig::*m) {
    return [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = parse_real(k, v); };
  };
  auto integer = [](int ExperimentConfig::*m) {
    return [m](ExperimentConfig& c, const std::string& k, const std::string& v) {
      c.*m = static_cast<int>(parse_int(k, v));
    };
  };
  auto boolean = [](bool ExperimentConfig::*m) {
    return [m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = parse_bool(k, v); };
  };
  static const std::map<std::string, std::pair<Setter, std::string>> keys{
      {"schema_version", {integer(&ExperimentConfig::schema_version), "config schema version (1)"}},
      {"profile", {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.profile.kind = v; },
                   "exp_power | piecewise_max | mollified | flat | wedge"}},
      {"alpha", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.profile.alpha = parse_real(k, v);
                 }, "exponent alpha of exp(-c / |x|^alpha)"}},
      {"profile_c", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                       c.profile.c = parse_real(k, v);
                     }, "constant c of exp(-c / |x|^alpha)"}},
      {"slope", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.profile.slope = parse_real(k, v);
                 }, "wedge slope"}},
      {"j_max", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                   c.profile.j_max = static_cast<int>(parse_int(k, v));
                 }, "chord levels of the piecewise-max profile"}},
      {"convexity", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                       if (v == "convex")
                         c.convexity = ConvexityClass::Convex;
                       else if (v == "cconvex")
                         c.convexity = ConvexityClass::CConvex;
                       else
                         throw Error(ErrorCode::InvalidConfig, "key '" + k + "': expected convex or cconvex");
                     }, "convex | cconvex"}},
      {"c", {real(&ExperimentConfig::c), "ODE constant c in f' = f / (c delta)"}},
      {"f0", {[](ExperimentConfig& c, const std::string& k, const std::string& v) { c.f0_list = parse_list(k, v); },
              "comma-separated starting depths, strictly decreasing"}},
      {"f0_exponents", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                          const auto dots = v.find("..");
                          if (dots == std::string::npos)
                            throw Error(ErrorCode::InvalidConfig, "key '" + k + "': expected a..b");
                          const auto a = parse_int(k, trim(v.substr(0, dots)));
                          const auto b = parse_int(k, trim(v.substr(dots + 2)));
                          if (a > b) throw Error(ErrorCode::InvalidConfig, "key '" + k + "': empty range");
                          c.f0_list.clear();
                          for (auto e = a; e <= b; ++e) c.f0_list.push_back(std::pow(Real(10), -static_cast<Real>(e)));
                        }, "a..b, shorthand for f0 = 10^-a, ..., 10^-b"}},
      {"span", {real(&ExperimentConfig::span), "length of the face segment traversed"}},
      {"half_nodes", {integer(&ExperimentConfig::half_nodes), "curve records 2 half_nodes + 1 nodes"}},
      {"ode_rel_tol", {real(&ExperimentConfig::ode_rel_tol), "stepper tolerance"}},
      {"escape_depth", {real(&ExperimentConfig::escape_depth), "depth at which a curve counts as escaped"}},
      {"lambda", {real(&ExperimentConfig::lambda), "certification target; 0 picks the regime default"}},
      {"epsilon", {real(&ExperimentConfig::epsilon), "additive certification slack"}},
      {"pair_grid", {integer(&ExperimentConfig::pair_grid), "parameter pairs per side (>= 8)"}},
      {"grid_h", {real(&ExperimentConfig::grid_h), "distance grid spacing"}},
      {"grid_y_min", {real(&ExperimentConfig::grid_y_min), "lowest grid row; 0 picks min(f0) / 10"}},
      {"grid_y_max", {real(&ExperimentConfig::grid_y_max), "highest grid row"}},
      {"grid_window", {integer(&ExperimentConfig::grid_window), "edge offset window"}},
      {"gromov", {boolean(&ExperimentConfig::gromov), "compute Gromov lower bounds at balanced points"}},
      {"gromov_base_depth", {real(&ExperimentConfig::gromov_base_depth), "Re z2 of the base point o"}},
      {"balance_tol", {real(&ExperimentConfig::balance_tol), "tolerance on h(tau) = 1"}},
      {"classify", {boolean(&ExperimentConfig::classify), "classify the origin"}},
      {"classify_eps", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                          c.classify_options.eps = parse_real(k, v);
                        }, "upper limit of the criterion integrals"}},
      {"classify_levels", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                             c.classify_options.levels = static_cast<int>(parse_int(k, v));
                           }, "dyadic levels K"}},
      {"witness_j_min", {integer(&ExperimentConfig::witness_j_min), "first even chord 2j"}},
      {"witness_j_max", {integer(&ExperimentConfig::witness_j_max), "last even chord 2j"}},
      {"witness_r", {real(&ExperimentConfig::witness_r), "largest witness radius"}},
      {"inverse_grid_points", {integer(&ExperimentConfig::inverse_grid_points), "log grid size for the inverse bound"}},
      {"threads", {integer(&ExperimentConfig::threads), "worker threads; 0 uses all cores"}},
      {"seed", {[](ExperimentConfig& c, const std::string& k, const std::string& v) {
                  c.seed = static_cast<std::uint64_t>(parse_int(k, v));
                }, "random seed"}},
      {"output_dir", {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.output_dir = v; },
                      "directory for report files"}},
  };
  return keys;
}

// Runs job(i) for i in [0, n) on a small pool; results are index-addressed.
void parallel_for(int n, int threads, const std::function<void(int)>& job) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) job(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  const auto& keys = config_keys();
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys.find(key);
    if (it == keys.end()) throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second.first(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_keys_help() {
  std::ostringstream os;
  for (const auto& [key, entry] : config_keys()) os << "  " << key << ": " << entry.second << '\n';
  return os.str();
}

ExperimentReport run_visibility_family(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.kind = "visibility";
  rep.config = config;
  const ProfileFunction profile = make_profile(config.profile);
  rep.profile_description = profile.describe();
  const DomainOracle oracle(profile, config.convexity);
  rep.lambda_target = config.lambda_target();

  const int n = static_cast<int>(config.f0_list.size());
  rep.curves.resize(n);
  rep.gromov.resize(config.gromov ? n : 0);
  for (int i = 0; i < n; ++i) {
    rep.curves[i].f0 = config.f0_list[i];
    rep.curves[i].predicted =
        predicted_terminal_depth(profile, config.c, config.f0_list[i], config.span, config.escape_depth);
  }
  // Convergent regime: the integral prediction escapes at the smallest f0.
  rep.control_run = rep.curves.back().predicted.flag == DepthFlag::Escaped;

  std::shared_ptr<DistanceGrid> grid;
  if (!rep.control_run) {
    GridSpec gs;
    gs.h = config.grid_h;
    gs.y_max = std::min(config.grid_y_max, oracle.origin_capture_height());
    gs.y_max = std::max(gs.y_max, config.gromov_base_depth);
    gs.y_min = config.grid_y_min > 0 ? config.grid_y_min : config.f0_list.back() / 10;
    gs.s_min = -config.span / 2;
    gs.s_max = 1.5L * config.span;
    gs.window = config.grid_window;
    grid = std::make_shared<DistanceGrid>(std::make_shared<ModelSlice>(oracle), gs);
  }
  const CPoint o{0, config.span / 2, config.gromov_base_depth, 0};

  TangentialOptions topts;
  topts.span = config.span;
  topts.half_nodes = config.half_nodes;
  topts.rel_tol = config.ode_rel_tol;
  topts.escape_depth = config.escape_depth;

  std::vector<SampledCurve> curves(n);
  parallel_for(n, config.threads, [&](int i) {
    CurveRecord& rec = rep.curves[i];
    try {
      curves[i] = construct_tangential_geodesic(oracle, config.c, rec.f0, topts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::EscapedDepthCap) {
        rec.flag = DepthFlag::Escaped;
        rec.D = config.escape_depth;
      } else {
        rec.error = e.what();
      }
      return;
    }
    try {
      const SampledCurve& cur = curves[i];
      rec.flag = DepthFlag::Reached;
      rec.endpoint = cur.points.back();
      rec.D = rec.endpoint.re2;
      rec.max_residual = cur.max_residual;
      rec.endpoint_face_dist = std::sqrt(rec.endpoint.re1 * rec.endpoint.re1 + rec.endpoint.re2 * rec.endpoint.re2 +
                                         rec.endpoint.im2 * rec.endpoint.im2);
      rec.max_delta = max_boundary_distance(oracle, cur);
      rec.certificate = certify_lambda_geodesic(oracle, cur, rep.lambda_target, config.epsilon, config.pair_grid,
                                                grid.get());
      rec.certified_run = true;
    } catch (const Error& e) {
      rec.error = e.what();
      return;
    }
    if (!config.gromov || !grid) return;
    try {
      const SampledCurve& cur = curves[i];
      rep.gromov[i].balanced =
          find_balanced_parameter(oracle, cur, cur.points.front(), cur.points.back(), o, *grid, config.balance_tol);
    } catch (const Error& e) {
      rep.gromov[i].error = e.what();
    }
  });
  for (int i = 0; i < n; ++i) {
    if (config.gromov) rep.gromov[i].f0 = rep.curves[i].f0;
    if (!rep.curves[i].error.empty()) ++rep.quarantined;
    if (config.gromov && !rep.gromov[i].error.empty()) ++rep.quarantined;
  }
  if (config.gromov && rep.control_run) rep.gromov.clear();

  if (config.classify) {
    try {
      const CPoint origin{0, 0, 0, 0};
      rep.classifications.push_back({"origin", classify_point(oracle, origin, config.classify_options)});
    } catch (const Error& e) {
      rep.checks.push_back({"classify origin", false, 0, 0, e.what()});
      ++rep.quarantined;
    }
  }
  return rep;
}

ExperimentReport run_counterexample_suite(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.kind = "counterexample";
  rep.config = config;
  ProfileSpec base_spec = config.profile;
  if (base_spec.kind != "exp_power" && base_spec.kind != "piecewise_max" && base_spec.kind != "mollified")
    throw Error(ErrorCode::InvalidConfig, "counterexample suite needs an exp_power based profile");
  const ProfileFunction base = ProfileFunction::exp_power(base_spec.alpha, base_spec.c);
  const ProfileFunction psi0 = build_piecewise_max(base, base_spec.j_max);
  const ProfileFunction psi_inf = mollify(psi0, base_spec.j_max);
  rep.profile_description = psi_inf.describe();

  auto check = [&](const std::string& name, bool ok, Real value, Real bound, const std::string& detail) {
    rep.checks.push_back({name, ok, value, bound, detail});
  };

  // Invariants on a log grid of |x| in [1e-8, 1].
  {
    Real worst_even = 0, worst_convex = 0, worst_order = 0;
    const int m = 400;
    for (int i = 0; i <= m; ++i) {
      const Real x = std::pow(Real(10), -8 + 8 * static_cast<Real>(i) / m);
      const Real v = psi_inf(x);
      worst_even = std::max(worst_even, std::fabs(v - psi_inf(-x)));
      worst_order = std::max(worst_order, std::max(psi0(x) - v, base(x) - psi0(x)));
      const Real h = x * 1e-3L;
      const Real second = psi_inf(x + h) - 2 * v + psi_inf(std::max(Real(0), x - h));
      worst_convex = std::max(worst_convex, -second / std::max(v, std::numeric_limits<Real>::min()));
    }
    check("psi_inf even", worst_even == 0, worst_even, 0, "max |Psi(x) - Psi(-x)| on a log grid");
    check("psi_inf convex", worst_convex <= 1e-12L, worst_convex, 1e-12L,
          "max relative negative second difference on a log grid");
    check("psi_inf >= psi_0 >= psi", worst_order <= 0, worst_order, 0, "max violation on a log grid");
    check("psi_inf(0) = 0", psi_inf(0) == 0, psi_inf(0), 0, "");
  }
  {
    Real worst = -kInfinity;
    const int m = config.inverse_grid_points;
    for (int i = 0; i < m; ++i) {
      const Real r = std::pow(Real(10), -8 + 6 * static_cast<Real>(i) / (m - 1));
      const Real l = std::log(1 / r);
      worst = std::max(worst, psi_inf.inverse(r) * l * l);
    }
    // Equality holds off the chords, so allow rounding.
    check("psi_inf inverse <= 1/log^2(1/r)", worst <= 1 + 1e-12L, worst, 1 + 1e-12L,
          "max of Psi_inf^-1(r) log^2(1/r) over r in [1e-8, 1e-2]");
  }

  const DomainOracle oracle_inf(psi_inf, config.convexity);
  try {
    auto cls = classify_point(oracle_inf, CPoint{0, 0, 0, 0}, config.classify_options);
    check("origin weakly Goldilocks and non-Goldilocks", cls.weakly_goldilocks && cls.non_goldilocks, 0, 0,
          cls.summary);
    rep.classifications.push_back({"psi_inf origin", std::move(cls)});
  } catch (const Error& e) {
    check("origin weakly Goldilocks and non-Goldilocks", false, 0, 0, e.what());
    ++rep.quarantined;
  }

  // Face witnesses on Psi_0 at the midpoints of the even chords 2j.
  const DomainOracle oracle0(psi0, config.convexity);
  const auto& chords = psi0.chords();
  bool all_positive = true, all_stable = true, all_bounded = true;
  Real worst_change = 0;
  Real prev_norm = kInfinity;
  bool shrinking = true;
  for (int j = config.witness_j_min; j <= config.witness_j_max; ++j) {
    const auto it = std::find_if(chords.begin(), chords.end(), [&](const Chord& ch) { return ch.index == 2 * j; });
    if (it == chords.end()) {
      check("face witness j = " + std::to_string(j), false, 0, 0, "chord not present");
      all_positive = false;
      continue;
    }
    WitnessRecord w;
    w.j = j;
    const Real x = (it->left + it->right) / 2;
    w.point = {x, 0, psi0(x), 0};
    w.lower_bound = (it->right - it->left) / 4;
    // r must be small against the face height for the limit to settle.
    w.r = std::min(config.witness_r, 1e-3L * w.point.re2);
    try {
      const Frame f = oracle0.normal_tangent_frame(w.point);
      w.value = face_witness(oracle0, w.point, f.X, w.r);
      w.value_half = face_witness(oracle0, w.point, f.X, w.r / 2);
    } catch (const Error& e) {
      check("face witness j = " + std::to_string(j), false, 0, 0, e.what());
      ++rep.quarantined;
      all_positive = false;
      continue;
    }
    const Real change = std::fabs(w.value - w.value_half) / w.value;
    worst_change = std::max(worst_change, change);
    all_positive = all_positive && w.value > 0;
    all_bounded = all_bounded && w.value >= w.lower_bound;
    all_stable = all_stable && change < 0.01L;
    shrinking = shrinking && x < prev_norm;
    prev_norm = x;
    rep.witnesses.push_back(w);
  }
  check("face witnesses positive", all_positive, 0, 0, "even-chord midpoints on Psi_0");
  check("face witnesses above chord bound", all_bounded, 0, 0, "value >= (t_2j - t_2j+1) / 4");
  check("face witnesses stable under halving r", all_stable, worst_change, 0.01L, "max relative change");
  check("face midpoints approach the origin", shrinking, prev_norm, 0, "strictly decreasing Re z1");
  return rep;
}

}  // namespace kobvis
