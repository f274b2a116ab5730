#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "kobvis/experiments.hpp"

namespace kobvis {

namespace {

using nlohmann::json;

json num(Real x) {
  if (!std::isfinite(x)) return nullptr;
  return static_cast<double>(x);
}

json point(const CPoint& p) { return json::array({num(p.re1), num(p.im1), num(p.re2), num(p.im2)}); }

json interval(const BoundInterval& b) { return {{"lower", num(b.lower)}, {"upper", num(b.upper)}}; }

json verdict(const IntegralVerdict& v) {
  json inc = json::array();
  for (Real x : v.increments) inc.push_back(num(x));
  return {{"status", to_string(v.status)}, {"value", num(v.value)},           {"tail", num(v.tail)},
          {"growth_rate", num(v.growth_rate)}, {"partial_sum", num(v.partial_sum)}, {"rule", v.rule},
          {"increments", inc}};
}

json series(const std::vector<Real>& xs) {
  json a = json::array();
  for (Real x : xs) a.push_back(num(x));
  return a;
}

json config_json(const ExperimentConfig& c) {
  return {{"schema_version", c.schema_version},
          {"profile",
           {{"kind", c.profile.kind},
            {"alpha", num(c.profile.alpha)},
            {"c", num(c.profile.c)},
            {"slope", num(c.profile.slope)},
            {"j_max", c.profile.j_max}}},
          {"convexity", to_string(c.convexity)},
          {"c", num(c.c)},
          {"f0", series(c.f0_list)},
          {"span", num(c.span)},
          {"half_nodes", c.half_nodes},
          {"ode_rel_tol", num(c.ode_rel_tol)},
          {"escape_depth", num(c.escape_depth)},
          {"lambda", num(c.lambda)},
          {"epsilon", num(c.epsilon)},
          {"pair_grid", c.pair_grid},
          {"grid", {{"h", num(c.grid_h)}, {"y_min", num(c.grid_y_min)}, {"y_max", num(c.grid_y_max)}, {"window", c.grid_window}}},
          {"gromov", c.gromov},
          {"gromov_base_depth", num(c.gromov_base_depth)},
          {"balance_tol", num(c.balance_tol)},
          {"classify", c.classify},
          {"classify_eps", num(c.classify_options.eps)},
          {"classify_levels", c.classify_options.levels},
          {"witness_j", {c.witness_j_min, c.witness_j_max}},
          {"witness_r", num(c.witness_r)},
          {"inverse_grid_points", c.inverse_grid_points},
          {"seed", c.seed}};
}

std::string curve_status(const CurveRecord& r) {
  if (!r.error.empty()) return "Error";
  if (r.flag == DepthFlag::Escaped) return "Escaped";
  if (!r.certified_run) return "Uncertified";
  return to_string(r.certificate.status);
}

std::string fmt(Real x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12Le", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

std::string report_json(const ExperimentReport& rep) {
  json curves = json::array();
  for (const auto& r : rep.curves) {
    json cert = nullptr;
    if (r.certified_run) {
      const auto& c = r.certificate;
      cert = {{"status", to_string(c.status)},
              {"lambda_target", num(c.lambda_target)},
              {"epsilon_target", num(c.epsilon_target)},
              {"observed_sup_ratio", num(c.observed_sup_ratio)},
              {"pair_grid_size", c.pair_grid_size},
              {"witness_t", {num(c.witness_t1), num(c.witness_t2)}},
              {"slack", num(c.slack)},
              {"refutation_ratio", num(c.refutation_ratio)}};
    }
    curves.push_back({{"f0", num(r.f0)},
                      {"status", curve_status(r)},
                      {"flag", to_string(r.flag)},
                      {"D", num(r.D)},
                      {"predicted", {{"D", num(r.predicted.D)}, {"flag", to_string(r.predicted.flag)}}},
                      {"max_delta", num(r.max_delta)},
                      {"max_residual", num(r.max_residual)},
                      {"endpoint", point(r.endpoint)},
                      {"endpoint_face_dist", num(r.endpoint_face_dist)},
                      {"certificate", cert},
                      {"error", r.error}});
  }
  json gromov = json::array();
  for (const auto& g : rep.gromov) {
    const auto& b = g.balanced;
    gromov.push_back({{"f0", num(g.f0)},
                      {"tau", num(b.tau)},
                      {"x", point(b.x)},
                      {"h", {{"start", num(b.h_at_start)}, {"end", num(b.h_at_end)}, {"tau", num(b.h_at_tau)}}},
                      {"gromov_zx", interval(b.gromov_zx)},
                      {"gromov_wx", interval(b.gromov_wx)},
                      {"error", g.error}});
  }
  json classes = json::array();
  for (const auto& c : rep.classifications) {
    const auto& r = c.report;
    classes.push_back({{"label", c.label},
                       {"point", point(r.point)},
                       {"summary", r.summary},
                       {"local", verdict(r.local)},
                       {"weakly", verdict(r.weakly)},
                       {"strongly_non", verdict(r.strongly_non)},
                       {"weakly_goldilocks", r.weakly_goldilocks},
                       {"strongly_non_goldilocks", r.strongly_non_goldilocks},
                       {"non_goldilocks", r.non_goldilocks},
                       {"distance_growth", "holds for convex domains; not tested"},
                       {"sampled_directions", r.sampled_directions},
                       {"shell_points", r.shell_points},
                       {"radii", series(r.radii)},
                       {"m_gauge", series(r.m_gauge)},
                       {"weakly_gauge", series(r.weakly_gauge)},
                       {"n_gauge", series(r.n_gauge)}});
  }
  json checks = json::array();
  for (const auto& c : rep.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", num(c.value)}, {"bound", num(c.bound)}, {"detail", c.detail}});
  json witnesses = json::array();
  for (const auto& w : rep.witnesses)
    witnesses.push_back({{"j", w.j},
                         {"point", point(w.point)},
                         {"r", num(w.r)},
                         {"log_r", num(std::log(w.r))},
                         {"log_height", num(std::log(w.point.re2))},
                         {"value", num(w.value)},
                         {"value_half_r", num(w.value_half)},
                         {"lower_bound", num(w.lower_bound)}});

  const json doc = {
      {"schema_version", kReportSchemaVersion},
      {"kind", rep.kind},
      {"profile", rep.profile_description},
      {"config", config_json(rep.config)},
      {"lambda_target", num(rep.lambda_target)},
      {"control_run", rep.control_run},
      {"quarantined", rep.quarantined},
      {"curves", curves},
      {"gromov_growth_diagnostic", gromov},
      {"classifications", classes},
      {"checks", checks},
      {"face_witnesses", witnesses},
      {"bound_types",
       {{"D", "point estimate"},
        {"max_delta", "point estimate"},
        {"endpoint_face_dist", "point estimate"},
        {"observed_sup_ratio", "upper (length upper / distance lower)"},
        {"refutation_ratio", "lower (length lower / distance upper)"},
        {"gromov_zx", "interval (lower from distance lower bounds, upper from grid)"},
        {"gromov_wx", "interval (lower from distance lower bounds, upper from grid)"},
        {"gauges", "point estimate, sampled sup"},
        {"face_witnesses", "point estimate"}}},
      {"environment",
       {{"real_digits", std::numeric_limits<Real>::digits10},
        {"certification_slack", num(kCertificationSlack)},
        {"escape_depth", num(rep.config.escape_depth)},
        {"ode_rel_tol", num(rep.config.ode_rel_tol)},
        {"library_version", "0.1.0"}}},
  };
  return doc.dump(2) + "\n";
}

std::string curves_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "f0,D,max_delta,lambda_target,sup_ratio,status,endpoint_face_dist\n";
  for (const auto& r : rep.curves) {
    os << fmt(r.f0) << ',' << fmt(r.D) << ',' << fmt(r.max_delta) << ',' << fmt(rep.lambda_target) << ','
       << fmt(r.certified_run ? r.certificate.observed_sup_ratio : Real(0)) << ',' << curve_status(r) << ','
       << fmt(r.endpoint_face_dist) << '\n';
  }
  return os.str();
}

std::string gromov_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "f0,tau,h_at_tau,zx_lower,zx_upper,wx_lower,wx_upper,status\n";
  for (const auto& g : rep.gromov) {
    const auto& b = g.balanced;
    os << fmt(g.f0) << ',' << fmt(b.tau) << ',' << fmt(b.h_at_tau) << ',' << fmt(b.gromov_zx.lower) << ','
       << fmt(b.gromov_zx.upper) << ',' << fmt(b.gromov_wx.lower) << ',' << fmt(b.gromov_wx.upper) << ','
       << (g.error.empty() ? "ok" : "error") << '\n';
  }
  return os.str();
}

std::string classify_csv(const ExperimentReport& rep) {
  std::ostringstream os;
  os << "label,re1,re2,local,weakly,strongly_non,summary\n";
  for (const auto& c : rep.classifications) {
    const auto& r = c.report;
    os << csv_field(c.label) << ',' << fmt(r.point.re1) << ',' << fmt(r.point.re2) << ',' << to_string(r.local.status)
       << ',' << to_string(r.weakly.status) << ',' << to_string(r.strongly_non.status) << ',' << csv_field(r.summary)
       << '\n';
  }
  return os.str();
}

std::vector<std::string> emit(const ExperimentReport& report, const std::string& dir, EmitFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir + ": " + ec.message());
  std::vector<std::string> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const fs::path p = fs::path(dir) / name;
    write_file(p, text);
    written.push_back(p.string());
  };
  if (format != EmitFormat::Csv) put("report.json", report_json(report));
  if (format != EmitFormat::Json) {
    put("curves.csv", curves_csv(report));
    put("gromov.csv", gromov_csv(report));
    put("classify.csv", classify_csv(report));
  }
  return written;
}

}  // namespace kobvis
