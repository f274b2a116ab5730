#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kobvis/distance_grid.hpp"
#include "kobvis/geodesics.hpp"
#include "kobvis/goldilocks.hpp"

namespace kobvis {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

/// Profile kinds: exp_power, piecewise_max, mollified (built on exp_power
/// with the given alpha and c), flat, wedge.
struct ProfileSpec {
  std::string kind = "exp_power";
  Real alpha = 1;
  Real c = 1;
  Real slope = 1;  // wedge only
  int j_max = kDefaultChordLevels;
};

ProfileFunction make_profile(const ProfileSpec& spec);

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  ProfileSpec profile;
  ConvexityClass convexity = ConvexityClass::Convex;

  // Tangential family.
  Real c = 1;
  std::vector<Real> f0_list{1e-2L, 1e-3L, 1e-4L, 1e-5L, 1e-6L, 1e-7L, 1e-8L, 1e-9L};
  Real span = 1;
  int half_nodes = 512;
  Real ode_rel_tol = 1e-12L;
  Real escape_depth = kDefaultEscapeDepth;

  // Certification; lambda = 0 selects (1 + 2c) for c < 1/2 and 4 otherwise,
  // times the certification slack.
  Real lambda = 0;
  Real epsilon = 0;
  int pair_grid = 16;

  // Distance grid on the slice {Re z1 = 0, Im z2 = 0}; y_min = 0 selects
  // min(f0) / 10.
  Real grid_h = 0.05L;
  Real grid_y_min = 0;
  Real grid_y_max = 0.8L;
  int grid_window = 6;

  bool gromov = true;
  Real gromov_base_depth = 0.5L;  // o = (0, span / 2, depth, 0)
  Real balance_tol = 1e-3L;

  bool classify = true;
  ClassifyOptions classify_options;

  // Counterexample suite.
  int witness_j_min = 2;
  int witness_j_max = 10;
  Real witness_r = 1e-8L;
  int inverse_grid_points = 50;

  int threads = 0;  // 0 uses the hardware concurrency
  std::uint64_t seed = 1;
  std::string output_dir = ".";

  Real lambda_target() const;
  /// Throws InvalidConfig.
  void validate() const;
};

/// Flat `key = value` text with `#` comments. Throws InvalidConfig.
ExperimentConfig parse_config(const std::string& text);
/// Throws IoError or InvalidConfig.
ExperimentConfig load_config(const std::string& path);
std::string config_keys_help();

struct CurveRecord {
  Real f0 = 0;
  TerminalDepth predicted;
  DepthFlag flag = DepthFlag::Reached;
  Real D = 0;  // recorded terminal depth f(1), or the escape depth
  Real max_delta = 0;
  Real max_residual = 0;
  bool certified_run = false;
  GeodesicCertificate certificate;
  CPoint endpoint;
  Real endpoint_face_dist = 0;  // distance from gamma(1) to {(i s, 0)}
  std::string error;
};

struct GromovRecord {
  Real f0 = 0;
  BalancedPoint balanced;
  std::string error;
};

struct ClassificationRecord {
  std::string label;
  ClassificationReport report;
};

struct CheckRecord {
  std::string name;
  bool passed = false;
  Real value = 0;  // worst observed quantity
  Real bound = 0;  // threshold it is compared with
  std::string detail;
};

struct WitnessRecord {
  int j = 0;
  CPoint point;     // face midpoint
  Real r = 0;
  Real value = 0;   // witness at r
  Real value_half = 0;  // witness at r / 2
  Real lower_bound = 0;  // (t_2j - t_2j+1) / 4
};

struct ExperimentReport {
  std::string kind;  // visibility or counterexample
  ExperimentConfig config;
  std::string profile_description;
  Real lambda_target = 0;
  bool control_run = false;  // convergent regime: curves are expected to escape
  std::vector<CurveRecord> curves;
  std::vector<GromovRecord> gromov;
  std::vector<ClassificationRecord> classifications;
  std::vector<CheckRecord> checks;
  std::vector<WitnessRecord> witnesses;
  int quarantined = 0;  // per-item numeric failures
};

/// Tangential family over the f0 list: terminal depths, certificates, face
/// distances and Gromov lower bounds at balanced parameters.
ExperimentReport run_visibility_family(const ExperimentConfig& config);

/// Psi_0 / Psi_inf invariants, classification of the origin and face
/// witnesses at even-chord midpoints.
ExperimentReport run_counterexample_suite(const ExperimentConfig& config);

std::string report_json(const ExperimentReport& report);
std::string curves_csv(const ExperimentReport& report);
std::string gromov_csv(const ExperimentReport& report);
std::string classify_csv(const ExperimentReport& report);

enum class EmitFormat { Json, Csv, Both };

/// Writes report.json and/or curves.csv, gromov.csv, classify.csv into `dir`.
/// Returns the written paths. Throws IoError.
std::vector<std::string> emit(const ExperimentReport& report, const std::string& dir,
                              EmitFormat format = EmitFormat::Both);

}  // namespace kobvis
