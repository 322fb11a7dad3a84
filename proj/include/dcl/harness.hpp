#pragma once

#include "dcl/bundle.hpp"
#include "dcl/geometry.hpp"
#include "dcl/laplacian.hpp"
#include "dcl/spectra.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dcl {

enum class Preset { Circle, Torus, BundleCircle };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset preset);

struct ExperimentConfig {
  Preset preset = Preset::Circle;
  std::vector<int> levels{16, 32, 64};
  double alpha = 0.0;  // circle: A = alpha dtheta; torus: x-component
  double beta = 0.0;   // torus: y-component
  double theta = 0.0;  // bundle holonomy angle
  int degree = 0;
  int num_eigs = 5;
  int quad_order = kDeRhamQuadratureDegree;
  std::string format = "json";
  std::string out;
};

/// Reads keys preset, levels, alpha, beta, theta, degree, num_eigs,
/// quad_order, format, out; missing keys keep `base` values.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
nlohmann::json config_to_json(const ExperimentConfig& config);
/// Throws InvalidInput on inconsistent configurations.
void validate(const ExperimentConfig& config);

/// Lowest `num_eigs` eigenvalues (with multiplicity) of the continuum
/// operator for the preset, degree 0.
std::vector<double> reference_spectrum(const ExperimentConfig& config, int num_eigs);

/// Geometry and pencil for one refinement level.
struct LevelProblem {
  GeometricComplex geometry;
  OperatorPencil pencil;
};
LevelProblem build_level(const ExperimentConfig& config, int n);

struct ConvergenceRow {
  int level = 0;
  int n = 0;
  double h = 0.0;
  int j = 0;
  double lambda_discrete = 0.0;
  std::optional<double> lambda_reference;
  std::optional<double> abs_error;
  std::optional<double> observed_order;
};

struct LevelSummary {
  int n = 0;
  MeshReport mesh;
  SpectrumReport health;
};

struct ConvergenceResult {
  ExperimentConfig config;
  std::vector<LevelSummary> levels;
  std::vector<ConvergenceRow> rows;
  std::map<int, std::optional<double>> fitted_order;
  std::map<int, std::optional<double>> fitted_C;
  double residual_max = 0.0;
  bool monotone = true;   // per-j errors decrease over the last three levels
  bool healthy = true;    // every spectrum passed verify_spectrum
};

/// Errors below this floor count as converged (no order is fitted for them).
double error_floor(double reference);

/// log(e_k / e_{k+1}) / log(h_k / h_{k+1}) for consecutive levels.
std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& errors);

ConvergenceResult run_convergence(const ExperimentConfig& config);

std::string to_csv(const ConvergenceResult& result);
nlohmann::json to_json(const ConvergenceResult& result);

struct CheckRecord {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool lower_bound = false;  // measured must be >= tolerance instead of <=
  bool passed = false;
};

/// Suites: algebra, whitney, cup, decay, bundle, all.
std::vector<CheckRecord> run_checks(const std::string& suite);
nlohmann::json checks_to_json(const std::vector<CheckRecord>& records);

nlohmann::json mesh_to_json(const MeshReport& report);

}  // namespace dcl
