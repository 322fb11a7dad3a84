#include "dcl/errors.hpp"
#include "dcl/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Flags {
  std::string config_path;
  std::optional<std::string> preset;
  std::optional<std::vector<int>> levels;
  std::optional<double> alpha, beta, theta;
  std::optional<int> num_eigs, quad_order, degree;
  std::optional<std::string> out, format;
};

void add_experiment_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config file");
  app->add_option("--preset", f.preset, "circle | torus | bundle_circle");
  app->add_option("--levels", f.levels, "refinement levels n")->delimiter(',');
  app->add_option("--alpha", f.alpha, "connection coefficient (circle, torus x)");
  app->add_option("--beta", f.beta, "connection coefficient (torus y)");
  app->add_option("--theta", f.theta, "bundle holonomy angle");
  app->add_option("--num-eigs", f.num_eigs, "number of eigenvalues");
  app->add_option("--quad-order", f.quad_order, "de Rham quadrature degree");
  app->add_option("--degree", f.degree, "cochain degree");
  app->add_option("--out", f.out, "output path (default stdout)");
  app->add_option("--format", f.format, "json | csv");
}

dcl::ExperimentConfig resolve(const Flags& f) {
  dcl::ExperimentConfig config;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw dcl::InvalidInput("cannot open config " + f.config_path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw dcl::InvalidInput(std::string("config parse: ") + e.what());
    }
    config = dcl::config_from_json(doc, config);
  }
  if (f.preset) config.preset = dcl::parse_preset(*f.preset);
  if (f.levels) config.levels = *f.levels;
  if (f.alpha) config.alpha = *f.alpha;
  if (f.beta) config.beta = *f.beta;
  if (f.theta) config.theta = *f.theta;
  if (f.num_eigs) config.num_eigs = *f.num_eigs;
  if (f.quad_order) config.quad_order = *f.quad_order;
  if (f.degree) config.degree = *f.degree;
  if (f.out) config.out = *f.out;
  if (f.format) config.format = *f.format;
  dcl::validate(config);
  return config;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw dcl::InvalidInput("cannot write " + path);
  out << text;
}

int run_spectrum(const Flags& f) {
  dcl::ExperimentConfig config = resolve(f);
  const int n = config.levels.back();
  const dcl::LevelProblem problem = dcl::build_level(config, n);
  const dcl::Spectrum spectrum = dcl::solve_pencil(problem.pencil, config.num_eigs);
  const dcl::SpectrumReport health = dcl::verify_spectrum(problem.pencil, spectrum);
  nlohmann::json doc;
  doc["config"] = dcl::config_to_json(config);
  doc["n"] = n;
  doc["mesh"] = dcl::mesh_to_json(dcl::mesh_report(problem.geometry));
  doc["eigenvalues"] = std::vector<double>(spectrum.eigenvalues.data(),
                                           spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  doc["residual_max"] = health.max_residual;
  doc["orthogonality_defect"] = health.max_orthogonality_defect;
  doc["healthy"] = health.passed;
  emit(config.out, doc.dump(2) + "\n");
  return health.passed ? 0 : 2;
}

int run_converge(const Flags& f) {
  const dcl::ExperimentConfig config = resolve(f);
  const dcl::ConvergenceResult result = dcl::run_convergence(config);
  emit(config.out, config.format == "csv" ? dcl::to_csv(result) : dcl::to_json(result).dump(2) + "\n");
  if (!result.healthy) return 2;
  return result.monotone ? 0 : 3;
}

int run_mesh(const Flags& f) {
  const dcl::ExperimentConfig config = resolve(f);
  nlohmann::json doc = nlohmann::json::array();
  for (int n : config.levels) {
    nlohmann::json entry = dcl::mesh_to_json(dcl::mesh_report(dcl::build_level(config, n).geometry));
    entry["n"] = n;
    doc.push_back(entry);
  }
  emit(config.out, doc.dump(2) + "\n");
  return 0;
}

int run_check(const std::string& suite, const std::string& out) {
  const auto records = dcl::run_checks(suite);
  emit(out, dcl::checks_to_json(records).dump(2) + "\n");
  for (const auto& r : records) {
    if (!r.passed) return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete connection Laplacians on simplicial complexes"};
  app.require_subcommand(1);

  Flags spectrum_flags, converge_flags, mesh_flags;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues at the finest level");
  add_experiment_flags(spectrum, spectrum_flags);
  auto* converge = app.add_subcommand("converge", "convergence study over the levels");
  add_experiment_flags(converge, converge_flags);
  auto* mesh = app.add_subcommand("mesh", "mesh report per level");
  add_experiment_flags(mesh, mesh_flags);
  std::string suite = "all", check_out;
  auto* check = app.add_subcommand("check", "invariant suites");
  check->add_option("--suite", suite, "algebra | whitney | cup | decay | bundle | all");
  check->add_option("--out", check_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*spectrum) return run_spectrum(spectrum_flags);
    if (*converge) return run_converge(converge_flags);
    if (*mesh) return run_mesh(mesh_flags);
    if (*check) return run_check(suite, check_out);
  } catch (const dcl::InvalidInput& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
