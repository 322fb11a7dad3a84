#include "dcl/harness.hpp"

#include "dcl/cup.hpp"
#include "dcl/errors.hpp"
#include "dcl/whitney.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace dcl {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::complex<double> kI(0.0, 1.0);

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

FormField constant_form(Eigen::VectorXd coefficients) {
  return [coefficients](const ChartPoint&) { return Eigen::MatrixXcd(coefficients.cast<std::complex<double>>()); };
}

Cochain random_cochain(const SimplicialComplex& k, int q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Cochain c = Cochain::zeros(k, q);
  for (Eigen::Index i = 0; i < c.values.size(); ++i) c.values[i] = std::complex<double>(dist(rng), dist(rng));
  return c;
}

CheckRecord upper(std::string suite, std::string name, double measured, double tolerance) {
  return {std::move(suite), std::move(name), measured, tolerance, false, measured <= tolerance};
}

CheckRecord lower(std::string suite, std::string name, double measured, double bound) {
  return {std::move(suite), std::move(name), measured, bound, true, measured >= bound};
}

double min_order(const std::vector<double>& h, const std::vector<double>& e) {
  const auto orders = observed_orders(h, e);
  return orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());
}

}  // namespace

Preset parse_preset(const std::string& name) {
  if (name == "circle") return Preset::Circle;
  if (name == "torus") return Preset::Torus;
  if (name == "bundle_circle") return Preset::BundleCircle;
  throw InvalidInput("unknown preset '" + name + "'");
}

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::Circle: return "circle";
    case Preset::Torus: return "torus";
    case Preset::BundleCircle: return "bundle_circle";
  }
  return "circle";
}

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base) {
  if (!doc.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    if (doc.contains("preset")) base.preset = parse_preset(doc.at("preset").get<std::string>());
    if (doc.contains("levels")) base.levels = doc.at("levels").get<std::vector<int>>();
    if (doc.contains("alpha")) base.alpha = doc.at("alpha").get<double>();
    if (doc.contains("beta")) base.beta = doc.at("beta").get<double>();
    if (doc.contains("theta")) base.theta = doc.at("theta").get<double>();
    if (doc.contains("degree")) base.degree = doc.at("degree").get<int>();
    if (doc.contains("num_eigs")) base.num_eigs = doc.at("num_eigs").get<int>();
    if (doc.contains("quad_order")) base.quad_order = doc.at("quad_order").get<int>();
    if (doc.contains("format")) base.format = doc.at("format").get<std::string>();
    if (doc.contains("out")) base.out = doc.at("out").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return base;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  return {{"preset", preset_name(config.preset)},
          {"levels", config.levels},
          {"alpha", config.alpha},
          {"beta", config.beta},
          {"theta", config.theta},
          {"degree", config.degree},
          {"num_eigs", config.num_eigs},
          {"quad_order", config.quad_order},
          {"format", config.format}};
}

void validate(const ExperimentConfig& config) {
  if (config.levels.empty()) throw InvalidInput("config: at least one level required");
  for (size_t i = 1; i < config.levels.size(); ++i) {
    if (config.levels[i] <= config.levels[i - 1]) throw InvalidInput("config: levels must be strictly increasing");
  }
  const int min_n = config.preset == Preset::BundleCircle ? 4 : 3;
  if (config.levels.front() < min_n) throw InvalidInput("config: level too small for preset");
  if (config.num_eigs < 1) throw InvalidInput("config: num_eigs must be >= 1");
  if (config.quad_order < 0) throw InvalidInput("config: quad_order must be >= 0");
  if (config.format != "json" && config.format != "csv") throw InvalidInput("config: format must be json or csv");
  const int top_degree = config.preset == Preset::Torus ? 2 : 1;
  if (config.degree < 0 || config.degree > top_degree) throw InvalidInput("config: degree out of range");
  if (config.preset == Preset::BundleCircle && config.degree != 0) {
    throw InvalidInput("config: bundle_circle supports degree 0 only");
  }
}

std::vector<double> reference_spectrum(const ExperimentConfig& config, int num_eigs) {
  if (num_eigs < 1) throw InvalidInput("reference_spectrum: num_eigs must be >= 1");
  std::vector<double> values;
  const int span = num_eigs + 2;
  switch (config.preset) {
    case Preset::Circle:
    case Preset::BundleCircle: {
      const double shift = config.preset == Preset::Circle ? config.alpha : config.theta / (2.0 * kPi);
      const int center = static_cast<int>(std::lround(-shift));
      for (int k = center - span; k <= center + span; ++k) values.push_back((k + shift) * (k + shift));
      break;
    }
    case Preset::Torus: {
      const int cx = static_cast<int>(std::lround(-config.alpha / (2.0 * kPi)));
      const int cy = static_cast<int>(std::lround(-config.beta / (2.0 * kPi)));
      for (int k1 = cx - span; k1 <= cx + span; ++k1) {
        for (int k2 = cy - span; k2 <= cy + span; ++k2) {
          const double x = 2.0 * kPi * k1 + config.alpha;
          const double y = 2.0 * kPi * k2 + config.beta;
          values.push_back(x * x + y * y);
        }
      }
      break;
    }
  }
  std::sort(values.begin(), values.end());
  values.resize(static_cast<size_t>(num_eigs));
  return values;
}

LevelProblem build_level(const ExperimentConfig& config, int n) {
  switch (config.preset) {
    case Preset::Circle: {
      GeometricComplex g = preset_circle(n);
      Eigen::VectorXd coeff(1);
      coeff << config.alpha;
      const Cochain a = cochain_from_smooth(g, constant_form(coeff), config.quad_order);
      OperatorPencil pencil = assemble_general(g, a, config.degree);
      return {std::move(g), std::move(pencil)};
    }
    case Preset::Torus: {
      GeometricComplex g = preset_torus(n);
      Eigen::VectorXd coeff(2);
      coeff << config.alpha, config.beta;
      const Cochain a = cochain_from_smooth(g, constant_form(coeff), config.quad_order);
      OperatorPencil pencil = assemble_general(g, a, config.degree);
      return {std::move(g), std::move(pencil)};
    }
    case Preset::BundleCircle: {
      GeometricComplex g = preset_circle(n);
      const EmbeddingData e = flat_line_bundle_circle(config.theta, n);
      OperatorPencil pencil = connection_pencil(g, e);
      return {std::move(g), std::move(pencil)};
    }
  }
  throw InvalidInput("build_level: unknown preset");
}

double error_floor(double reference) { return 1e-10 * (1.0 + std::abs(reference)); }

std::vector<double> observed_orders(const std::vector<double>& h, const std::vector<double>& errors) {
  std::vector<double> orders;
  for (size_t k = 0; k + 1 < std::min(h.size(), errors.size()); ++k) {
    orders.push_back(std::log(errors[k] / errors[k + 1]) / std::log(h[k] / h[k + 1]));
  }
  return orders;
}

ConvergenceResult run_convergence(const ExperimentConfig& config) {
  validate(config);
  ConvergenceResult result;
  result.config = config;
  const bool has_reference = config.degree == 0;
  std::vector<double> reference;
  if (has_reference) reference = reference_spectrum(config, config.num_eigs);

  std::vector<std::vector<double>> discrete;
  std::vector<double> hs;
  for (int n : config.levels) {
    const LevelProblem problem = build_level(config, n);
    const Spectrum spectrum = solve_pencil(problem.pencil);
    LevelSummary summary;
    summary.n = n;
    summary.mesh = mesh_report(problem.geometry);
    summary.health = verify_spectrum(problem.pencil, spectrum);
    result.residual_max = std::max(result.residual_max, summary.health.max_residual);
    result.healthy = result.healthy && summary.health.passed;
    result.levels.push_back(summary);
    hs.push_back(summary.mesh.h);
    const auto count = std::min<Eigen::Index>(config.num_eigs, spectrum.eigenvalues.size());
    discrete.emplace_back(spectrum.eigenvalues.data(), spectrum.eigenvalues.data() + count);
  }

  for (size_t level = 0; level < config.levels.size(); ++level) {
    for (size_t j = 0; j < discrete[level].size(); ++j) {
      ConvergenceRow row;
      row.level = static_cast<int>(level);
      row.n = config.levels[level];
      row.h = hs[level];
      row.j = static_cast<int>(j);
      row.lambda_discrete = discrete[level][j];
      if (has_reference) {
        row.lambda_reference = reference[j];
        row.abs_error = std::abs(discrete[level][j] - reference[j]);
        if (level > 0 && j < discrete[level - 1].size()) {
          const double prev = std::abs(discrete[level - 1][j] - reference[j]);
          if (prev > error_floor(reference[j]) && *row.abs_error > error_floor(reference[j])) {
            row.observed_order = std::log(prev / *row.abs_error) / std::log(hs[level - 1] / hs[level]);
          }
        }
      }
      result.rows.push_back(row);
    }
  }

  if (has_reference) {
    for (int j = 0; j < config.num_eigs; ++j) {
      std::vector<double> h_used, e_used;
      bool resolved = true;
      for (const auto& row : result.rows) {
        if (row.j != j) continue;
        h_used.push_back(row.h);
        e_used.push_back(*row.abs_error);
        if (*row.abs_error <= error_floor(reference[static_cast<size_t>(j)])) resolved = false;
      }
      if (e_used.empty()) continue;
      // Least squares: e ~ C h.
      double num = 0.0, den = 0.0;
      for (size_t k = 0; k < h_used.size(); ++k) {
        num += e_used[k] * h_used[k];
        den += h_used[k] * h_used[k];
      }
      result.fitted_C[j] = num / den;
      if (resolved && h_used.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (size_t k = 0; k < h_used.size(); ++k) {
          mx += std::log(h_used[k]);
          my += std::log(e_used[k]);
        }
        mx /= static_cast<double>(h_used.size());
        my /= static_cast<double>(h_used.size());
        double sxy = 0.0, sxx = 0.0;
        for (size_t k = 0; k < h_used.size(); ++k) {
          sxy += (std::log(h_used[k]) - mx) * (std::log(e_used[k]) - my);
          sxx += (std::log(h_used[k]) - mx) * (std::log(h_used[k]) - mx);
        }
        result.fitted_order[j] = sxy / sxx;
      } else {
        result.fitted_order[j] = std::nullopt;
      }
      // Monotone decrease over the last three levels, ignoring converged errors.
      const size_t start = e_used.size() > 3 ? e_used.size() - 3 : 0;
      for (size_t k = start + 1; k < e_used.size(); ++k) {
        if (e_used[k] <= error_floor(reference[static_cast<size_t>(j)])) continue;
        if (!(e_used[k] < e_used[k - 1])) result.monotone = false;
      }
    }
  }
  return result;
}

std::string to_csv(const ConvergenceResult& result) {
  std::ostringstream out;
  out << "level,n,h,j,lambda_discrete,lambda_reference,abs_error,observed_order\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (const auto& row : result.rows) {
    out << row.level << ',' << row.n << ',' << format_number(row.h) << ',' << row.j << ','
        << format_number(row.lambda_discrete) << ',' << opt(row.lambda_reference) << ',' << opt(row.abs_error)
        << ',' << opt(row.observed_order) << '\n';
  }
  return out.str();
}

nlohmann::json mesh_to_json(const MeshReport& report) {
  return {{"h", report.h}, {"min_fullness", report.min_fullness}, {"counts", report.counts}};
}

nlohmann::json to_json(const ConvergenceResult& result) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  nlohmann::json doc;
  doc["config"] = config_to_json(result.config);
  nlohmann::json mesh = {{"n", nlohmann::json::array()},
                         {"h", nlohmann::json::array()},
                         {"min_fullness", nlohmann::json::array()}};
  for (const auto& level : result.levels) {
    mesh["n"].push_back(level.n);
    mesh["h"].push_back(level.mesh.h);
    mesh["min_fullness"].push_back(level.mesh.min_fullness);
  }
  doc["mesh"] = mesh;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    doc["rows"].push_back({{"level", row.level},
                           {"n", row.n},
                           {"h", row.h},
                           {"j", row.j},
                           {"lambda_discrete", row.lambda_discrete},
                           {"lambda_reference", opt(row.lambda_reference)},
                           {"abs_error", opt(row.abs_error)},
                           {"observed_order", opt(row.observed_order)}});
  }
  nlohmann::json fitted_order = nlohmann::json::object();
  nlohmann::json fitted_c = nlohmann::json::object();
  for (const auto& [j, v] : result.fitted_order) fitted_order[std::to_string(j)] = opt(v);
  for (const auto& [j, v] : result.fitted_C) fitted_c[std::to_string(j)] = opt(v);
  doc["summary"] = {{"fitted_order", fitted_order},
                    {"fitted_C", fitted_c},
                    {"monotone", result.monotone},
                    {"healthy", result.healthy}};
  doc["residual_max"] = result.residual_max;
  return doc;
}

std::vector<CheckRecord> run_checks(const std::string& suite) {
  static const std::vector<std::string> known{"algebra", "whitney", "cup", "decay", "bundle", "all"};
  if (std::find(known.begin(), known.end(), suite) == known.end()) {
    throw InvalidInput("unknown check suite '" + suite + "'");
  }
  auto wants = [&](const std::string& s) { return suite == "all" || suite == s; };
  std::vector<CheckRecord> records;

  if (wants("algebra")) {
    const GeometricComplex torus = preset_torus(4);
    const auto& k = torus.complex();
    std::mt19937_64 rng(20240917);
    const SparseReal dd = coboundary_matrix(k, 1) * coboundary_matrix(k, 0);
    records.push_back(upper("algebra", "d1*d0 = 0 (torus n=4)", dd.norm(), 0.0));

    double commut = 0.0, leibniz = 0.0;
    const std::vector<std::pair<int, int>> pairs{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}};
    for (int trial = 0; trial < 100; ++trial) {
      for (auto [p, q] : pairs) {
        const Cochain a = random_cochain(k, p, rng);
        const Cochain b = random_cochain(k, q, rng);
        const double sign = (p * q) % 2 == 0 ? 1.0 : -1.0;
        commut = std::max(commut, (cup(k, a, b).values - sign * cup(k, b, a).values).cwiseAbs().maxCoeff());
        if (p + q + 1 <= k.dimension()) {
          const Eigen::VectorXcd lhs = coboundary_matrix(k, p + q).cast<std::complex<double>>() * cup(k, a, b).values;
          Cochain da = Cochain::zeros(k, p + 1), db = Cochain::zeros(k, q + 1);
          da.values = coboundary_matrix(k, p).cast<std::complex<double>>() * a.values;
          db.values = coboundary_matrix(k, q).cast<std::complex<double>>() * b.values;
          const double s = p % 2 == 0 ? 1.0 : -1.0;
          const Eigen::VectorXcd rhs = cup(k, da, b).values + s * cup(k, a, db).values;
          leibniz = std::max(leibniz, (lhs - rhs).cwiseAbs().maxCoeff());
        }
      }
    }
    records.push_back(upper("algebra", "graded commutativity (100 random pairs)", commut, 1e-12));
    records.push_back(upper("algebra", "Leibniz rule (100 random pairs)", leibniz, 1e-12));

    double idem = 0.0;
    for (int v = 0; v < k.count(0); ++v) {
      Cochain e = Cochain::zeros(k, 0);
      e(v) = 1.0;
      idem = std::max(idem, (cup(k, e, e).values - e.values).cwiseAbs().maxCoeff());
    }
    records.push_back(upper("algebra", "vertex cup vertex idempotent", idem, 0.0));
  }

  if (wants("whitney")) {
    const GeometricComplex circle = preset_circle(8);
    const GeometricComplex torus = preset_torus(4);
    for (int q = 0; q <= 1; ++q) {
      records.push_back(upper("whitney", "R W = id, circle n=8, q=" + std::to_string(q), rw_identity_check(circle, q), 1e-12));
    }
    for (int q = 0; q <= 2; ++q) {
      records.push_back(upper("whitney", "R W = id, torus n=4, q=" + std::to_string(q), rw_identity_check(torus, q), 1e-12));
    }
    records.push_back(upper("whitney", "R d W = d, circle n=8, q=0", stokes_check(circle, 0), 1e-12));
    for (int q = 0; q <= 1; ++q) {
      records.push_back(upper("whitney", "R d W = d, torus n=4, q=" + std::to_string(q), stokes_check(torus, q), 1e-12));
    }
    // Whitney norm equivalence: the mass condition number stays bounded under refinement.
    for (int q = 0; q <= 2; ++q) {
      double worst = 0.0;
      for (int n : {4, 8}) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Eigen::MatrixXd(mass_matrix(preset_torus(n), q)),
                                                           Eigen::EigenvaluesOnly);
        worst = std::max(worst, eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff());
      }
      records.push_back(upper("whitney", "mass condition number, torus n=4,8, q=" + std::to_string(q), worst, 100.0));
    }
  }

  if (wants("cup")) {
    const GeometricComplex torus = preset_torus(4);
    const auto& k = torus.complex();
    std::mt19937_64 rng(7);
    for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 0}, {1, 1}, {0, 2}, {0, 0}}) {
      Cochain a = random_cochain(k, p, rng), b = random_cochain(k, q, rng);
      a.values = a.values.real().cast<std::complex<double>>();
      b.values = b.values.real().cast<std::complex<double>>();
      records.push_back(upper("cup",
                              "a ∪ b = R(Wa ∧ Wb), degrees (" + std::to_string(p) + "," + std::to_string(q) + ")",
                              wedge_consistency_check(torus, a, b), 1e-10));
    }
  }

  if (wants("decay")) {
    const FormField w1 = [](const ChartPoint& x) {
      Eigen::MatrixXcd v(2, 1);
      v << std::sin(2.0 * kPi * x.x[0]), 0.0;
      return v;
    };
    const FormField w2 = [](const ChartPoint& x) {
      return Eigen::MatrixXcd::Constant(1, 1, std::cos(2.0 * kPi * x.x[1]));
    };
    std::vector<double> hs, cup_defects, hc, c4, c5, c6;
    Eigen::VectorXd a_coeff(2);
    a_coeff << 0.4, 0.7;
    const FormField a_form = constant_form(a_coeff);
    const SmoothFunction omega{
        [](const ChartPoint& x) { return std::complex<double>(std::sin(2.0 * kPi * x.x[0])); },
        [](const ChartPoint& x) {
          Eigen::VectorXcd g(2);
          g << 2.0 * kPi * std::cos(2.0 * kPi * x.x[0]), 0.0;
          return g;
        }};
    for (int n : {4, 8, 16, 32}) {
      const GeometricComplex g = preset_torus(n);
      hs.push_back(mesh_report(g).h);
      cup_defects.push_back(cup_approximation_defect(g, w1, 1, w2, 0));
    }
    for (int n : {8, 16, 32, 64}) {
      const GeometricComplex g = preset_torus(n);
      hc.push_back(mesh_report(g).h);
      const auto defects = commutation_defects(g, a_form, cochain_from_smooth(g, a_form), omega);
      c4.push_back(defects.whitney);
      c5.push_back(defects.de_rham);
      c6.push_back(defects.smooth);
    }
    records.push_back(lower("decay", "cup/wedge sup defect order, torus n=4..32", min_order(hs, cup_defects), 0.9));
    records.push_back(lower("decay", "|W d_a R w - d_A W R w| order, torus n=8..64", min_order(hc, c4), 0.9));
    records.push_back(lower("decay", "|W d_a R w - W R d_A w| order, torus n=8..64", min_order(hc, c5), 0.9));
    records.push_back(lower("decay", "|W d_a R w - d_A w| order, torus n=8..64", min_order(hc, c6), 0.9));

    std::vector<double> hb, proj;
    const FormField v_form = [](const ChartPoint& x) {
      Eigen::MatrixXcd v(1, 2);
      v << std::cos(x.x[0]), std::complex<double>(std::sin(2.0 * x.x[0]), 0.5);
      return v;
    };
    for (int n : {16, 32, 64, 128}) {
      const GeometricComplex g = preset_circle(n);
      hb.push_back(mesh_report(g).h);
      proj.push_back(almost_projection_defect(g, flat_line_bundle_circle(0.6, n), 1, v_form).whitney_norm);
    }
    records.push_back(lower("decay", "almost-projection defect order, q=1, flat bundle", min_order(hb, proj), 0.9));
  }

  if (wants("bundle")) {
    const int n = 32;
    const GeometricComplex g = preset_circle(n);
    const EmbeddingData e = flat_line_bundle_circle(0.6, n);
    const FormField f = [](const ChartPoint& x) {
      Eigen::MatrixXcd v(1, 2);
      v << std::exp(kI * x.x[0]), std::cos(3.0 * x.x[0]);
      return v;
    };
    records.push_back(upper("bundle", "P^K R f = R P f (q=0)", almost_projection_defect(g, e, 0, f).max_cochain, 1e-12));
    records.push_back(lower("bundle", "min eig twisted mass q=0 (n=32) > 0", injectivity_check(g, e, 0), 1e-300));
    records.push_back(lower("bundle", "min eig twisted mass q=1 (n=32) > 0", injectivity_check(g, e, 1), 1e-300));
    double isometry = 0.0;
    for (int s = 0; s < 1000; ++s) {
      const double x = 2.0 * kPi * (s + 0.5) / 1000.0;
      int top = std::min(n - 1, static_cast<int>(x / (2.0 * kPi / n)));
      // Edge j spans [j h, (j+1) h] except the wrap edge, which is index 1.
      const int index = top == n - 1 ? 1 : (top == 0 ? 0 : top + 1);
      Eigen::VectorXd pt(1);
      pt << x;
      const Eigen::MatrixXcd i = i_pointwise(e, ChartPoint{index, pt});
      isometry = std::max(isometry, (i.adjoint() * i - Eigen::MatrixXcd::Identity(1, 1)).norm());
    }
    records.push_back(upper("bundle", "i(x)^H i(x) = 1 at 1000 points", isometry, 1e-12));
    std::vector<int> cycle(256);
    for (int v = 0; v < 256; ++v) cycle[static_cast<size_t>(v)] = v;
    const Eigen::MatrixXcd hol = discrete_holonomy(preset_circle(256), flat_line_bundle_circle(0.6, 256), cycle);
    records.push_back(upper("bundle", "holonomy = e^{i theta} (n=256)", std::abs(hol(0, 0) - std::polar(1.0, 0.6)), 1e-2));
  }
  return records;
}

nlohmann::json checks_to_json(const std::vector<CheckRecord>& records) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : records) {
    out.push_back({{"suite", r.suite},
                   {"name", r.name},
                   {"measured", r.measured},
                   {r.lower_bound ? "minimum" : "tolerance", r.tolerance},
                   {"passed", r.passed}});
  }
  return out;
}

}  // namespace dcl
