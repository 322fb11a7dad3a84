// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include "dcl/bundle.hpp"
#include "dcl/cup.hpp"
#include "dcl/harness.hpp"
#include "dcl/whitney.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

using namespace dcl;

namespace {

constexpr double kPi = std::numbers::pi;

struct Health {
  bool ok = true;
  double worst_residual = 0.0;
  double worst_orthogonality = 0.0;
  int pencils = 0;

  void add(const SpectrumReport& r) {
    ok = ok && r.passed;
    worst_residual = std::max(worst_residual, r.max_residual);
    worst_orthogonality = std::max(worst_orthogonality, r.max_orthogonality_defect);
    ++pencils;
  }
};

Health health;
int failures = 0;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, bool passed, const std::string& detail, double seconds, double budget) {
  const bool in_time = seconds <= budget;
  std::printf("[%s] criterion %d: %s (%.2f s, budget %.0f s)\n", passed && in_time ? "PASS" : "FAIL", id,
              detail.c_str(), seconds, budget);
  if (!(passed && in_time)) ++failures;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

Spectrum solve_checked(const OperatorPencil& pencil, std::optional<int> num_eigs = std::nullopt) {
  Spectrum s = solve_pencil(pencil, num_eigs);
  health.add(verify_spectrum(pencil, s));
  return s;
}

void absorb(const ConvergenceResult& r) {
  for (const auto& level : r.levels) health.add(level.health);
}

// Every resolved per-j error strictly decreases and every consecutive order is >= min_order.
bool orders_ok(const ConvergenceResult& r, double min_order, double& worst) {
  worst = 1e300;
  bool ok = r.monotone;
  for (const auto& row : r.rows) {
    if (row.level == 0) continue;
    if (row.observed_order) {
      worst = std::min(worst, *row.observed_order);
      ok = ok && *row.observed_order >= min_order;
    } else if (*row.abs_error > error_floor(*row.lambda_reference)) {
      ok = false;
    }
  }
  return ok;
}

void criterion1() {
  Timer t;
  const auto algebra = run_checks("algebra");
  const auto whitney = run_checks("whitney");
  double worst = 0.0;
  bool ok = true;
  for (const auto* suite : {&algebra, &whitney}) {
    for (const auto& r : *suite) {
      if (r.name.rfind("mass condition", 0) == 0) continue;
      ok = ok && r.passed;
      worst = std::max(worst, r.measured);
    }
  }
  report(1, ok, fmt("exact identities, worst defect %.3g", worst), t.seconds(), 5);
}

void criterion2() {
  Timer t;
  bool ok = true;
  double worst = 0.0;
  for (const auto& r : run_checks("cup")) {
    ok = ok && r.passed;
    worst = std::max(worst, r.measured);
  }
  report(2, ok, fmt("cup equals R(Wa ^ Wb), worst defect %.3g", worst), t.seconds(), 10);
}

void criterion3() {
  Timer t;
  double worst = 0.0;
  std::vector<double> h, e;
  for (int n : {16, 32, 64}) {
    const GeometricComplex g = preset_circle(n);
    const OperatorPencil pencil = assemble_degree0(g, Cochain::zeros(g.complex(), 1));
    const Spectrum s = solve_checked(pencil);
    const double hh = 2.0 * kPi / n;
    std::vector<double> oracle;
    for (int k = 0; k < n; ++k) {
      oracle.push_back(6.0 / (hh * hh) * (1.0 - std::cos(k * hh)) / (2.0 + std::cos(k * hh)));
    }
    std::sort(oracle.begin(), oracle.end());
    for (int k = 0; k < n; ++k) worst = std::max(worst, std::abs(s.eigenvalues[k] - oracle[static_cast<size_t>(k)]));
    h.push_back(hh);
    e.push_back(std::abs(s.eigenvalues[1] - 1.0));
  }
  const auto orders = observed_orders(h, e);
  const double order = *std::min_element(orders.begin(), orders.end());
  report(3, worst <= 1e-9 && order >= 1.9,
         fmt("max |lambda - circulant| = %.3g, lambda_1 order %.3f", worst, order), t.seconds(), 10);
}

void criterion4() {
  Timer t;
  ExperimentConfig c;
  c.preset = Preset::Circle;
  c.alpha = 0.3;
  c.levels = {16, 32, 64, 128};
  c.num_eigs = 5;
  const ConvergenceResult r = run_convergence(c);
  absorb(r);
  double worst = 0.0;
  const bool ok = orders_ok(r, 0.9, worst);
  const double e0 = *r.rows[3 * 5].abs_error;
  report(4, ok && e0 <= 5e-3, fmt("min order %.3f, |lambda_0 - 0.09| = %.3g at n=128", worst, e0), t.seconds(), 30);
}

void criterion5() {
  Timer t;
  ExperimentConfig c;
  c.preset = Preset::Torus;
  c.alpha = 0.4;
  c.beta = 0.7;
  c.levels = {8, 16, 32};
  c.num_eigs = 4;
  const ConvergenceResult r = run_convergence(c);
  absorb(r);
  double worst = 0.0;
  const bool ok = orders_ok(r, 0.9, worst);
  report(5, ok, fmt("min order %.3f over 4 eigenvalues", worst), t.seconds(), 180);
}

void criterion6() {
  Timer t;
  ExperimentConfig c;
  c.preset = Preset::BundleCircle;
  c.theta = 0.6;
  c.levels = {16, 32, 64, 128};
  c.num_eigs = 1;
  const ConvergenceResult r = run_convergence(c);
  absorb(r);
  double worst = 0.0;
  bool ok = orders_ok(r, 0.9, worst);
  double min_eig = 1e300;
  for (int n : c.levels) {
    const GeometricComplex g = preset_circle(n);
    const EmbeddingData e = flat_line_bundle_circle(0.6, n);
    for (int q = 0; q <= 1; ++q) min_eig = std::min(min_eig, injectivity_check(g, e, q));
  }
  ok = ok && min_eig > 0.0;
  report(6, ok, fmt("lambda_0 order %.3f, min twisted mass eigenvalue %.3g", worst, min_eig), t.seconds(), 60);
}

void criterion7() {
  Timer t;
  std::vector<double> gaps;
  for (int n : {32, 64}) {
    const GeometricComplex g = preset_circle(n);
    const EmbeddingData e = single_chart_bundle(g, 1, 1, [](const ChartPoint& x) {
      return Eigen::MatrixXcd::Constant(1, 1, std::polar(1.0, 0.5 * std::sin(x.x[0])));
    });
    const Spectrum bundle = solve_checked(connection_pencil(g, e), 3);
    const FormField dphi = [](const ChartPoint& x) {
      return Eigen::MatrixXcd::Constant(1, 1, 0.5 * std::cos(x.x[0]));
    };
    const Spectrum twisted = solve_checked(assemble_degree0(g, cochain_from_smooth(g, dphi)), 3);
    gaps.push_back((bundle.eigenvalues - twisted.eigenvalues).cwiseAbs().maxCoeff());
  }
  const double ratio = gaps[0] / gaps[1];
  report(7, ratio >= 1.8, fmt("gap %.3g -> %.3g, ratio %.3f", gaps[0], gaps[1], ratio), t.seconds(), 20);
}

void criterion8() {
  Timer t;
  const int n0 = 32;
  const FormField f = [](const ChartPoint& x) {
    Eigen::MatrixXcd v(1, 2);
    v << std::polar(1.0, x.x[0]), std::cos(3.0 * x.x[0]);
    return v;
  };
  const double exact = almost_projection_defect(preset_circle(n0), flat_line_bundle_circle(0.6, n0), 0, f).max_cochain;
  const FormField v = [](const ChartPoint& x) {
    Eigen::MatrixXcd m(1, 2);
    m << std::cos(x.x[0]), std::complex<double>(std::sin(2.0 * x.x[0]), 0.5);
    return m;
  };
  std::vector<double> idem, proj;
  for (int n : {16, 32, 64, 128}) {
    const GeometricComplex g = preset_circle(n);
    const EmbeddingData e = flat_line_bundle_circle(0.6, n);
    idem.push_back(projection_idempotence_defect(g, e, 1));
    proj.push_back(almost_projection_defect(g, e, 1, v).whitney_norm);
  }
  bool decreasing = true;
  for (size_t k = 1; k < idem.size(); ++k) decreasing = decreasing && idem[k] < idem[k - 1] && proj[k] < proj[k - 1];
  report(8, exact <= 1e-12 && decreasing,
         fmt("q=0 identity defect %.3g; idempotence %.3g -> %.3g", exact, idem.front(), idem.back()) +
             fmt("; q=1 projection defect %.3g -> %.3g", proj.front(), proj.back()),
         t.seconds(), 60);
}

void criterion9() {
  Timer t;
  const FormField w1 = [](const ChartPoint& x) {
    Eigen::MatrixXcd v(2, 1);
    v << std::sin(2.0 * kPi * x.x[0]), 0.0;
    return v;
  };
  const FormField w2 = [](const ChartPoint& x) {
    return Eigen::MatrixXcd::Constant(1, 1, std::cos(2.0 * kPi * x.x[1]));
  };
  std::vector<double> h, e;
  for (int n : {4, 8, 16, 32}) {
    const GeometricComplex g = preset_torus(n);
    h.push_back(mesh_report(g).h);
    e.push_back(cup_approximation_defect(g, w1, 1, w2, 0));
  }
  const auto orders = observed_orders(h, e);
  const double order = *std::min_element(orders.begin(), orders.end());
  report(9, order >= 0.9, fmt("sup defect %.3g -> %.3g, min order %.3f", e.front(), e.back(), order), t.seconds(), 30);
}

void criterion10() {
  report(10, health.ok && health.pencils > 0,
         fmt("%.0f pencils, max relative residual %.3g, max orthogonality defect %.3g", health.pencils,
             health.worst_residual, health.worst_orthogonality),
         0.0, 1);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
