#include "dcl/errors.hpp"
#include "dcl/forms.hpp"
#include "dcl/whitney.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

using namespace dcl;

namespace {
constexpr double kPi = std::numbers::pi;

double factorial(int k) { return k <= 1 ? 1.0 : k * factorial(k - 1); }
}  // namespace

TEST_CASE("simplex moments") {
  const GeometricComplex edge = realize(SimplicialComplex::build({{0, 1}}), {0.3});
  CHECK(simplex_moment(edge, 0, std::vector<int>{0, 0}) == doctest::Approx(0.3));
  CHECK(simplex_moment(edge, 0, std::vector<int>{2, 0}) == doctest::Approx(0.1));

  const GeometricComplex tri = realize(SimplicialComplex::build({{0, 1, 2}}), {1.0, 1.0, std::sqrt(2.0)});
  CHECK(simplex_moment(tri, 0, std::vector<int>{1, 1, 0}) == doctest::Approx(0.5 / 12.0));
}

TEST_CASE("quadrature is exact against the moment formula") {
  const GeometricComplex tri = realize(SimplicialComplex::build({{0, 1, 2}}), {1.0, 1.2, 1.5});
  const double vol = tri.cell(0).volume;
  for (int degree = 0; degree <= 8; ++degree) {
    const QuadratureRule rule = QuadratureRule::simplex(2, degree);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
    for (int a = 0; a <= degree; ++a) {
      for (int b = 0; a + b <= degree; ++b) {
        const int c = degree - a - b;
        double numeric = 0.0;
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
          const auto& mu = rule.nodes[k];
          numeric += rule.weights[k] * std::pow(mu[0], a) * std::pow(mu[1], b) * std::pow(mu[2], c);
        }
        numeric *= vol;
        // Dirichlet integral, independent of simplex_moment's implementation.
        const double exact = vol * 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(2 + degree);
        CHECK(numeric == doctest::Approx(exact).epsilon(1e-13));
        CHECK(simplex_moment(tri, 0, std::vector<int>{a, b, c}) == doctest::Approx(exact).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("gauss legendre on [0,1]") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double m9 = 0.0;
  for (size_t k = 0; k < x.size(); ++k) m9 += w[k] * std::pow(x[k], 9);
  CHECK(m9 == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("whitney evaluation") {
  const GeometricComplex g = preset_torus(3);
  const auto& k = g.complex();
  const int top = 4;
  const Simplex& t = k.simplex(2, top);
  Eigen::VectorXd bary(3);
  bary << 0.1, 0.6, 0.3;

  Cochain v = Cochain::zeros(k, 0);
  v(t[1]) = 1.0;
  CHECK(std::abs(whitney_eval(g, v, top, bary)(0, 0) - 0.6) < 1e-14);

  CHECK(whitney_eval(g, Cochain::zeros(k, 1), top, bary).norm() == 0.0);

  Eigen::VectorXd outside(3);
  outside << -0.1, 0.6, 0.5;
  CHECK_THROWS_AS(whitney_eval(g, v, top, outside), InvalidInput);

  const double h = 0.7;
  const GeometricComplex edge = realize(SimplicialComplex::build({{0, 1}}), {h});
  Cochain e = Cochain::zeros(edge.complex(), 1);
  e(0) = 1.0;
  Eigen::VectorXd b(2);
  b << 0.35, 0.65;
  CHECK(std::abs(std::abs(whitney_eval(edge, e, 0, b)(0, 0)) - 1.0 / h) < 1e-12);
}

TEST_CASE("whitney 1-form matches the formula mu_a dmu_b - mu_b dmu_a") {
  const GeometricComplex g = preset_torus(4);
  const auto& k = g.complex();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int top = 0; top < g.num_tops(); top += 5) {
    const TopCell& cell = g.cell(top);
    for (const auto& face : top_faces(g, top, 1)) {
      Eigen::VectorXd bary(3);
      bary << u(rng), u(rng), u(rng);
      bary /= bary.sum();
      const int a = face.local[0], b = face.local[1];
      const Eigen::VectorXd expected = bary[a] * cell.gradients.col(b) - bary[b] * cell.gradients.col(a);
      Cochain c = Cochain::zeros(k, 1);
      c(face.index) = 1.0;
      CHECK((whitney_eval(g, c, top, bary).col(0).real() - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("circle mass matrices") {
  const int n = 10;
  const double h = 2.0 * kPi / n;
  const GeometricComplex g = preset_circle(n);
  const Eigen::MatrixXd m0 = mass_matrix(g, 0);
  for (int i = 0; i < n; ++i) {
    CHECK(m0(i, i) == doctest::Approx(2.0 * h / 3.0).epsilon(1e-13));
    CHECK(m0(i, (i + 1) % n) == doctest::Approx(h / 6.0).epsilon(1e-13));
    CHECK(m0(i, (i + 2) % n) == 0.0);
  }
  const Eigen::MatrixXd m1 = mass_matrix(g, 1);
  CHECK((m1 - Eigen::MatrixXd::Identity(n, n) / h).norm() < 1e-12);

  const Eigen::MatrixXd m0f = mass_matrix(g, 0, 2);
  CHECK(m0f.rows() == 2 * n);
  CHECK(m0f(2, 4) == doctest::Approx(h / 6.0));
  CHECK(m0f(2, 5) == 0.0);
}

TEST_CASE("torus mass matrices agree with quadrature of the Whitney basis") {
  const GeometricComplex g = preset_torus(3);
  const auto& k = g.complex();
  const QuadratureRule rule = QuadratureRule::simplex(2, 4);
  for (int q = 0; q <= 2; ++q) {
    const Eigen::MatrixXd m = mass_matrix(g, q);
    CHECK((m - m.transpose()).norm() <= 1e-13 * m.norm());
    Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(k.count(q), k.count(q));
    for (int top = 0; top < g.num_tops(); ++top) {
      const auto faces = top_faces(g, top, q);
      for (size_t p = 0; p < rule.nodes.size(); ++p) {
        for (const auto& f1 : faces) {
          const Eigen::VectorXd w1 = whitney_basis(g.cell(top), f1.local, rule.nodes[p]);
          for (const auto& f2 : faces) {
            const Eigen::VectorXd w2 = whitney_basis(g.cell(top), f2.local, rule.nodes[p]);
            brute(f1.index, f2.index) += rule.weights[p] * g.cell(top).volume * w1.dot(w2);
          }
        }
      }
    }
    CHECK((m - brute).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    // Entries vanish unless the simplices share a top coface.
    for (int i = 0; i < k.count(q); ++i) {
      for (int j = 0; j < k.count(q); ++j) {
        const auto& ti = k.top_cofaces(q, i);
        const auto& tj = k.top_cofaces(q, j);
        bool share = false;
        for (int t : ti) share = share || std::find(tj.begin(), tj.end(), t) != tj.end();
        if (!share) CHECK(m(i, j) == 0.0);
      }
    }
  }
}

TEST_CASE("de Rham map") {
  const GeometricComplex g = preset_circle(12);
  const FormField one = [](const ChartPoint&) { return Eigen::MatrixXcd::Ones(1, 1); };
  const Cochain c0 = de_rham(g, one, 0);
  CHECK((c0.values - Eigen::VectorXcd::Ones(12)).norm() < 1e-14);

  const double alpha = 0.3;
  const FormField a = [alpha](const ChartPoint&) { return Eigen::MatrixXcd::Constant(1, 1, alpha); };
  const Cochain c1 = de_rham(g, a, 1);
  const auto& k = g.complex();
  for (int e = 0; e < k.count(1); ++e) {
    const auto& s = k.simplex(1, e);
    const double sign = (s[0] == 0 && s[1] == 11) ? -1.0 : 1.0;
    CHECK(std::abs(c1(e) - sign * alpha * 2.0 * kPi / 12.0) < 1e-14);
  }
}

TEST_CASE("de Rham of a polynomial 2-form on the torus") {
  const GeometricComplex g = preset_torus(4);
  // x dx^dy integrates over each triangle to area * x-centroid.
  const FormField f = [](const ChartPoint& x) { return Eigen::MatrixXcd::Constant(1, 1, x.x[0]); };
  const Cochain c = de_rham(g, f, 2);
  const auto& k = g.complex();
  for (int t = 0; t < g.num_tops(); ++t) {
    const TopCell& cell = g.cell(t);
    const double orient = (cell.chart.col(1) - cell.chart.col(0)).x() * (cell.chart.col(2) - cell.chart.col(0)).y() -
                          (cell.chart.col(1) - cell.chart.col(0)).y() * (cell.chart.col(2) - cell.chart.col(0)).x();
    const double expected = (orient > 0 ? 1.0 : -1.0) * cell.volume * cell.chart.row(0).mean();
    CHECK(std::abs(c(t) - expected) < 1e-14);
  }
  CHECK(k.count(2) == 32);
}

TEST_CASE("Whitney and de Rham identities") {
  const GeometricComplex circle = preset_circle(8);
  const GeometricComplex torus = preset_torus(4);
  for (int q = 0; q <= 1; ++q) CHECK(rw_identity_check(circle, q) <= 1e-12);
  for (int q = 0; q <= 2; ++q) CHECK(rw_identity_check(torus, q) <= 1e-12);
  CHECK(stokes_check(circle, 0) <= 1e-12);
  CHECK(stokes_check(torus, 0) <= 1e-12);
  CHECK(stokes_check(torus, 1) <= 1e-12);
}
