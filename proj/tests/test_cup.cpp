#include "dcl/cup.hpp"
#include "dcl/errors.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <random>

using namespace dcl;

namespace {

Cochain basis(const SimplicialComplex& k, int q, std::vector<int> s) {
  Cochain c = Cochain::zeros(k, q);
  c(k.find(s)) = 1.0;
  return c;
}

Cochain random_real(const SimplicialComplex& k, int q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Cochain c = Cochain::zeros(k, q);
  for (Eigen::Index i = 0; i < c.values.size(); ++i) c.values[i] = u(rng);
  return c;
}

}  // namespace

TEST_CASE("cup coefficients") {
  CHECK(cup_coefficient(0, 0) == 1.0);
  CHECK(cup_coefficient(0, 1) == doctest::Approx(0.5));
  CHECK(cup_coefficient(1, 1) == doctest::Approx(1.0 / 6.0));
  CHECK(cup_coefficient(0, 2) == doctest::Approx(1.0 / 3.0));
  CHECK(cup_coefficient(2, 2) == doctest::Approx(4.0 / 120.0));
}

TEST_CASE("elementary cup products") {
  const auto k = SimplicialComplex::build({{0, 1, 2}, {1, 2, 3}});
  const Cochain v1 = basis(k, 0, {1});
  const Cochain e12 = basis(k, 1, {1, 2});

  Cochain half = Cochain::zeros(k, 1);
  half(k.find(std::vector<int>{1, 2})) = 0.5;
  CHECK((cup(k, v1, e12).values - half.values).norm() == 0.0);
  CHECK(cup(k, basis(k, 0, {0}), e12).values.norm() == 0.0);

  CHECK((cup(k, v1, v1).values - v1.values).norm() == 0.0);
  CHECK(cup(k, v1, basis(k, 0, {2})).values.norm() == 0.0);

  const Cochain prod = cup(k, basis(k, 1, {0, 1}), e12);
  Cochain expected = Cochain::zeros(k, 2);
  expected(k.find(std::vector<int>{0, 1, 2})) = 1.0 / 6.0;
  CHECK((prod.values - expected.values).norm() < 1e-15);

  // [0,1] and [2,3] share no vertex.
  CHECK(cup(k, basis(k, 1, {0, 1}), basis(k, 1, {2, 3})).values.norm() == 0.0);
  CHECK_THROWS_AS(cup(k, basis(k, 1, {0, 1}), basis(k, 2, {0, 1, 2})), InvalidInput);
}

TEST_CASE("non-associativity witness") {
  const auto k = SimplicialComplex::build({{0, 1}});
  const Cochain v = basis(k, 0, {0});
  const Cochain e = basis(k, 1, {0, 1});
  const Cochain left = cup(k, cup(k, v, v), e);
  const Cochain right = cup(k, v, cup(k, v, e));
  CHECK(std::abs(left(0) - 0.5) < 1e-15);
  CHECK(std::abs(right(0) - 0.25) < 1e-15);
}

TEST_CASE("cup with the unit cochain") {
  const GeometricComplex g = preset_torus(4);
  const auto& k = g.complex();
  std::mt19937_64 rng(11);
  Cochain ones = Cochain::zeros(k, 0);
  ones.values.setOnes();
  for (int q = 0; q <= 2; ++q) {
    const Cochain a = random_real(k, q, rng);
    CHECK((cup(k, ones, a).values - a.values).norm() < 1e-13);
  }
  const Cochain a1 = random_real(k, 1, rng);
  CHECK(wedge_consistency_check(g, a1, ones) <= 1e-10);
}

TEST_CASE("cup agrees with R(Wa ^ Wb)") {
  const GeometricComplex g = preset_torus(4);
  const auto& k = g.complex();
  std::mt19937_64 rng(5);
  for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}, {0, 2}, {2, 0}}) {
    CHECK(wedge_consistency_check(g, random_real(k, p, rng), random_real(k, q, rng)) <= 1e-10);
  }
}

TEST_CASE("graded commutativity and Leibniz") {
  const auto k = preset_torus(4).complex();
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Cochain a = random_real(k, 1, rng), b = random_real(k, 1, rng), f = random_real(k, 0, rng);
    CHECK((cup(k, a, b).values + cup(k, b, a).values).norm() < 1e-13);
    CHECK((cup(k, f, a).values - cup(k, a, f).values).norm() < 1e-13);
    const Eigen::MatrixXcd d0 = Eigen::MatrixXd(coboundary_matrix(k, 0)).cast<std::complex<double>>();
    const Eigen::MatrixXcd d1 = Eigen::MatrixXd(coboundary_matrix(k, 1)).cast<std::complex<double>>();
    Cochain df = Cochain::zeros(k, 1), da = Cochain::zeros(k, 2);
    df.values = d0 * f.values;
    da.values = d1 * a.values;
    const Eigen::VectorXcd lhs = d1 * cup(k, f, a).values;
    const Eigen::VectorXcd rhs = cup(k, df, a).values + cup(k, f, da).values;
    CHECK((lhs - rhs).norm() < 1e-12);
  }
}

TEST_CASE("cup operator and twisted coboundary") {
  const auto k = preset_torus(3).complex();
  std::mt19937_64 rng(2);
  const Cochain a1 = random_real(k, 1, rng), a2 = random_real(k, 1, rng);
  Cochain sum = a1;
  sum.values += a2.values;
  for (int q = 0; q <= 1; ++q) {
    const Eigen::MatrixXcd lhs = cup_operator(k, sum, q);
    const Eigen::MatrixXcd rhs = Eigen::MatrixXcd(cup_operator(k, a1, q)) + Eigen::MatrixXcd(cup_operator(k, a2, q));
    CHECK((lhs - rhs).norm() < 1e-13);
    const Cochain c = random_real(k, q, rng);
    CHECK((Eigen::MatrixXcd(cup_operator(k, a1, q)) * c.values - cup(k, a1, c).values).norm() < 1e-13);
    CHECK(Eigen::MatrixXcd(cup_operator(k, Cochain::zeros(k, 1), q)).norm() == 0.0);
    const Eigen::MatrixXcd d = Eigen::MatrixXd(coboundary_matrix(k, q)).cast<std::complex<double>>();
    CHECK((Eigen::MatrixXcd(twisted_coboundary(k, Cochain::zeros(k, 1), q)) - d).norm() == 0.0);
    const std::complex<double> i(0.0, 1.0);
    CHECK((Eigen::MatrixXcd(twisted_coboundary(k, a1, q)) - d - i * Eigen::MatrixXcd(cup_operator(k, a1, q))).norm() <
          1e-14);
  }
}

TEST_CASE("cup support rule") {
  const auto k = preset_torus(3).complex();
  for (const auto& term : cup_terms(k, 1, 1)) {
    const Simplex& l = k.simplex(1, term.left);
    const Simplex& r = k.simplex(1, term.right);
    int shared = 0;
    for (int v : l) shared += std::count(r.begin(), r.end(), v);
    CHECK(shared == 1);
    Simplex u = l;
    u.insert(u.end(), r.begin(), r.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    CHECK(u == k.simplex(2, term.target));
  }
}
