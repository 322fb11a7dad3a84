#include "dcl/errors.hpp"
#include "dcl/spectra.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <random>

using namespace dcl;

namespace {

OperatorPencil random_pencil(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n), b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = {g(rng), g(rng)};
      b(i, j) = {g(rng), g(rng)};
    }
  }
  OperatorPencil p;
  p.stiffness = a.adjoint() * a;
  p.mass = b.adjoint() * b + n * Eigen::MatrixXcd::Identity(n, n);
  return p;
}

}  // namespace

TEST_CASE("diagonal pencil") {
  OperatorPencil p;
  p.stiffness = Eigen::Vector3cd(4, 0, 1).asDiagonal();
  p.mass = Eigen::MatrixXcd::Identity(3, 3);
  const Spectrum s = solve_pencil(p);
  CHECK(s.eigenvalues[0] == doctest::Approx(0.0));
  CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(s.eigenvalues[2] == doctest::Approx(4.0));
  CHECK(verify_spectrum(p, s).passed);
}

TEST_CASE("two by two pencil") {
  OperatorPencil p;
  p.stiffness.resize(2, 2);
  p.stiffness << 2, -1, -1, 2;
  p.mass.resize(2, 2);
  p.mass << 2, 1, 1, 2;
  p.mass /= 3.0;
  const Spectrum s = solve_pencil(p);
  CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.eigenvalues[1] == doctest::Approx(9.0).epsilon(1e-14));
  const SpectrumReport r = verify_spectrum(p, s);
  CHECK(r.passed);
  CHECK(r.max_orthogonality_defect <= 1e-9);
}

TEST_CASE("num_eigs truncates") {
  std::mt19937_64 rng(1);
  const OperatorPencil p = random_pencil(8, rng);
  const Spectrum all = solve_pencil(p);
  const Spectrum few = solve_pencil(p, 3);
  CHECK(few.eigenvalues.size() == 3);
  CHECK(few.eigenvectors.cols() == 3);
  CHECK((few.eigenvalues - all.eigenvalues.head(3)).norm() < 1e-12);
  CHECK(std::is_sorted(all.eigenvalues.data(), all.eigenvalues.data() + all.eigenvalues.size()));
}

TEST_CASE("verification detects a perturbed eigenvalue") {
  std::mt19937_64 rng(4);
  const OperatorPencil p = random_pencil(10, rng);
  Spectrum s = solve_pencil(p);
  const SpectrumReport ok = verify_spectrum(p, s);
  CHECK(ok.passed);
  CHECK(ok.max_orthogonality_defect <= 1e-9);
  s.eigenvalues[4] += 1e-3;
  CHECK_FALSE(verify_spectrum(p, s).passed);
}

TEST_CASE("permutation similarity and scaling") {
  std::mt19937_64 rng(8);
  const OperatorPencil p = random_pencil(12, rng);
  std::vector<int> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> pm(12);
  for (int i = 0; i < 12; ++i) pm.indices()[i] = perm[static_cast<size_t>(i)];
  OperatorPencil q;
  q.stiffness = pm.transpose() * p.stiffness * pm;
  q.mass = pm.transpose() * p.mass * pm;
  OperatorPencil c;
  c.stiffness = 3.7 * p.stiffness;
  c.mass = 3.7 * p.mass;
  const Eigen::VectorXd e0 = solve_pencil(p).eigenvalues;
  CHECK((solve_pencil(q).eigenvalues - e0).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + e0.cwiseAbs().maxCoeff()));
  CHECK((solve_pencil(c).eigenvalues - e0).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + e0.cwiseAbs().maxCoeff()));
}

TEST_CASE("deterministic output") {
  std::mt19937_64 rng(6);
  const OperatorPencil p = random_pencil(9, rng);
  const Spectrum a = solve_pencil(p), b = solve_pencil(p);
  CHECK((a.eigenvalues - b.eigenvalues).norm() == 0.0);
  CHECK((a.eigenvectors - b.eigenvectors).norm() == 0.0);
}

TEST_CASE("indefinite mass is rejected") {
  OperatorPencil p;
  p.stiffness = Eigen::MatrixXcd::Identity(2, 2);
  p.mass.resize(2, 2);
  p.mass << 1, 0, 0, -1;
  CHECK_THROWS_AS(solve_pencil(p), MassDegenerate);
  p.mass << 1, 0, 0, 1e-20;
  CHECK_THROWS_AS(solve_pencil(p), MassDegenerate);
}
