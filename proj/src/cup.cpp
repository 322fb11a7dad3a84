#include "dcl/cup.hpp"

#include "dcl/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace dcl {

double cup_coefficient(int p, int q) {
  if (p < 0 || q < 0 || p + q > 18) throw InvalidInput("cup_coefficient: degrees out of range");
  auto fact = [](int n) {
    std::int64_t f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  std::int64_t num = fact(p) * fact(q);
  std::int64_t den = fact(p + q + 1);
  const std::int64_t g = std::gcd(num, den);
  num /= g;
  den /= g;
  return static_cast<double>(num) / static_cast<double>(den);
}

int cup_sign(const Simplex& left, const Simplex& right, const Simplex& target, int shared) {
  std::vector<int> l = left;
  auto it = std::find(l.begin(), l.end(), shared);
  if (it == l.end()) throw InvalidInput("cup_sign: shared vertex missing from left factor");
  l.erase(it);
  l.push_back(shared);
  const int s1 = relative_orientation(l, left);

  std::vector<int> r = right;
  it = std::find(r.begin(), r.end(), shared);
  if (it == r.end()) throw InvalidInput("cup_sign: shared vertex missing from right factor");
  r.erase(it);
  r.insert(r.begin(), shared);
  const int s2 = relative_orientation(r, right);

  std::vector<int> joined = l;
  joined.insert(joined.end(), r.begin() + 1, r.end());
  const int s3 = relative_orientation(joined, target);
  return s1 * s2 * s3;
}

std::vector<CupTerm> cup_terms(const SimplicialComplex& complex, int p, int q) {
  if (p < 0 || q < 0 || p + q > complex.dimension()) throw InvalidInput("cup: degree overflow");
  const double coefficient = cup_coefficient(p, q);
  std::vector<CupTerm> terms;
  const int m = p + q;
  for (int t = 0; t < complex.count(m); ++t) {
    const Simplex& tau = complex.simplex(m, t);
    for (int shared : tau) {
      std::vector<int> rest;
      for (int v : tau) {
        if (v != shared) rest.push_back(v);
      }
      // Choose which p of the remaining vertices join `shared` on the left.
      std::vector<bool> pick(rest.size(), false);
      std::fill(pick.begin(), pick.begin() + p, true);
      do {
        Simplex left{shared}, right{shared};
        for (size_t k = 0; k < rest.size(); ++k) (pick[k] ? left : right).push_back(rest[k]);
        std::sort(left.begin(), left.end());
        std::sort(right.begin(), right.end());
        terms.push_back({t, complex.find(left), complex.find(right),
                         coefficient * cup_sign(left, right, tau, shared)});
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
  }
  return terms;
}

Cochain cup(const SimplicialComplex& complex, const Cochain& left, const Cochain& right) {
  if (left.fiber_dim != 1) throw InvalidInput("cup: left factor must be scalar");
  Cochain out = Cochain::zeros(complex, left.degree + right.degree, right.fiber_dim);
  for (const auto& term : cup_terms(complex, left.degree, right.degree)) {
    for (int c = 0; c < right.fiber_dim; ++c) {
      out(term.target, c) += term.coefficient * left(term.left) * right(term.right, c);
    }
  }
  return out;
}

SparseComplex cup_operator(const SimplicialComplex& complex, const Cochain& a, int q) {
  if (a.fiber_dim != 1) throw InvalidInput("cup_operator: base cochain must be scalar");
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  for (const auto& term : cup_terms(complex, a.degree, q)) {
    const std::complex<double> value = term.coefficient * a(term.left);
    if (value != 0.0) triplets.emplace_back(term.target, term.right, value);
  }
  SparseComplex m(complex.count(a.degree + q), complex.count(q));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseComplex twisted_coboundary(const SimplicialComplex& complex, const Cochain& a, int q) {
  if (a.degree != 1) throw InvalidInput("twisted_coboundary: connection cochain must have degree 1");
  const SparseComplex d = coboundary_matrix(complex, q).cast<std::complex<double>>();
  SparseComplex twisted = d + std::complex<double>(0.0, 1.0) * cup_operator(complex, a, q);
  twisted.prune(std::complex<double>(0.0));
  return twisted;
}

double wedge_consistency_check(const GeometricComplex& geometry, const Cochain& a, const Cochain& b) {
  const auto& k = geometry.complex();
  const int n = geometry.dimension();
  const int m = a.degree + b.degree;
  if (m > n) throw InvalidInput("wedge_consistency_check: degree overflow");
  const Cochain combinatorial = cup(k, a, b);
  // Whitney forms have affine coefficients, so the wedge is quadratic.
  const QuadratureRule rule = QuadratureRule::simplex(m, 2);
  double worst = 0.0;
  for (int s = 0; s < k.count(m); ++s) {
    const int top = geometry.owner_top(m, s);
    const FormField product = [&](const ChartPoint& p) {
      const Eigen::VectorXd bary = geometry.barycentric(p.top, p.x);
      const Eigen::VectorXcd wa = whitney_eval(geometry, a, p.top, bary).col(0);
      const Eigen::VectorXcd wb = whitney_eval(geometry, b, p.top, bary).col(0);
      return Eigen::MatrixXcd(wedge(wa, a.degree, wb, b.degree, n));
    };
    const auto value = integrate_over_simplex(geometry, top, geometry.local_vertices(top, m, s), product, rule);
    worst = std::max(worst, std::abs(value[0] - combinatorial(s)));
  }
  return worst;
}

double cup_approximation_defect(const GeometricComplex& geometry, const FormField& w1, int p, const FormField& w2,
                                int q, int quadrature_degree) {
  const auto& k = geometry.complex();
  const int n = geometry.dimension();
  const Cochain product = cup(k, de_rham(geometry, w1, p, quadrature_degree), de_rham(geometry, w2, q, quadrature_degree));
  const Eigen::VectorXd center = Eigen::VectorXd::Constant(n + 1, 1.0 / (n + 1));
  double worst = 0.0;
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const ChartPoint x = geometry.point(t, center);
    const Eigen::VectorXcd exact = wedge(w1(x).col(0), p, w2(x).col(0), q, n);
    const Eigen::VectorXcd approx = whitney_eval(geometry, product, t, center).col(0);
    worst = std::max(worst, (approx - exact).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace dcl
