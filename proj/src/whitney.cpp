#include "dcl/whitney.hpp"

#include "dcl/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <bit>
#include <cmath>

namespace dcl {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Integral over the face `sigma` (local positions in the top cell) of a form
// given as a function of barycentric coordinates of the top.
template <typename F>
double integrate_face(const TopCell& cell, const std::vector<int>& sigma, const QuadratureRule& rule, F&& form) {
  const int q = static_cast<int>(sigma.size()) - 1;
  const Eigen::Index n = cell.chart.rows();
  Eigen::MatrixXd vectors(n, q);
  for (int k = 0; k < q; ++k) {
    vectors.col(k) = cell.chart.col(sigma[static_cast<size_t>(k + 1)]) - cell.chart.col(sigma[0]);
  }
  double total = 0.0;
  for (size_t node = 0; node < rule.nodes.size(); ++node) {
    Eigen::VectorXd bary = Eigen::VectorXd::Zero(n + 1);
    for (int k = 0; k <= q; ++k) bary[sigma[static_cast<size_t>(k)]] = rule.nodes[node][k];
    const Eigen::VectorXd value = form(bary);
    total += rule.weights[node] * contract(value.cast<std::complex<double>>(), vectors).real();
  }
  return total / factorial(q);
}

}  // namespace

std::vector<LocalFace> top_faces(const GeometricComplex& geometry, int top, int q) {
  const auto& k = geometry.complex();
  const Simplex& t = k.simplex(k.dimension(), top);
  std::vector<LocalFace> faces;
  const unsigned full = 1u << t.size();
  for (unsigned mask = 1; mask < full; ++mask) {
    if (std::popcount(mask) != q + 1) continue;
    LocalFace f;
    Simplex s;
    for (size_t j = 0; j < t.size(); ++j) {
      if (mask & (1u << j)) {
        f.local.push_back(static_cast<int>(j));
        s.push_back(t[j]);
      }
    }
    f.index = k.find(s);
    faces.push_back(std::move(f));
  }
  std::sort(faces.begin(), faces.end(), [](const LocalFace& a, const LocalFace& b) { return a.index < b.index; });
  return faces;
}

double simplex_moment(const GeometricComplex& geometry, int top, std::span<const int> exponents) {
  const int n = geometry.dimension();
  if (static_cast<int>(exponents.size()) != n + 1) throw InvalidInput("simplex_moment: need N+1 exponents");
  // Accumulate the ratio term by term to stay well inside double range.
  double value = geometry.cell(top).volume;
  int total = 0;
  for (int k : exponents) {
    if (k < 0) throw InvalidInput("simplex_moment: negative exponent");
    total += k;
  }
  // (N + sum k)! / N! = (N+1)(N+2)...(N + sum k)
  for (int k : exponents) value *= factorial(k);
  for (int m = n + 1; m <= n + total; ++m) value /= m;
  return value;
}

Eigen::VectorXd whitney_basis(const TopCell& cell, const std::vector<int>& local, const Eigen::VectorXd& bary) {
  const int q = static_cast<int>(local.size()) - 1;
  const int n = static_cast<int>(cell.chart.rows());
  if (q == 0) return Eigen::VectorXd::Constant(1, bary[local[0]]);
  Eigen::VectorXd form = Eigen::VectorXd::Zero(binomial(n, q));
  Eigen::MatrixXd grads(n, q);
  for (int i = 0; i <= q; ++i) {
    int col = 0;
    for (int j = 0; j <= q; ++j) {
      if (j != i) grads.col(col++) = cell.gradients.col(local[static_cast<size_t>(j)]);
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    form += sign * bary[local[static_cast<size_t>(i)]] * wedge_covectors(grads);
  }
  return factorial(q) * form;
}

Eigen::VectorXd whitney_basis_derivative(const TopCell& cell, const std::vector<int>& local) {
  const int q = static_cast<int>(local.size()) - 1;
  const int n = static_cast<int>(cell.chart.rows());
  Eigen::VectorXd form = Eigen::VectorXd::Zero(binomial(n, q + 1));
  if (q + 1 > n) return form;
  Eigen::MatrixXd grads(n, q + 1);
  for (int i = 0; i <= q; ++i) {
    grads.col(0) = cell.gradients.col(local[static_cast<size_t>(i)]);
    int col = 1;
    for (int j = 0; j <= q; ++j) {
      if (j != i) grads.col(col++) = cell.gradients.col(local[static_cast<size_t>(j)]);
    }
    const double sign = (i % 2 == 0) ? 1.0 : -1.0;
    form += sign * wedge_covectors(grads);
  }
  return factorial(q) * form;
}

Eigen::MatrixXcd whitney_eval(const GeometricComplex& geometry, const Cochain& c, int top,
                              const Eigen::VectorXd& bary) {
  const int n = geometry.dimension();
  if (bary.size() != n + 1 || bary.minCoeff() < -1e-12 || std::abs(bary.sum() - 1.0) > 1e-12) {
    throw InvalidInput("whitney_eval: point outside the simplex");
  }
  const TopCell& cell = geometry.cell(top);
  Eigen::MatrixXcd value = Eigen::MatrixXcd::Zero(binomial(n, c.degree), c.fiber_dim);
  for (const auto& face : top_faces(geometry, top, c.degree)) {
    const Eigen::VectorXd w = whitney_basis(cell, face.local, bary);
    for (int comp = 0; comp < c.fiber_dim; ++comp) value.col(comp) += c(face.index, comp) * w;
  }
  return value;
}

SparseReal mass_matrix(const GeometricComplex& geometry, int q, int fiber_dim) {
  const int n = geometry.dimension();
  if (q < 0 || q > n) throw InvalidInput("mass_matrix: degree out of range");
  const double qfact2 = factorial(q) * factorial(q);
  std::vector<Eigen::Triplet<double>> triplets;
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const TopCell& cell = geometry.cell(t);
    // Integrals of mu_a mu_b over the top cell.
    Eigen::MatrixXd second(n + 1, n + 1);
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= n; ++b) {
        std::vector<int> k(static_cast<size_t>(n + 1), 0);
        ++k[static_cast<size_t>(a)];
        ++k[static_cast<size_t>(b)];
        second(a, b) = simplex_moment(geometry, t, k);
      }
    }
    const auto faces = top_faces(geometry, t, q);
    for (const auto& s : faces) {
      for (const auto& r : faces) {
        double entry = 0.0;
        for (int i = 0; i <= q; ++i) {
          for (int j = 0; j <= q; ++j) {
            Eigen::MatrixXd minor(q, q);
            int row = 0;
            for (int a = 0; a <= q; ++a) {
              if (a == i) continue;
              int col = 0;
              for (int b = 0; b <= q; ++b) {
                if (b == j) continue;
                minor(row, col++) = cell.grad_gram(s.local[static_cast<size_t>(a)], r.local[static_cast<size_t>(b)]);
              }
              ++row;
            }
            const double det = q == 0 ? 1.0 : minor.determinant();
            const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
            entry += sign * second(s.local[static_cast<size_t>(i)], r.local[static_cast<size_t>(j)]) * det;
          }
        }
        entry *= qfact2;
        for (int c = 0; c < fiber_dim; ++c) {
          triplets.emplace_back(s.index * fiber_dim + c, r.index * fiber_dim + c, entry);
        }
      }
    }
  }
  const int size = geometry.complex().count(q) * fiber_dim;
  SparseReal m(size, size);
  m.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<SparseReal> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DegenerateMetric("mass_matrix: Whitney mass matrix of degree " + std::to_string(q) +
                           " is not positive definite");
  }
  return m;
}

Cochain de_rham(const GeometricComplex& geometry, const FormField& form, int q, int quadrature_degree) {
  const auto& k = geometry.complex();
  if (q < 0 || q > k.dimension()) throw InvalidInput("de_rham: degree out of range");
  const QuadratureRule rule = QuadratureRule::simplex(q, quadrature_degree);
  Cochain c;
  c.degree = q;
  for (int s = 0; s < k.count(q); ++s) {
    const int top = geometry.owner_top(q, s);
    const Eigen::VectorXcd value = integrate_over_simplex(geometry, top, geometry.local_vertices(top, q, s), form, rule);
    if (s == 0) {
      c.fiber_dim = static_cast<int>(value.size());
      c.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(k.count(q)) * c.fiber_dim);
    }
    c.values.segment(static_cast<Eigen::Index>(s) * c.fiber_dim, c.fiber_dim) = value;
  }
  return c;
}

double rw_identity_check(const GeometricComplex& geometry, int q) {
  const QuadratureRule rule = QuadratureRule::simplex(q, 2);
  double worst = 0.0;
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const TopCell& cell = geometry.cell(t);
    const auto faces = top_faces(geometry, t, q);
    for (const auto& sigma : faces) {
      for (const auto& tau : faces) {
        const double value = integrate_face(cell, sigma.local, rule, [&](const Eigen::VectorXd& bary) {
          return whitney_basis(cell, tau.local, bary);
        });
        const double expected = sigma.index == tau.index ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(value - expected));
      }
    }
  }
  return worst;
}

double stokes_check(const GeometricComplex& geometry, int q) {
  const auto& k = geometry.complex();
  if (q < 0 || q >= k.dimension()) throw InvalidInput("stokes_check: q out of range");
  const QuadratureRule rule = QuadratureRule::simplex(q + 1, 2);
  double worst = 0.0;
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const TopCell& cell = geometry.cell(t);
    const auto lower = top_faces(geometry, t, q);
    const auto upper = top_faces(geometry, t, q + 1);
    for (const auto& tau : lower) {
      const Eigen::VectorXd dw = whitney_basis_derivative(cell, tau.local);
      for (const auto& rho : upper) {
        const double value = integrate_face(cell, rho.local, rule, [&](const Eigen::VectorXd&) { return dw; });
        double expected = 0.0;
        for (const auto& inc : k.cofaces(q, tau.index)) {
          if (inc.index == rho.index) expected = inc.sign;
        }
        worst = std::max(worst, std::abs(value - expected));
      }
    }
  }
  return worst;
}

}  // namespace dcl
