#include "dcl/laplacian.hpp"

#include "dcl/errors.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace dcl {
namespace {

constexpr std::complex<double> kI(0.0, 1.0);

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

Cochain cochain_from_smooth(const GeometricComplex& geometry, const SmoothOneForm& connection,
                            int quadrature_degree) {
  Cochain a = de_rham(geometry, connection, 1, quadrature_degree);
  a.values = a.values.real().cast<std::complex<double>>();
  return a;
}

OperatorPencil assemble_degree0(const GeometricComplex& geometry, const Cochain& a) {
  return assemble_general(geometry, a, 0);
}

OperatorPencil assemble_general(const GeometricComplex& geometry, const Cochain& a, int q) {
  const auto& k = geometry.complex();
  const int n = k.dimension();
  if (q < 0 || q > n) throw InvalidInput("assemble_general: degree out of range");
  if (a.degree != 1 || a.fiber_dim != 1) throw InvalidInput("assemble_general: a must be a scalar 1-cochain");

  const SparseComplex mq = mass_matrix(geometry, q).cast<std::complex<double>>();
  SparseComplex stiffness(k.count(q), k.count(q));
  if (q < n) {
    const SparseComplex d = twisted_coboundary(k, a, q);
    const SparseComplex m_up = mass_matrix(geometry, q + 1).cast<std::complex<double>>();
    stiffness = SparseComplex(d.adjoint()) * m_up * d;
  }
  Eigen::MatrixXcd s = Eigen::MatrixXcd(stiffness);
  if (q > 0) {
    const SparseComplex d = twisted_coboundary(k, a, q - 1);
    const SparseComplex m_down = mass_matrix(geometry, q - 1).cast<std::complex<double>>();
    Eigen::SimplicialLLT<SparseComplex> factor(m_down);
    if (factor.info() != Eigen::Success) throw DegenerateMetric("assemble_general: singular lower mass matrix");
    // B = D^H M_q, then M_q D M^{-1} B.
    const Eigen::MatrixXcd b = Eigen::MatrixXcd(SparseComplex(d.adjoint()) * mq);
    const Eigen::MatrixXcd solved = factor.solve(b);
    s += Eigen::MatrixXcd(mq * d) * solved;
  }
  OperatorPencil pencil;
  pencil.stiffness = hermitian_part(s);
  pencil.mass = Eigen::MatrixXcd(mq);
  pencil.degree = q;
  pencil.description = "twisted Whitney Laplacian, degree " + std::to_string(q);
  return pencil;
}

CommutationDefects commutation_defects(const GeometricComplex& geometry, const SmoothOneForm& connection,
                                       const Cochain& a, const SmoothFunction& omega, int quadrature_degree) {
  const auto& k = geometry.complex();
  const int n = geometry.dimension();
  const FormField omega_field = [&](const ChartPoint& p) {
    return Eigen::MatrixXcd::Constant(1, 1, omega.value(p));
  };
  // d_A w = dw + i A w as a 1-form field.
  const FormField twisted_d_omega = [&](const ChartPoint& p) {
    Eigen::MatrixXcd v = omega.gradient(p);
    v += kI * omega.value(p) * connection(p);
    return v;
  };
  const Cochain r_omega = de_rham(geometry, omega_field, 0, quadrature_degree);
  Cochain twisted = Cochain::zeros(k, 1);
  twisted.values = twisted_coboundary(k, a, 0) * r_omega.values;
  const Cochain r_twisted = de_rham(geometry, twisted_d_omega, 1, quadrature_degree);

  const QuadratureRule rule = QuadratureRule::simplex(n, 8);
  double e_whitney = 0.0, e_de_rham = 0.0, e_smooth = 0.0;
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const TopCell& cell = geometry.cell(t);
    // d W R w is constant on the cell.
    Eigen::VectorXcd grad_interp = Eigen::VectorXcd::Zero(binomial(n, 1));
    for (const auto& face : top_faces(geometry, t, 0)) {
      grad_interp += r_omega(face.index) * whitney_basis_derivative(cell, face.local).cast<std::complex<double>>();
    }
    for (size_t node = 0; node < rule.nodes.size(); ++node) {
      const Eigen::VectorXd& bary = rule.nodes[node];
      const ChartPoint p = geometry.point(t, bary);
      const double w = rule.weights[node] * cell.volume;
      const Eigen::VectorXcd lhs = whitney_eval(geometry, twisted, t, bary).col(0);
      const std::complex<double> interp = whitney_eval(geometry, r_omega, t, bary)(0, 0);
      const Eigen::VectorXcd d_a_interp = grad_interp + kI * interp * connection(p).col(0);
      const Eigen::VectorXcd w_r = whitney_eval(geometry, r_twisted, t, bary).col(0);
      const Eigen::VectorXcd exact = twisted_d_omega(p).col(0);
      e_whitney += w * (lhs - d_a_interp).squaredNorm();
      e_de_rham += w * (lhs - w_r).squaredNorm();
      e_smooth += w * (lhs - exact).squaredNorm();
    }
  }
  return {std::sqrt(e_whitney), std::sqrt(e_de_rham), std::sqrt(e_smooth)};
}

}  // namespace dcl
