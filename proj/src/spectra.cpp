#include "dcl/spectra.hpp"

#include "dcl/errors.hpp"

namespace dcl {

Spectrum solve_pencil(const OperatorPencil& pencil, std::optional<int> num_eigs) {
  const Eigen::Index dim = pencil.mass.rows();
  if (dim == 0 || pencil.mass.cols() != dim || pencil.stiffness.rows() != dim || pencil.stiffness.cols() != dim) {
    throw InvalidInput("solve_pencil: shape mismatch");
  }
  const Eigen::MatrixXcd mass = 0.5 * (pencil.mass + pencil.mass.adjoint());
  Eigen::LLT<Eigen::MatrixXcd> llt(mass);
  if (llt.info() != Eigen::Success) throw MassDegenerate("solve_pencil: mass matrix is not positive definite");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> mass_eigs(mass, Eigen::EigenvaluesOnly);
    const double threshold = 1e-12 * mass.trace().real() / static_cast<double>(dim);
    if (mass_eigs.eigenvalues().minCoeff() <= threshold) {
      throw MassDegenerate("solve_pencil: mass matrix is numerically singular");
    }
  }
  const auto l = llt.matrixL();
  // C = L^{-1} S L^{-H}
  Eigen::MatrixXcd c = l.solve(pencil.stiffness);
  c = l.solve(Eigen::MatrixXcd(c.adjoint())).adjoint();
  c = 0.5 * (c + c.adjoint());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(c);
  if (solver.info() != Eigen::Success) throw NumericalFailure("solve_pencil: eigen iteration did not converge");

  const Eigen::Index count = num_eigs ? std::clamp<Eigen::Index>(*num_eigs, 1, dim) : dim;
  Spectrum out;
  out.eigenvalues = solver.eigenvalues().head(count);
  out.eigenvectors = llt.matrixU().solve(solver.eigenvectors().leftCols(count));
  out.residual_norms.resize(count);
  for (Eigen::Index j = 0; j < count; ++j) {
    const Eigen::VectorXcd v = out.eigenvectors.col(j);
    out.residual_norms[j] = (pencil.stiffness * v - out.eigenvalues[j] * (pencil.mass * v)).norm();
  }
  return out;
}

SpectrumReport verify_spectrum(const OperatorPencil& pencil, const Spectrum& spectrum, double tolerance) {
  SpectrumReport report;
  const Eigen::Index count = spectrum.eigenvalues.size();
  if (spectrum.eigenvectors.cols() != count || spectrum.eigenvectors.rows() != pencil.mass.rows()) return report;
  const double s_norm = pencil.stiffness.norm();
  const double m_norm = pencil.mass.norm();
  bool ascending = true;
  for (Eigen::Index j = 0; j < count; ++j) {
    if (j > 0 && spectrum.eigenvalues[j] < spectrum.eigenvalues[j - 1]) ascending = false;
    const Eigen::VectorXcd v = spectrum.eigenvectors.col(j);
    const double lambda = spectrum.eigenvalues[j];
    const double residual = (pencil.stiffness * v - lambda * (pencil.mass * v)).norm();
    report.max_residual = std::max(report.max_residual, residual / (s_norm + std::abs(lambda) * m_norm));
  }
  const Eigen::MatrixXcd gram = spectrum.eigenvectors.adjoint() * pencil.mass * spectrum.eigenvectors;
  report.max_orthogonality_defect =
      (gram - Eigen::MatrixXcd::Identity(count, count)).cwiseAbs().maxCoeff();
  report.passed = ascending && report.max_residual <= tolerance && report.max_orthogonality_defect <= tolerance;
  return report;
}

}  // namespace dcl
