#pragma once

#include "dcl/laplacian.hpp"

#include <Eigen/Dense>

#include <optional>

namespace dcl {

/// Ascending eigenvalues with M-orthonormal eigenvectors (columns).
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  Eigen::VectorXd residual_norms;  // |S v - lambda M v|
};

/// Dense generalized Hermitian solve: Cholesky M = L L^H, Householder
/// tridiagonalization and implicit QL on L^{-1} S L^{-H}, back-transform.
/// Throws MassDegenerate if M is not positive definite and NumericalFailure
/// if the iteration does not converge.
Spectrum solve_pencil(const OperatorPencil& pencil, std::optional<int> num_eigs = std::nullopt);

struct SpectrumReport {
  bool passed = false;
  double max_residual = 0.0;             // relative to |S|_F + |lambda| |M|_F
  double max_orthogonality_defect = 0.0;  // max |V^H M V - I|
};

SpectrumReport verify_spectrum(const OperatorPencil& pencil, const Spectrum& spectrum, double tolerance = 1e-9);

}  // namespace dcl
