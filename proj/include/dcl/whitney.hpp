#pragma once

#include "dcl/forms.hpp"
#include "dcl/geometry.hpp"
#include "dcl/simplicial.hpp"

#include <span>
#include <vector>

namespace dcl {

/// Default exactness degree for de Rham integration of smooth data
/// (eight Gauss points per simplex direction).
inline constexpr int kDeRhamQuadratureDegree = 14;

/// A q-face of a top simplex: global index plus positions inside the top.
struct LocalFace {
  int index;
  std::vector<int> local;
};

/// q-faces of `top`, ordered by global index.
std::vector<LocalFace> top_faces(const GeometricComplex& geometry, int top, int q);

/// Exact integral of prod mu_i^{k_i} over a top simplex:
/// vol * N! * prod k_i! / (N + sum k_i)!.
double simplex_moment(const GeometricComplex& geometry, int top, std::span<const int> exponents);

/// Whitney form of the face with local vertices `local` (canonical order) at a
/// barycentric point of the top cell, as chart-coordinate coefficients.
Eigen::VectorXd whitney_basis(const TopCell& cell, const std::vector<int>& local, const Eigen::VectorXd& bary);

/// Exterior derivative of whitney_basis, computed term by term.
Eigen::VectorXd whitney_basis_derivative(const TopCell& cell, const std::vector<int>& local);

/// Value of W c at a barycentric point of `top`: components x fiber.
/// Throws InvalidInput if the point lies outside the simplex.
Eigen::MatrixXcd whitney_eval(const GeometricComplex& geometry, const Cochain& c, int top,
                              const Eigen::VectorXd& bary);

/// Gram matrix of Whitney q-forms in L^2, assembled in closed form, extended
/// by Identity(fiber_dim). Throws DegenerateMetric if not positive definite.
SparseReal mass_matrix(const GeometricComplex& geometry, int q, int fiber_dim = 1);

/// Integrates a q-form field over every q-simplex (vertex evaluation for q = 0).
Cochain de_rham(const GeometricComplex& geometry, const FormField& form, int q,
                int quadrature_degree = kDeRhamQuadratureDegree);

/// max |R W c - c| over basis cochains, checked inside every top coface.
double rw_identity_check(const GeometricComplex& geometry, int q);

/// max |R d W c - d c| over basis q-cochains.
double stokes_check(const GeometricComplex& geometry, int q);

}  // namespace dcl
