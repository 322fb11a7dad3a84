#pragma once

#include "dcl/cup.hpp"
#include "dcl/forms.hpp"
#include "dcl/geometry.hpp"
#include "dcl/whitney.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>

namespace dcl {

/// Generalized Hermitian eigenproblem S v = lambda M v.
struct OperatorPencil {
  Eigen::MatrixXcd stiffness;
  Eigen::MatrixXcd mass;
  int degree = 0;
  std::string description;
};

/// Real 1-form A as chart-coordinate coefficients (components x 1).
using SmoothOneForm = FormField;

/// Scalar test function with its chart gradient.
struct SmoothFunction {
  std::function<std::complex<double>(const ChartPoint&)> value;
  std::function<Eigen::VectorXcd(const ChartPoint&)> gradient;
};

/// a = R A.
Cochain cochain_from_smooth(const GeometricComplex& geometry, const SmoothOneForm& connection,
                            int quadrature_degree = kDeRhamQuadratureDegree);

/// S = D^H M_1 D with D = d + i a∪, M = M_0.
OperatorPencil assemble_degree0(const GeometricComplex& geometry, const Cochain& a);

/// Twisted Hodge-type Laplacian on q-cochains in pencil form:
/// S = D_q^H M_{q+1} D_q + M_q D_{q-1} M_{q-1}^{-1} D_{q-1}^H M_q, M = M_q.
OperatorPencil assemble_general(const GeometricComplex& geometry, const Cochain& a, int q);

/// L^2 norms of the three degree-0 commutation defects:
///   whitney    = |W d_a R w - d_A W R w|
///   de_rham    = |W d_a R w - W R d_A w|
///   smooth     = |W d_a R w - d_A w|
struct CommutationDefects {
  double whitney = 0.0;
  double de_rham = 0.0;
  double smooth = 0.0;
};

CommutationDefects commutation_defects(const GeometricComplex& geometry, const SmoothOneForm& connection,
                                       const Cochain& a, const SmoothFunction& omega,
                                       int quadrature_degree = kDeRhamQuadratureDegree);

}  // namespace dcl
