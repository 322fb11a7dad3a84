#pragma once

#include "dcl/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace dcl {

/// Smooth (or piecewise) q-form field with values in C^fiber.
///
/// Returns a matrix with one row per increasing multi-index of the chart
/// coordinates (lexicographic) and one column per fiber component. Fields
/// must be pure: they are called concurrently and in any order.
using FormField = std::function<Eigen::MatrixXcd(const ChartPoint&)>;

int binomial(int n, int k);

/// Increasing q-subsets of {0..dim-1}, lexicographic. Row order of form values.
const std::vector<std::vector<int>>& multi_indices(int dim, int q);

/// Coefficients of the wedge of the columns of `covectors` (dim x q).
Eigen::VectorXd wedge_covectors(const Eigen::MatrixXd& covectors);

/// Wedge product of a p-form and a q-form given as coefficient vectors.
Eigen::VectorXcd wedge(const Eigen::VectorXcd& a, int p, const Eigen::VectorXcd& b, int q, int dim);

/// omega(v_1, ..., v_q) with the vectors as columns of `vectors` (dim x q).
std::complex<double> contract(const Eigen::VectorXcd& form, const Eigen::MatrixXd& vectors);

/// Normalized quadrature on a q-simplex: barycentric nodes, weights summing
/// to 1 (multiply by the simplex volume). Exact for polynomials of total
/// degree <= `degree`. Collapsed (Duffy) tensor Gauss-Legendre.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;
  std::vector<Eigen::VectorXd> nodes;
  std::vector<double> weights;

  static QuadratureRule simplex(int dim, int degree);
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights);

/// Integral of a form field over a q-simplex, evaluated in the chart of
/// `top` (which must contain the simplex). Returns one value per fiber column.
Eigen::VectorXcd integrate_over_simplex(const GeometricComplex& geometry, int top, const std::vector<int>& local,
                                        const FormField& field, const QuadratureRule& rule);

}  // namespace dcl
