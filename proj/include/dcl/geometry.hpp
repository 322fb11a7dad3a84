#pragma once

#include "dcl/simplicial.hpp"

#include <Eigen/Dense>

#include <vector>

namespace dcl {

/// Flat metric data of one top simplex in its own affine chart.
///
/// Columns of `chart` are the vertex positions in canonical (increasing id)
/// order; `gradients` holds the chart-coordinate gradients of the barycentric
/// coordinates in the same order. The chart metric is Euclidean.
struct TopCell {
  Eigen::MatrixXd chart;      // N x (N+1)
  Eigen::MatrixXd edge_gram;  // N x N, <v_i - v_0, v_j - v_0>
  Eigen::MatrixXd gradients;  // N x (N+1)
  Eigen::MatrixXd grad_gram;  // (N+1) x (N+1), <grad mu_i, grad mu_j>
  double volume = 0.0;
  double diameter = 0.0;
};

/// A point expressed in the chart copy owned by one top simplex.
struct ChartPoint {
  int top = 0;
  Eigen::VectorXd x;
};

/// Piecewise-flat realization of a simplicial complex.
class GeometricComplex {
 public:
  GeometricComplex(SimplicialComplex complex, std::vector<double> edge_lengths, std::vector<TopCell> cells);

  const SimplicialComplex& complex() const { return complex_; }
  int dimension() const { return complex_.dimension(); }
  int num_tops() const { return complex_.count(complex_.dimension()); }
  const TopCell& cell(int top) const { return cells_.at(static_cast<size_t>(top)); }
  double edge_length(int edge) const { return edge_lengths_.at(static_cast<size_t>(edge)); }
  const std::vector<double>& edge_lengths() const { return edge_lengths_; }

  /// Lowest-index top simplex containing simplex i of degree q.
  int owner_top(int q, int i) const { return complex_.top_cofaces(q, i).front(); }
  /// Positions of the vertices of simplex (q, i) inside the canonical vertex
  /// list of `top`.
  std::vector<int> local_vertices(int top, int q, int i) const;
  /// Chart point of a barycentric combination of the vertices of `top`.
  ChartPoint point(int top, const Eigen::VectorXd& barycentric) const;
  /// Barycentric coordinates of a chart point relative to `top`.
  Eigen::VectorXd barycentric(int top, const Eigen::VectorXd& x) const;
  /// Barycenter of simplex (q, i) in the chart of its owning top simplex.
  ChartPoint barycenter(int q, int i) const;

 private:
  SimplicialComplex complex_;
  std::vector<double> edge_lengths_;
  std::vector<TopCell> cells_;
};

/// Realize from intrinsic edge lengths (indexed like complex.simplices(1)).
/// Each top simplex gets a chart built from its edge Gram matrix.
GeometricComplex realize(const SimplicialComplex& complex, const std::vector<double>& edge_lengths);

/// Realize from explicit per-top chart positions (N x (N+1), canonical order).
/// Edge lengths are read off the charts and must agree between neighbours.
GeometricComplex realize_charts(const SimplicialComplex& complex, const std::vector<Eigen::MatrixXd>& charts);

/// Circle of circumference 2*pi with n equal edges; chart = arc length.
GeometricComplex preset_circle(int n);
/// Unit flat torus R^2/Z^2, n x n squares each cut by the (0,0)-(1,1) diagonal.
GeometricComplex preset_torus(int n);

struct MeshReport {
  double h = 0.0;
  double min_fullness = 0.0;
  std::vector<int> counts;
};

/// h = max top-simplex diameter; fullness = vol / diam^N.
MeshReport mesh_report(const GeometricComplex& geometry);

}  // namespace dcl
