#pragma once

#include "dcl/forms.hpp"
#include "dcl/geometry.hpp"
#include "dcl/laplacian.hpp"
#include "dcl/whitney.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace dcl {

/// One trivializing chart of the bundle embedding.
///
/// `frame` returns the n_l x d isometry i_l at a chart point, written in the
/// fibre coordinates attached to that point's top simplex. Fibre coordinates
/// are fixed per top-simplex chart copy; twisted cochain values on a simplex
/// use the coordinates of the simplex's owning top.
struct CoverChart {
  int id = 0;
  int ambient_dim = 1;
  std::vector<int> support;  // top simplices whose union is the closed chart domain
  std::function<Eigen::MatrixXcd(const ChartPoint&)> frame;
  std::function<double(const ChartPoint&)> partition;
};

/// Isometric embedding i = sum_l psi_l i_l of a rank-d bundle into C^n.
class EmbeddingData {
 public:
  EmbeddingData(int rank, std::vector<CoverChart> charts);

  int rank() const { return rank_; }
  int ambient_dim() const { return ambient_dim_; }
  const std::vector<CoverChart>& charts() const { return charts_; }
  /// First ambient row of chart l.
  int offset(int l) const { return offsets_.at(static_cast<size_t>(l)); }
  /// Whether top simplex `top` belongs to the closed domain of chart l.
  bool supports(int l, int top) const;

 private:
  int rank_;
  int ambient_dim_ = 0;
  std::vector<CoverChart> charts_;
  std::vector<int> offsets_;
  std::vector<std::vector<int>> sorted_support_;
};

/// i(x): n x d, column-stacked psi_l(x) i_l(x).
Eigen::MatrixXcd i_pointwise(const EmbeddingData& embedding, const ChartPoint& x);
/// i(x)^H.
Eigen::MatrixXcd i_adjoint(const EmbeddingData& embedding, const ChartPoint& x);
/// P(x) = i(x) i(x)^H.
Eigen::MatrixXcd projection(const EmbeddingData& embedding, const ChartPoint& x);

/// Barycenter of every simplex, in the chart of its lowest-index top coface.
std::vector<std::vector<ChartPoint>> reference_points(const GeometricComplex& geometry);

/// I^K on q-cochains: C^q(K, C^d) -> C^q(K, C^n). Each block scales a simplex
/// value by the vertex averages of i_l and psi_l (the cup product with a
/// 0-cochain), summed over charts.
SparseComplex big_I(const GeometricComplex& geometry, const EmbeddingData& embedding, int q);
/// (I^K)^*: conjugate transpose in the canonical cochain bases.
SparseComplex big_I_adjoint(const GeometricComplex& geometry, const EmbeddingData& embedding, int q);

/// (I^K_1)^* (d ⊗ Id_n) I^K_0.
SparseComplex nabla_K(const GeometricComplex& geometry, const EmbeddingData& embedding);

/// Whitney Gram of V-valued q-forms weighted by P(x), by quadrature.
SparseComplex projected_gram(const GeometricComplex& geometry, const EmbeddingData& embedding, int q,
                             int quadrature_degree = 6);
/// (I^K)^H G_P I^K: the twisted Whitney inner product on C^q(K, E).
SparseComplex weighted_mass(const GeometricComplex& geometry, const EmbeddingData& embedding, int q,
                            int quadrature_degree = 6);

/// S = (nabla^K)^H M~_1 nabla^K, M = M~_0. Throws DegenerateMetric when a
/// weighted mass matrix is not positive definite.
OperatorPencil connection_pencil(const GeometricComplex& geometry, const EmbeddingData& embedding,
                                 int quadrature_degree = 6);

/// Smallest eigenvalue of M~_q (positive iff the twisted Whitney map is injective).
double injectivity_check(const GeometricComplex& geometry, const EmbeddingData& embedding, int q);

struct ProjectionDefect {
  double whitney_norm = 0.0;   // |W(P^K R w) - W(R P w)|
  double max_cochain = 0.0;    // max |P^K R w - R P w| entrywise
};

/// `omega` is a V-valued q-form field (components x n).
ProjectionDefect almost_projection_defect(const GeometricComplex& geometry, const EmbeddingData& embedding, int q,
                                          const FormField& omega,
                                          int quadrature_degree = kDeRhamQuadratureDegree);

/// Operator norm of (P^K)^2 - P^K on q-cochains.
double projection_idempotence_defect(const GeometricComplex& geometry, const EmbeddingData& embedding, int q);

/// Discrete parallel transport around a closed vertex path: product of the
/// unitary polar factors of i(w)^H i(v) along consecutive vertices.
Eigen::MatrixXcd discrete_holonomy(const GeometricComplex& geometry, const EmbeddingData& embedding,
                                   const std::vector<int>& cycle);

/// Flat line bundle with holonomy e^{i theta} over preset_circle(n): two arc
/// charts, parallel unit frames, cos/sin partition over smoothstepped overlaps.
EmbeddingData flat_line_bundle_circle(double theta, int n);

/// Single chart covering everything with psi = 1 and the given n x d frame.
EmbeddingData single_chart_bundle(const GeometricComplex& geometry, int rank, int ambient_dim,
                                  std::function<Eigen::MatrixXcd(const ChartPoint&)> frame);

}  // namespace dcl
