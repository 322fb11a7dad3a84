#include "dcl/bundle.hpp"

#include "dcl/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dcl {
namespace {

constexpr double kPi = std::numbers::pi;

// Simplices (per degree) lying in the closed domain of each chart.
std::vector<bool> in_chart(const GeometricComplex& geometry, const EmbeddingData& embedding, int l, int q) {
  const auto& k = geometry.complex();
  std::vector<bool> inside(static_cast<size_t>(k.count(q)), false);
  for (int s = 0; s < k.count(q); ++s) {
    for (int top : k.top_cofaces(q, s)) {
      if (embedding.supports(l, top)) {
        inside[static_cast<size_t>(s)] = true;
        break;
      }
    }
  }
  return inside;
}

Eigen::MatrixXcd polar_factor(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

SparseComplex kron_identity(const SparseComplex& a, int n) {
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseComplex::InnerIterator it(a, col); it; ++it) {
      for (int r = 0; r < n; ++r) triplets.emplace_back(it.row() * n + r, it.col() * n + r, it.value());
    }
  }
  SparseComplex out(a.rows() * n, a.cols() * n);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

// C^1 smoothstep-like ramp with zero slope (and curvature) at both ends.
double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

bool intervals_meet(double a0, double a1, double b0, double b1) { return a0 < b1 && b0 < a1; }

}  // namespace

EmbeddingData::EmbeddingData(int rank, std::vector<CoverChart> charts) : rank_(rank), charts_(std::move(charts)) {
  if (rank < 1) throw InvalidInput("EmbeddingData: rank must be >= 1");
  if (charts_.empty()) throw InvalidInput("EmbeddingData: at least one chart required");
  for (const auto& c : charts_) {
    if (c.ambient_dim < rank) throw InvalidInput("EmbeddingData: chart ambient dimension below rank");
    if (!c.frame || !c.partition) throw InvalidInput("EmbeddingData: chart needs frame and partition");
    offsets_.push_back(ambient_dim_);
    ambient_dim_ += c.ambient_dim;
    auto support = c.support;
    std::sort(support.begin(), support.end());
    sorted_support_.push_back(std::move(support));
  }
}

bool EmbeddingData::supports(int l, int top) const {
  const auto& s = sorted_support_.at(static_cast<size_t>(l));
  return std::binary_search(s.begin(), s.end(), top);
}

Eigen::MatrixXcd i_pointwise(const EmbeddingData& embedding, const ChartPoint& x) {
  Eigen::MatrixXcd i = Eigen::MatrixXcd::Zero(embedding.ambient_dim(), embedding.rank());
  for (size_t l = 0; l < embedding.charts().size(); ++l) {
    const auto& chart = embedding.charts()[l];
    const double psi = chart.partition(x);
    if (psi == 0.0) continue;
    i.middleRows(embedding.offset(static_cast<int>(l)), chart.ambient_dim) = psi * chart.frame(x);
  }
  return i;
}

Eigen::MatrixXcd i_adjoint(const EmbeddingData& embedding, const ChartPoint& x) {
  return i_pointwise(embedding, x).adjoint();
}

Eigen::MatrixXcd projection(const EmbeddingData& embedding, const ChartPoint& x) {
  const Eigen::MatrixXcd i = i_pointwise(embedding, x);
  return i * i.adjoint();
}

std::vector<std::vector<ChartPoint>> reference_points(const GeometricComplex& geometry) {
  const auto& k = geometry.complex();
  std::vector<std::vector<ChartPoint>> points(static_cast<size_t>(k.dimension() + 1));
  for (int q = 0; q <= k.dimension(); ++q) {
    for (int s = 0; s < k.count(q); ++s) points[static_cast<size_t>(q)].push_back(geometry.barycenter(q, s));
  }
  return points;
}

SparseComplex big_I(const GeometricComplex& geometry, const EmbeddingData& embedding, int q) {
  const auto& k = geometry.complex();
  if (q < 0 || q > k.dimension()) throw InvalidInput("big_I: degree out of range");
  const int d = embedding.rank();
  const int n = embedding.ambient_dim();
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  std::vector<std::vector<bool>> inside;
  for (size_t l = 0; l < embedding.charts().size(); ++l) {
    inside.push_back(in_chart(geometry, embedding, static_cast<int>(l), q));
  }
  for (int s = 0; s < k.count(q); ++s) {
    const int top = geometry.owner_top(q, s);
    const auto local = geometry.local_vertices(top, q, s);
    const TopCell& cell = geometry.cell(top);
    for (size_t l = 0; l < embedding.charts().size(); ++l) {
      if (!inside[l][static_cast<size_t>(s)]) continue;
      const auto& chart = embedding.charts()[l];
      // (R i_l) ∪ ((R psi_l) ∪ c): each 0-cochain cup is a vertex average.
      Eigen::MatrixXcd frame_avg = Eigen::MatrixXcd::Zero(chart.ambient_dim, d);
      double psi_avg = 0.0;
      for (int v : local) {
        const ChartPoint p{top, cell.chart.col(v)};
        frame_avg += chart.frame(p);
        psi_avg += chart.partition(p);
      }
      frame_avg /= static_cast<double>(q + 1);
      psi_avg /= static_cast<double>(q + 1);
      if (psi_avg == 0.0) continue;
      const int offset = embedding.offset(static_cast<int>(l));
      for (int r = 0; r < chart.ambient_dim; ++r) {
        for (int c = 0; c < d; ++c) {
          triplets.emplace_back(s * n + offset + r, s * d + c, psi_avg * frame_avg(r, c));
        }
      }
    }
  }
  SparseComplex out(static_cast<Eigen::Index>(k.count(q)) * n, static_cast<Eigen::Index>(k.count(q)) * d);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

SparseComplex big_I_adjoint(const GeometricComplex& geometry, const EmbeddingData& embedding, int q) {
  return SparseComplex(big_I(geometry, embedding, q).adjoint());
}

SparseComplex nabla_K(const GeometricComplex& geometry, const EmbeddingData& embedding) {
  const SparseComplex d =
      kron_identity(coboundary_matrix(geometry.complex(), 0).cast<std::complex<double>>(), embedding.ambient_dim());
  return big_I_adjoint(geometry, embedding, 1) * d * big_I(geometry, embedding, 0);
}

SparseComplex projected_gram(const GeometricComplex& geometry, const EmbeddingData& embedding, int q,
                             int quadrature_degree) {
  const auto& k = geometry.complex();
  const int dim = geometry.dimension();
  if (q < 0 || q > dim) throw InvalidInput("projected_gram: degree out of range");
  const int n = embedding.ambient_dim();
  const QuadratureRule rule = QuadratureRule::simplex(dim, quadrature_degree);
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const TopCell& cell = geometry.cell(t);
    const auto faces = top_faces(geometry, t, q);
    for (size_t node = 0; node < rule.nodes.size(); ++node) {
      const Eigen::VectorXd& bary = rule.nodes[node];
      const double w = rule.weights[node] * cell.volume;
      const Eigen::MatrixXcd p = projection(embedding, geometry.point(t, bary));
      std::vector<Eigen::VectorXd> basis;
      for (const auto& f : faces) basis.push_back(whitney_basis(cell, f.local, bary));
      for (size_t a = 0; a < faces.size(); ++a) {
        for (size_t b = 0; b < faces.size(); ++b) {
          const double inner = w * basis[a].dot(basis[b]);
          if (inner == 0.0) continue;
          for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
              triplets.emplace_back(faces[a].index * n + r, faces[b].index * n + c, inner * p(r, c));
            }
          }
        }
      }
    }
  }
  const Eigen::Index size = static_cast<Eigen::Index>(k.count(q)) * n;
  SparseComplex gram(size, size);
  gram.setFromTriplets(triplets.begin(), triplets.end());
  return gram;
}

SparseComplex weighted_mass(const GeometricComplex& geometry, const EmbeddingData& embedding, int q,
                            int quadrature_degree) {
  const SparseComplex i = big_I(geometry, embedding, q);
  SparseComplex m = SparseComplex(i.adjoint()) * projected_gram(geometry, embedding, q, quadrature_degree) * i;
  // Symmetrize away rounding.
  m = 0.5 * (m + SparseComplex(m.adjoint()));
  return m;
}

OperatorPencil connection_pencil(const GeometricComplex& geometry, const EmbeddingData& embedding,
                                 int quadrature_degree) {
  const SparseComplex m0 = weighted_mass(geometry, embedding, 0, quadrature_degree);
  const SparseComplex m1 = weighted_mass(geometry, embedding, 1, quadrature_degree);
  for (const auto* m : {&m0, &m1}) {
    Eigen::SimplicialLLT<SparseComplex> llt(*m);
    if (llt.info() != Eigen::Success) {
      throw DegenerateMetric("connection_pencil: twisted Whitney mass matrix is not positive definite");
    }
  }
  const SparseComplex nabla = nabla_K(geometry, embedding);
  Eigen::MatrixXcd s = Eigen::MatrixXcd(SparseComplex(nabla.adjoint()) * m1 * nabla);
  OperatorPencil pencil;
  pencil.stiffness = 0.5 * (s + s.adjoint());
  pencil.mass = Eigen::MatrixXcd(m0);
  pencil.degree = 0;
  pencil.description = "discrete connection Laplacian, degree 0";
  return pencil;
}

double injectivity_check(const GeometricComplex& geometry, const EmbeddingData& embedding, int q) {
  const Eigen::MatrixXcd m = Eigen::MatrixXcd(weighted_mass(geometry, embedding, q));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ProjectionDefect almost_projection_defect(const GeometricComplex& geometry, const EmbeddingData& embedding, int q,
                                          const FormField& omega, int quadrature_degree) {
  const int n = embedding.ambient_dim();
  const Cochain r_omega = de_rham(geometry, omega, q, quadrature_degree);
  if (r_omega.fiber_dim != n) throw InvalidInput("almost_projection_defect: form must be V-valued");
  const FormField projected = [&](const ChartPoint& x) {
    // Rows are form components, columns fibre components: apply P per row.
    return Eigen::MatrixXcd(omega(x) * projection(embedding, x).transpose());
  };
  const Cochain r_projected = de_rham(geometry, projected, q, quadrature_degree);
  const SparseComplex i = big_I(geometry, embedding, q);
  const Eigen::VectorXcd pk = i * (SparseComplex(i.adjoint()) * r_omega.values);
  const Eigen::VectorXcd diff = pk - r_projected.values;

  SparseComplex mass = kron_identity(mass_matrix(geometry, q).cast<std::complex<double>>(), n);
  ProjectionDefect out;
  out.whitney_norm = std::sqrt(std::abs(diff.dot(mass * diff)));
  out.max_cochain = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  return out;
}

double projection_idempotence_defect(const GeometricComplex& geometry, const EmbeddingData& embedding, int q) {
  const int n = embedding.ambient_dim();
  const int d = embedding.rank();
  const Eigen::MatrixXcd i = Eigen::MatrixXcd(big_I(geometry, embedding, q));
  double worst = 0.0;
  // I^K is block diagonal over simplices, so the norm is the largest block norm.
  for (int s = 0; s < geometry.complex().count(q); ++s) {
    const Eigen::MatrixXcd b = i.block(static_cast<Eigen::Index>(s) * n, static_cast<Eigen::Index>(s) * d, n, d);
    const Eigen::MatrixXcd p = b * b.adjoint();
    const Eigen::MatrixXcd defect = p * p - p;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(defect, Eigen::EigenvaluesOnly);
    worst = std::max(worst, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
  return worst;
}

Eigen::MatrixXcd discrete_holonomy(const GeometricComplex& geometry, const EmbeddingData& embedding,
                                   const std::vector<int>& cycle) {
  if (cycle.size() < 2) throw InvalidInput("discrete_holonomy: cycle needs at least two vertices");
  auto embed_at = [&](int v) {
    const int top = geometry.owner_top(0, v);
    const auto local = geometry.local_vertices(top, 0, v);
    return i_pointwise(embedding, ChartPoint{top, geometry.cell(top).chart.col(local[0])});
  };
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Identity(embedding.rank(), embedding.rank());
  for (size_t k = 0; k < cycle.size(); ++k) {
    const int v = cycle[k];
    const int w = cycle[(k + 1) % cycle.size()];
    h = polar_factor(embed_at(w).adjoint() * embed_at(v)) * h;
  }
  return h;
}

EmbeddingData flat_line_bundle_circle(double theta, int n) {
  if (n < 4) throw InvalidInput("flat_line_bundle_circle: n must be >= 4");
  const GeometricComplex circle = preset_circle(n);
  // Overlaps of width pi/2 centred at arc length 0 (= 2 pi) and pi.
  const double width = kPi / 2.0;
  const std::complex<double> holonomy = std::polar(1.0, theta);

  // psi_1 on the arc length coordinate s in [0, 2 pi] of the chart copies.
  auto psi1 = [width](double s) {
    if (s >= 1.5 * kPi) s -= 2.0 * kPi;  // s in [-pi/2, 3 pi/2)
    if (s <= -width / 2.0 || s >= kPi + width / 2.0) return 0.0;
    if (s < width / 2.0) return std::sin(0.5 * kPi * smoothstep((s + width / 2.0) / width));
    if (s <= kPi - width / 2.0) return 1.0;
    return std::cos(0.5 * kPi * smoothstep((s - (kPi - width / 2.0)) / width));
  };
  auto psi2 = [psi1](double s) {
    const double p = psi1(s);
    return std::sqrt(std::max(0.0, 1.0 - p * p));
  };

  // Fibre coordinates follow one parallel frame f along [0, 2 pi]; the frame
  // returns to e^{i theta} f(0) at 2 pi. Chart 1 is parallel across 0 and
  // chart 2 across pi, so each picks up the holonomy on one side of the cut.
  CoverChart c1;
  c1.id = 0;
  c1.ambient_dim = 1;
  c1.partition = [psi1](const ChartPoint& p) { return psi1(p.x[0]); };
  c1.frame = [holonomy](const ChartPoint& p) {
    return Eigen::MatrixXcd::Constant(1, 1, p.x[0] > 1.5 * kPi ? holonomy : 1.0);
  };
  CoverChart c2;
  c2.id = 1;
  c2.ambient_dim = 1;
  c2.partition = [psi2](const ChartPoint& p) { return psi2(p.x[0]); };
  c2.frame = [holonomy](const ChartPoint& p) {
    return Eigen::MatrixXcd::Constant(1, 1, p.x[0] < 0.5 * kPi ? std::conj(holonomy) : 1.0);
  };

  for (int t = 0; t < circle.num_tops(); ++t) {
    const auto& chart = circle.cell(t).chart;
    const double a = std::min(chart(0, 0), chart(0, 1));
    const double b = std::max(chart(0, 0), chart(0, 1));
    const bool in1 = intervals_meet(a, b, -width / 2.0, kPi + width / 2.0) ||
                     intervals_meet(a, b, 2.0 * kPi - width / 2.0, 3.0 * kPi + width / 2.0);
    const bool in2 = intervals_meet(a, b, kPi - width / 2.0, 2.0 * kPi + width / 2.0) ||
                     intervals_meet(a, b, -kPi - width / 2.0, width / 2.0);
    if (in1) c1.support.push_back(t);
    if (in2) c2.support.push_back(t);
  }
  return EmbeddingData(1, {std::move(c1), std::move(c2)});
}

EmbeddingData single_chart_bundle(const GeometricComplex& geometry, int rank, int ambient_dim,
                                  std::function<Eigen::MatrixXcd(const ChartPoint&)> frame) {
  CoverChart chart;
  chart.id = 0;
  chart.ambient_dim = ambient_dim;
  for (int t = 0; t < geometry.num_tops(); ++t) chart.support.push_back(t);
  chart.frame = std::move(frame);
  chart.partition = [](const ChartPoint&) { return 1.0; };
  return EmbeddingData(rank, {std::move(chart)});
}

}  // namespace dcl
