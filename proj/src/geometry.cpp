#include "dcl/geometry.hpp"

#include "dcl/errors.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <cmath>
#include <numbers>
#include <sstream>

namespace dcl {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Fills volume, gradients and Grams from cell.chart.
void finish_cell(TopCell& cell, int top) {
  const Eigen::Index n = cell.chart.rows();
  Eigen::MatrixXd edges(n, n);
  for (Eigen::Index j = 0; j < n; ++j) edges.col(j) = cell.chart.col(j + 1) - cell.chart.col(0);
  cell.edge_gram = edges.transpose() * edges;

  double diam = 0.0;
  for (Eigen::Index a = 0; a <= n; ++a) {
    for (Eigen::Index b = a + 1; b <= n; ++b) diam = std::max(diam, (cell.chart.col(a) - cell.chart.col(b)).norm());
  }
  cell.diameter = diam;

  // Gram determinant is the Cayley-Menger volume up to the N!^2 factor.
  const double gram_det = cell.edge_gram.determinant();
  const double volume = gram_det > 0.0 ? std::sqrt(gram_det) / factorial(static_cast<int>(n)) : 0.0;
  if (!(volume > 1e-12 * std::pow(diam, static_cast<double>(n)))) {
    std::ostringstream msg;
    msg << "degenerate top simplex " << top << " (volume " << volume << ")";
    throw DegenerateMetric(msg.str());
  }
  cell.volume = volume;

  // Rows of edges^{-1} are the gradients of mu_1..mu_N.
  const Eigen::MatrixXd inv = edges.inverse();
  cell.gradients.resize(n, n + 1);
  cell.gradients.rightCols(n) = inv.transpose();
  cell.gradients.col(0) = -cell.gradients.rightCols(n).rowwise().sum();
  cell.grad_gram = cell.gradients.transpose() * cell.gradients;
}

}  // namespace

GeometricComplex::GeometricComplex(SimplicialComplex complex, std::vector<double> edge_lengths,
                                   std::vector<TopCell> cells)
    : complex_(std::move(complex)), edge_lengths_(std::move(edge_lengths)), cells_(std::move(cells)) {}

std::vector<int> GeometricComplex::local_vertices(int top, int q, int i) const {
  const Simplex& t = complex_.simplex(dimension(), top);
  const Simplex& s = complex_.simplex(q, i);
  std::vector<int> local;
  local.reserve(s.size());
  for (int v : s) {
    auto it = std::find(t.begin(), t.end(), v);
    if (it == t.end()) throw InvalidInput("local_vertices: simplex is not a face of the top simplex");
    local.push_back(static_cast<int>(it - t.begin()));
  }
  return local;
}

ChartPoint GeometricComplex::point(int top, const Eigen::VectorXd& barycentric) const {
  return {top, cell(top).chart * barycentric};
}

Eigen::VectorXd GeometricComplex::barycentric(int top, const Eigen::VectorXd& x) const {
  const TopCell& c = cell(top);
  const Eigen::Index n = c.chart.rows();
  Eigen::VectorXd bary(n + 1);
  bary.tail(n) = c.gradients.rightCols(n).transpose() * (x - c.chart.col(0));
  bary[0] = 1.0 - bary.tail(n).sum();
  return bary;
}

ChartPoint GeometricComplex::barycenter(int q, int i) const {
  const int top = owner_top(q, i);
  Eigen::VectorXd bary = Eigen::VectorXd::Zero(dimension() + 1);
  for (int l : local_vertices(top, q, i)) bary[l] = 1.0 / (q + 1);
  return point(top, bary);
}

GeometricComplex realize(const SimplicialComplex& complex, const std::vector<double>& edge_lengths) {
  const int n = complex.dimension();
  if (n < 1) throw InvalidInput("realize: complex must have dimension >= 1");
  if (static_cast<int>(edge_lengths.size()) != complex.count(1)) {
    throw InvalidInput("realize: one length per edge required");
  }
  for (double l : edge_lengths) {
    if (!(l > 0.0)) throw DegenerateMetric("realize: non-positive edge length");
  }
  std::vector<TopCell> cells(static_cast<size_t>(complex.count(n)));
  for (int t = 0; t < complex.count(n); ++t) {
    const Simplex& s = complex.simplex(n, t);
    auto len = [&](int a, int b) {
      const int pair[2] = {s[static_cast<size_t>(a)], s[static_cast<size_t>(b)]};
      return edge_lengths[static_cast<size_t>(complex.find(pair))];
    };
    // Law of cosines: <e_i, e_j> = (l_0i^2 + l_0j^2 - l_ij^2) / 2.
    Eigen::MatrixXd gram(n, n);
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        const double lij = (i == j) ? 0.0 : len(i, j);
        gram(i - 1, j - 1) = 0.5 * (len(0, i) * len(0, i) + len(0, j) * len(0, j) - lij * lij);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
      throw DegenerateMetric("realize: edge lengths violate the simplex inequality on top simplex " +
                             std::to_string(t));
    }
    TopCell& cell = cells[static_cast<size_t>(t)];
    cell.chart = Eigen::MatrixXd::Zero(n, n + 1);
    cell.chart.rightCols(n) = llt.matrixU();
    finish_cell(cell, t);
  }
  return GeometricComplex(complex, edge_lengths, std::move(cells));
}

GeometricComplex realize_charts(const SimplicialComplex& complex, const std::vector<Eigen::MatrixXd>& charts) {
  const int n = complex.dimension();
  if (n < 1) throw InvalidInput("realize_charts: complex must have dimension >= 1");
  if (static_cast<int>(charts.size()) != complex.count(n)) throw InvalidInput("realize_charts: one chart per top");
  std::vector<double> lengths(static_cast<size_t>(complex.count(1)), -1.0);
  std::vector<TopCell> cells(charts.size());
  for (int t = 0; t < complex.count(n); ++t) {
    const auto& chart = charts[static_cast<size_t>(t)];
    if (chart.rows() != n || chart.cols() != n + 1) throw InvalidInput("realize_charts: chart shape");
    const Simplex& s = complex.simplex(n, t);
    for (int a = 0; a <= n; ++a) {
      for (int b = a + 1; b <= n; ++b) {
        const int pair[2] = {s[static_cast<size_t>(a)], s[static_cast<size_t>(b)]};
        const auto e = static_cast<size_t>(complex.find(pair));
        const double l = (chart.col(a) - chart.col(b)).norm();
        if (lengths[e] < 0.0) {
          lengths[e] = l;
        } else if (std::abs(lengths[e] - l) > 1e-12 * std::max(1.0, l)) {
          throw InvalidInput("realize_charts: inconsistent edge length between charts");
        }
      }
    }
    cells[static_cast<size_t>(t)].chart = chart;
    finish_cell(cells[static_cast<size_t>(t)], t);
  }
  return GeometricComplex(complex, std::move(lengths), std::move(cells));
}

GeometricComplex preset_circle(int n) {
  if (n < 3) throw InvalidInput("preset_circle: n must be >= 3");
  const double h = 2.0 * std::numbers::pi / n;
  std::vector<std::vector<int>> tops;
  for (int j = 0; j < n; ++j) tops.push_back({j, (j + 1) % n});
  auto complex = SimplicialComplex::build(tops);
  std::vector<Eigen::MatrixXd> charts;
  for (const auto& e : complex.simplices(1)) {
    Eigen::MatrixXd chart(1, 2);
    if (e[0] == 0 && e[1] == n - 1) {
      // Wrap edge: vertex 0 sits at arc length 2*pi in this copy.
      chart << 2.0 * std::numbers::pi, (n - 1) * h;
    } else {
      chart << e[0] * h, e[1] * h;
    }
    charts.push_back(chart);
  }
  return realize_charts(complex, charts);
}

GeometricComplex preset_torus(int n) {
  if (n < 3) throw InvalidInput("preset_torus: n must be >= 3");
  auto id = [n](int i, int j) { return ((i % n + n) % n) + n * ((j % n + n) % n); };
  std::vector<std::vector<int>> tops;
  // Unwrapped lattice coordinates of each triangle's vertices, keyed by id.
  std::map<Simplex, std::vector<std::pair<int, Eigen::Vector2d>>> placed;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::array<std::array<int, 2>, 3> lower{{{i, j}, {i + 1, j}, {i + 1, j + 1}}};
      const std::array<std::array<int, 2>, 3> upper{{{i, j}, {i + 1, j + 1}, {i, j + 1}}};
      for (const auto& tri : {lower, upper}) {
        std::vector<int> ids;
        std::vector<std::pair<int, Eigen::Vector2d>> coords;
        for (const auto& p : tri) {
          ids.push_back(id(p[0], p[1]));
          coords.emplace_back(ids.back(), Eigen::Vector2d(p[0], p[1]) / n);
        }
        Simplex key = ids;
        std::sort(key.begin(), key.end());
        placed[key] = coords;
        tops.push_back(ids);
      }
    }
  }
  auto complex = SimplicialComplex::build(tops);
  std::vector<Eigen::MatrixXd> charts;
  for (const auto& t : complex.simplices(2)) {
    Eigen::MatrixXd chart(2, 3);
    const auto& coords = placed.at(t);
    for (int a = 0; a < 3; ++a) {
      for (const auto& [v, x] : coords) {
        if (v == t[static_cast<size_t>(a)]) chart.col(a) = x;
      }
    }
    charts.push_back(chart);
  }
  return realize_charts(complex, charts);
}

MeshReport mesh_report(const GeometricComplex& geometry) {
  MeshReport r;
  r.min_fullness = std::numeric_limits<double>::infinity();
  const int n = geometry.dimension();
  for (int t = 0; t < geometry.num_tops(); ++t) {
    const auto& c = geometry.cell(t);
    r.h = std::max(r.h, c.diameter);
    r.min_fullness = std::min(r.min_fullness, c.volume / std::pow(c.diameter, n));
  }
  for (int q = 0; q <= n; ++q) r.counts.push_back(geometry.complex().count(q));
  return r;
}

}  // namespace dcl
