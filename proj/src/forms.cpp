#include "dcl/forms.hpp"

#include "dcl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace dcl {

int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

const std::vector<std::vector<int>>& multi_indices(int dim, int q) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::vector<std::vector<int>>> cache;
  std::lock_guard lock(mutex);
  auto [it, inserted] = cache.try_emplace({dim, q});
  if (inserted) {
    std::vector<int> current;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(current.size()) == q) {
        it->second.push_back(current);
        return;
      }
      for (int i = start; i < dim; ++i) {
        current.push_back(i);
        rec(i + 1);
        current.pop_back();
      }
    };
    rec(0);
  }
  return it->second;
}

Eigen::VectorXd wedge_covectors(const Eigen::MatrixXd& covectors) {
  const int dim = static_cast<int>(covectors.rows());
  const int q = static_cast<int>(covectors.cols());
  const auto& idx = multi_indices(dim, q);
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (size_t r = 0; r < idx.size(); ++r) {
    Eigen::MatrixXd sub(q, q);
    for (int a = 0; a < q; ++a) sub.row(a) = covectors.row(idx[r][static_cast<size_t>(a)]);
    out[static_cast<Eigen::Index>(r)] = q == 0 ? 1.0 : sub.determinant();
  }
  return out;
}

Eigen::VectorXcd wedge(const Eigen::VectorXcd& a, int p, const Eigen::VectorXcd& b, int q, int dim) {
  if (p + q > dim) return Eigen::VectorXcd::Zero(0);
  const auto& ia = multi_indices(dim, p);
  const auto& ib = multi_indices(dim, q);
  const auto& ic = multi_indices(dim, p + q);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ic.size()));
  for (size_t i = 0; i < ia.size(); ++i) {
    for (size_t j = 0; j < ib.size(); ++j) {
      std::vector<int> merged = ia[i];
      merged.insert(merged.end(), ib[j].begin(), ib[j].end());
      std::vector<int> sorted = merged;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) continue;
      const int sign = relative_orientation(merged, sorted);
      const auto pos = std::find(ic.begin(), ic.end(), sorted) - ic.begin();
      out[pos] += static_cast<double>(sign) * a[static_cast<Eigen::Index>(i)] * b[static_cast<Eigen::Index>(j)];
    }
  }
  return out;
}

std::complex<double> contract(const Eigen::VectorXcd& form, const Eigen::MatrixXd& vectors) {
  const int dim = static_cast<int>(vectors.rows());
  const int q = static_cast<int>(vectors.cols());
  const auto& idx = multi_indices(dim, q);
  std::complex<double> sum = 0.0;
  for (size_t r = 0; r < idx.size(); ++r) {
    Eigen::MatrixXd sub(q, q);
    for (int a = 0; a < q; ++a) sub.row(a) = vectors.row(idx[r][static_cast<size_t>(a)]);
    sum += form[static_cast<Eigen::Index>(r)] * (q == 0 ? 1.0 : sub.determinant());
  }
  return sum;
}

void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<size_t>(points), 0.0);
  weights.assign(static_cast<size_t>(points), 0.0);
  for (int i = 0; i < points; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= points; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = points * (x * p1 - p0) / (x * x - 1.0);
    // Map [-1, 1] -> [0, 1].
    nodes[static_cast<size_t>(i)] = 0.5 * (1.0 - x);
    weights[static_cast<size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule QuadratureRule::simplex(int dim, int degree) {
  if (dim < 0 || degree < 0) throw InvalidInput("QuadratureRule: negative dimension or degree");
  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  if (dim == 0) {
    rule.nodes.push_back(Eigen::VectorXd::Ones(1));
    rule.weights.push_back(1.0);
    return rule;
  }
  // The collapsed map adds up to dim-1 to the degree in the first variable.
  const int points = std::max(1, (degree + dim + 1) / 2);
  std::vector<double> x, w;
  gauss_legendre(points, x, w);
  double fact = 1.0;
  for (int k = 2; k <= dim; ++k) fact *= k;

  std::vector<int> counter(static_cast<size_t>(dim), 0);
  while (true) {
    Eigen::VectorXd bary(dim + 1);
    double remaining = 1.0;
    double weight = fact;
    for (int k = 0; k < dim; ++k) {
      const double s = x[static_cast<size_t>(counter[static_cast<size_t>(k)])];
      bary[k + 1] = remaining * s;
      weight *= w[static_cast<size_t>(counter[static_cast<size_t>(k)])];
      weight *= std::pow(1.0 - s, dim - 1 - k);
      remaining *= (1.0 - s);
    }
    bary[0] = remaining;
    rule.nodes.push_back(bary);
    rule.weights.push_back(weight);

    int k = 0;
    while (k < dim && ++counter[static_cast<size_t>(k)] == points) counter[static_cast<size_t>(k++)] = 0;
    if (k == dim) break;
  }
  return rule;
}

Eigen::VectorXcd integrate_over_simplex(const GeometricComplex& geometry, int top, const std::vector<int>& local,
                                        const FormField& field, const QuadratureRule& rule) {
  const int q = static_cast<int>(local.size()) - 1;
  const TopCell& cell = geometry.cell(top);
  const Eigen::Index n = cell.chart.rows();
  Eigen::MatrixXd vectors(n, q);
  for (int k = 0; k < q; ++k) {
    vectors.col(k) = cell.chart.col(local[static_cast<size_t>(k + 1)]) - cell.chart.col(local[0]);
  }
  double ref_volume = 1.0;
  for (int k = 2; k <= q; ++k) ref_volume /= k;

  Eigen::VectorXcd total;
  for (size_t node = 0; node < rule.nodes.size(); ++node) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int k = 0; k <= q; ++k) x += rule.nodes[node][k] * cell.chart.col(local[static_cast<size_t>(k)]);
    const Eigen::MatrixXcd value = field(ChartPoint{top, x});
    if (total.size() == 0) total = Eigen::VectorXcd::Zero(value.cols());
    for (Eigen::Index c = 0; c < value.cols(); ++c) {
      total[c] += rule.weights[node] * ref_volume * contract(value.col(c), vectors);
    }
  }
  return total;
}

}  // namespace dcl
