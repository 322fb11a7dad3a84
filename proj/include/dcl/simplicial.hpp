#pragma once

#include <Eigen/Sparse>

#include <complex>
#include <map>
#include <span>
#include <vector>

namespace dcl {

/// Canonical simplex: strictly increasing vertex ids.
using Simplex = std::vector<int>;

using SparseReal = Eigen::SparseMatrix<double>;
using SparseComplex = Eigen::SparseMatrix<std::complex<double>>;

/// Parity (+1/-1) of the permutation taking `sequence` to `canonical`.
/// Throws InvalidInput if `sequence` is not a permutation of `canonical`.
int relative_orientation(std::span<const int> sequence, std::span<const int> canonical);

struct Incidence {
  int index;
  int sign;
};

/// Oriented abstract simplicial complex, closed under faces.
///
/// Simplices of each degree are sorted lexicographically, so numbering is a
/// pure function of the input set of top simplices. Immutable once built.
class SimplicialComplex {
 public:
  static SimplicialComplex build(const std::vector<std::vector<int>>& top_simplices);

  int dimension() const { return static_cast<int>(simplices_.size()) - 1; }
  int count(int q) const;
  const std::vector<Simplex>& simplices(int q) const;
  const Simplex& simplex(int q, int i) const { return simplices(q).at(static_cast<size_t>(i)); }

  /// Index of the simplex spanned by `vertices` (any order), or -1.
  int find(std::span<const int> vertices) const;
  /// Index and orientation of an ordered vertex sequence; throws if absent.
  Incidence locate(std::span<const int> vertices) const;

  /// (q+1)-simplices containing simplex i of degree q, with incidence signs.
  const std::vector<Incidence>& cofaces(int q, int i) const;
  /// Top simplices containing simplex i of degree q, ascending.
  const std::vector<int>& top_cofaces(int q, int i) const;

 private:
  std::vector<std::vector<Simplex>> simplices_;
  std::vector<std::map<Simplex, int>> index_;
  std::vector<std::vector<std::vector<Incidence>>> cofaces_;
  std::vector<std::vector<std::vector<int>>> top_cofaces_;
};

/// Row tau, column sigma holds the incidence sign of sigma in tau; the i-th
/// face (omit v_i) carries (-1)^i.
SparseReal coboundary_matrix(const SimplicialComplex& complex, int q);

/// All simplices containing `sigma` together with their faces, ordered by
/// degree and then lexicographically.
std::vector<Simplex> closed_star(const SimplicialComplex& complex, const Simplex& sigma);

/// Complex-valued cochain on canonically oriented q-simplices.
/// Storage is simplex-major: values[simplex * fiber_dim + component].
struct Cochain {
  int degree = 0;
  int fiber_dim = 1;
  Eigen::VectorXcd values;

  static Cochain zeros(const SimplicialComplex& complex, int q, int fiber_dim = 1);

  std::complex<double> operator()(int simplex, int component = 0) const {
    return values[simplex * fiber_dim + component];
  }
  std::complex<double>& operator()(int simplex, int component = 0) {
    return values[simplex * fiber_dim + component];
  }
  /// Value on an oriented vertex sequence: negated for odd orderings.
  std::complex<double> evaluate(const SimplicialComplex& complex, std::span<const int> vertices,
                                int component = 0) const;
};

}  // namespace dcl
