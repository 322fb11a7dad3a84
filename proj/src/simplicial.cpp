#include "dcl/simplicial.hpp"

#include "dcl/errors.hpp"

#include <algorithm>
#include <set>

namespace dcl {

int relative_orientation(std::span<const int> sequence, std::span<const int> canonical) {
  if (sequence.size() != canonical.size()) {
    throw InvalidInput("relative_orientation: length mismatch");
  }
  std::vector<int> positions(sequence.size());
  std::vector<bool> used(canonical.size(), false);
  for (size_t i = 0; i < sequence.size(); ++i) {
    auto it = std::find(canonical.begin(), canonical.end(), sequence[i]);
    if (it == canonical.end()) throw InvalidInput("relative_orientation: not a permutation");
    auto pos = static_cast<size_t>(it - canonical.begin());
    if (used[pos]) throw InvalidInput("relative_orientation: repeated vertex");
    used[pos] = true;
    positions[i] = static_cast<int>(pos);
  }
  // Parity via cycle decomposition.
  int sign = 1;
  std::vector<bool> seen(positions.size(), false);
  for (size_t start = 0; start < positions.size(); ++start) {
    if (seen[start]) continue;
    size_t len = 0;
    for (size_t j = start; !seen[j]; j = static_cast<size_t>(positions[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

SimplicialComplex SimplicialComplex::build(const std::vector<std::vector<int>>& top_simplices) {
  if (top_simplices.empty()) throw InvalidInput("build_complex: empty input");
  const size_t width = top_simplices.front().size();
  if (width == 0) throw InvalidInput("build_complex: empty simplex");
  std::set<Simplex> tops;
  for (const auto& t : top_simplices) {
    if (t.size() != width) throw InvalidInput("build_complex: top simplices of unequal dimension");
    Simplex s = t;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw InvalidInput("build_complex: repeated vertex in a simplex");
    }
    if (s.front() < 0) throw InvalidInput("build_complex: negative vertex id");
    tops.insert(std::move(s));
  }

  const int n = static_cast<int>(width) - 1;
  std::vector<std::set<Simplex>> by_degree(static_cast<size_t>(n + 1));
  for (const auto& t : tops) {
    // Every non-empty subset of t, via bitmasks (n is small).
    const unsigned full = 1u << t.size();
    for (unsigned mask = 1; mask < full; ++mask) {
      Simplex face;
      for (size_t k = 0; k < t.size(); ++k) {
        if (mask & (1u << k)) face.push_back(t[k]);
      }
      by_degree[face.size() - 1].insert(std::move(face));
    }
  }

  SimplicialComplex k;
  k.simplices_.resize(static_cast<size_t>(n + 1));
  k.index_.resize(static_cast<size_t>(n + 1));
  for (int q = 0; q <= n; ++q) {
    auto& list = k.simplices_[static_cast<size_t>(q)];
    list.assign(by_degree[static_cast<size_t>(q)].begin(), by_degree[static_cast<size_t>(q)].end());
    for (size_t i = 0; i < list.size(); ++i) k.index_[static_cast<size_t>(q)][list[i]] = static_cast<int>(i);
  }

  k.cofaces_.resize(static_cast<size_t>(n + 1));
  k.top_cofaces_.resize(static_cast<size_t>(n + 1));
  for (int q = 0; q <= n; ++q) {
    k.cofaces_[static_cast<size_t>(q)].resize(static_cast<size_t>(k.count(q)));
    k.top_cofaces_[static_cast<size_t>(q)].resize(static_cast<size_t>(k.count(q)));
  }
  for (int q = 1; q <= n; ++q) {
    const auto& list = k.simplices_[static_cast<size_t>(q)];
    for (size_t t = 0; t < list.size(); ++t) {
      const Simplex& tau = list[t];
      for (size_t i = 0; i < tau.size(); ++i) {
        Simplex face = tau;
        face.erase(face.begin() + static_cast<long>(i));
        const int f = k.index_[static_cast<size_t>(q - 1)].at(face);
        k.cofaces_[static_cast<size_t>(q - 1)][static_cast<size_t>(f)].push_back(
            {static_cast<int>(t), (i % 2 == 0) ? 1 : -1});
      }
    }
  }
  const auto& top_list = k.simplices_[static_cast<size_t>(n)];
  for (size_t t = 0; t < top_list.size(); ++t) {
    const Simplex& tau = top_list[t];
    const unsigned full = 1u << tau.size();
    for (unsigned mask = 1; mask < full; ++mask) {
      Simplex face;
      for (size_t j = 0; j < tau.size(); ++j) {
        if (mask & (1u << j)) face.push_back(tau[j]);
      }
      const size_t q = face.size() - 1;
      k.top_cofaces_[q][static_cast<size_t>(k.index_[q].at(face))].push_back(static_cast<int>(t));
    }
  }
  return k;
}

int SimplicialComplex::count(int q) const {
  if (q < 0 || q > dimension()) return 0;
  return static_cast<int>(simplices_[static_cast<size_t>(q)].size());
}

const std::vector<Simplex>& SimplicialComplex::simplices(int q) const {
  if (q < 0 || q > dimension()) throw InvalidInput("simplices: degree out of range");
  return simplices_[static_cast<size_t>(q)];
}

int SimplicialComplex::find(std::span<const int> vertices) const {
  const int q = static_cast<int>(vertices.size()) - 1;
  if (q < 0 || q > dimension()) return -1;
  Simplex s(vertices.begin(), vertices.end());
  std::sort(s.begin(), s.end());
  const auto& idx = index_[static_cast<size_t>(q)];
  auto it = idx.find(s);
  return it == idx.end() ? -1 : it->second;
}

Incidence SimplicialComplex::locate(std::span<const int> vertices) const {
  const int i = find(vertices);
  if (i < 0) throw InvalidInput("locate: simplex not in complex");
  const int q = static_cast<int>(vertices.size()) - 1;
  return {i, relative_orientation(vertices, simplex(q, i))};
}

const std::vector<Incidence>& SimplicialComplex::cofaces(int q, int i) const {
  if (q < 0 || q > dimension()) throw InvalidInput("cofaces: degree out of range");
  return cofaces_[static_cast<size_t>(q)].at(static_cast<size_t>(i));
}

const std::vector<int>& SimplicialComplex::top_cofaces(int q, int i) const {
  if (q < 0 || q > dimension()) throw InvalidInput("top_cofaces: degree out of range");
  return top_cofaces_[static_cast<size_t>(q)].at(static_cast<size_t>(i));
}

SparseReal coboundary_matrix(const SimplicialComplex& complex, int q) {
  if (q < 0 || q >= complex.dimension()) throw InvalidInput("coboundary_matrix: q out of range");
  std::vector<Eigen::Triplet<double>> triplets;
  for (int s = 0; s < complex.count(q); ++s) {
    for (const auto& c : complex.cofaces(q, s)) triplets.emplace_back(c.index, s, c.sign);
  }
  SparseReal d(complex.count(q + 1), complex.count(q));
  d.setFromTriplets(triplets.begin(), triplets.end());
  return d;
}

std::vector<Simplex> closed_star(const SimplicialComplex& complex, const Simplex& sigma) {
  const int q = static_cast<int>(sigma.size()) - 1;
  const int idx = complex.find(sigma);
  if (idx < 0) throw InvalidInput("closed_star: simplex not in complex");
  std::set<std::pair<int, Simplex>> star;
  for (int top : complex.top_cofaces(q, idx)) {
    const Simplex& t = complex.simplex(complex.dimension(), top);
    const unsigned full = 1u << t.size();
    for (unsigned mask = 1; mask < full; ++mask) {
      Simplex face;
      for (size_t j = 0; j < t.size(); ++j) {
        if (mask & (1u << j)) face.push_back(t[j]);
      }
      star.emplace(static_cast<int>(face.size()), face);
    }
  }
  std::vector<Simplex> out;
  out.reserve(star.size());
  for (auto& [deg, s] : star) out.push_back(s);
  return out;
}

Cochain Cochain::zeros(const SimplicialComplex& complex, int q, int fiber_dim) {
  Cochain c;
  c.degree = q;
  c.fiber_dim = fiber_dim;
  c.values = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(complex.count(q)) * fiber_dim);
  return c;
}

std::complex<double> Cochain::evaluate(const SimplicialComplex& complex, std::span<const int> vertices,
                                       int component) const {
  if (static_cast<int>(vertices.size()) != degree + 1) throw InvalidInput("Cochain::evaluate: wrong degree");
  const Incidence loc = complex.locate(vertices);
  return static_cast<double>(loc.sign) * (*this)(loc.index, component);
}

}  // namespace dcl
