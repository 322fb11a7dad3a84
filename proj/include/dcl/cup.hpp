#pragma once

#include "dcl/geometry.hpp"
#include "dcl/simplicial.hpp"
#include "dcl/whitney.hpp"

#include <vector>

namespace dcl {

/// p! q! / (p+q+1)!, reduced as an exact fraction before conversion.
double cup_coefficient(int p, int q);

/// Sign of left ∪ right inside target, where the two faces share exactly
/// `shared`: move `shared` last in `left` and first in `right`, concatenate
/// without repeating it, and compare with the canonical order of `target`.
int cup_sign(const Simplex& left, const Simplex& right, const Simplex& target, int shared);

/// One nonzero elementary product left ∪ right = coefficient * target.
struct CupTerm {
  int target;
  int left;
  int right;
  double coefficient;  // signed
};

/// All elementary products C^p x C^q -> C^{p+q} of the complex.
std::vector<CupTerm> cup_terms(const SimplicialComplex& complex, int p, int q);

/// Commutative simplicial cup product. `left` must be scalar; `right` may be
/// vector-valued (componentwise product).
Cochain cup(const SimplicialComplex& complex, const Cochain& left, const Cochain& right);

/// Matrix of c -> a ∪ c on q-cochains.
SparseComplex cup_operator(const SimplicialComplex& complex, const Cochain& a, int q);

/// d + i (a ∪ .) on q-cochains, for a 1-cochain a.
SparseComplex twisted_coboundary(const SimplicialComplex& complex, const Cochain& a, int q);

/// max |a ∪ b - R(W a ∧ W b)| with exact quadrature for the quadratic integrand.
double wedge_consistency_check(const GeometricComplex& geometry, const Cochain& a, const Cochain& b);

/// Pointwise wedge approximation: max over top-simplex barycenters of
/// |W(R w1 ∪ R w2) - w1 ∧ w2| (chart-coefficient max norm). Decays O(h).
double cup_approximation_defect(const GeometricComplex& geometry, const FormField& w1, int p, const FormField& w2,
                                int q, int quadrature_degree = kDeRhamQuadratureDegree);

}  // namespace dcl
