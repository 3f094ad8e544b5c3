#pragma once

#include <vector>

#include "ctxscen/complex.hpp"

namespace ctxscen {

/// Nerve complex: vertex i is simplex i of `c`; a set of simplices spans a
/// simplex iff their union is a simplex of `c`.
Complex hat_N(const Complex& c, std::size_t cap = kDefaultSimplexCap);

/// hat_N on maps, given the already built nerve complexes (vertex ids of a
/// nerve equal simplex ids of the underlying complex).
ComplexMap hat_N_map(const ComplexMap& f, ComplexPtr hat_source, ComplexPtr hat_target);

/// delta: x -> {x}.
ComplexMap nerve_unit(ComplexPtr c, ComplexPtr hat_c);
/// mu: {s_1..s_k} -> union of s_i; `c` is the base, `hat_c` = hat_N(c), `hat2_c` = hat_N(hat_c).
ComplexMap nerve_mult(const Complex& c, ComplexPtr hat_c, ComplexPtr hat2_c);

/// A map Sigma' -> hat_N(Sigma), stored as vertex -> simplex id of Sigma.
class SimplicialRelation {
 public:
  SimplicialRelation(ComplexPtr source, ComplexPtr target, std::vector<SimplexId> values);
  static SimplicialRelation identity(ComplexPtr c);
  static SimplicialRelation from_map(const ComplexMap& f);
  /// Reads a complex map into an explicitly built hat_N(target).
  static SimplicialRelation from_nerve_map(const ComplexMap& f, ComplexPtr target);

  const Complex& source() const { return *source_; }
  const Complex& target() const { return *target_; }
  const ComplexPtr& source_ptr() const { return source_; }
  const ComplexPtr& target_ptr() const { return target_; }
  SimplexId operator()(VertexId v) const { return values_[v]; }
  const std::vector<SimplexId>& values() const { return values_; }

  /// Union of the values over the vertices of a source simplex.
  SimplexId apply(SimplexId source_simplex) const { return image_[source_simplex]; }
  Simplex apply(const Simplex& source_simplex) const;

  ComplexMap to_nerve_map(ComplexPtr hat_target) const;

  friend bool operator==(const SimplicialRelation& a, const SimplicialRelation& b) {
    return identical(a.source_, b.source_) && identical(a.target_, b.target_) && a.values_ == b.values_;
  }

 private:
  ComplexPtr source_, target_;
  std::vector<SimplexId> values_;
  std::vector<SimplexId> image_;
};

/// (pi ⋄ pi')(x'') = union of pi over pi'(x'').
SimplicialRelation kleisli_compose(const SimplicialRelation& pi, const SimplicialRelation& pi_prime);

}  // namespace ctxscen
