#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ctxscen/bundle_scen.hpp"
#include "ctxscen/nerve_complex.hpp"
#include "ctxscen/simplicial_set.hpp"

namespace ctxscen {

/// Entry standing for the empty simplex in a nerve tuple.
inline constexpr SimplexId kEmptyEntry = std::numeric_limits<SimplexId>::max();

/// Nerve space of a complex: level n holds tuples (s_1..s_n) of simplices or
/// empty entries whose union is a simplex (or empty).
struct NerveSpace {
  ComplexPtr complex;
  SSetPtr sset;
  std::vector<std::vector<std::vector<SimplexId>>> tuples;
  std::vector<std::vector<SimplexId>> unions;  // kEmptyEntry when every entry is empty
  std::vector<std::unordered_map<std::vector<SimplexId>, ElemId, SimplexHash>> index;

  int dim() const { return sset->dim(); }
  std::optional<ElemId> find(int n, const std::vector<SimplexId>& t) const;
  ElemId id_of(int n, const std::vector<SimplexId>& t) const;
  /// The level-1 element (s); s may be kEmptyEntry.
  ElemId level_one(SimplexId s) const { return id_of(1, {s}); }
};

using NervePtr = std::shared_ptr<const NerveSpace>;

NervePtr nerve_space(ComplexPtr c, int dim = kDefaultDim, std::size_t cap = kDefaultSimplexCap);

/// Componentwise image of a complex map.
SSetMap nerve_smap(const ComplexMap& f, const NerveSpace& source, const NerveSpace& target);

/// T(pi): N(source of pi) -> N(target of pi), componentwise the induced map on simplices.
SSetMap T_of_relation(const SimplicialRelation& pi, const NerveSpace& source, const NerveSpace& target);

/// N(hat_N C) -> N(C): each family goes to its union. `nhat` must be the
/// nerve of hat_N(n.complex).
SSetMap mu_tilde(const NerveSpace& nhat, const NerveSpace& n);

/// The unique relation with T(pi) = F; rejects maps not of that form.
SimplicialRelation recover_relation(const SSetMap& F, const NerveSpace& source, const NerveSpace& target);

/// The unique complex map with N(alpha) = F when F sends vertices to vertices.
ComplexMap recover_complex_map(const SSetMap& F, const NerveSpace& source, const NerveSpace& target);

struct NerveBundle {
  BundlePtr bundle;
  NervePtr total, base;
  SScenPtr scenario;
};

NerveBundle nerve_bundle(BundlePtr f, int dim = kDefaultDim, std::size_t cap = kDefaultSimplexCap);

/// Entries of the pull-back element (gamma-tuple, sigma'-tuple) read as a tuple
/// of simplices of the relation pull-back complex.
std::vector<SimplexId> pullback_tuple(const SSetPullBack& spb, int n, ElemId k, const NerveSpace& total,
                                      const NerveSpace& base_prime, const RelationPullBack& rpb);

/// The comparison map T(pi)^*(N Gamma) -> N(pi^*(hat_N Gamma)).
SSetMap nerve_pullback_iso(const SSetPullBack& spb, const NerveSpace& total, const NerveSpace& base_prime,
                           const RelationPullBack& rpb, const NerveSpace& n_rpb);

/// (T(pi), N alpha) for a bundle morphism between the given nerve bundles.
SScenMorphism embed_bundle(const BundleMorphism& m, const NerveBundle& source, const NerveBundle& target);

/// Inverse of embed_bundle on its image.
BundleMorphism recover_bundle_morphism(const SScenMorphism& m, const NerveBundle& source, const NerveBundle& target);

/// Np: (Np)_n(s)(g) = p_{union s}(union g) on the fiber of s.
template <Semiring S>
SimplicialDistribution<S> nerve_dist(const NerveBundle& nb, const BundleModel<S>& p);

/// Reads the bundle model off level 1.
template <Semiring S>
BundleModel<S> zeta_inverse(const NerveBundle& nb, const SimplicialDistribution<S>& p);

// ---------------------------------------------------------------------------

template <Semiring S>
SimplicialDistribution<S> nerve_dist(const NerveBundle& nb, const BundleModel<S>& p) {
  if (!(p.bundle().map() == nb.bundle->map())) fail_compose("model does not live on this bundle");
  const SimplicialScenario& sc = *nb.scenario;
  SLevels<S> out(sc.dim() + 1);
  for (int n = 0; n <= sc.dim(); ++n)
    for (ElemId x = 0; x < sc.base().count(n); ++x) {
      SimplexId su = nb.base->unions[n][x];
      std::vector<typename Dist<S, ElemId>::Entry> raw;
      for (ElemId g : sc.fiber(n, x)) {
        SimplexId gu = nb.total->unions[n][g];
        if (su == kEmptyEntry)
          raw.emplace_back(g, S::one());
        else
          raw.emplace_back(g, p.at(su).weight(gu));
      }
      out[n].push_back(Dist<S, ElemId>::collect(std::move(raw)));
    }
  return SimplicialDistribution<S>(sc.map_ptr(), std::move(out));
}

template <Semiring S>
BundleModel<S> zeta_inverse(const NerveBundle& nb, const SimplicialDistribution<S>& p) {
  if (!(p.map() == nb.scenario->map())) fail_compose("distribution does not live on this nerve");
  std::vector<Dist<S, SimplexId>> out;
  for (SimplexId s = 0; s < nb.bundle->base().size(); ++s)
    out.push_back(push_dist([&](ElemId g) { return nb.total->tuples[1][g][0]; }, p.at(1, nb.base->level_one(s))));
  return BundleModel<S>(nb.bundle, std::move(out));
}

}  // namespace ctxscen
