#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctxscen/bundle.hpp"
#include "ctxscen/scenario.hpp"

namespace ctxscen {

/// Event bundle of a scenario: vertex x:o for each outcome, simplex (sigma, s)
/// for each section. Vertex (x, o) has id offset[x] + o.
struct CanonicalBundle {
  ScenarioPtr scenario;
  BundlePtr bundle;
  std::vector<VertexId> offset;

  VertexId vertex_of(VertexId x, Outcome o) const { return offset.at(x) + o; }
  SimplexId simplex_of(SimplexId sigma, const Section& s) const;
  /// (sigma, s) for a total simplex.
  std::pair<SimplexId, Section> decode(SimplexId gamma) const;
};

CanonicalBundle canonical_bundle(ScenarioPtr scn, std::size_t cap = kDefaultSimplexCap);

/// Pull-back of hat_N(f) along a relation pi: base' -> hat_N(base). Vertices are
/// pairs (gamma, y) with f(gamma) = pi(y).
struct RelationPullBack {
  ComplexPtr complex;
  std::vector<SimplexId> total_part;  // l: vertex -> simplex of the total complex
  std::vector<VertexId> base_part;    // vertex -> vertex of the new base
  std::vector<SimplexId> l_bar;       // simplex -> union of its total parts
  BundlePtr projection;               // f^pi over the new base
  std::map<std::pair<SimplexId, VertexId>, VertexId> index;

  std::optional<VertexId> find(SimplexId gamma, VertexId y) const;
  /// The simplex over sigma' whose total parts assemble to gamma, where gamma
  /// lies over pi(sigma').
  SimplexId over(SimplexId sigma_prime, SimplexId gamma) const;

  BundlePtr source;  // the bundle f
  std::shared_ptr<const SimplicialRelation> relation;
};

using PullBackPtr = std::shared_ptr<const RelationPullBack>;

PullBackPtr pull_back_relation(BundlePtr f, const SimplicialRelation& pi);

/// Induced map between pull-backs along the same relation for a map
/// alpha: f -> g over a common base: (gamma, y) -> (alpha(gamma), y).
ComplexMap pull_back_map(const RelationPullBack& from, const RelationPullBack& to, const ComplexMap& alpha);

/// General morphism (pi, alpha): f -> f'. pi maps the base of f' into the
/// nerve of the base of f; alpha maps the pull-back into the total complex of f'.
class BundleMorphism {
 public:
  BundleMorphism(BundlePtr source, BundlePtr target, SimplicialRelation relation, std::vector<VertexId> alpha);
  BundleMorphism(BundlePtr source, BundlePtr target, PullBackPtr pullback, std::vector<VertexId> alpha);
  static BundleMorphism identity(BundlePtr f);

  const BundleScenario& source() const { return *source_; }
  const BundleScenario& target() const { return *target_; }
  const BundlePtr& source_ptr() const { return source_; }
  const BundlePtr& target_ptr() const { return target_; }
  const SimplicialRelation& relation() const { return *pullback_->relation; }
  const RelationPullBack& pullback() const { return *pullback_; }
  const PullBackPtr& pullback_ptr() const { return pullback_; }
  const ComplexMap& alpha() const { return *alpha_; }

  friend bool operator==(const BundleMorphism& a, const BundleMorphism& b);

 private:
  BundlePtr source_, target_;
  PullBackPtr pullback_;
  std::shared_ptr<const ComplexMap> alpha_;
};

/// `second` after `first`.
BundleMorphism compose(const BundleMorphism& first, const BundleMorphism& second);

/// Morphism of the event bundles induced by a scenario morphism.
BundleMorphism embed_scenario(const ScenarioMorphism& m, const CanonicalBundle& source, const CanonicalBundle& target);

/// Bundle (E_O ∘ pi) over base', with vertices (x', s over pi(x')) and the map
/// l into hat_N of the event bundle.
struct RelativeBundle {
  BundlePtr bundle;
  std::vector<std::pair<VertexId, Section>> vertices;
  std::vector<SimplexId> l;  // vertex -> simplex (pi(x'), s) of the event bundle
};

RelativeBundle relative_bundle(const CanonicalBundle& cb, const SimplicialRelation& pi);

/// Bundle hat_N(f) together with the nerve complexes.
struct HatBundle {
  ComplexPtr total, base;
  BundlePtr bundle;
};

HatBundle hat_N_bundle(const BundleScenario& f, std::size_t cap = kDefaultSimplexCap);

// ---------------------------------------------------------------------------
// Models

template <Semiring S>
std::optional<std::string> check_bundle_model(const BundleScenario& f, const std::vector<Dist<S, SimplexId>>& dists,
                                              CheckMode mode = CheckMode::all_faces,
                                              std::optional<FacePair>* violation = nullptr);

/// Model on a bundle: for every base simplex a distribution over its fiber.
template <Semiring S>
class BundleModel {
 public:
  using D = Dist<S, SimplexId>;
  BundleModel(BundlePtr f, std::vector<D> dists);

  const BundleScenario& bundle() const { return *bundle_; }
  const BundlePtr& bundle_ptr() const { return bundle_; }
  const D& at(SimplexId sigma) const { return dists_.at(sigma); }
  const std::vector<D>& dists() const { return dists_; }

  friend bool operator==(const BundleModel& a, const BundleModel& b) {
    return (a.bundle_ == b.bundle_ || a.bundle_->map() == b.bundle_->map()) && a.dists_ == b.dists_;
  }

 private:
  BundlePtr bundle_;
  std::vector<D> dists_;
};

/// Push along the relation part: a model on f^pi.
template <Semiring S>
BundleModel<S> push_type1(const RelationPullBack& pb, const BundleModel<S>& p);

/// Push along a map alpha: f -> g over the same base.
template <Semiring S>
BundleModel<S> push_type2(const ComplexMap& alpha, BundlePtr g, const BundleModel<S>& p);

template <Semiring S>
BundleModel<S> push_forward(const BundleMorphism& m, const BundleModel<S>& p);

template <Semiring S>
BundleModel<S> hat_N_emp(const HatBundle& hf, const BundleModel<S>& p);

template <Semiring S>
BundleModel<S> eta(const CanonicalBundle& cb, const EmpiricalModel<S>& e);

template <Semiring S>
EmpiricalModel<S> eta_inverse(const CanonicalBundle& cb, const BundleModel<S>& p);

// ---------------------------------------------------------------------------

template <Semiring S>
std::optional<std::string> check_bundle_model(const BundleScenario& f, const std::vector<Dist<S, SimplexId>>& dists,
                                              CheckMode mode, std::optional<FacePair>* violation) {
  const Complex& base = f.base();
  if (dists.size() != base.size()) return "model must give a distribution on every context";
  for (SimplexId s = 0; s < base.size(); ++s) {
    if (!dists[s].normalized()) return "distribution on " + base.simplex_label(s) + " does not sum to one";
    for (const auto& [g, w] : dists[s].entries())
      if (g >= f.total().size() || f.map().apply(g) != s)
        return "support on " + base.simplex_label(s) + " leaves the fiber";
  }
  for (SimplexId s = 0; s < base.size(); ++s) {
    const Simplex& sv = base.simplex(s);
    if (sv.size() < 2) continue;
    std::vector<SimplexId> faces;
    if (mode == CheckMode::all_faces) {
      faces = base.faces(s);
    } else {
      for (std::size_t skip = 0; skip < sv.size(); ++skip) {
        Simplex fc;
        for (std::size_t i = 0; i < sv.size(); ++i)
          if (i != skip) fc.push_back(sv[i]);
        faces.push_back(base.id_of(fc));
      }
    }
    for (SimplexId fc : faces) {
      if (fc == s) continue;
      auto marginal = push_dist([&](SimplexId g) { return f.restrict(g, fc); }, dists[s]);
      if (marginal == dists[fc]) continue;
      if (violation) *violation = FacePair{fc, s};
      return "marginal of " + base.simplex_label(s) + " on " + base.simplex_label(fc) + " disagrees";
    }
  }
  return std::nullopt;
}

template <Semiring S>
BundleModel<S>::BundleModel(BundlePtr f, std::vector<D> dists) : bundle_(std::move(f)), dists_(std::move(dists)) {
  if (auto err = check_bundle_model<S>(*bundle_, dists_, CheckMode::codim_one)) fail("invalid bundle model: " + *err);
}

template <Semiring S>
BundleModel<S> push_type1(const RelationPullBack& pb, const BundleModel<S>& p) {
  if (pb.source.get() != &p.bundle() && !(pb.source->map() == p.bundle().map()))
    fail_compose("model does not live on the pulled-back bundle");
  const BundleScenario& fp = *pb.projection;
  const SimplicialRelation& pi = *pb.relation;
  std::vector<Dist<S, SimplexId>> out;
  for (SimplexId sp = 0; sp < fp.base().size(); ++sp) {
    const auto& src = p.at(pi.apply(sp));
    std::vector<typename Dist<S, SimplexId>::Entry> raw;
    for (SimplexId g : fp.fiber(sp)) raw.emplace_back(g, src.weight(pb.l_bar[g]));
    out.push_back(Dist<S, SimplexId>::collect(std::move(raw)));
  }
  return BundleModel<S>(pb.projection, std::move(out));
}

template <Semiring S>
BundleModel<S> push_type2(const ComplexMap& alpha, BundlePtr g, const BundleModel<S>& p) {
  if (!identical(alpha.source_ptr(), p.bundle().total_ptr()) || !identical(alpha.target_ptr(), g->total_ptr()))
    fail_compose("map does not connect the bundles");
  std::vector<Dist<S, SimplexId>> out;
  for (const auto& d : p.dists()) out.push_back(push_dist([&](SimplexId x) { return alpha.apply(x); }, d));
  return BundleModel<S>(std::move(g), std::move(out));
}

template <Semiring S>
BundleModel<S> push_forward(const BundleMorphism& m, const BundleModel<S>& p) {
  return push_type2(m.alpha(), m.target_ptr(), push_type1(m.pullback(), p));
}

template <Semiring S>
BundleModel<S> hat_N_emp(const HatBundle& hf, const BundleModel<S>& p) {
  const BundleScenario& f = p.bundle();
  const BundleScenario& nf = *hf.bundle;
  std::vector<Dist<S, SimplexId>> out;
  for (SimplexId fam = 0; fam < nf.base().size(); ++fam) {
    Simplex su;
    for (VertexId s : nf.base().simplex(fam)) su = simplex_union(su, f.base().simplex(s));
    const auto& src = p.at(f.base().id_of(su));
    std::vector<typename Dist<S, SimplexId>::Entry> raw;
    for (SimplexId gfam : nf.fiber(fam)) {
      Simplex gu;
      for (VertexId g : nf.total().simplex(gfam)) gu = simplex_union(gu, f.total().simplex(g));
      raw.emplace_back(gfam, src.weight(f.total().id_of(gu)));
    }
    out.push_back(Dist<S, SimplexId>::collect(std::move(raw)));
  }
  return BundleModel<S>(hf.bundle, std::move(out));
}

template <Semiring S>
BundleModel<S> eta(const CanonicalBundle& cb, const EmpiricalModel<S>& e) {
  if (!identical(e.scenario_ptr(), cb.scenario)) fail_compose("model does not live on this scenario");
  std::vector<Dist<S, SimplexId>> out;
  for (SimplexId s = 0; s < e.dists().size(); ++s)
    out.push_back(push_dist([&](const Section& sec) { return cb.simplex_of(s, sec); }, e.at(s)));
  return BundleModel<S>(cb.bundle, std::move(out));
}

template <Semiring S>
EmpiricalModel<S> eta_inverse(const CanonicalBundle& cb, const BundleModel<S>& p) {
  if (!(p.bundle().map() == cb.bundle->map())) fail_compose("model does not live on this event bundle");
  std::vector<Dist<S, Section>> out;
  for (const auto& d : p.dists()) out.push_back(push_dist([&](SimplexId g) { return cb.decode(g).second; }, d));
  return EmpiricalModel<S>(cb.scenario, std::move(out));
}

}  // namespace ctxscen
