#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ctxscen/dist.hpp"
#include "ctxscen/nerve_complex.hpp"

namespace ctxscen {

using Outcome = std::uint32_t;
/// Outcomes for the vertices of one simplex, in the simplex's vertex order.
using Section = std::vector<Outcome>;

/// A complex with a finite outcome set on each vertex.
class Scenario {
 public:
  Scenario(ComplexPtr complex, std::vector<std::vector<std::string>> outcomes);
  static Scenario uniform(ComplexPtr complex, const std::vector<std::string>& outcomes);
  static Scenario with_counts(ComplexPtr complex, const std::vector<int>& counts);  // outcomes "0".."k-1"

  const Complex& complex() const { return *complex_; }
  const ComplexPtr& complex_ptr() const { return complex_; }
  std::size_t num_outcomes(VertexId x) const { return outcomes_.at(x).size(); }
  const std::vector<std::vector<std::string>>& outcomes() const { return outcomes_; }
  const std::string& outcome_label(VertexId x, Outcome o) const { return outcomes_.at(x).at(o); }
  Outcome outcome(VertexId x, const std::string& label) const;  // throws when unknown

  /// Sections over a simplex, lexicographic with the first vertex most significant.
  std::vector<Section> sections(SimplexId sigma) const;
  std::size_t section_count(SimplexId sigma) const;
  std::size_t section_index(SimplexId sigma, const Section& s) const;
  Section section_at(SimplexId sigma, std::size_t index) const;
  bool valid_section(SimplexId sigma, const Section& s) const;
  /// s|face for s over sigma.
  Section restrict(SimplexId sigma, const Section& s, SimplexId face) const;
  /// The section over sigma induced by an assignment to all vertices.
  Section restrict_global(const Section& global, SimplexId sigma) const;

  friend bool operator==(const Scenario& a, const Scenario& b) {
    return identical(a.complex_, b.complex_) && a.outcomes_ == b.outcomes_;
  }

 private:
  ComplexPtr complex_;
  std::vector<std::vector<std::string>> outcomes_;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;
inline ScenarioPtr share(Scenario s) { return std::make_shared<const Scenario>(std::move(s)); }
inline bool identical(const ScenarioPtr& a, const ScenarioPtr& b) { return a == b || (a && b && *a == *b); }

/// A face pair (face, sigma) at which a model fails to be compatible.
struct FacePair {
  SimplexId face;
  SimplexId sigma;
};

enum class CheckMode { all_faces, codim_one };

/// Model on a scenario: one distribution over sections for every simplex,
/// indexed by simplex id.
template <Semiring S>
class EmpiricalModel {
 public:
  using D = Dist<S, Section>;

  EmpiricalModel(ScenarioPtr scenario, std::vector<D> dists);
  /// Extends distributions given on some simplices (at least the maximal ones)
  /// downward by marginalization, then validates.
  static EmpiricalModel from_partial(ScenarioPtr scenario, const std::map<SimplexId, D>& given);

  const Scenario& scenario() const { return *scenario_; }
  const ScenarioPtr& scenario_ptr() const { return scenario_; }
  const D& at(SimplexId sigma) const { return dists_.at(sigma); }
  const std::vector<D>& dists() const { return dists_; }

  friend bool operator==(const EmpiricalModel& a, const EmpiricalModel& b) {
    return identical(a.scenario_, b.scenario_) && a.dists_ == b.dists_;
  }

 private:
  ScenarioPtr scenario_;
  std::vector<D> dists_;
};

/// Checks shape, normalization, section validity and compatibility. Returns a
/// description of the first problem, or nothing when the family is a model.
template <Semiring S>
std::optional<std::string> check_empirical(const Scenario& scn, const std::vector<Dist<S, Section>>& dists,
                                           CheckMode mode = CheckMode::all_faces,
                                           std::optional<FacePair>* violation = nullptr);

/// Morphism (pi, alpha) from `source` to `target`: pi maps target vertices to
/// source simplices; alpha[x'][k] is the outcome at x' for the k-th section over pi(x').
class ScenarioMorphism {
 public:
  ScenarioMorphism(ScenarioPtr source, ScenarioPtr target, SimplicialRelation relation,
                   std::vector<std::vector<Outcome>> alpha);
  static ScenarioMorphism identity(ScenarioPtr scn);

  const Scenario& source() const { return *source_; }
  const Scenario& target() const { return *target_; }
  const ScenarioPtr& source_ptr() const { return source_; }
  const ScenarioPtr& target_ptr() const { return target_; }
  const SimplicialRelation& relation() const { return relation_; }
  const std::vector<std::vector<Outcome>>& alpha() const { return alpha_; }

  Outcome alpha_at(VertexId x, const Section& s) const;
  /// Assembled outcome map: a section over pi(sigma') to a section over sigma'.
  Section apply(SimplexId sigma_prime, const Section& s) const;

  friend bool operator==(const ScenarioMorphism& a, const ScenarioMorphism& b) {
    return identical(a.source_, b.source_) && identical(a.target_, b.target_) && a.relation_ == b.relation_ &&
           a.alpha_ == b.alpha_;
  }

 private:
  ScenarioPtr source_, target_;
  SimplicialRelation relation_;
  std::vector<std::vector<Outcome>> alpha_;
};

/// `second` after `first`.
ScenarioMorphism compose(const ScenarioMorphism& first, const ScenarioMorphism& second);

template <Semiring S>
EmpiricalModel<S> push_forward(const ScenarioMorphism& m, const EmpiricalModel<S>& e);

// ---------------------------------------------------------------------------

template <Semiring S>
std::optional<std::string> check_empirical(const Scenario& scn, const std::vector<Dist<S, Section>>& dists,
                                           CheckMode mode, std::optional<FacePair>* violation) {
  const Complex& c = scn.complex();
  if (dists.size() != c.size()) return "model must give a distribution on every context";
  for (SimplexId s = 0; s < c.size(); ++s) {
    if (!dists[s].normalized()) return "distribution on " + c.simplex_label(s) + " does not sum to one";
    for (const auto& [sec, w] : dists[s].entries())
      if (!scn.valid_section(s, sec)) return "invalid outcome assignment on " + c.simplex_label(s);
  }
  auto compare = [&](SimplexId sigma, SimplexId face) -> bool {
    auto marginal = push_dist([&](const Section& sec) { return scn.restrict(sigma, sec, face); }, dists[sigma]);
    return marginal == dists[face];
  };
  for (SimplexId s = 0; s < c.size(); ++s) {
    const Simplex& sv = c.simplex(s);
    if (sv.size() < 2) continue;
    std::vector<SimplexId> faces;
    if (mode == CheckMode::all_faces) {
      faces = c.faces(s);
    } else {
      for (std::size_t skip = 0; skip < sv.size(); ++skip) {
        Simplex f;
        for (std::size_t i = 0; i < sv.size(); ++i)
          if (i != skip) f.push_back(sv[i]);
        faces.push_back(c.id_of(f));
      }
    }
    for (SimplexId f : faces) {
      if (f == s || compare(s, f)) continue;
      if (violation) *violation = FacePair{f, s};
      return "marginal of " + c.simplex_label(s) + " on " + c.simplex_label(f) + " disagrees";
    }
  }
  return std::nullopt;
}

template <Semiring S>
EmpiricalModel<S>::EmpiricalModel(ScenarioPtr scenario, std::vector<D> dists)
    : scenario_(std::move(scenario)), dists_(std::move(dists)) {
  if (auto err = check_empirical<S>(*scenario_, dists_, CheckMode::codim_one)) fail("invalid empirical model: " + *err);
}

template <Semiring S>
EmpiricalModel<S> EmpiricalModel<S>::from_partial(ScenarioPtr scenario, const std::map<SimplexId, D>& given) {
  const Complex& c = scenario->complex();
  std::vector<std::optional<D>> slots(c.size());
  for (const auto& [s, d] : given) {
    if (s >= c.size()) fail("context outside the scenario");
    slots[s] = d;
  }
  // Largest simplices first, so every face can be read off a given coface.
  for (SimplexId s = static_cast<SimplexId>(c.size()); s-- > 0;) {
    if (slots[s]) continue;
    std::optional<SimplexId> parent;
    for (SimplexId t : c.star(s))
      if (t != s && slots[t]) {
        parent = t;
        break;
      }
    if (!parent) fail("no distribution given on or above " + c.simplex_label(s));
    slots[s] = push_dist([&](const Section& sec) { return scenario->restrict(*parent, sec, s); }, *slots[*parent]);
  }
  std::vector<D> dists;
  for (auto& d : slots) dists.push_back(std::move(*d));
  return EmpiricalModel(std::move(scenario), std::move(dists));
}

template <Semiring S>
EmpiricalModel<S> push_forward(const ScenarioMorphism& m, const EmpiricalModel<S>& e) {
  if (!identical(e.scenario_ptr(), m.source_ptr())) fail_compose("model does not live on the morphism source");
  const Complex& tc = m.target().complex();
  std::vector<Dist<S, Section>> out;
  out.reserve(tc.size());
  for (SimplexId sp = 0; sp < tc.size(); ++sp) {
    const auto& src = e.at(m.relation().apply(sp));
    out.push_back(push_dist([&](const Section& s) { return m.apply(sp, s); }, src));
  }
  return EmpiricalModel<S>(m.target_ptr(), std::move(out));
}

}  // namespace ctxscen
