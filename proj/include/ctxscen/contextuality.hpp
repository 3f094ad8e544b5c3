#pragma once

#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "ctxscen/bundle_scen.hpp"
#include "ctxscen/scenario.hpp"
#include "ctxscen/simplicial_set.hpp"

namespace ctxscen {

inline constexpr std::size_t kDefaultSectionCap = 100'000;

/// Global sections in the three settings.
using GlobalAssignment = Section;                       // one outcome per vertex
using BundleSection = std::vector<VertexId>;            // base vertex -> total vertex
using SSetSection = std::vector<std::vector<ElemId>>;   // levelwise map X -> E

std::vector<GlobalAssignment> enumerate_sections(const Scenario& scn, std::size_t cap = kDefaultSectionCap);
std::vector<BundleSection> enumerate_sections(const BundleScenario& f, std::size_t cap = kDefaultSectionCap);
std::vector<SSetSection> enumerate_sections(const SimplicialScenario& f, std::size_t cap = kDefaultSectionCap);

/// Coordinates of a contextuality problem: each context has finitely many
/// coordinates and each deterministic column picks one per context.
struct ContextTable {
  std::vector<std::string> contexts;
  std::vector<std::pair<int, std::uint32_t>> keys;  // (level, element); level 0 for complex simplices
  std::vector<std::vector<std::string>> coords;
  std::vector<std::vector<std::uint32_t>> columns;  // columns[s][c]
  std::vector<std::string> sections;
};

ContextTable context_table(const Scenario& scn, const std::vector<GlobalAssignment>& sections);
ContextTable context_table(const BundleScenario& f, const std::vector<BundleSection>& sections);
/// Contexts are the non-degenerate elements at every level.
ContextTable context_table(const SimplicialScenario& f, const std::vector<SSetSection>& sections);

enum class Verdict { noncontextual, contextual, undecided };
const char* verdict_name(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::undecided;
  std::string semiring;
  /// Noncontextual: the sections carrying weight and, for rationals, their weights.
  std::vector<std::size_t> support;
  std::vector<Rational> weights;
  /// Contextual over rationals: functional[c][k] with F(column) <= bound < F(model) = model_value.
  std::vector<std::vector<Rational>> functional;
  Rational bound, model_value;
  /// Contextual over Booleans: a possible (context, coordinate) no compatible section reaches.
  std::optional<std::pair<std::size_t, std::size_t>> unextendable;
  std::string reason;
};

Certificate decide_table(const ContextTable& t, const std::vector<std::vector<Rational>>& values);
Certificate decide_table(const ContextTable& t, const std::vector<std::vector<bool>>& values);

/// Independent check of a certificate against the table; returns the first problem.
std::optional<std::string> check_certificate(const ContextTable& t, const std::vector<std::vector<Rational>>& values,
                                             const Certificate& c);
std::optional<std::string> check_certificate(const ContextTable& t, const std::vector<std::vector<bool>>& values,
                                             const Certificate& c);

template <class Sec>
struct Decision {
  std::vector<Sec> sections;
  ContextTable table;
  Certificate certificate;
};

/// Per-coordinate model weights.
template <Semiring S>
std::vector<std::vector<typename S::value_type>> table_values(const ContextTable& t, const EmpiricalModel<S>& e);
template <Semiring S>
std::vector<std::vector<typename S::value_type>> table_values(const ContextTable& t, const BundleModel<S>& p);
template <Semiring S>
std::vector<std::vector<typename S::value_type>> table_values(const ContextTable& t, const SimplicialScenario& f,
                                                              const SimplicialDistribution<S>& p);

template <Semiring S>
EmpiricalModel<S> deterministic(ScenarioPtr scn, const GlobalAssignment& s);
template <Semiring S>
BundleModel<S> deterministic(BundlePtr f, const BundleSection& s);
template <Semiring S>
SimplicialDistribution<S> deterministic(const SimplicialScenario& f, const SSetSection& s);

/// Mixture of deterministic models; d is indexed by position in `sections`.
template <Semiring S>
EmpiricalModel<S> theta(ScenarioPtr scn, const std::vector<GlobalAssignment>& sections, const Dist<S, std::size_t>& d);
template <Semiring S>
BundleModel<S> theta(BundlePtr f, const std::vector<BundleSection>& sections, const Dist<S, std::size_t>& d);
template <Semiring S>
SimplicialDistribution<S> theta(const SimplicialScenario& f, const std::vector<SSetSection>& sections,
                                const Dist<S, std::size_t>& d);

/// The mixing distribution of a noncontextual certificate.
template <Semiring S>
Dist<S, std::size_t> certificate_mixture(const Certificate& c);

template <Semiring S>
Decision<GlobalAssignment> decide(const EmpiricalModel<S>& e, std::size_t cap = kDefaultSectionCap);
template <Semiring S>
Decision<BundleSection> decide(const BundleModel<S>& p, std::size_t cap = kDefaultSectionCap);
template <Semiring S>
Decision<SSetSection> decide(const SimplicialScenario& f, const SimplicialDistribution<S>& p,
                             std::size_t cap = kDefaultSectionCap);

// ---------------------------------------------------------------------------

template <Semiring S>
std::vector<std::vector<typename S::value_type>> table_values(const ContextTable& t, const EmpiricalModel<S>& e) {
  std::vector<std::vector<typename S::value_type>> v;
  for (std::size_t c = 0; c < t.contexts.size(); ++c) {
    SimplexId sigma = t.keys[c].second;
    v.emplace_back();
    for (std::size_t k = 0; k < t.coords[c].size(); ++k)
      v.back().push_back(e.at(sigma).weight(e.scenario().section_at(sigma, k)));
  }
  return v;
}

template <Semiring S>
std::vector<std::vector<typename S::value_type>> table_values(const ContextTable& t, const BundleModel<S>& p) {
  std::vector<std::vector<typename S::value_type>> v;
  for (std::size_t c = 0; c < t.contexts.size(); ++c) {
    const auto& fib = p.bundle().fiber(t.keys[c].second);
    v.emplace_back();
    for (SimplexId g : fib) v.back().push_back(p.at(t.keys[c].second).weight(g));
  }
  return v;
}

template <Semiring S>
std::vector<std::vector<typename S::value_type>> table_values(const ContextTable& t, const SimplicialScenario& f,
                                                              const SimplicialDistribution<S>& p) {
  std::vector<std::vector<typename S::value_type>> v;
  for (std::size_t c = 0; c < t.contexts.size(); ++c) {
    auto [n, x] = t.keys[c];
    v.emplace_back();
    for (ElemId g : f.fiber(n, x)) v.back().push_back(p.at(n, x).weight(g));
  }
  return v;
}

namespace detail {
SimplexId section_simplex(const BundleScenario& f, const BundleSection& s, SimplexId sigma);
}

template <Semiring S>
EmpiricalModel<S> deterministic(ScenarioPtr scn, const GlobalAssignment& s) {
  return theta<S>(scn, {s}, Dist<S, std::size_t>::point(0));
}

template <Semiring S>
BundleModel<S> deterministic(BundlePtr f, const BundleSection& s) {
  return theta<S>(std::move(f), {s}, Dist<S, std::size_t>::point(0));
}

template <Semiring S>
SimplicialDistribution<S> deterministic(const SimplicialScenario& f, const SSetSection& s) {
  return theta<S>(f, {s}, Dist<S, std::size_t>::point(0));
}

template <Semiring S>
EmpiricalModel<S> theta(ScenarioPtr scn, const std::vector<GlobalAssignment>& sections, const Dist<S, std::size_t>& d) {
  std::vector<Dist<S, Section>> out;
  for (SimplexId sigma = 0; sigma < scn->complex().size(); ++sigma) {
    std::vector<typename Dist<S, Section>::Entry> raw;
    for (const auto& [i, w] : d.entries()) raw.emplace_back(scn->restrict_global(sections.at(i), sigma), w);
    out.push_back(Dist<S, Section>::from_weights(std::move(raw)));
  }
  return EmpiricalModel<S>(std::move(scn), std::move(out));
}

template <Semiring S>
BundleModel<S> theta(BundlePtr f, const std::vector<BundleSection>& sections, const Dist<S, std::size_t>& d) {
  std::vector<Dist<S, SimplexId>> out;
  for (SimplexId sigma = 0; sigma < f->base().size(); ++sigma) {
    std::vector<typename Dist<S, SimplexId>::Entry> raw;
    for (const auto& [i, w] : d.entries()) raw.emplace_back(detail::section_simplex(*f, sections.at(i), sigma), w);
    out.push_back(Dist<S, SimplexId>::from_weights(std::move(raw)));
  }
  return BundleModel<S>(std::move(f), std::move(out));
}

template <Semiring S>
SimplicialDistribution<S> theta(const SimplicialScenario& f, const std::vector<SSetSection>& sections,
                                const Dist<S, std::size_t>& d) {
  SLevels<S> out(f.dim() + 1);
  for (int n = 0; n <= f.dim(); ++n)
    for (ElemId x = 0; x < f.base().count(n); ++x) {
      std::vector<typename Dist<S, ElemId>::Entry> raw;
      for (const auto& [i, w] : d.entries()) raw.emplace_back(sections.at(i).at(n).at(x), w);
      out[n].push_back(Dist<S, ElemId>::from_weights(std::move(raw)));
    }
  return SimplicialDistribution<S>(f.map_ptr(), std::move(out));
}

template <Semiring S>
Dist<S, std::size_t> certificate_mixture(const Certificate& c) {
  if (c.verdict != Verdict::noncontextual) fail("certificate carries no mixture");
  std::vector<typename Dist<S, std::size_t>::Entry> raw;
  for (std::size_t i = 0; i < c.support.size(); ++i) {
    if constexpr (std::is_same_v<S, RationalSemiring>)
      raw.emplace_back(c.support[i], c.weights.at(i));
    else
      raw.emplace_back(c.support[i], S::one());
  }
  return Dist<S, std::size_t>::from_weights(std::move(raw));
}

namespace detail {
template <Semiring S>
Certificate decide_values(const ContextTable& t, const std::vector<std::vector<typename S::value_type>>& v) {
  if constexpr (std::is_same_v<S, RationalSemiring>) {
    return decide_table(t, v);
  } else if constexpr (std::is_same_v<S, BooleanSemiring>) {
    std::vector<std::vector<bool>> b(v.size());
    for (std::size_t c = 0; c < v.size(); ++c) b[c].assign(v[c].begin(), v[c].end());
    return decide_table(t, b);
  } else {
    Certificate c;
    c.semiring = S::name();
    c.reason = "no decision procedure for the " + S::name() + " semiring";
    return c;
  }
}
}  // namespace detail

template <Semiring S>
Decision<GlobalAssignment> decide(const EmpiricalModel<S>& e, std::size_t cap) {
  Decision<GlobalAssignment> out;
  out.sections = enumerate_sections(e.scenario(), cap);
  out.table = context_table(e.scenario(), out.sections);
  out.certificate = detail::decide_values<S>(out.table, table_values(out.table, e));
  return out;
}

template <Semiring S>
Decision<BundleSection> decide(const BundleModel<S>& p, std::size_t cap) {
  Decision<BundleSection> out;
  out.sections = enumerate_sections(p.bundle(), cap);
  out.table = context_table(p.bundle(), out.sections);
  out.certificate = detail::decide_values<S>(out.table, table_values(out.table, p));
  return out;
}

template <Semiring S>
Decision<SSetSection> decide(const SimplicialScenario& f, const SimplicialDistribution<S>& p, std::size_t cap) {
  if (!(p.map() == f.map())) fail_compose("distribution does not live on this scenario");
  Decision<SSetSection> out;
  out.sections = enumerate_sections(f, cap);
  out.table = context_table(f, out.sections);
  out.certificate = detail::decide_values<S>(out.table, table_values(out.table, f, p));
  return out;
}

}  // namespace ctxscen
