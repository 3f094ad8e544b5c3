#pragma once

#include <json.hpp>
#include <string>
#include <type_traits>
#include <vector>

#include "ctxscen/bundle_scen.hpp"
#include "ctxscen/contextuality.hpp"
#include "ctxscen/scenario.hpp"
#include "ctxscen/simplicial_set.hpp"

namespace ctxscen::io {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "1";

/// Error located at a JSON pointer inside a document.
class DocumentError : public Error {
 public:
  DocumentError(ErrorCode code, std::string path, const std::string& what)
      : Error(code, what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Cursor into a document: the value plus its JSON pointer.
struct Node {
  const json& value;
  std::string path;

  Node at(const std::string& key) const;  // required member
  bool has(const std::string& key) const { return value.is_object() && value.contains(key); }
  Node at(std::size_t i) const;
  [[noreturn]] void fail(const std::string& what) const;
  const std::string& str() const;
  const json::array_t& array() const;
  const json::object_t& object() const;
};

struct Document {
  std::string kind;
  json value;
  std::vector<std::string> warnings;
};

json read_file(const std::string& path);
/// Parses and validates any workspace document.
Document parse_document(const json& j);
Document parse_document_file(const std::string& path);

json envelope(const std::string& kind);

ComplexPtr parse_complex(const Node& n, std::vector<std::string>& warnings);
json complex_json(const Complex& c);

ScenarioPtr parse_scenario(const Node& n, std::vector<std::string>& warnings);
json scenario_json(const Scenario& s);  // payload without envelope

BundlePtr parse_bundle(const Node& n, std::vector<std::string>& warnings);
json bundle_json(const BundleScenario& f);

/// Relation document: its base complex is built from "source"; the target is given.
SimplicialRelation parse_relation(const Node& n, ComplexPtr target, std::vector<std::string>& warnings);

ScenarioMorphism parse_morphism(const Node& n, std::vector<std::string>& warnings);
json morphism_json(const ScenarioMorphism& m);
/// Bundle morphisms: "flavor": "bundle"; alpha is keyed by pull-back vertices "gamma@y".
BundleMorphism parse_bundle_morphism(const Node& n, std::vector<std::string>& warnings);
json morphism_json(const BundleMorphism& m);
bool is_bundle_morphism(const Node& n);

SSetPtr parse_sset(const Node& n);
json sset_json(const BoundedSSet& x);
SMapPtr parse_sset_map(const Node& n);

/// Keys used for sections and total simplices inside weight tables.
std::string section_key(const Scenario& s, SimplexId sigma, const Section& sec);
std::string simplex_key(const Complex& c, SimplexId s);

template <Semiring S>
typename S::value_type parse_weight(const Node& n);
template <Semiring S>
json weight_json(const typename S::value_type& w);

/// Models: "flavor" is "scenario" or "bundle"; "model" lists {context, dist}
/// with dist entries {outcome: [one value per context vertex], w}. Contexts
/// may be any set containing the maximal simplices; the rest are marginals.
/// In the bundle flavor the values are total vertices.
template <Semiring S>
EmpiricalModel<S> parse_model(const Node& n, ScenarioPtr scn);
template <Semiring S>
BundleModel<S> parse_bundle_model(const Node& n, BundlePtr f);
template <Semiring S>
json model_json(const EmpiricalModel<S>& e);
template <Semiring S>
json model_json(const BundleModel<S>& p);

/// Bundle model from distributions on a downward-generating set of simplices.
template <Semiring S>
BundleModel<S> bundle_model_from_partial(BundlePtr f, const std::map<SimplexId, Dist<S, SimplexId>>& given);

json certificate_json(const std::string& flavor, const ContextTable& t, const Certificate& c);

// ---------------------------------------------------------------------------

template <Semiring S>
typename S::value_type parse_weight(const Node& n) {
  if constexpr (std::is_same_v<S, RationalSemiring>) {
    Rational w;
    if (n.value.is_string()) {
      try {
        w = parse_rational(n.value.get<std::string>());
      } catch (const Error& e) {
        n.fail(e.what());
      }
    } else if (n.value.is_number_integer()) {
      w = Rational(n.value.get<long>());
    } else {
      n.fail("rational weight must be a string like \"1/3\" or an integer");
    }
    if (sgn(w) < 0) n.fail("weight must be non-negative");
    return w;
  } else if constexpr (std::is_same_v<S, BooleanSemiring>) {
    if (!n.value.is_boolean()) n.fail("boolean weight must be true or false");
    return n.value.get<bool>();
  } else {
    n.fail("unsupported semiring");
  }
}

template <Semiring S>
json weight_json(const typename S::value_type& w) {
  if constexpr (std::is_same_v<S, RationalSemiring>)
    return to_string(w);
  else if constexpr (std::is_same_v<S, BooleanSemiring>)
    return static_cast<bool>(w);
  else
    return S::format(w);
}

namespace detail {
SimplexId context_of(const Node& n, const Complex& c);
Section section_of(const Node& n, const Scenario& s, SimplexId sigma);
SimplexId total_simplex_of(const Node& n, const BundleScenario& f, SimplexId sigma);
json section_values(const Scenario& s, SimplexId sigma, const Section& sec);
json total_values(const BundleScenario& f, SimplexId g);
}  // namespace detail

template <Semiring S>
EmpiricalModel<S> parse_model(const Node& n, ScenarioPtr scn) {
  std::map<SimplexId, Dist<S, Section>> given;
  Node dists = n.at("model");
  for (std::size_t i = 0; i < dists.array().size(); ++i) {
    Node d = dists.at(i);
    SimplexId sigma = detail::context_of(d.at("context"), scn->complex());
    if (given.count(sigma)) d.fail("context given twice");
    Node w = d.at("dist");
    std::vector<typename Dist<S, Section>::Entry> raw;
    for (std::size_t k = 0; k < w.array().size(); ++k)
      raw.emplace_back(detail::section_of(w.at(k).at("outcome"), *scn, sigma), parse_weight<S>(w.at(k).at("w")));
    auto dist = Dist<S, Section>::collect(std::move(raw));
    if (!dist.normalized()) w.fail("weights do not sum to one");
    given.emplace(sigma, std::move(dist));
  }
  try {
    return EmpiricalModel<S>::from_partial(std::move(scn), given);
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    dists.fail(e.what());
  }
}

template <Semiring S>
BundleModel<S> bundle_model_from_partial(BundlePtr f, const std::map<SimplexId, Dist<S, SimplexId>>& given) {
  const Complex& base = f->base();
  std::vector<std::optional<Dist<S, SimplexId>>> out(base.size());
  for (const auto& [s, d] : given) out[s] = d;
  for (SimplexId m : base.maximal())
    if (!out[m]) fail("missing distribution on maximal context " + base.simplex_label(m));
  for (SimplexId s = 0; s < base.size(); ++s) {
    if (out[s]) continue;
    // marginal from any given coface
    for (const auto& [t, d] : given)
      if (is_subset(base.simplex(s), base.simplex(t))) {
        out[s] = push_dist([&](SimplexId g) { return f->restrict(g, s); }, d);
        break;
      }
    if (!out[s]) fail("no distribution covers " + base.simplex_label(s));
  }
  std::vector<Dist<S, SimplexId>> flat;
  for (auto& d : out) flat.push_back(std::move(*d));
  return BundleModel<S>(std::move(f), std::move(flat));
}

template <Semiring S>
BundleModel<S> parse_bundle_model(const Node& n, BundlePtr f) {
  std::map<SimplexId, Dist<S, SimplexId>> given;
  Node dists = n.at("model");
  for (std::size_t i = 0; i < dists.array().size(); ++i) {
    Node d = dists.at(i);
    SimplexId sigma = detail::context_of(d.at("context"), f->base());
    if (given.count(sigma)) d.fail("context given twice");
    Node w = d.at("dist");
    std::vector<typename Dist<S, SimplexId>::Entry> raw;
    for (std::size_t k = 0; k < w.array().size(); ++k)
      raw.emplace_back(detail::total_simplex_of(w.at(k).at("outcome"), *f, sigma), parse_weight<S>(w.at(k).at("w")));
    auto dist = Dist<S, SimplexId>::collect(std::move(raw));
    if (!dist.normalized()) w.fail("weights do not sum to one");
    given.emplace(sigma, std::move(dist));
  }
  try {
    return bundle_model_from_partial(std::move(f), given);
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    dists.fail(e.what());
  }
}

template <Semiring S>
json model_json(const EmpiricalModel<S>& e) {
  json j = envelope("model");
  const Scenario& s = e.scenario();
  const Complex& c = s.complex();
  j["semiring"] = S::name();
  j["flavor"] = "scenario";
  j["scenario"] = scenario_json(s);
  json dists = json::array();
  for (SimplexId m : c.maximal()) {
    json w = json::array();
    for (const auto& [sec, x] : e.at(m).entries())
      w.push_back({{"outcome", detail::section_values(s, m, sec)}, {"w", weight_json<S>(x)}});
    dists.push_back({{"context", c.simplex_labels(c.simplex(m))}, {"dist", w}});
  }
  j["model"] = dists;
  return j;
}

template <Semiring S>
json model_json(const BundleModel<S>& p) {
  json j = envelope("model");
  const BundleScenario& f = p.bundle();
  j["semiring"] = S::name();
  j["flavor"] = "bundle";
  j["bundle"] = bundle_json(f);
  json dists = json::array();
  for (SimplexId m : f.base().maximal()) {
    json w = json::array();
    for (const auto& [g, x] : p.at(m).entries()) w.push_back({{"outcome", detail::total_values(f, g)}, {"w", weight_json<S>(x)}});
    dists.push_back({{"context", f.base().simplex_labels(f.base().simplex(m))}, {"dist", w}});
  }
  j["model"] = dists;
  return j;
}

}  // namespace ctxscen::io
