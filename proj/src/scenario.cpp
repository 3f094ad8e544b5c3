#include "ctxscen/scenario.hpp"

#include <algorithm>

namespace ctxscen {

namespace {

// Positions of the vertices of `face` inside `sigma`.
std::vector<std::size_t> positions(const Simplex& sigma, const Simplex& face) {
  std::vector<std::size_t> pos;
  pos.reserve(face.size());
  for (VertexId v : face) {
    auto it = std::lower_bound(sigma.begin(), sigma.end(), v);
    if (it == sigma.end() || *it != v) fail("restriction to a non-face");
    pos.push_back(static_cast<std::size_t>(it - sigma.begin()));
  }
  return pos;
}

}  // namespace

Scenario::Scenario(ComplexPtr complex, std::vector<std::vector<std::string>> outcomes)
    : complex_(std::move(complex)), outcomes_(std::move(outcomes)) {
  if (!complex_) fail("scenario needs a complex");
  if (outcomes_.size() != complex_->num_vertices()) fail("every measurement needs an outcome set");
  for (VertexId x = 0; x < outcomes_.size(); ++x) {
    auto& o = outcomes_[x];
    if (o.empty()) fail("empty outcome set at " + complex_->label(x));
    auto sorted = o;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      fail("repeated outcome at " + complex_->label(x));
    for (const auto& l : o)
      if (l.empty()) fail("empty outcome label at " + complex_->label(x));
  }
}

Scenario Scenario::uniform(ComplexPtr complex, const std::vector<std::string>& outcomes) {
  std::vector<std::vector<std::string>> all(complex->num_vertices(), outcomes);
  return Scenario(std::move(complex), std::move(all));
}

Scenario Scenario::with_counts(ComplexPtr complex, const std::vector<int>& counts) {
  std::vector<std::vector<std::string>> all;
  for (int k : counts) {
    std::vector<std::string> o;
    for (int i = 0; i < k; ++i) o.push_back(std::to_string(i));
    all.push_back(std::move(o));
  }
  return Scenario(std::move(complex), std::move(all));
}

Outcome Scenario::outcome(VertexId x, const std::string& label) const {
  const auto& o = outcomes_.at(x);
  auto it = std::find(o.begin(), o.end(), label);
  if (it == o.end()) fail("unknown outcome '" + label + "' at " + complex_->label(x));
  return static_cast<Outcome>(it - o.begin());
}

std::size_t Scenario::section_count(SimplexId sigma) const {
  std::size_t n = 1;
  for (VertexId x : complex_->simplex(sigma)) n *= outcomes_[x].size();
  return n;
}

std::vector<Section> Scenario::sections(SimplexId sigma) const {
  std::size_t n = section_count(sigma);
  std::vector<Section> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(section_at(sigma, i));
  return out;
}

std::size_t Scenario::section_index(SimplexId sigma, const Section& s) const {
  const Simplex& sv = complex_->simplex(sigma);
  if (s.size() != sv.size()) fail("section has the wrong length");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    if (s[i] >= outcomes_[sv[i]].size()) fail("outcome out of range");
    idx = idx * outcomes_[sv[i]].size() + s[i];
  }
  return idx;
}

Section Scenario::section_at(SimplexId sigma, std::size_t index) const {
  const Simplex& sv = complex_->simplex(sigma);
  Section s(sv.size());
  for (std::size_t i = sv.size(); i-- > 0;) {
    std::size_t k = outcomes_[sv[i]].size();
    s[i] = static_cast<Outcome>(index % k);
    index /= k;
  }
  if (index != 0) fail("section index out of range");
  return s;
}

bool Scenario::valid_section(SimplexId sigma, const Section& s) const {
  const Simplex& sv = complex_->simplex(sigma);
  if (s.size() != sv.size()) return false;
  for (std::size_t i = 0; i < sv.size(); ++i)
    if (s[i] >= outcomes_[sv[i]].size()) return false;
  return true;
}

Section Scenario::restrict(SimplexId sigma, const Section& s, SimplexId face) const {
  auto pos = positions(complex_->simplex(sigma), complex_->simplex(face));
  Section out;
  out.reserve(pos.size());
  for (std::size_t p : pos) out.push_back(s.at(p));
  return out;
}

Section Scenario::restrict_global(const Section& global, SimplexId sigma) const {
  Section out;
  for (VertexId x : complex_->simplex(sigma)) out.push_back(global.at(x));
  return out;
}

ScenarioMorphism::ScenarioMorphism(ScenarioPtr source, ScenarioPtr target, SimplicialRelation relation,
                                   std::vector<std::vector<Outcome>> alpha)
    : source_(std::move(source)), target_(std::move(target)), relation_(std::move(relation)), alpha_(std::move(alpha)) {
  if (!identical(relation_.source_ptr(), target_->complex_ptr()) ||
      !identical(relation_.target_ptr(), source_->complex_ptr()))
    fail("relation must map the target complex into the nerve of the source complex");
  const Complex& tc = target_->complex();
  if (alpha_.size() != tc.num_vertices()) fail("outcome map needed at every target vertex");
  for (VertexId x = 0; x < tc.num_vertices(); ++x) {
    if (alpha_[x].size() != source_->section_count(relation_(x)))
      fail("outcome map at " + tc.label(x) + " must cover every section over its relation value");
    for (Outcome o : alpha_[x])
      if (o >= target_->num_outcomes(x)) fail("outcome map at " + tc.label(x) + " leaves the outcome set");
  }
}

ScenarioMorphism ScenarioMorphism::identity(ScenarioPtr scn) {
  auto rel = SimplicialRelation::identity(scn->complex_ptr());
  std::vector<std::vector<Outcome>> alpha;
  for (VertexId x = 0; x < scn->complex().num_vertices(); ++x) {
    std::vector<Outcome> a;
    for (Outcome o = 0; o < scn->num_outcomes(x); ++o) a.push_back(o);
    alpha.push_back(std::move(a));
  }
  return ScenarioMorphism(scn, scn, std::move(rel), std::move(alpha));
}

Outcome ScenarioMorphism::alpha_at(VertexId x, const Section& s) const {
  return alpha_.at(x).at(source_->section_index(relation_(x), s));
}

Section ScenarioMorphism::apply(SimplexId sigma_prime, const Section& s) const {
  SimplexId over = relation_.apply(sigma_prime);
  Section out;
  for (VertexId x : target_->complex().simplex(sigma_prime))
    out.push_back(alpha_at(x, source_->restrict(over, s, relation_(x))));
  return out;
}

ScenarioMorphism compose(const ScenarioMorphism& first, const ScenarioMorphism& second) {
  if (!identical(first.target_ptr(), second.source_ptr())) fail_compose("scenario morphisms are not composable");
  auto rel = kleisli_compose(first.relation(), second.relation());
  const Scenario& a = first.source();
  std::vector<std::vector<Outcome>> alpha;
  for (VertexId x = 0; x < second.target().complex().num_vertices(); ++x) {
    SimplexId mid = second.relation()(x);
    std::vector<Outcome> table;
    for (const Section& s : a.sections(rel(x))) table.push_back(second.alpha_at(x, first.apply(mid, s)));
    alpha.push_back(std::move(table));
  }
  return ScenarioMorphism(first.source_ptr(), second.target_ptr(), std::move(rel), std::move(alpha));
}

}  // namespace ctxscen
