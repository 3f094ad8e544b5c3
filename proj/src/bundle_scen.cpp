#include "ctxscen/bundle_scen.hpp"

#include <algorithm>

namespace ctxscen {

SimplexId CanonicalBundle::simplex_of(SimplexId sigma, const Section& s) const {
  const Simplex& sv = scenario->complex().simplex(sigma);
  if (!scenario->valid_section(sigma, s)) fail("invalid section for the event bundle");
  Simplex g;
  for (std::size_t i = 0; i < sv.size(); ++i) g.push_back(offset[sv[i]] + s[i]);
  return bundle->total().id_of(g);
}

std::pair<SimplexId, Section> CanonicalBundle::decode(SimplexId gamma) const {
  SimplexId sigma = bundle->map().apply(gamma);
  Section s;
  for (VertexId v : bundle->total().simplex(gamma)) s.push_back(v - offset[bundle->map()(v)]);
  return {sigma, s};
}

CanonicalBundle canonical_bundle(ScenarioPtr scn, std::size_t cap) {
  const Complex& c = scn->complex();
  CanonicalBundle cb;
  cb.scenario = scn;
  std::vector<std::string> labels;
  std::vector<VertexId> owner;
  for (VertexId x = 0; x < c.num_vertices(); ++x) {
    cb.offset.push_back(static_cast<VertexId>(labels.size()));
    for (Outcome o = 0; o < scn->num_outcomes(x); ++o) {
      labels.push_back(c.label(x) + ":" + scn->outcome_label(x, o));
      owner.push_back(x);
    }
  }
  std::size_t budget = 0;
  for (SimplexId m : c.maximal()) {
    budget += scn->section_count(m);
    if (budget > cap) fail_cap("event bundle exceeds the simplex cap of " + std::to_string(cap));
  }
  std::vector<Simplex> gens;
  for (SimplexId m : c.maximal()) {
    const Simplex& sv = c.simplex(m);
    for (const Section& s : scn->sections(m)) {
      Simplex g;
      for (std::size_t i = 0; i < sv.size(); ++i) g.push_back(cb.offset[sv[i]] + s[i]);
      gens.push_back(std::move(g));
    }
  }
  auto total = share(Complex::close_downward(std::move(labels), gens, cap));
  cb.bundle = share(BundleScenario(ComplexMap(total, scn->complex_ptr(), std::move(owner))));
  return cb;
}

std::optional<VertexId> RelationPullBack::find(SimplexId gamma, VertexId y) const {
  auto it = index.find({gamma, y});
  if (it == index.end()) return std::nullopt;
  return it->second;
}

SimplexId RelationPullBack::over(SimplexId sigma_prime, SimplexId gamma) const {
  const SimplicialRelation& pi = *relation;
  Simplex s;
  for (VertexId y : pi.source().simplex(sigma_prime)) s.push_back(index.at({source->restrict(gamma, pi(y)), y}));
  std::sort(s.begin(), s.end());
  return complex->id_of(s);
}

PullBackPtr pull_back_relation(BundlePtr f, const SimplicialRelation& pi) {
  if (!identical(pi.target_ptr(), f->base_ptr())) fail_compose("relation does not land in the bundle base");
  auto pb = std::make_shared<RelationPullBack>();
  pb->source = f;
  pb->relation = std::make_shared<const SimplicialRelation>(pi);
  const Complex& total = f->total();
  const Complex& nb = pi.source();

  std::vector<std::string> labels;
  for (VertexId y = 0; y < nb.num_vertices(); ++y)
    for (SimplexId g : f->fiber(pi(y))) {
      pb->index.emplace(std::make_pair(g, y), static_cast<VertexId>(labels.size()));
      pb->total_part.push_back(g);
      pb->base_part.push_back(y);
      labels.push_back(total.simplex_label(g) + "@" + nb.label(y));
    }

  std::vector<Simplex> gens;
  for (SimplexId m : nb.maximal())
    for (SimplexId g : f->fiber(pi.apply(m))) {
      Simplex s;
      for (VertexId y : nb.simplex(m)) s.push_back(pb->index.at({f->restrict(g, pi(y)), y}));
      gens.push_back(std::move(s));
    }
  pb->complex = share(Complex::close_downward(std::move(labels), gens));

  pb->l_bar.resize(pb->complex->size());
  for (SimplexId s = 0; s < pb->complex->size(); ++s) {
    Simplex u;
    for (VertexId v : pb->complex->simplex(s)) u = simplex_union(u, total.simplex(pb->total_part[v]));
    pb->l_bar[s] = total.id_of(u);
  }
  pb->projection = share(BundleScenario(ComplexMap(pb->complex, pi.source_ptr(), pb->base_part)));
  return pb;
}

ComplexMap pull_back_map(const RelationPullBack& from, const RelationPullBack& to, const ComplexMap& alpha) {
  if (!(*from.relation == *to.relation)) fail_compose("pull-backs along different relations");
  if (!identical(alpha.source_ptr(), from.source->total_ptr()) || !identical(alpha.target_ptr(), to.source->total_ptr()))
    fail_compose("map does not connect the pulled-back bundles");
  std::vector<VertexId> vm;
  for (VertexId v = 0; v < from.complex->num_vertices(); ++v) {
    auto w = to.find(alpha.apply(from.total_part[v]), from.base_part[v]);
    if (!w) fail("map does not commute with the bundle projections");
    vm.push_back(*w);
  }
  return ComplexMap(from.complex, to.complex, std::move(vm));
}

BundleMorphism::BundleMorphism(BundlePtr source, BundlePtr target, SimplicialRelation relation,
                               std::vector<VertexId> alpha)
    : BundleMorphism(source, std::move(target), pull_back_relation(source, relation), std::move(alpha)) {}

BundleMorphism::BundleMorphism(BundlePtr source, BundlePtr target, PullBackPtr pullback, std::vector<VertexId> alpha)
    : source_(std::move(source)), target_(std::move(target)), pullback_(std::move(pullback)) {
  if (pullback_->source.get() != source_.get() && !(pullback_->source->map() == source_->map()))
    fail_compose("pull-back is not taken along the source bundle");
  if (!identical(pullback_->relation->source_ptr(), target_->base_ptr()))
    fail_compose("relation must start at the target base");
  alpha_ = std::make_shared<const ComplexMap>(pullback_->complex, target_->total_ptr(), std::move(alpha));
  for (VertexId v = 0; v < pullback_->complex->num_vertices(); ++v)
    if (target_->map()((*alpha_)(v)) != pullback_->base_part[v])
      fail("outcome map does not lie over the target base at " + pullback_->complex->label(v));
}

BundleMorphism BundleMorphism::identity(BundlePtr f) {
  auto pb = pull_back_relation(f, SimplicialRelation::identity(f->base_ptr()));
  std::vector<VertexId> alpha;
  for (VertexId v = 0; v < pb->complex->num_vertices(); ++v) alpha.push_back(f->total().simplex(pb->total_part[v])[0]);
  return BundleMorphism(f, f, pb, std::move(alpha));
}

bool operator==(const BundleMorphism& a, const BundleMorphism& b) {
  return a.source_->map() == b.source_->map() && a.target_->map() == b.target_->map() && a.relation() == b.relation() &&
         a.alpha_->vertex_map() == b.alpha_->vertex_map();
}

BundleMorphism compose(const BundleMorphism& first, const BundleMorphism& second) {
  if (first.target_ptr().get() != second.source_ptr().get() && !(first.target().map() == second.source().map()))
    fail_compose("bundle morphisms are not composable");
  const BundleScenario& f = first.source();
  const SimplicialRelation& pi1 = first.relation();
  const SimplicialRelation& pi2 = second.relation();
  const RelationPullBack& pb1 = first.pullback();
  const RelationPullBack& pb2 = second.pullback();
  auto pb = pull_back_relation(first.source_ptr(), kleisli_compose(pi1, pi2));
  std::vector<VertexId> alpha;
  for (VertexId v = 0; v < pb->complex->num_vertices(); ++v) {
    SimplexId g = pb->total_part[v];
    VertexId z = pb->base_part[v];
    // push the pieces of g over pi1(y), y in pi2(z), through alpha1, then read alpha2
    Simplex mid;
    for (VertexId y : pi1.source().simplex(pi2(z)))
      mid.push_back(first.alpha()(*pb1.find(f.restrict(g, pi1(y)), y)));
    std::sort(mid.begin(), mid.end());
    mid.erase(std::unique(mid.begin(), mid.end()), mid.end());
    SimplexId gp = first.target().total().id_of(mid);
    alpha.push_back(second.alpha()(*pb2.find(gp, z)));
  }
  return BundleMorphism(first.source_ptr(), second.target_ptr(), pb, std::move(alpha));
}

BundleMorphism embed_scenario(const ScenarioMorphism& m, const CanonicalBundle& source, const CanonicalBundle& target) {
  if (!identical(m.source_ptr(), source.scenario) || !identical(m.target_ptr(), target.scenario))
    fail_compose("event bundles do not match the morphism");
  auto pb = pull_back_relation(source.bundle, m.relation());
  std::vector<VertexId> alpha;
  for (VertexId v = 0; v < pb->complex->num_vertices(); ++v) {
    VertexId x = pb->base_part[v];
    auto [sigma, s] = source.decode(pb->total_part[v]);
    alpha.push_back(target.vertex_of(x, m.alpha_at(x, s)));
  }
  return BundleMorphism(source.bundle, target.bundle, pb, std::move(alpha));
}

RelativeBundle relative_bundle(const CanonicalBundle& cb, const SimplicialRelation& pi) {
  const Scenario& scn = *cb.scenario;
  if (!identical(pi.target_ptr(), scn.complex_ptr())) fail_compose("relation does not land in the scenario");
  const Complex& nb = pi.source();
  RelativeBundle rb;
  std::vector<std::string> labels;
  std::vector<VertexId> first(nb.num_vertices());
  std::vector<VertexId> owner;
  for (VertexId y = 0; y < nb.num_vertices(); ++y) {
    first[y] = static_cast<VertexId>(labels.size());
    for (const Section& s : scn.sections(pi(y))) {
      SimplexId g = cb.simplex_of(pi(y), s);
      labels.push_back(nb.label(y) + ":" + cb.bundle->total().simplex_label(g));
      rb.vertices.emplace_back(y, s);
      rb.l.push_back(g);
      owner.push_back(y);
    }
  }
  std::vector<Simplex> gens;
  for (SimplexId m : nb.maximal()) {
    SimplexId over = pi.apply(m);
    for (const Section& s : scn.sections(over)) {
      Simplex g;
      for (VertexId y : nb.simplex(m))
        g.push_back(first[y] + static_cast<VertexId>(scn.section_index(pi(y), scn.restrict(over, s, pi(y)))));
      gens.push_back(std::move(g));
    }
  }
  auto total = share(Complex::close_downward(std::move(labels), gens));
  rb.bundle = share(BundleScenario(ComplexMap(total, pi.source_ptr(), std::move(owner))));
  return rb;
}

HatBundle hat_N_bundle(const BundleScenario& f, std::size_t cap) {
  HatBundle hb;
  hb.total = share(hat_N(f.total(), cap));
  hb.base = share(hat_N(f.base(), cap));
  hb.bundle = share(BundleScenario(hat_N_map(f.map(), hb.total, hb.base)));
  return hb;
}

}  // namespace ctxscen
