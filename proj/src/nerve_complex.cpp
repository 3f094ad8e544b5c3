#include "ctxscen/nerve_complex.hpp"

#include <algorithm>

#include "ctxscen/error.hpp"

namespace ctxscen {

Complex hat_N(const Complex& c, std::size_t cap) {
  std::vector<std::string> labels;
  labels.reserve(c.size());
  for (SimplexId s = 0; s < c.size(); ++s) labels.push_back(c.simplex_label(s));
  // Every family of faces of a maximal simplex has simplex union, and every
  // such family lies under some maximal simplex.
  std::size_t budget = 0;
  std::vector<Simplex> gens;
  for (SimplexId m : c.maximal()) {
    std::vector<SimplexId> fam = c.faces(m);
    if (fam.size() >= 40) fail_cap("nerve complex exceeds the simplex cap");
    budget += (std::size_t{1} << fam.size()) - 1;
    if (budget > cap) fail_cap("nerve complex exceeds the simplex cap of " + std::to_string(cap));
    gens.push_back(Simplex(fam.begin(), fam.end()));
  }
  return Complex::close_downward(std::move(labels), gens, cap);
}

ComplexMap hat_N_map(const ComplexMap& f, ComplexPtr hat_source, ComplexPtr hat_target) {
  if (hat_source->num_vertices() != f.source().size() || hat_target->num_vertices() != f.target().size())
    fail("nerve complexes do not match the map");
  std::vector<VertexId> vm(f.source().size());
  for (SimplexId s = 0; s < vm.size(); ++s) vm[s] = f.apply(s);
  return ComplexMap(std::move(hat_source), std::move(hat_target), std::move(vm));
}

ComplexMap nerve_unit(ComplexPtr c, ComplexPtr hat_c) {
  std::vector<VertexId> vm(c->num_vertices());
  for (VertexId v = 0; v < vm.size(); ++v) vm[v] = c->vertex_simplex(v);
  return ComplexMap(std::move(c), std::move(hat_c), std::move(vm));
}

ComplexMap nerve_mult(const Complex& c, ComplexPtr hat_c, ComplexPtr hat2_c) {
  if (hat_c->num_vertices() != c.size() || hat2_c->num_vertices() != hat_c->size())
    fail("nerve tower does not match");
  std::vector<VertexId> vm(hat2_c->num_vertices());
  for (VertexId fam = 0; fam < vm.size(); ++fam) {
    Simplex u;
    for (VertexId s : hat_c->simplex(fam)) u = simplex_union(u, c.simplex(s));
    vm[fam] = c.id_of(u);
  }
  return ComplexMap(std::move(hat2_c), std::move(hat_c), std::move(vm));
}

SimplicialRelation::SimplicialRelation(ComplexPtr source, ComplexPtr target, std::vector<SimplexId> values)
    : source_(std::move(source)), target_(std::move(target)), values_(std::move(values)) {
  if (!source_ || !target_) fail("relation needs a source and a target");
  if (values_.size() != source_->num_vertices()) fail("relation must assign every source vertex");
  for (SimplexId s : values_)
    if (s >= target_->size()) fail("relation value is not a simplex of the target");
  image_.resize(source_->size());
  for (SimplexId id = 0; id < source_->size(); ++id) {
    Simplex u = apply(source_->simplex(id));
    auto t = target_->find(u);
    if (!t) fail("relation image of " + source_->simplex_label(id) + " is not a simplex");
    image_[id] = *t;
  }
}

SimplicialRelation SimplicialRelation::identity(ComplexPtr c) {
  std::vector<SimplexId> vals(c->num_vertices());
  for (VertexId v = 0; v < vals.size(); ++v) vals[v] = c->vertex_simplex(v);
  return SimplicialRelation(c, c, std::move(vals));
}

SimplicialRelation SimplicialRelation::from_map(const ComplexMap& f) {
  std::vector<SimplexId> vals(f.source().num_vertices());
  for (VertexId v = 0; v < vals.size(); ++v) vals[v] = f.target().vertex_simplex(f(v));
  return SimplicialRelation(f.source_ptr(), f.target_ptr(), std::move(vals));
}

SimplicialRelation SimplicialRelation::from_nerve_map(const ComplexMap& f, ComplexPtr target) {
  if (f.target().num_vertices() != target->size()) fail("map does not land in the nerve of the target");
  return SimplicialRelation(f.source_ptr(), std::move(target), f.vertex_map());
}

Simplex SimplicialRelation::apply(const Simplex& source_simplex) const {
  Simplex u;
  for (VertexId v : source_simplex) u = simplex_union(u, target_->simplex(values_.at(v)));
  return u;
}

ComplexMap SimplicialRelation::to_nerve_map(ComplexPtr hat_target) const {
  if (hat_target->num_vertices() != target_->size()) fail("not the nerve of the relation target");
  return ComplexMap(source_, std::move(hat_target), values_);
}

SimplicialRelation kleisli_compose(const SimplicialRelation& pi, const SimplicialRelation& pi_prime) {
  if (!identical(pi_prime.target_ptr(), pi.source_ptr()))
    fail_compose("relations are not composable");
  std::vector<SimplexId> vals(pi_prime.source().num_vertices());
  for (VertexId v = 0; v < vals.size(); ++v) vals[v] = pi.apply(pi_prime(v));
  return SimplicialRelation(pi_prime.source_ptr(), pi.target_ptr(), std::move(vals));
}

}  // namespace ctxscen
