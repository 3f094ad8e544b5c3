#include "ctxscen/simplicial_scen.hpp"

#include <algorithm>
#include <map>

namespace ctxscen {

namespace {

SimplexId entry_union(const Complex& c, SimplexId a, SimplexId b) {
  if (a == kEmptyEntry) return b;
  if (b == kEmptyEntry) return a;
  if (a == b) return a;
  auto u = c.find(simplex_union(c.simplex(a), c.simplex(b)));
  return u ? *u : kEmptyEntry - 1;  // sentinel: not a simplex
}

std::string tuple_label(const Complex& c, const std::vector<SimplexId>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += t[i] == kEmptyEntry ? "{}" : c.simplex_label(t[i]);
  }
  return s + ")";
}

// Applies `entry` to every component and looks the tuple up in `target`.
template <class Entry>
SSetMap tuplewise(const NerveSpace& source, const NerveSpace& target, Entry&& entry) {
  std::vector<std::vector<ElemId>> levels(source.dim() + 1);
  for (int n = 0; n <= source.dim(); ++n)
    for (const auto& t : source.tuples[n]) {
      std::vector<SimplexId> img;
      for (SimplexId s : t) img.push_back(s == kEmptyEntry ? kEmptyEntry : entry(s));
      auto id = target.find(n, img);
      if (!id) fail("image tuple " + tuple_label(*target.complex, img) + " is not in the target nerve");
      levels[n].push_back(*id);
    }
  return SSetMap(source.sset, target.sset, std::move(levels));
}

}  // namespace

std::optional<ElemId> NerveSpace::find(int n, const std::vector<SimplexId>& t) const {
  auto it = index.at(n).find(t);
  if (it == index[n].end()) return std::nullopt;
  return it->second;
}

ElemId NerveSpace::id_of(int n, const std::vector<SimplexId>& t) const {
  auto id = find(n, t);
  if (!id) fail("tuple " + tuple_label(*complex, t) + " is not in the nerve");
  return *id;
}

NervePtr nerve_space(ComplexPtr c, int dim, std::size_t cap) {
  if (dim < 1) fail("nerve spaces need a dimension bound of at least 1");
  auto ns = std::make_shared<NerveSpace>();
  ns->complex = c;
  ns->tuples.resize(dim + 1);
  ns->unions.resize(dim + 1);
  ns->index.resize(dim + 1);
  ns->tuples[0].push_back({});
  ns->unions[0].push_back(kEmptyEntry);
  ns->index[0].emplace(std::vector<SimplexId>{}, 0);
  std::size_t total = 1;
  std::map<std::pair<SimplexId, SimplexId>, SimplexId> memo;
  auto join = [&](SimplexId a, SimplexId b) {
    auto [it, fresh] = memo.try_emplace({a, b}, 0);
    if (fresh) it->second = entry_union(*c, a, b);
    return it->second;
  };
  for (int n = 1; n <= dim; ++n) {
    for (std::size_t k = 0; k < ns->tuples[n - 1].size(); ++k) {
      SimplexId u = ns->unions[n - 1][k];
      for (SimplexId e = 0; e <= c->size(); ++e) {
        SimplexId entry = e == c->size() ? kEmptyEntry : e;
        SimplexId nu = join(u, entry);
        if (nu == kEmptyEntry - 1) continue;
        auto t = ns->tuples[n - 1][k];
        t.push_back(entry);
        ns->index[n].emplace(t, static_cast<ElemId>(ns->tuples[n].size()));
        ns->tuples[n].push_back(std::move(t));
        ns->unions[n].push_back(nu);
        if (++total > cap) fail_cap("nerve space exceeds the simplex cap of " + std::to_string(cap));
      }
    }
  }
  std::vector<std::size_t> counts;
  std::vector<std::vector<BoundedSSet::Table>> faces(dim + 1), degens(dim);
  std::vector<std::vector<std::string>> labels(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    counts.push_back(ns->tuples[n].size());
    for (const auto& t : ns->tuples[n]) labels[n].push_back(tuple_label(*c, t));
    if (n > 0) {
      faces[n].resize(n + 1);
      for (int i = 0; i <= n; ++i)
        for (const auto& t : ns->tuples[n]) {
          std::vector<SimplexId> r;
          if (i == 0) {
            r.assign(t.begin() + 1, t.end());
          } else if (i == n) {
            r.assign(t.begin(), t.end() - 1);
          } else {
            r.assign(t.begin(), t.begin() + (i - 1));
            r.push_back(join(t[i - 1], t[i]));
            r.insert(r.end(), t.begin() + (i + 1), t.end());
          }
          faces[n][i].push_back(ns->index[n - 1].at(r));
        }
    }
    if (n < dim) {
      degens[n].resize(n + 1);
      for (int j = 0; j <= n; ++j)
        for (const auto& t : ns->tuples[n]) {
          auto r = t;
          r.insert(r.begin() + j, kEmptyEntry);
          degens[n][j].push_back(ns->index[n + 1].at(r));
        }
    }
  }
  ns->sset = share(BoundedSSet(dim, std::move(counts), std::move(faces), std::move(degens), std::move(labels)));
  return ns;
}

SSetMap nerve_smap(const ComplexMap& f, const NerveSpace& source, const NerveSpace& target) {
  if (!identical(f.source_ptr(), source.complex) || !identical(f.target_ptr(), target.complex))
    fail_compose("complex map does not match the nerves");
  return tuplewise(source, target, [&](SimplexId s) { return f.apply(s); });
}

SSetMap T_of_relation(const SimplicialRelation& pi, const NerveSpace& source, const NerveSpace& target) {
  if (!identical(pi.source_ptr(), source.complex) || !identical(pi.target_ptr(), target.complex))
    fail_compose("relation does not match the nerves");
  return tuplewise(source, target, [&](SimplexId s) { return pi.apply(s); });
}

SSetMap mu_tilde(const NerveSpace& nhat, const NerveSpace& n) {
  const Complex& c = *n.complex;
  const Complex& h = *nhat.complex;
  if (h.num_vertices() != c.size()) fail_compose("first nerve is not over the nerve complex of the second");
  return tuplewise(nhat, n, [&](SimplexId fam) {
    Simplex u;
    for (VertexId s : h.simplex(fam)) u = simplex_union(u, c.simplex(s));
    return c.id_of(u);
  });
}

SimplicialRelation recover_relation(const SSetMap& F, const NerveSpace& source, const NerveSpace& target) {
  if (!identical(F.source_ptr(), source.sset) || !identical(F.target_ptr(), target.sset))
    fail_compose("map does not match the nerves");
  const Complex& c = *source.complex;
  std::vector<SimplexId> values;
  for (VertexId x = 0; x < c.num_vertices(); ++x) {
    SimplexId s = target.tuples[1][F(1, source.level_one(c.vertex_simplex(x)))][0];
    if (s == kEmptyEntry) fail("vertex " + c.label(x) + " goes to the empty simplex; no relation induces this map");
    values.push_back(s);
  }
  SimplicialRelation pi(source.complex, target.complex, std::move(values));
  if (!(T_of_relation(pi, source, target) == F)) fail("map is not induced by a relation");
  return pi;
}

ComplexMap recover_complex_map(const SSetMap& F, const NerveSpace& source, const NerveSpace& target) {
  if (!identical(F.source_ptr(), source.sset) || !identical(F.target_ptr(), target.sset))
    fail_compose("map does not match the nerves");
  const Complex& c = *source.complex;
  std::vector<VertexId> vm;
  for (VertexId x = 0; x < c.num_vertices(); ++x) {
    SimplexId s = target.tuples[1][F(1, source.level_one(c.vertex_simplex(x)))][0];
    if (s == kEmptyEntry || target.complex->simplex(s).size() != 1)
      fail("vertex " + c.label(x) + " does not go to a vertex");
    vm.push_back(target.complex->simplex(s)[0]);
  }
  ComplexMap alpha(source.complex, target.complex, std::move(vm));
  if (!(nerve_smap(alpha, source, target) == F)) fail("map is not the nerve of a complex map");
  return alpha;
}

NerveBundle nerve_bundle(BundlePtr f, int dim, std::size_t cap) {
  NerveBundle nb;
  nb.bundle = f;
  nb.total = nerve_space(f->total_ptr(), dim, cap);
  nb.base = nerve_space(f->base_ptr(), dim, cap);
  nb.scenario = share(SimplicialScenario(share(nerve_smap(f->map(), *nb.total, *nb.base))));
  return nb;
}

std::vector<SimplexId> pullback_tuple(const SSetPullBack& spb, int n, ElemId k, const NerveSpace& total,
                                      const NerveSpace& base_prime, const RelationPullBack& rpb) {
  auto [a, b] = spb.pairs.at(n).at(k);
  const auto& gam = total.tuples[n][a];
  const auto& sig = base_prime.tuples[n][b];
  const SimplicialRelation& pi = *rpb.relation;
  std::vector<SimplexId> out;
  for (int i = 0; i < n; ++i) {
    if (sig[i] == kEmptyEntry) {
      out.push_back(kEmptyEntry);
      continue;
    }
    Simplex vs;
    for (VertexId y : base_prime.complex->simplex(sig[i])) vs.push_back(*rpb.find(rpb.source->restrict(gam[i], pi(y)), y));
    std::sort(vs.begin(), vs.end());
    out.push_back(rpb.complex->id_of(vs));
  }
  return out;
}

SSetMap nerve_pullback_iso(const SSetPullBack& spb, const NerveSpace& total, const NerveSpace& base_prime,
                           const RelationPullBack& rpb, const NerveSpace& n_rpb) {
  std::vector<std::vector<ElemId>> levels(spb.sset->dim() + 1);
  for (int n = 0; n <= spb.sset->dim(); ++n)
    for (ElemId k = 0; k < spb.pairs[n].size(); ++k)
      levels[n].push_back(n_rpb.id_of(n, pullback_tuple(spb, n, k, total, base_prime, rpb)));
  return SSetMap(spb.sset, n_rpb.sset, std::move(levels));
}

SScenMorphism embed_bundle(const BundleMorphism& m, const NerveBundle& source, const NerveBundle& target) {
  if (!(m.source().map() == source.bundle->map()) || !(m.target().map() == target.bundle->map()))
    fail_compose("nerve bundles do not match the morphism");
  auto pi = share(T_of_relation(m.relation(), *target.base, *source.base));
  auto spb = pull_back_sset(source.scenario->map_ptr(), pi);
  std::vector<std::vector<ElemId>> alpha(spb->sset->dim() + 1);
  for (int n = 0; n <= spb->sset->dim(); ++n)
    for (ElemId k = 0; k < spb->pairs[n].size(); ++k) {
      auto t = pullback_tuple(*spb, n, k, *source.total, *target.base, m.pullback());
      for (auto& s : t)
        if (s != kEmptyEntry) s = m.alpha().apply(s);
      alpha[n].push_back(target.total->id_of(n, t));
    }
  return SScenMorphism(source.scenario, target.scenario, spb, std::move(alpha));
}

BundleMorphism recover_bundle_morphism(const SScenMorphism& m, const NerveBundle& source, const NerveBundle& target) {
  if (!(m.source().map() == source.scenario->map()) || !(m.target().map() == target.scenario->map()))
    fail_compose("nerve bundles do not match the morphism");
  auto pi = recover_relation(m.pi(), *target.base, *source.base);
  auto pb = pull_back_relation(source.bundle, pi);
  std::vector<VertexId> alpha;
  const Complex& tb = *target.base->complex;
  for (VertexId v = 0; v < pb->complex->num_vertices(); ++v) {
    ElemId a = source.total->level_one(pb->total_part[v]);
    ElemId b = target.base->level_one(tb.vertex_simplex(pb->base_part[v]));
    auto k = m.pullback().find(1, a, b);
    if (!k) fail("pull-back element missing for " + pb->complex->label(v));
    SimplexId img = target.total->tuples[1][m.alpha()(1, *k)][0];
    if (img == kEmptyEntry || target.bundle->total().simplex(img).size() != 1)
      fail("outcome map does not send " + pb->complex->label(v) + " to a vertex");
    alpha.push_back(target.bundle->total().simplex(img)[0]);
  }
  BundleMorphism out(source.bundle, target.bundle, pb, std::move(alpha));
  if (!(embed_bundle(out, source, target) == m)) fail("morphism is not in the image of the nerve functor");
  return out;
}

}  // namespace ctxscen
