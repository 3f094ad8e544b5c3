#include "ctxscen/bundle.hpp"
#include "ctxscen/nerve_complex.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace ctxscen;
using namespace testing_support;

namespace {

/// All complexes on up to four vertices whose generators are edges, plus a few with triangles.
std::vector<ComplexPtr> small_complexes() {
  std::vector<ComplexPtr> out;
  for (int n = 1; n <= 4; ++n) {
    std::vector<Simplex> edges;
    for (VertexId a = 0; a < static_cast<VertexId>(n); ++a)
      for (VertexId b = a + 1; b < static_cast<VertexId>(n); ++b) edges.push_back({a, b});
    for (unsigned mask = 0; mask < (1u << edges.size()); ++mask) {
      std::vector<Simplex> gens;
      for (std::size_t i = 0; i < edges.size(); ++i)
        if (mask >> i & 1) gens.push_back(edges[i]);
      out.push_back(share(Complex::close_downward(names("v", n), gens)));
    }
  }
  out.push_back(full_simplex(3));
  out.push_back(share(Complex::close_downward(names("v", 4), {{0, 1, 2}, {2, 3}})));
  out.push_back(full_simplex(4));
  return out;
}

}  // namespace

TEST_CASE("hat_N examples") {
  auto p = hat_N(*point());
  CHECK(p.num_vertices() == 1);
  CHECK(p.size() == 1);
  CHECK(p.label(0) == "{v}");
  auto e = hat_N(*edge());
  CHECK(e.num_vertices() == 3);
  CHECK(e.size() == 7);
  auto t = hat_N(*triangle());
  // each edge contributes a 3-vertex family; families from different edges never mix
  CHECK(t.num_vertices() == 6);
  CHECK(t.maximal().size() == 3);
  try {
    hat_N(*full_simplex(6), 10'000);
    FAIL("expected a cap refusal");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::cap_exceeded);
  }
}

TEST_CASE("hat_N simplices are exactly the families with simplex union") {
  for (auto c : small_complexes()) {
    if (c->size() > 12) continue;
    auto h = hat_N(*c);
    CHECK(h.num_vertices() == c->size());
    // count families directly
    std::size_t count = 0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << c->size()); ++mask) {
      Simplex u;
      Simplex fam;
      for (SimplexId s = 0; s < c->size(); ++s)
        if (mask >> s & 1) {
          u = simplex_union(u, c->simplex(s));
          fam.push_back(s);
        }
      bool in_c = c->contains(u);
      CHECK(h.contains(fam) == in_c);
      count += in_c;
    }
    CHECK(h.size() == count);
  }
}

TEST_CASE("unit and multiplication") {
  auto e = edge();
  auto h = share(hat_N(*e));
  auto h2 = share(hat_N(*h));
  auto delta = nerve_unit(e, h);
  auto mu = nerve_mult(*e, h, h2);
  // mu({{x},{x,y}}) = {x,y}
  SimplexId x = e->id_of({0}), xy = e->id_of({0, 1});
  SimplexId fam = h->id_of({std::min(x, xy), std::max(x, xy)});
  CHECK(mu(fam) == xy);
  CHECK(delta(0) == x);
  auto delta_h = nerve_unit(h, h2);
  CHECK(compose(mu, delta_h) == ComplexMap::identity(h));
  CHECK(compose(mu, hat_N_map(delta, h, h2)) == ComplexMap::identity(h));
  auto pd = nerve_unit(point(), share(hat_N(*point())));
  CHECK(pd(0) == 0);
}

TEST_CASE("monad laws on small complexes") {
  int with_assoc = 0;
  for (auto c : small_complexes()) {
    auto h = share(hat_N(*c));
    auto delta = nerve_unit(c, h);
    // unit laws as functions on simplices of hat_N(c), so no second nerve is needed:
    // mu(delta_hat(F)) = mu({F}) = F and mu(hat_N(delta)(F)) = union of singletons = F
    for (SimplexId f = 0; f < h->size(); ++f) {
      Simplex u;
      for (VertexId s : h->simplex(f)) u = simplex_union(u, c->simplex(s));
      SimplexId uid = c->id_of(u);
      if (h->simplex(f).size() == 1) CHECK(uid == h->simplex(f)[0]);
      Simplex singles;
      for (VertexId v : c->simplex(uid)) singles.push_back(c->vertex_simplex(v));
      std::sort(singles.begin(), singles.end());
      CHECK(h->find(singles).has_value());
    }
    if (c->size() > 12) continue;
    ComplexPtr h2;
    try {
      h2 = share(hat_N(*h, 100'000));
    } catch (const Error&) {
      continue;  // second nerve too large, e.g. over a filled triangle
    }
    auto mu = nerve_mult(*c, h, h2);
    CHECK(compose(mu, nerve_unit(h, h2)) == ComplexMap::identity(h));
    CHECK(compose(mu, hat_N_map(delta, h, h2)) == ComplexMap::identity(h));
    // associativity on vertices of the third nerve, i.e. simplices of h2:
    // mu(hat_N(mu)(P)) = mu(mu_hat(P))
    for (SimplexId phi = 0; phi < h2->size(); ++phi) {
      VertexId left = mu(mu.apply(phi));
      Simplex u;
      for (VertexId fam : h2->simplex(phi)) u = simplex_union(u, h->simplex(fam));
      VertexId right = mu(h->id_of(u));
      CHECK(left == right);
    }
    ++with_assoc;
  }
  CHECK(with_assoc > 10);
}

TEST_CASE("unit and multiplication are natural") {
  Rng rng(8);
  for (int t = 0; t < 40; ++t) {
    auto a = random_complex(rng, uniform(rng, 1, 3), 2, "a");
    auto b = random_complex(rng, uniform(rng, 1, 3), 2, "b");
    auto f = try_random_map(rng, a, b);
    if (!f) continue;
    auto ha = share(hat_N(*a)), hb = share(hat_N(*b));
    auto hf = hat_N_map(*f, ha, hb);
    CHECK(compose(hf, nerve_unit(a, ha)) == compose(nerve_unit(b, hb), *f));
    if (ha->size() > 200 || hb->size() > 200) continue;
    auto h2a = share(hat_N(*ha)), h2b = share(hat_N(*hb));
    auto h2f = hat_N_map(hf, h2a, h2b);
    CHECK(compose(nerve_mult(*b, hb, h2b), h2f) == compose(hf, nerve_mult(*a, ha, h2a)));
    // functoriality of hat_N on a composite
    auto g = try_random_map(rng, b, a);
    if (!g) continue;
    CHECK(hat_N_map(compose(*g, *f), ha, ha) == compose(hat_N_map(*g, hb, ha), hf));
  }
}

TEST_CASE("apply_relation and kleisli_compose examples") {
  auto tri = triangle();
  auto sq = square();
  SimplicialRelation pi = SimplicialRelation::from_map(ComplexMap(sq, tri, {0, 1, 2, 2}));
  CHECK(pi.apply(sq->id_of({2, 3})) == tri->id_of({2}));
  CHECK(tri->simplex(pi.apply(sq->id_of({1, 2}))) == Simplex{1, 2});

  // relation read from a plain map agrees with the simplex image of the map
  ComplexMap plain(sq, tri, {0, 1, 2, 2});
  for (SimplexId s = 0; s < sq->size(); ++s) CHECK(pi.apply(s) == plain.apply(s));

  // constant relation
  SimplexId e01 = tri->id_of({0, 1});
  SimplicialRelation constant(sq, tri, {e01, e01, e01, e01});
  for (SimplexId s = 0; s < sq->size(); ++s) CHECK(constant.apply(s) == e01);

  // path y0-y1-y2-y3 into the square, with y3 spread over {x2,x3}
  auto path = share(Complex::from_labels(names("y", 4), {{"y0", "y1"}, {"y1", "y2"}, {"y2", "y3"}}));
  SimplicialRelation pi2(path, sq, {sq->id_of({0}), sq->id_of({1}), sq->id_of({2}), sq->id_of({2, 3})});
  auto comp = kleisli_compose(pi, pi2);
  CHECK(comp(3) == tri->id_of({2}));
  CHECK(kleisli_compose(pi, SimplicialRelation::identity(sq)) == pi);
  CHECK(kleisli_compose(SimplicialRelation::identity(tri), pi) == pi);
  CHECK_THROWS_AS(kleisli_compose(pi2, pi), Error);

  // an assignment whose union leaves the complex is rejected
  CHECK_THROWS_AS(SimplicialRelation(sq, tri, {tri->id_of({0}), tri->id_of({1, 2}), tri->id_of({2}), tri->id_of({2})}),
                  Error);
}


TEST_CASE("Kleisli composition is associative and matches composite simplex functions") {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    auto a = random_complex(rng, uniform(rng, 1, 5), 3, "a");
    auto b = random_complex(rng, uniform(rng, 1, 5), 3, "b");
    auto c = random_complex(rng, uniform(rng, 1, 5), 3, "c");
    auto d = random_complex(rng, uniform(rng, 1, 5), 3, "d");
    auto p1 = random_relation(rng, b, a);
    auto p2 = random_relation(rng, c, b);
    auto p3 = random_relation(rng, d, c);
    auto p12 = kleisli_compose(p1, p2);
    for (SimplexId s = 0; s < c->size(); ++s) CHECK(p12.apply(s) == p1.apply(p2.apply(s)));
    CHECK(kleisli_compose(p12, p3) == kleisli_compose(p1, kleisli_compose(p2, p3)));
    CHECK(kleisli_compose(p1, SimplicialRelation::identity(b)) == p1);
    CHECK(kleisli_compose(SimplicialRelation::identity(a), p1) == p1);
    // as maps into the nerve: the relation is a simplicial map c -> hat_N(b)
    if (b->size() <= 40) {
      auto hb = share(hat_N(*b));
      auto m = p2.to_nerve_map(hb);
      CHECK(SimplicialRelation::from_nerve_map(m, b) == p2);
    }
  }
}

TEST_CASE("hat_N preserves bundle scenarios") {
  Rng rng(21);
  int tested = 0;
  while (tested < 40) {
    auto base = random_complex(rng, uniform(rng, 1, 4), 2);
    auto fmap = random_bundle_map(rng, base, 2, coin(rng));
    if (fmap.source().size() > 14) continue;
    auto ht = share(hat_N(fmap.source()));
    auto hb = share(hat_N(*base));
    auto flags = classify_map(hat_N_map(fmap, ht, hb));
    CHECK(flags.surjective);
    CHECK(flags.locally_surjective);
    CHECK(flags.discrete_over_vertices);
    ++tested;
  }
}

TEST_CASE("the unit square over a vertex-discrete map is a pull-back") {
  Rng rng(22);
  int tested = 0;
  while (tested < 30) {
    auto base = random_complex(rng, uniform(rng, 1, 4), 2);
    auto fmap = random_bundle_map(rng, base, 2, coin(rng));
    if (fmap.source().size() > 14) continue;
    auto gamma = fmap.source_ptr();
    auto hg = share(hat_N(*gamma));
    auto hb = share(hat_N(*base));
    BundleScenario hf(hat_N_map(fmap, hg, hb));
    auto pb = pull_back(hf, nerve_unit(base, hb));
    // comparison map gamma -> pull-back, v -> ({v}, f(v))
    std::vector<VertexId> cmp(gamma->num_vertices());
    for (VertexId v = 0; v < gamma->num_vertices(); ++v) {
      auto it = std::find(pb.pairs.begin(), pb.pairs.end(), std::make_pair(gamma->vertex_simplex(v), fmap(v)));
      REQUIRE(it != pb.pairs.end());
      cmp[v] = static_cast<VertexId>(it - pb.pairs.begin());
    }
    CHECK(is_isomorphism(ComplexMap(gamma, pb.complex, cmp)));
    ++tested;
  }
}
