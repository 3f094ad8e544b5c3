#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ctxscen/complex.hpp"
#include "ctxscen/dist.hpp"

namespace testing_support {

using namespace ctxscen;
using Rng = std::mt19937_64;
using QDist = Dist<RationalSemiring, int>;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Random normalized rational weights on `elems` (some possibly zero unless `full`).
template <class T>
Dist<RationalSemiring, T> random_dist(Rng& rng, const std::vector<T>& elems, bool full = false) {
  std::vector<long> w(elems.size());
  long total = 0;
  while (total == 0) {
    total = 0;
    for (auto& x : w) {
      x = full ? uniform(rng, 1, 6) : (coin(rng, 0.3) ? 0 : uniform(rng, 1, 6));
      total += x;
    }
  }
  std::vector<typename Dist<RationalSemiring, T>::Entry> raw;
  for (std::size_t i = 0; i < elems.size(); ++i) raw.emplace_back(elems[i], q(w[i], total));
  return Dist<RationalSemiring, T>::from_weights(std::move(raw));
}

template <class T>
Dist<BooleanSemiring, T> random_support(Rng& rng, const std::vector<T>& elems) {
  std::vector<typename Dist<BooleanSemiring, T>::Entry> raw;
  for (const auto& e : elems)
    if (coin(rng)) raw.emplace_back(e, true);
  if (raw.empty()) raw.emplace_back(elems[uniform(rng, 0, static_cast<int>(elems.size()) - 1)], true);
  return Dist<BooleanSemiring, T>::from_weights(std::move(raw));
}

inline std::vector<std::string> names(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

inline ComplexPtr triangle() {
  return share(Complex::from_labels(names("x", 3), {{"x0", "x1"}, {"x1", "x2"}, {"x2", "x0"}}));
}
inline ComplexPtr square() {
  return share(Complex::from_labels(names("x", 4), {{"x0", "x1"}, {"x3", "x0"}, {"x1", "x2"}, {"x2", "x3"}}));
}
inline ComplexPtr edge() { return share(Complex::from_labels({"x", "y"}, {{"x", "y"}})); }
inline ComplexPtr point(const std::string& v = "v") { return share(Complex::from_labels({v}, {})); }
inline ComplexPtr full_simplex(int n) {
  auto l = names("x", n);
  return share(Complex::from_labels(l, {l}));
}

/// Random complex on `n` vertices whose generators have at most `max_size` vertices.
inline ComplexPtr random_complex(Rng& rng, int n, int max_size = 3, const std::string& stem = "v") {
  std::vector<Simplex> gens;
  int count = uniform(rng, 1, n + 1);
  for (int g = 0; g < count; ++g) {
    int k = uniform(rng, 1, std::min(n, max_size));
    std::vector<VertexId> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    gens.emplace_back(all.begin(), all.begin() + k);
  }
  return share(Complex::close_downward(names(stem, n), gens));
}

/// Random vertex map, not necessarily simplicial; retried until it is.
inline std::optional<ComplexMap> try_random_map(Rng& rng, ComplexPtr src, ComplexPtr tgt) {
  std::vector<VertexId> vm(src->num_vertices());
  for (auto& v : vm) v = uniform(rng, 0, static_cast<int>(tgt->num_vertices()) - 1);
  try {
    return ComplexMap(src, tgt, vm);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace testing_support

namespace testing_support {

/// Independent construction of the event bundle over `base`: vertices x:o,
/// one simplex per (context, assignment). When `sections` is nonempty only the
/// simplices under those global sections are kept.
inline ComplexMap event_bundle_map(ComplexPtr base, const std::vector<int>& outcomes,
                                   const std::vector<std::vector<int>>& sections = {}) {
  std::vector<std::string> labels;
  std::vector<VertexId> owner;
  std::vector<std::vector<VertexId>> id(base->num_vertices());
  for (VertexId x = 0; x < base->num_vertices(); ++x) {
    for (int o = 0; o < outcomes[x]; ++o) {
      bool used = sections.empty();
      for (const auto& sec : sections) used = used || sec[x] == o;
      id[x].push_back(static_cast<VertexId>(labels.size()));
      if (!used) continue;
      labels.push_back(base->label(x) + ":" + std::to_string(o));
      owner.push_back(x);
    }
  }
  std::vector<Simplex> gens;
  if (sections.empty()) {
    for (SimplexId m : base->maximal()) {
      const Simplex& s = base->simplex(m);
      std::vector<int> a(s.size(), 0);
      while (true) {
        Simplex g;
        for (std::size_t i = 0; i < s.size(); ++i) g.push_back(id[s[i]][a[i]]);
        gens.push_back(g);
        std::size_t i = 0;
        while (i < s.size() && ++a[i] == outcomes[s[i]]) a[i++] = 0;
        if (i == s.size()) break;
      }
    }
  } else {
    for (const auto& sec : sections)
      for (SimplexId m : base->maximal()) {
        Simplex g;
        for (VertexId x : base->simplex(m)) g.push_back(id[x][sec[x]]);
        gens.push_back(g);
      }
  }
  auto total = share(Complex::close_downward(labels, gens));
  return ComplexMap(total, base, owner);
}

/// All simplicial maps between two small complexes.
inline std::vector<ComplexMap> all_maps(ComplexPtr src, ComplexPtr tgt) {
  std::vector<ComplexMap> out;
  std::size_t n = src->num_vertices(), k = tgt->num_vertices();
  std::vector<VertexId> vm(n, 0);
  while (true) {
    try {
      out.emplace_back(src, tgt, vm);
    } catch (const Error&) {
    }
    std::size_t i = 0;
    while (i < n && ++vm[i] == k) vm[i++] = 0;
    if (i == n) break;
  }
  return out;
}

}  // namespace testing_support

namespace testing_support {

/// Bijective on vertices and on simplices.
inline bool is_isomorphism(const ComplexMap& f) {
  if (f.source().num_vertices() != f.target().num_vertices() || f.source().size() != f.target().size()) return false;
  std::vector<char> hit(f.target().size(), 0);
  for (SimplexId s = 0; s < f.source().size(); ++s) {
    if (hit[f.apply(s)]) return false;
    hit[f.apply(s)] = 1;
  }
  return true;
}

/// Random bundle: sub-bundle of an event bundle generated by random global sections.
inline ComplexMap random_bundle_map(Rng& rng, ComplexPtr base, int max_outcomes = 2, bool full = false) {
  std::vector<int> outs(base->num_vertices());
  for (auto& o : outs) o = uniform(rng, 1, max_outcomes);
  if (full) return event_bundle_map(base, outs);
  std::vector<std::vector<int>> secs(uniform(rng, 1, 4));
  for (auto& s : secs)
    for (int o : outs) s.push_back(uniform(rng, 0, o - 1));
  return event_bundle_map(base, outs, secs);
}

}  // namespace testing_support

#include "ctxscen/nerve_complex.hpp"

namespace testing_support {

inline SimplicialRelation random_relation(Rng& rng, ComplexPtr src, ComplexPtr tgt) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<SimplexId> vals(src->num_vertices());
    // bias towards vertices so that unions stay inside the target more often
    for (auto& v : vals)
      v = coin(rng, 0.6) ? tgt->vertex_simplex(uniform(rng, 0, static_cast<int>(tgt->num_vertices()) - 1))
                         : uniform(rng, 0, static_cast<int>(tgt->size()) - 1);
    try {
      return SimplicialRelation(src, tgt, vals);
    } catch (const Error&) {
    }
  }
  std::vector<SimplexId> c(src->num_vertices(), uniform(rng, 0, static_cast<int>(tgt->size()) - 1));
  return SimplicialRelation(src, tgt, c);
}

}  // namespace testing_support
