#include "ctxscen/complex.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "ctxscen/error.hpp"

namespace ctxscen {

Simplex simplex_union(const Simplex& a, const Simplex& b) {
  Simplex out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const Simplex& small, const Simplex& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

Complex Complex::close_downward(std::vector<std::string> labels, const std::vector<Simplex>& generators,
                                std::size_t cap) {
  if (labels.empty()) fail("complex needs at least one vertex");
  Complex c;
  c.labels_ = std::move(labels);
  for (VertexId v = 0; v < c.labels_.size(); ++v) {
    if (c.labels_[v].empty()) fail("empty vertex label");
    if (!c.label_index_.emplace(c.labels_[v], v).second) fail("duplicate vertex label '" + c.labels_[v] + "'");
  }

  std::unordered_set<Simplex, SimplexHash> seen;
  auto insert = [&](Simplex s) {
    if (seen.insert(std::move(s)).second && seen.size() > cap)
      fail_cap("complex exceeds the simplex cap of " + std::to_string(cap));
  };
  for (VertexId v = 0; v < c.labels_.size(); ++v) insert(Simplex{v});

  for (Simplex g : generators) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    if (g.empty()) fail("empty simplex in complex description");
    if (g.back() >= c.labels_.size()) fail("simplex refers to an unknown vertex");
    if (seen.count(g)) continue;
    if (g.size() >= 40 || (std::size_t{1} << g.size()) > cap + 1)
      fail_cap("complex exceeds the simplex cap of " + std::to_string(cap));
    std::uint64_t limit = std::uint64_t{1} << g.size();
    for (std::uint64_t mask = 1; mask < limit; ++mask) {
      Simplex s;
      for (std::size_t i = 0; i < g.size(); ++i)
        if (mask >> i & 1) s.push_back(g[i]);
      insert(std::move(s));
    }
  }

  c.simplices_.assign(seen.begin(), seen.end());
  std::sort(c.simplices_.begin(), c.simplices_.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  c.index_.reserve(c.simplices_.size());
  c.vertex_simplex_.assign(c.labels_.size(), 0);
  c.incident_.assign(c.labels_.size(), {});
  for (SimplexId id = 0; id < c.simplices_.size(); ++id) {
    const Simplex& s = c.simplices_[id];
    c.index_.emplace(s, id);
    if (s.size() == 1) c.vertex_simplex_[s[0]] = id;
    for (VertexId v : s) c.incident_[v].push_back(id);
  }
  std::vector<char> covered(c.simplices_.size(), 0);
  for (const Simplex& s : c.simplices_) {
    if (s.size() < 2) continue;
    for (std::size_t skip = 0; skip < s.size(); ++skip) {
      Simplex face;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (i != skip) face.push_back(s[i]);
      covered[c.index_.at(face)] = 1;
    }
  }
  for (SimplexId id = 0; id < c.simplices_.size(); ++id)
    if (!covered[id]) c.maximal_.push_back(id);
  return c;
}

Complex Complex::from_labels(std::vector<std::string> labels, const std::vector<std::vector<std::string>>& generators,
                             std::size_t cap) {
  std::map<std::string, VertexId> index;
  for (VertexId v = 0; v < labels.size(); ++v) index.emplace(labels[v], v);
  std::vector<Simplex> gens;
  for (const auto& g : generators) {
    Simplex s;
    for (const auto& l : g) {
      auto it = index.find(l);
      if (it == index.end()) fail("simplex refers to unknown vertex '" + l + "'");
      s.push_back(it->second);
    }
    gens.push_back(std::move(s));
  }
  return close_downward(std::move(labels), gens, cap);
}

std::optional<VertexId> Complex::find_vertex(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

VertexId Complex::vertex(std::string_view label) const {
  auto v = find_vertex(label);
  if (!v) fail("unknown vertex '" + std::string(label) + "'");
  return *v;
}

std::optional<SimplexId> Complex::find(const Simplex& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SimplexId Complex::id_of(const Simplex& s) const {
  auto id = find(s);
  if (!id) fail("not a simplex: " + simplex_label(s));
  return *id;
}

std::vector<SimplexId> Complex::star(SimplexId id) const {
  const Simplex& s = simplex(id);
  std::vector<SimplexId> out = incident_[s[0]];
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::vector<SimplexId> next;
    const auto& inc = incident_[s[i]];
    std::set_intersection(out.begin(), out.end(), inc.begin(), inc.end(), std::back_inserter(next));
    out = std::move(next);
  }
  return out;
}

std::vector<SimplexId> Complex::faces(SimplexId id) const {
  const Simplex& s = simplex(id);
  std::vector<SimplexId> out;
  std::uint64_t limit = std::uint64_t{1} << s.size();
  for (std::uint64_t mask = 1; mask < limit; ++mask) {
    Simplex f;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (mask >> i & 1) f.push_back(s[i]);
    out.push_back(index_.at(f));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Complex::simplex_label(const Simplex& s) const {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += s[i] < labels_.size() ? labels_[s[i]] : "?";
  }
  return out + "}";
}

std::string Complex::simplex_label(SimplexId id) const { return simplex_label(simplex(id)); }

std::vector<std::string> Complex::simplex_labels(const Simplex& s) const {
  std::vector<std::string> out;
  for (VertexId v : s) out.push_back(labels_.at(v));
  return out;
}

bool Complex::same_as(const Complex& other) const {
  if (size() != other.size() || num_vertices() != other.num_vertices()) return false;
  auto as_sets = [](const Complex& c) {
    std::set<std::vector<std::string>> out;
    for (const Simplex& s : c.simplices_) {
      auto l = c.simplex_labels(s);
      std::sort(l.begin(), l.end());
      out.insert(std::move(l));
    }
    return out;
  };
  return as_sets(*this) == as_sets(other);
}

ComplexMap::ComplexMap(ComplexPtr source, ComplexPtr target, std::vector<VertexId> vertex_map)
    : source_(std::move(source)), target_(std::move(target)), vertex_map_(std::move(vertex_map)) {
  if (!source_ || !target_) fail("complex map needs a source and a target");
  if (vertex_map_.size() != source_->num_vertices()) fail("complex map must assign every source vertex");
  for (VertexId v : vertex_map_)
    if (v >= target_->num_vertices()) fail("complex map assigns an unknown target vertex");
  simplex_map_.resize(source_->size());
  for (SimplexId id = 0; id < source_->size(); ++id) {
    Simplex img = image(source_->simplex(id));
    auto t = target_->find(img);
    if (!t)
      fail("image of " + source_->simplex_label(id) + " is not a simplex of the target");
    simplex_map_[id] = *t;
  }
}

ComplexMap ComplexMap::identity(ComplexPtr c) {
  std::vector<VertexId> vm(c->num_vertices());
  for (VertexId v = 0; v < vm.size(); ++v) vm[v] = v;
  return ComplexMap(c, c, std::move(vm));
}

Simplex ComplexMap::image(const Simplex& s) const {
  Simplex out;
  out.reserve(s.size());
  for (VertexId v : s) out.push_back(vertex_map_.at(v));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ComplexMap compose(const ComplexMap& g, const ComplexMap& f) {
  if (!identical(f.target_ptr(), g.source_ptr()))
    fail_compose("complex maps are not composable");
  std::vector<VertexId> vm(f.source().num_vertices());
  for (VertexId v = 0; v < vm.size(); ++v) vm[v] = g(f(v));
  return ComplexMap(f.source_ptr(), g.target_ptr(), std::move(vm));
}

MapFlags classify_map(const ComplexMap& f) {
  const Complex& src = f.source();
  const Complex& tgt = f.target();
  MapFlags flags;

  std::vector<char> hit(tgt.size(), 0);
  for (SimplexId id = 0; id < src.size(); ++id) hit[f.apply(id)] = 1;
  flags.surjective = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });

  flags.locally_surjective = true;
  for (SimplexId g = 0; g < src.size() && flags.locally_surjective; ++g) {
    std::vector<SimplexId> images;
    for (SimplexId s : src.star(g)) images.push_back(f.apply(s));
    std::sort(images.begin(), images.end());
    images.erase(std::unique(images.begin(), images.end()), images.end());
    std::vector<SimplexId> wanted = tgt.star(f.apply(g));
    if (!std::includes(images.begin(), images.end(), wanted.begin(), wanted.end())) flags.locally_surjective = false;
  }

  flags.discrete_over_vertices = true;
  for (const Simplex& s : src.simplices()) {
    if (s.size() == 2 && f(s[0]) == f(s[1])) {
      flags.discrete_over_vertices = false;
      break;
    }
  }
  return flags;
}

namespace {

bool spans_simplex(const Complex& c, std::vector<VertexId> tuple) {
  if (tuple.empty()) return true;
  std::sort(tuple.begin(), tuple.end());
  tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
  return c.contains(tuple);
}

}  // namespace

std::optional<std::vector<VertexId>> lifting_check(const ComplexMap& f, const Monotone& theta,
                                                   const std::vector<VertexId>& top,
                                                   const std::vector<VertexId>& bottom) {
  const Complex& total = f.source();
  const Complex& base = f.target();
  if (theta.n < 0 || bottom.size() != static_cast<std::size_t>(theta.n) + 1) fail("bottom map must have n+1 vertices");
  if (top.size() != theta.values.size()) fail("top map must match the source of theta");
  for (std::size_t i = 0; i < theta.values.size(); ++i) {
    if (theta.values[i] < 0 || theta.values[i] > theta.n) fail("theta out of range");
    if (i && theta.values[i] < theta.values[i - 1]) fail("theta is not monotone");
  }
  for (VertexId v : top)
    if (v >= total.num_vertices()) fail("top map uses an unknown vertex");
  for (VertexId v : bottom)
    if (v >= base.num_vertices()) fail("bottom map uses an unknown vertex");
  if (!spans_simplex(total, top) || !spans_simplex(base, bottom)) fail("square corners are not simplicial maps");
  for (std::size_t i = 0; i < top.size(); ++i)
    if (f(top[i]) != bottom[theta.values[i]]) fail("lifting square does not commute");

  const std::size_t n = bottom.size();
  std::vector<std::optional<VertexId>> forced(n);
  for (std::size_t i = 0; i < top.size(); ++i) {
    auto& slot = forced[theta.values[i]];
    if (slot && *slot != top[i]) return std::nullopt;
    slot = top[i];
  }
  std::vector<std::vector<VertexId>> over(base.num_vertices());
  for (VertexId v = 0; v < total.num_vertices(); ++v) over[f(v)].push_back(v);

  std::vector<VertexId> h(n);
  // Depth-first over positions, pruning as soon as the partial image leaves the complex.
  auto search = [&](auto&& self, std::size_t j) -> bool {
    if (j == n) return true;
    std::vector<VertexId> candidates = forced[j] ? std::vector<VertexId>{*forced[j]} : over[bottom[j]];
    for (VertexId v : candidates) {
      h[j] = v;
      if (spans_simplex(total, std::vector<VertexId>(h.begin(), h.begin() + j + 1)) && self(self, j + 1)) return true;
    }
    return false;
  };
  if (!search(search, 0)) return std::nullopt;
  return h;
}

MapFlags lifting_flags(const ComplexMap& f) {
  const Complex& total = f.source();
  const Complex& base = f.target();
  MapFlags flags{true, true, true};

  // Empty source: a lift of every simplex of the base.
  for (const Simplex& s : base.simplices()) {
    Monotone theta{static_cast<int>(s.size()) - 1, {}};
    if (!lifting_check(f, theta, {}, s)) {
      flags.surjective = false;
      break;
    }
  }

  // d^n : [n-1] -> [n] for every simplex on top and every extra base vertex.
  for (SimplexId g = 0; g < total.size() && flags.locally_surjective; ++g) {
    const Simplex& top = total.simplex(g);
    std::vector<VertexId> bottom;
    for (VertexId v : top) bottom.push_back(f(v));
    Monotone theta{static_cast<int>(top.size()), {}};
    for (int i = 0; i < static_cast<int>(top.size()); ++i) theta.values.push_back(i);
    for (VertexId u = 0; u < base.num_vertices(); ++u) {
      std::vector<VertexId> b = bottom;
      b.push_back(u);
      if (!spans_simplex(base, b)) continue;
      if (!lifting_check(f, theta, top, b)) {
        flags.locally_surjective = false;
        break;
      }
    }
  }

  // s^0 : [1] -> [0] for every pair spanning a simplex.
  for (const Simplex& s : total.simplices()) {
    if (s.size() != 2 || f(s[0]) != f(s[1])) continue;
    Monotone theta{0, {0, 0}};
    if (!lifting_check(f, theta, s, {f(s[0])})) {
      flags.discrete_over_vertices = false;
      break;
    }
  }
  return flags;
}

}  // namespace ctxscen
