#include "ctxscen/simplicial_set.hpp"

#include <map>

namespace ctxscen {

namespace {

std::string at_level(int n) { return " at level " + std::to_string(n); }

std::uint64_t key(ElemId a, ElemId b) { return (static_cast<std::uint64_t>(a) << 32) | b; }

}  // namespace

BoundedSSet::BoundedSSet(int dim, std::vector<std::size_t> counts, std::vector<std::vector<Table>> faces,
                         std::vector<std::vector<Table>> degens, std::vector<std::vector<std::string>> labels)
    : dim_(dim), counts_(std::move(counts)), faces_(std::move(faces)), degens_(std::move(degens)),
      labels_(std::move(labels)) {
  if (dim_ < 0) fail("dimension bound must be non-negative");
  if (static_cast<int>(counts_.size()) != dim_ + 1) fail("need one element count per level");
  if (static_cast<int>(faces_.size()) != dim_ + 1) fail("need face tables for levels 1.." + std::to_string(dim_));
  if (static_cast<int>(degens_.size()) != dim_) fail("need degeneracy tables for levels 0.." + std::to_string(dim_ - 1));
  if (!labels_.empty()) {
    if (labels_.size() != counts_.size()) fail("labels must cover every level");
    for (int n = 0; n <= dim_; ++n)
      if (labels_[n].size() != counts_[n]) fail("label count mismatch" + at_level(n));
  }
  if (counts_[0] > 0)
    for (int n = 1; n <= dim_; ++n)
      if (counts_[n] == 0) fail("empty level above a nonempty level 0");
  for (int n = 1; n <= dim_; ++n) {
    if (static_cast<int>(faces_[n].size()) != n + 1) fail("wrong number of face maps" + at_level(n));
    for (const auto& t : faces_[n]) {
      if (t.size() != counts_[n]) fail("face table size mismatch" + at_level(n));
      for (ElemId v : t)
        if (v >= counts_[n - 1]) fail("face value out of range" + at_level(n));
    }
  }
  degenerate_.assign(dim_ + 1, {});
  for (int n = 0; n <= dim_; ++n) degenerate_[n].assign(counts_[n], 0);
  for (int n = 0; n < dim_; ++n) {
    if (static_cast<int>(degens_[n].size()) != n + 1) fail("wrong number of degeneracy maps" + at_level(n));
    for (const auto& t : degens_[n]) {
      if (t.size() != counts_[n]) fail("degeneracy table size mismatch" + at_level(n));
      for (ElemId v : t) {
        if (v >= counts_[n + 1]) fail("degeneracy value out of range" + at_level(n));
        degenerate_[n + 1][v] = 1;
      }
    }
  }
  if (auto err = check_simplicial_identities(*this)) fail("simplicial identity fails: " + *err);
}

std::size_t BoundedSSet::total_size() const {
  std::size_t t = 0;
  for (auto c : counts_) t += c;
  return t;
}

std::string BoundedSSet::label(int n, ElemId x) const {
  if (!labels_.empty()) return labels_.at(n).at(x);
  return std::to_string(n) + ":" + std::to_string(x);
}

std::optional<std::string> check_simplicial_identities(const BoundedSSet& x) {
  int dim = x.dim();
  auto where = [&](const char* what, int n, ElemId e, int i, int j) {
    return std::string(what) + " with i=" + std::to_string(i) + ", j=" + std::to_string(j) + " on " + x.label(n, e);
  };
  // d_i d_j = d_{j-1} d_i for i < j
  for (int n = 2; n <= dim; ++n)
    for (ElemId e = 0; e < x.count(n); ++e)
      for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i)
          if (x.face(n - 1, i, x.face(n, j, e)) != x.face(n - 1, j - 1, x.face(n, i, e)))
            return where("d_i d_j = d_{j-1} d_i", n, e, i, j);
  for (int n = 0; n < dim; ++n)
    for (ElemId e = 0; e < x.count(n); ++e)
      for (int j = 0; j <= n; ++j) {
        ElemId s = x.degen(n, j, e);
        for (int i = 0; i <= n + 1; ++i) {
          ElemId lhs = x.face(n + 1, i, s);
          ElemId rhs;
          if (i == j || i == j + 1)
            rhs = e;
          else if (i < j)
            rhs = x.degen(n - 1, j - 1, x.face(n, i, e));
          else
            rhs = x.degen(n - 1, j, x.face(n, i - 1, e));
          if (lhs != rhs) return where("d_i s_j", n, e, i, j);
        }
      }
  // s_i s_j = s_{j+1} s_i for i <= j
  for (int n = 0; n + 2 <= dim; ++n)
    for (ElemId e = 0; e < x.count(n); ++e)
      for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= j; ++i)
          if (x.degen(n + 1, i, x.degen(n, j, e)) != x.degen(n + 1, j + 1, x.degen(n, i, e)))
            return where("s_i s_j = s_{j+1} s_i", n, e, i, j);
  return std::nullopt;
}

SSetMap::SSetMap(SSetPtr source, SSetPtr target, std::vector<std::vector<ElemId>> levels)
    : source_(std::move(source)), target_(std::move(target)), levels_(std::move(levels)) {
  const BoundedSSet& a = *source_;
  const BoundedSSet& b = *target_;
  if (a.dim() != b.dim()) fail("simplicial map between different dimension bounds");
  int dim = a.dim();
  if (static_cast<int>(levels_.size()) != dim + 1) fail("simplicial map must give every level");
  for (int n = 0; n <= dim; ++n) {
    if (levels_[n].size() != a.count(n)) fail("simplicial map table size mismatch" + at_level(n));
    for (ElemId v : levels_[n])
      if (v >= b.count(n)) fail("simplicial map value out of range" + at_level(n));
  }
  for (int n = 1; n <= dim; ++n)
    for (ElemId e = 0; e < a.count(n); ++e)
      for (int i = 0; i <= n; ++i)
        if (levels_[n - 1][a.face(n, i, e)] != b.face(n, i, levels_[n][e]))
          fail("map does not commute with d" + std::to_string(i) + " on " + a.label(n, e));
  for (int n = 0; n < dim; ++n)
    for (ElemId e = 0; e < a.count(n); ++e)
      for (int j = 0; j <= n; ++j)
        if (levels_[n + 1][a.degen(n, j, e)] != b.degen(n, j, levels_[n][e]))
          fail("map does not commute with s" + std::to_string(j) + " on " + a.label(n, e));
}

SSetMap SSetMap::identity(SSetPtr x) {
  std::vector<std::vector<ElemId>> levels(x->dim() + 1);
  for (int n = 0; n <= x->dim(); ++n)
    for (ElemId e = 0; e < x->count(n); ++e) levels[n].push_back(e);
  return SSetMap(x, x, std::move(levels));
}

SSetMap compose(const SSetMap& g, const SSetMap& f) {
  if (!identical(f.target_ptr(), g.source_ptr())) fail_compose("simplicial maps are not composable");
  std::vector<std::vector<ElemId>> levels(f.dim() + 1);
  for (int n = 0; n <= f.dim(); ++n)
    for (ElemId v : f.level(n)) levels[n].push_back(g(n, v));
  return SSetMap(f.source_ptr(), g.target_ptr(), std::move(levels));
}

BoundedSSet standard_simplex(int k, int dim) {
  if (k < 0) fail("standard simplex needs k >= 0");
  std::vector<std::vector<std::vector<int>>> seqs(dim + 1);
  std::vector<std::map<std::vector<int>, ElemId>> index(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    std::vector<int> a(n + 1, 0);
    while (true) {
      index[n].emplace(a, static_cast<ElemId>(seqs[n].size()));
      seqs[n].push_back(a);
      // next non-decreasing sequence
      int i = n;
      while (i >= 0 && a[i] == k) --i;
      if (i < 0) break;
      ++a[i];
      for (int t = i + 1; t <= n; ++t) a[t] = a[i];
    }
  }
  std::vector<std::size_t> counts;
  std::vector<std::vector<BoundedSSet::Table>> faces(dim + 1), degens(dim);
  std::vector<std::vector<std::string>> labels(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    counts.push_back(seqs[n].size());
    for (const auto& s : seqs[n]) {
      std::string l;
      for (int v : s) l += std::to_string(v);
      labels[n].push_back(l);
    }
    if (n > 0) {
      faces[n].resize(n + 1);
      for (int i = 0; i <= n; ++i)
        for (const auto& s : seqs[n]) {
          auto t = s;
          t.erase(t.begin() + i);
          faces[n][i].push_back(index[n - 1].at(t));
        }
    }
    if (n < dim) {
      degens[n].resize(n + 1);
      for (int j = 0; j <= n; ++j)
        for (const auto& s : seqs[n]) {
          auto t = s;
          t.insert(t.begin() + j, s[j]);
          degens[n][j].push_back(index[n + 1].at(t));
        }
    }
  }
  return BoundedSSet(dim, std::move(counts), std::move(faces), std::move(degens), std::move(labels));
}

ElemId SSetProduct::pair(int n, ElemId x, ElemId y) const {
  return static_cast<ElemId>(x * right_count(n) + y);
}

SSetProduct product(SSetPtr x, SSetPtr y, std::size_t cap) {
  if (x->dim() != y->dim()) fail("product of different dimension bounds");
  int dim = x->dim();
  std::size_t total = 0;
  for (int n = 0; n <= dim; ++n) {
    total += x->count(n) * y->count(n);
    if (total > cap) fail_cap("product exceeds the simplex cap of " + std::to_string(cap));
  }
  auto id = [&](int n, ElemId a, ElemId b) { return static_cast<ElemId>(a * y->count(n) + b); };
  std::vector<std::size_t> counts;
  std::vector<std::vector<BoundedSSet::Table>> faces(dim + 1), degens(dim);
  std::vector<std::vector<std::string>> labels(dim + 1);
  std::vector<std::vector<ElemId>> p1(dim + 1), p2(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    counts.push_back(x->count(n) * y->count(n));
    for (ElemId a = 0; a < x->count(n); ++a)
      for (ElemId b = 0; b < y->count(n); ++b) {
        labels[n].push_back("(" + x->label(n, a) + "," + y->label(n, b) + ")");
        p1[n].push_back(a);
        p2[n].push_back(b);
      }
    if (n > 0) {
      faces[n].resize(n + 1);
      for (int i = 0; i <= n; ++i)
        for (ElemId a = 0; a < x->count(n); ++a)
          for (ElemId b = 0; b < y->count(n); ++b) faces[n][i].push_back(id(n - 1, x->face(n, i, a), y->face(n, i, b)));
    }
    if (n < dim) {
      degens[n].resize(n + 1);
      for (int j = 0; j <= n; ++j)
        for (ElemId a = 0; a < x->count(n); ++a)
          for (ElemId b = 0; b < y->count(n); ++b)
            degens[n][j].push_back(id(n + 1, x->degen(n, j, a), y->degen(n, j, b)));
    }
  }
  SSetProduct out;
  out.sset = share(BoundedSSet(dim, std::move(counts), std::move(faces), std::move(degens), std::move(labels)));
  out.pr1 = share(SSetMap(out.sset, x, std::move(p1)));
  out.pr2 = share(SSetMap(out.sset, y, std::move(p2)));
  return out;
}

std::optional<ElemId> SSetPullBack::find(int n, ElemId e, ElemId xp) const {
  auto it = index.at(n).find(key(e, xp));
  if (it == index[n].end()) return std::nullopt;
  return it->second;
}

SPullBackPtr pull_back_sset(SMapPtr f, SMapPtr pi, std::size_t cap) {
  if (!identical(f->target_ptr(), pi->target_ptr())) fail_compose("pull-back needs maps into the same base");
  int dim = f->dim();
  auto pb = std::make_shared<SSetPullBack>();
  pb->f = f;
  pb->pi = pi;
  pb->pairs.resize(dim + 1);
  pb->index.resize(dim + 1);
  const BoundedSSet& e = f->source();
  const BoundedSSet& xp = pi->source();
  std::size_t total = 0;
  for (int n = 0; n <= dim; ++n) {
    std::vector<std::vector<ElemId>> fib(f->target().count(n));
    for (ElemId a = 0; a < e.count(n); ++a) fib[(*f)(n, a)].push_back(a);
    for (ElemId b = 0; b < xp.count(n); ++b)
      for (ElemId a : fib[(*pi)(n, b)]) {
        pb->index[n].emplace(key(a, b), static_cast<ElemId>(pb->pairs[n].size()));
        pb->pairs[n].emplace_back(a, b);
      }
    total += pb->pairs[n].size();
    if (total > cap) fail_cap("pull-back exceeds the simplex cap of " + std::to_string(cap));
  }
  std::vector<std::size_t> counts;
  std::vector<std::vector<BoundedSSet::Table>> faces(dim + 1), degens(dim);
  std::vector<std::vector<std::string>> labels(dim + 1);
  std::vector<std::vector<ElemId>> to_e(dim + 1), to_x(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    counts.push_back(pb->pairs[n].size());
    for (auto [a, b] : pb->pairs[n]) {
      labels[n].push_back("(" + e.label(n, a) + "," + xp.label(n, b) + ")");
      to_e[n].push_back(a);
      to_x[n].push_back(b);
    }
    if (n > 0) {
      faces[n].resize(n + 1);
      for (int i = 0; i <= n; ++i)
        for (auto [a, b] : pb->pairs[n]) faces[n][i].push_back(pb->index[n - 1].at(key(e.face(n, i, a), xp.face(n, i, b))));
    }
    if (n < dim) {
      degens[n].resize(n + 1);
      for (int j = 0; j <= n; ++j)
        for (auto [a, b] : pb->pairs[n])
          degens[n][j].push_back(pb->index[n + 1].at(key(e.degen(n, j, a), xp.degen(n, j, b))));
    }
  }
  pb->sset = share(BoundedSSet(dim, std::move(counts), std::move(faces), std::move(degens), std::move(labels)));
  pb->to_total = share(SSetMap(pb->sset, f->source_ptr(), std::move(to_e)));
  pb->projection = share(SSetMap(pb->sset, pi->source_ptr(), std::move(to_x)));
  return pb;
}

SSetMap pull_back_sset_map(const SSetPullBack& from, const SSetPullBack& to, const SSetMap& alpha) {
  if (!(*from.pi == *to.pi)) fail_compose("pull-backs along different maps");
  if (!identical(alpha.source_ptr(), from.f->source_ptr()) || !identical(alpha.target_ptr(), to.f->source_ptr()))
    fail_compose("map does not connect the pulled-back total spaces");
  std::vector<std::vector<ElemId>> levels(alpha.dim() + 1);
  for (int n = 0; n <= alpha.dim(); ++n)
    for (auto [a, b] : from.pairs[n]) {
      auto w = to.find(n, alpha(n, a), b);
      if (!w) fail("map does not commute with the projections");
      levels[n].push_back(*w);
    }
  return SSetMap(from.sset, to.sset, std::move(levels));
}

SScenFlags check_simplicial_scenario(const SSetMap& f) {
  SScenFlags flags;
  const BoundedSSet& e = f.source();
  const BoundedSSet& x = f.target();
  int dim = f.dim();
  flags.dim = dim;
  auto note = [&](const std::string& s) {
    if (flags.failure.empty()) flags.failure = s;
  };
  std::vector<std::vector<std::vector<ElemId>>> fib(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    fib[n].resize(x.count(n));
    for (ElemId a = 0; a < e.count(n); ++a) fib[n][f(n, a)].push_back(a);
    for (ElemId b = 0; b < x.count(n); ++b)
      if (fib[n][b].empty()) {
        flags.surjective = false;
        note("no preimage of " + x.label(n, b) + at_level(n));
      }
  }
  // d^i squares: every lift of d_i(b) extends to a lift of b
  for (int n = 1; n <= dim; ++n)
    for (ElemId b = 0; b < x.count(n); ++b)
      for (int i = 0; i <= n; ++i) {
        std::vector<char> hit(e.count(n - 1), 0);
        for (ElemId a : fib[n][b]) hit[e.face(n, i, a)] = 1;
        for (ElemId t : fib[n - 1][x.face(n, i, b)])
          if (!hit[t]) {
            flags.locally_surjective = false;
            note("no lift for d^" + std::to_string(i) + " with " + e.label(n - 1, t) + " over " + x.label(n, b));
          }
      }
  // s^j squares: a simplex over s_j(y) must itself be s_j of its face
  for (int n = 1; n <= dim; ++n)
    for (ElemId a = 0; a < e.count(n); ++a)
      for (int j = 0; j < n; ++j) {
        ElemId b = f(n, a);
        if (x.degen(n - 1, j, x.face(n, j, b)) != b) continue;
        if (e.degen(n - 1, j, e.face(n, j, a)) != a) {
          flags.discrete_over_vertices = false;
          note("no lift for s^" + std::to_string(j) + " with " + e.label(n, a) + " over " + x.label(n, b));
        }
      }
  return flags;
}

SimplicialScenario::SimplicialScenario(SMapPtr f) : map_(std::move(f)) {
  flags_ = check_simplicial_scenario(*map_);
  if (!flags_.surjective) fail("not surjective: " + flags_.failure);
  if (!flags_.locally_surjective) fail("not locally surjective: " + flags_.failure);
  if (!flags_.discrete_over_vertices) fail("not discrete over vertices: " + flags_.failure);
  fibers_.resize(dim() + 1);
  for (int n = 0; n <= dim(); ++n) {
    fibers_[n].resize(base().count(n));
    for (ElemId a = 0; a < total().count(n); ++a) fibers_[n][map()(n, a)].push_back(a);
  }
}

SScenMorphism::SScenMorphism(SScenPtr source, SScenPtr target, SMapPtr pi, std::vector<std::vector<ElemId>> alpha)
    : SScenMorphism(source, std::move(target), pull_back_sset(source->map_ptr(), std::move(pi)), std::move(alpha)) {}

SScenMorphism::SScenMorphism(SScenPtr source, SScenPtr target, SPullBackPtr pullback,
                             std::vector<std::vector<ElemId>> alpha)
    : source_(std::move(source)), target_(std::move(target)), pullback_(std::move(pullback)) {
  if (!(pullback_->f == source_->map_ptr() || *pullback_->f == source_->map()))
    fail_compose("pull-back is not taken along the source scenario");
  if (!identical(pullback_->pi->source_ptr(), target_->base_ptr()))
    fail_compose("base map must start at the target base");
  alpha_ = share(SSetMap(pullback_->sset, target_->total_ptr(), std::move(alpha)));
  for (int n = 0; n <= alpha_->dim(); ++n)
    for (ElemId k = 0; k < pullback_->pairs[n].size(); ++k)
      if (target_->map()(n, (*alpha_)(n, k)) != pullback_->pairs[n][k].second)
        fail("outcome map does not lie over the target base at " + pullback_->sset->label(n, k));
}

SScenMorphism SScenMorphism::identity(SScenPtr f) {
  auto pb = pull_back_sset(f->map_ptr(), share(SSetMap::identity(f->base_ptr())));
  std::vector<std::vector<ElemId>> alpha(f->dim() + 1);
  for (int n = 0; n <= f->dim(); ++n)
    for (auto [a, b] : pb->pairs[n]) alpha[n].push_back(a);
  return SScenMorphism(f, f, pb, std::move(alpha));
}

bool operator==(const SScenMorphism& a, const SScenMorphism& b) {
  return a.source_->map() == b.source_->map() && a.target_->map() == b.target_->map() && a.pi() == b.pi() &&
         a.alpha_->levels() == b.alpha_->levels();
}

SScenMorphism compose(const SScenMorphism& first, const SScenMorphism& second) {
  if (!(first.target().map() == second.source().map())) fail_compose("simplicial scenario morphisms are not composable");
  const SSetMap& pi1 = first.pi();
  const SSetMap& pi2 = second.pi();
  auto pb = pull_back_sset(first.source().map_ptr(), share(compose(pi1, pi2)));
  std::vector<std::vector<ElemId>> alpha(pb->sset->dim() + 1);
  for (int n = 0; n <= pb->sset->dim(); ++n)
    for (auto [e, z] : pb->pairs[n]) {
      ElemId mid = first.alpha()(n, *first.pullback().find(n, e, pi2(n, z)));
      alpha[n].push_back(second.alpha()(n, *second.pullback().find(n, mid, z)));
    }
  return SScenMorphism(first.source_ptr(), second.target_ptr(), pb, std::move(alpha));
}

}  // namespace ctxscen

namespace ctxscen {

std::size_t for_each_sset_map(const BoundedSSet& src, const BoundedSSet& tgt,
                              const std::function<bool(int, ElemId, ElemId)>& allowed,
                              const std::function<bool(const std::vector<std::vector<ElemId>>&)>& visit) {
  if (src.dim() != tgt.dim()) fail("simplicial maps need equal dimension bounds");
  int dim = src.dim();

  // one degeneracy presentation x = s_j(y) per degenerate simplex
  std::vector<std::vector<std::pair<int, ElemId>>> degen_of(dim + 1);
  for (int n = 0; n <= dim; ++n) degen_of[n].assign(src.count(n), {-1, 0});
  for (int n = 0; n < dim; ++n)
    for (int j = 0; j <= n; ++j)
      for (ElemId y = 0; y < src.count(n); ++y) {
        auto& slot = degen_of[n + 1][src.degen(n, j, y)];
        if (slot.first < 0) slot = {j, y};
      }

  // static order: a simplex becomes ready once its faces are placed; ready
  // simplices of higher level go first since they have at most a few candidates
  std::vector<std::vector<std::vector<ElemId>>> cofaces(dim + 1);
  std::vector<std::vector<int>> missing(dim + 1);
  for (int n = 0; n <= dim; ++n) {
    cofaces[n].resize(src.count(n));
    missing[n].assign(src.count(n), n == 0 ? 0 : n + 1);
  }
  for (int n = 1; n <= dim; ++n)
    for (int i = 0; i <= n; ++i)
      for (ElemId z = 0; z < src.count(n); ++z) cofaces[n - 1][src.face(n, i, z)].push_back(z);
  std::vector<std::pair<int, ElemId>> order;
  std::vector<std::vector<ElemId>> ready(dim + 1);
  std::vector<std::vector<char>> placed(dim + 1);
  for (int n = 0; n <= dim; ++n) placed[n].assign(src.count(n), 0);
  for (ElemId x = 0; x < src.count(0); ++x) ready[0].push_back(x);
  std::size_t total = src.total_size();
  while (order.size() < total) {
    int pick = -1;
    for (int n = dim; n >= 0; --n)
      if (!ready[n].empty()) {
        pick = n;
        break;
      }
    if (pick < 0) fail("simplicial set has a simplex whose faces never become available");
    ElemId x = ready[pick].back();
    ready[pick].pop_back();
    if (placed[pick][x]) continue;
    placed[pick][x] = 1;
    order.emplace_back(pick, x);
    if (pick < dim)
      for (ElemId z : cofaces[pick][x])
        if (--missing[pick + 1][z] == 0) ready[pick + 1].push_back(z);
  }

  // target simplices grouped by their d_0 face
  std::vector<std::vector<std::vector<ElemId>>> by_d0(dim + 1);
  for (int n = 1; n <= dim; ++n) {
    by_d0[n].resize(tgt.count(n - 1));
    for (ElemId y = 0; y < tgt.count(n); ++y) by_d0[n][tgt.face(n, 0, y)].push_back(y);
  }
  std::vector<ElemId> all0(tgt.count(0));
  for (ElemId y = 0; y < all0.size(); ++y) all0[y] = y;

  std::vector<std::vector<ElemId>> value(dim + 1);
  for (int n = 0; n <= dim; ++n) value[n].assign(src.count(n), 0);
  std::size_t visited = 0;
  bool stop = false;

  auto fits = [&](int n, ElemId x, ElemId y) {
    if (!allowed(n, x, y)) return false;
    for (int i = 0; i <= n && n > 0; ++i)
      if (tgt.face(n, i, y) != value[n - 1][src.face(n, i, x)]) return false;
    return true;
  };

  auto rec = [&](auto& self, std::size_t pos) -> void {
    if (stop) return;
    if (pos == order.size()) {
      ++visited;
      if (!visit(value)) stop = true;
      return;
    }
    auto [n, x] = order[pos];
    auto [j, y] = degen_of[n][x];
    if (j >= 0) {
      ElemId forced = tgt.degen(n - 1, j, value[n - 1][y]);
      if (!fits(n, x, forced)) return;
      value[n][x] = forced;
      self(self, pos + 1);
      return;
    }
    const auto& cand = n == 0 ? all0 : by_d0[n][value[n - 1][src.face(n, 0, x)]];
    for (ElemId c : cand) {
      if (!fits(n, x, c)) continue;
      value[n][x] = c;
      self(self, pos + 1);
      if (stop) return;
    }
  };
  rec(rec, 0);
  return visited;
}

}  // namespace ctxscen
