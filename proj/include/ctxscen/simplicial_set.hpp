#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxscen/complex.hpp"
#include "ctxscen/dist.hpp"
#include "ctxscen/error.hpp"

namespace ctxscen {

using ElemId = std::uint32_t;
inline constexpr int kDefaultDim = 3;

/// Simplicial set truncated at level `dim`: finite levels 0..dim with face
/// tables d_i: X_n -> X_{n-1} and degeneracy tables s_j: X_n -> X_{n+1}
/// (the latter for n < dim). Simplicial identities are checked on
/// construction.
class BoundedSSet {
 public:
  using Table = std::vector<ElemId>;

  /// faces[n][i] for 1 <= n <= dim (faces[0] empty); degens[n][j] for 0 <= n < dim.
  BoundedSSet(int dim, std::vector<std::size_t> counts, std::vector<std::vector<Table>> faces,
              std::vector<std::vector<Table>> degens, std::vector<std::vector<std::string>> labels = {});

  int dim() const { return dim_; }
  std::size_t count(int n) const { return counts_.at(n); }
  std::size_t total_size() const;
  ElemId face(int n, int i, ElemId x) const { return faces_[n][i][x]; }
  ElemId degen(int n, int j, ElemId x) const { return degens_[n][j][x]; }
  const Table& face_table(int n, int i) const { return faces_.at(n).at(i); }
  const Table& degen_table(int n, int j) const { return degens_.at(n).at(j); }
  /// In the image of some degeneracy.
  bool degenerate(int n, ElemId x) const { return n > 0 && degenerate_[n][x]; }
  std::string label(int n, ElemId x) const;
  bool has_labels() const { return !labels_.empty(); }

  /// Structural equality; labels are ignored.
  friend bool operator==(const BoundedSSet& a, const BoundedSSet& b) {
    return a.dim_ == b.dim_ && a.counts_ == b.counts_ && a.faces_ == b.faces_ && a.degens_ == b.degens_;
  }

 private:
  int dim_;
  std::vector<std::size_t> counts_;
  std::vector<std::vector<Table>> faces_, degens_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<char>> degenerate_;
};

/// First violated simplicial identity, if any.
std::optional<std::string> check_simplicial_identities(const BoundedSSet& x);

using SSetPtr = std::shared_ptr<const BoundedSSet>;
inline SSetPtr share(BoundedSSet x) { return std::make_shared<const BoundedSSet>(std::move(x)); }
inline bool identical(const SSetPtr& a, const SSetPtr& b) { return a == b || (a && b && *a == *b); }

class SSetMap {
 public:
  SSetMap(SSetPtr source, SSetPtr target, std::vector<std::vector<ElemId>> levels);
  static SSetMap identity(SSetPtr x);

  const BoundedSSet& source() const { return *source_; }
  const BoundedSSet& target() const { return *target_; }
  const SSetPtr& source_ptr() const { return source_; }
  const SSetPtr& target_ptr() const { return target_; }
  int dim() const { return source_->dim(); }
  ElemId operator()(int n, ElemId x) const { return levels_[n][x]; }
  const std::vector<ElemId>& level(int n) const { return levels_.at(n); }
  const std::vector<std::vector<ElemId>>& levels() const { return levels_; }

  friend bool operator==(const SSetMap& a, const SSetMap& b) {
    return identical(a.source_, b.source_) && identical(a.target_, b.target_) && a.levels_ == b.levels_;
  }

 private:
  SSetPtr source_, target_;
  std::vector<std::vector<ElemId>> levels_;
};

using SMapPtr = std::shared_ptr<const SSetMap>;
inline SMapPtr share(SSetMap f) { return std::make_shared<const SSetMap>(std::move(f)); }

/// g after f.
SSetMap compose(const SSetMap& g, const SSetMap& f);

/// Calls visit(levels) for every simplicial map src -> tgt sending each x at
/// level n to some y with allowed(n, x, y); visit returns false to stop.
/// Elements are assigned in a fixed order where every simplex follows its
/// faces; degenerate simplices are forced. Returns the number of maps visited.
std::size_t for_each_sset_map(const BoundedSSet& src, const BoundedSSet& tgt,
                              const std::function<bool(int, ElemId, ElemId)>& allowed,
                              const std::function<bool(const std::vector<std::vector<ElemId>>&)>& visit);

/// Delta[k] truncated at `dim`: level n holds the non-decreasing sequences
/// a_0 <= ... <= a_n in {0..k}.
BoundedSSet standard_simplex(int k, int dim = kDefaultDim);

struct SSetProduct {
  SSetPtr sset;
  SMapPtr pr1, pr2;
  /// Element (x, y) at level n.
  ElemId pair(int n, ElemId x, ElemId y) const;
  std::size_t right_count(int n) const { return pr2->target().count(n); }
};

SSetProduct product(SSetPtr x, SSetPtr y, std::size_t cap = kDefaultSimplexCap);

/// Levelwise pull-back of f: E -> X along pi: X' -> X; level n holds the pairs
/// (e, x') with f(e) = pi(x').
struct SSetPullBack {
  SSetPtr sset;
  std::vector<std::vector<std::pair<ElemId, ElemId>>> pairs;
  SMapPtr to_total, projection;
  SMapPtr f, pi;

  std::optional<ElemId> find(int n, ElemId e, ElemId xp) const;
  std::vector<std::unordered_map<std::uint64_t, ElemId>> index;
};

using SPullBackPtr = std::shared_ptr<const SSetPullBack>;

SPullBackPtr pull_back_sset(SMapPtr f, SMapPtr pi, std::size_t cap = kDefaultSimplexCap);

/// Induced map pi^*(E) -> pi^*(E') for alpha: E -> E' over X.
SSetMap pull_back_sset_map(const SSetPullBack& from, const SSetPullBack& to, const SSetMap& alpha);

/// Verdicts hold for all levels up to the dimension bound only.
struct SScenFlags {
  bool surjective = true;
  bool locally_surjective = true;
  bool discrete_over_vertices = true;
  int dim = 0;
  std::string failure;  // first failing square, empty when all hold
  bool scenario() const { return surjective && locally_surjective && discrete_over_vertices; }
};

/// Exhaustive search over the lifting squares for d^i and s^j up to the bound.
SScenFlags check_simplicial_scenario(const SSetMap& f);

class SimplicialScenario {
 public:
  explicit SimplicialScenario(SMapPtr f);

  const SSetMap& map() const { return *map_; }
  const SMapPtr& map_ptr() const { return map_; }
  const BoundedSSet& total() const { return map_->source(); }
  const BoundedSSet& base() const { return map_->target(); }
  const SSetPtr& total_ptr() const { return map_->source_ptr(); }
  const SSetPtr& base_ptr() const { return map_->target_ptr(); }
  int dim() const { return map_->dim(); }
  const std::vector<ElemId>& fiber(int n, ElemId x) const { return fibers_.at(n).at(x); }
  const SScenFlags& flags() const { return flags_; }

 private:
  SMapPtr map_;
  SScenFlags flags_;
  std::vector<std::vector<std::vector<ElemId>>> fibers_;
};

using SScenPtr = std::shared_ptr<const SimplicialScenario>;
inline SScenPtr share(SimplicialScenario s) { return std::make_shared<const SimplicialScenario>(std::move(s)); }

/// Morphism (pi, alpha): f -> f' with pi: X' -> X and alpha: pi^*(E) -> E' over X'.
class SScenMorphism {
 public:
  SScenMorphism(SScenPtr source, SScenPtr target, SMapPtr pi, std::vector<std::vector<ElemId>> alpha);
  SScenMorphism(SScenPtr source, SScenPtr target, SPullBackPtr pullback, std::vector<std::vector<ElemId>> alpha);
  static SScenMorphism identity(SScenPtr f);

  const SimplicialScenario& source() const { return *source_; }
  const SimplicialScenario& target() const { return *target_; }
  const SScenPtr& source_ptr() const { return source_; }
  const SScenPtr& target_ptr() const { return target_; }
  const SSetMap& pi() const { return *pullback_->pi; }
  const SSetPullBack& pullback() const { return *pullback_; }
  const SPullBackPtr& pullback_ptr() const { return pullback_; }
  const SSetMap& alpha() const { return *alpha_; }

  friend bool operator==(const SScenMorphism& a, const SScenMorphism& b);

 private:
  SScenPtr source_, target_;
  SPullBackPtr pullback_;
  std::shared_ptr<const SSetMap> alpha_;
};

/// `second` after `first`.
SScenMorphism compose(const SScenMorphism& first, const SScenMorphism& second);

// ---------------------------------------------------------------------------
// Simplicial distributions

template <Semiring S>
using SLevels = std::vector<std::vector<Dist<S, ElemId>>>;

struct SDistViolation {
  int level = 0;
  ElemId element = 0;
  std::string reason;
};

/// Checks supports against the fibers of f and compatibility with every
/// face and degeneracy up to the bound.
template <Semiring S>
std::optional<SDistViolation> validate_sdist(const SSetMap& f, const SLevels<S>& p);

template <Semiring S>
class SimplicialDistribution {
 public:
  using D = Dist<S, ElemId>;
  SimplicialDistribution(SMapPtr f, SLevels<S> levels);

  const SSetMap& map() const { return *map_; }
  const SMapPtr& map_ptr() const { return map_; }
  const D& at(int n, ElemId x) const { return levels_.at(n).at(x); }
  const SLevels<S>& levels() const { return levels_; }

  friend bool operator==(const SimplicialDistribution& a, const SimplicialDistribution& b) {
    return (a.map_ == b.map_ || *a.map_ == *b.map_) && a.levels_ == b.levels_;
  }

 private:
  SMapPtr map_;
  SLevels<S> levels_;
};

/// (pi_* p)_n(x') = p_n(pi_n(x')) . delta^{x'}, a distribution on the pull-back projection.
template <Semiring S>
SimplicialDistribution<S> push_pi(const SSetPullBack& pb, const SimplicialDistribution<S>& p);

/// D(alpha) o p for alpha: E -> E' over the base of p.
template <Semiring S>
SimplicialDistribution<S> push_alpha(const SSetMap& alpha, SMapPtr g, const SimplicialDistribution<S>& p);

template <Semiring S>
SimplicialDistribution<S> push_forward(const SScenMorphism& m, const SimplicialDistribution<S>& p);

/// Simplicial maps X -> D(Y), one table per level.
template <Semiring S>
std::optional<std::string> check_pair_dist(const BoundedSSet& x, const BoundedSSet& y, const SLevels<S>& q);

/// Distribution on the projection X x Y -> X read as a map X -> D(Y).
template <Semiring S>
SLevels<S> to_pair_dist(const SSetProduct& prod, const SimplicialDistribution<S>& p);

template <Semiring S>
SimplicialDistribution<S> from_pair_dist(const SSetProduct& prod, const SLevels<S>& q);

// ---------------------------------------------------------------------------

template <Semiring S>
std::optional<SDistViolation> validate_sdist(const SSetMap& f, const SLevels<S>& p) {
  const BoundedSSet& x = f.target();
  const BoundedSSet& e = f.source();
  int dim = x.dim();
  if (static_cast<int>(p.size()) != dim + 1) return SDistViolation{0, 0, "distribution must cover levels 0.." + std::to_string(dim)};
  for (int n = 0; n <= dim; ++n) {
    if (p[n].size() != x.count(n)) return SDistViolation{n, 0, "wrong number of simplices at level " + std::to_string(n)};
    for (ElemId k = 0; k < x.count(n); ++k) {
      if (!p[n][k].normalized()) return SDistViolation{n, k, "weights do not sum to one"};
      for (const auto& [el, w] : p[n][k].entries())
        if (el >= e.count(n) || f(n, el) != k) return SDistViolation{n, k, "support leaves the fiber"};
    }
  }
  for (int n = 1; n <= dim; ++n)
    for (ElemId k = 0; k < x.count(n); ++k)
      for (int i = 0; i <= n; ++i) {
        auto pushed = push_dist([&](ElemId el) { return e.face(n, i, el); }, p[n][k]);
        if (!(pushed == p[n - 1][x.face(n, i, k)]))
          return SDistViolation{n, k, "face d" + std::to_string(i) + " does not commute"};
      }
  for (int n = 0; n < dim; ++n)
    for (ElemId k = 0; k < x.count(n); ++k)
      for (int j = 0; j <= n; ++j) {
        auto pushed = push_dist([&](ElemId el) { return e.degen(n, j, el); }, p[n][k]);
        if (!(pushed == p[n + 1][x.degen(n, j, k)]))
          return SDistViolation{n, k, "degeneracy s" + std::to_string(j) + " does not commute"};
      }
  return std::nullopt;
}

template <Semiring S>
SimplicialDistribution<S>::SimplicialDistribution(SMapPtr f, SLevels<S> levels)
    : map_(std::move(f)), levels_(std::move(levels)) {
  if (auto v = validate_sdist<S>(*map_, levels_))
    fail("invalid simplicial distribution at level " + std::to_string(v->level) + ", simplex " +
         map_->target().label(v->level, v->element) + ": " + v->reason);
}

template <Semiring S>
SimplicialDistribution<S> push_pi(const SSetPullBack& pb, const SimplicialDistribution<S>& p) {
  if (!(p.map_ptr() == pb.f || p.map() == *pb.f)) fail_compose("distribution does not live on the pulled-back map");
  const SSetMap& pi = *pb.pi;
  SLevels<S> out(pi.dim() + 1);
  for (int n = 0; n <= pi.dim(); ++n)
    for (ElemId xp = 0; xp < pi.source().count(n); ++xp)
      out[n].push_back(push_dist([&](ElemId e) { return *pb.find(n, e, xp); }, p.at(n, pi(n, xp))));
  return SimplicialDistribution<S>(pb.projection, std::move(out));
}

template <Semiring S>
SimplicialDistribution<S> push_alpha(const SSetMap& alpha, SMapPtr g, const SimplicialDistribution<S>& p) {
  if (!identical(alpha.source_ptr(), p.map().source_ptr()) || !identical(alpha.target_ptr(), g->source_ptr()))
    fail_compose("map does not connect the distributions' total spaces");
  SLevels<S> out(p.levels().size());
  for (std::size_t n = 0; n < p.levels().size(); ++n)
    for (const auto& d : p.levels()[n])
      out[n].push_back(push_dist([&](ElemId e) { return alpha(static_cast<int>(n), e); }, d));
  return SimplicialDistribution<S>(std::move(g), std::move(out));
}

template <Semiring S>
SimplicialDistribution<S> push_forward(const SScenMorphism& m, const SimplicialDistribution<S>& p) {
  return push_alpha(m.alpha(), m.target().map_ptr(), push_pi(m.pullback(), p));
}

template <Semiring S>
std::optional<std::string> check_pair_dist(const BoundedSSet& x, const BoundedSSet& y, const SLevels<S>& q) {
  if (static_cast<int>(q.size()) != x.dim() + 1 || x.dim() != y.dim()) return "level count mismatch";
  for (int n = 0; n <= x.dim(); ++n) {
    if (q[n].size() != x.count(n)) return "wrong number of simplices at level " + std::to_string(n);
    for (const auto& d : q[n]) {
      if (!d.normalized()) return "weights do not sum to one at level " + std::to_string(n);
      for (const auto& [el, w] : d.entries())
        if (el >= y.count(n)) return "unknown simplex at level " + std::to_string(n);
    }
  }
  for (int n = 1; n <= x.dim(); ++n)
    for (ElemId k = 0; k < x.count(n); ++k)
      for (int i = 0; i <= n; ++i)
        if (!(push_dist([&](ElemId el) { return y.face(n, i, el); }, q[n][k]) == q[n - 1][x.face(n, i, k)]))
          return "face d" + std::to_string(i) + " does not commute at level " + std::to_string(n);
  for (int n = 0; n < x.dim(); ++n)
    for (ElemId k = 0; k < x.count(n); ++k)
      for (int j = 0; j <= n; ++j)
        if (!(push_dist([&](ElemId el) { return y.degen(n, j, el); }, q[n][k]) == q[n + 1][x.degen(n, j, k)]))
          return "degeneracy s" + std::to_string(j) + " does not commute at level " + std::to_string(n);
  return std::nullopt;
}

template <Semiring S>
SLevels<S> to_pair_dist(const SSetProduct& prod, const SimplicialDistribution<S>& p) {
  if (!(p.map_ptr() == prod.pr1 || p.map() == *prod.pr1)) fail_compose("distribution does not live on the projection");
  SLevels<S> out(p.levels().size());
  for (std::size_t n = 0; n < p.levels().size(); ++n)
    for (const auto& d : p.levels()[n])
      out[n].push_back(push_dist([&](ElemId e) { return (*prod.pr2)(static_cast<int>(n), e); }, d));
  return out;
}

template <Semiring S>
SimplicialDistribution<S> from_pair_dist(const SSetProduct& prod, const SLevels<S>& q) {
  const BoundedSSet& x = prod.pr1->target();
  if (auto err = check_pair_dist<S>(x, prod.pr2->target(), q)) fail("invalid map into distributions: " + *err);
  SLevels<S> out(q.size());
  for (std::size_t n = 0; n < q.size(); ++n)
    for (ElemId k = 0; k < q[n].size(); ++k)
      out[n].push_back(push_dist([&](ElemId y) { return prod.pair(static_cast<int>(n), k, y); }, q[n][k]));
  return SimplicialDistribution<S>(prod.pr1, std::move(out));
}

}  // namespace ctxscen
