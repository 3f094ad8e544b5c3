#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "ctxscen/error.hpp"
#include "ctxscen/semiring.hpp"

namespace ctxscen {

/// Finitely supported S-distribution over T: distinct elements in ascending
/// order, no zero weights, total weight one.
template <Semiring S, class T>
class Dist {
 public:
  using semiring = S;
  using element_type = T;
  using weight_type = typename S::value_type;
  using Entry = std::pair<T, weight_type>;

  /// Merges repeated elements, drops zeros and checks the total.
  static Dist from_weights(std::vector<Entry> raw) {
    Dist d = collect(std::move(raw));
    if (!d.normalized()) fail("distribution weights do not sum to one");
    return d;
  }

  /// Like from_weights but skips the normalization check; for building
  /// intermediate values whose validity is checked elsewhere.
  static Dist collect(std::vector<Entry> raw) {
    for (const auto& e : raw)
      if (!S::admissible(e.second)) fail("distribution weight outside the semiring");
    std::sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    Dist d;
    for (auto& e : raw) {
      if (!d.entries_.empty() && !(d.entries_.back().first < e.first))
        d.entries_.back().second = S::add(d.entries_.back().second, e.second);
      else
        d.entries_.push_back(std::move(e));
    }
    std::erase_if(d.entries_, [](const Entry& e) { return S::eq(e.second, S::zero()); });
    return d;
  }

  static Dist point(T t) {
    Dist d;
    d.entries_.emplace_back(std::move(t), S::one());
    return d;
  }

  bool normalized() const {
    weight_type total = S::zero();
    for (const auto& e : entries_) total = S::add(total, e.second);
    return S::eq(total, S::one());
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool is_point() const { return entries_.size() == 1; }

  weight_type weight(const T& t) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), t,
                               [](const Entry& e, const T& key) { return e.first < key; });
    if (it != entries_.end() && !(t < it->first)) return it->second;
    return S::zero();
  }

  std::vector<T> support() const {
    std::vector<T> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  friend bool operator==(const Dist& a, const Dist& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (a.entries_[i].first < b.entries_[i].first || b.entries_[i].first < a.entries_[i].first) return false;
      if (!S::eq(a.entries_[i].second, b.entries_[i].second)) return false;
    }
    return true;
  }

  // Lexicographic on entries, so nested distributions can be elements.
  friend bool operator<(const Dist& a, const Dist& b) {
    std::size_t n = std::min(a.entries_.size(), b.entries_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = a.entries_[i];
      const auto& y = b.entries_[i];
      if (x.first < y.first) return true;
      if (y.first < x.first) return false;
      if (S::less(x.second, y.second)) return true;
      if (S::less(y.second, x.second)) return false;
    }
    return a.entries_.size() < b.entries_.size();
  }

 private:
  std::vector<Entry> entries_;
};

/// D(f)(d): weight of v is the sum of d over f^{-1}(v).
template <Semiring S, class T, class F>
auto push_dist(F&& f, const Dist<S, T>& d) {
  using U = std::decay_t<std::invoke_result_t<F&, const T&>>;
  std::vector<typename Dist<S, U>::Entry> raw;
  raw.reserve(d.size());
  for (const auto& [t, w] : d.entries()) raw.emplace_back(std::invoke(f, t), w);
  return Dist<S, U>::collect(std::move(raw));
}

/// Monad multiplication: mu(P)(t) = sum_q P(q) q(t).
template <Semiring S, class T>
Dist<S, T> flatten_dist(const Dist<S, Dist<S, T>>& dd) {
  std::vector<typename Dist<S, T>::Entry> raw;
  for (const auto& [q, w] : dd.entries())
    for (const auto& [t, v] : q.entries()) raw.emplace_back(t, S::mul(w, v));
  return Dist<S, T>::collect(std::move(raw));
}

template <Semiring S, class T>
Dist<S, Dist<S, T>> unit_dist(const Dist<S, T>& d) {
  return Dist<S, Dist<S, T>>::point(d);
}

template <Semiring S, class T, class U>
Dist<S, std::pair<T, U>> product_dist(const Dist<S, T>& p, const Dist<S, U>& q) {
  std::vector<typename Dist<S, std::pair<T, U>>::Entry> raw;
  raw.reserve(p.size() * q.size());
  for (const auto& [t, a] : p.entries())
    for (const auto& [u, b] : q.entries()) raw.emplace_back(std::pair<T, U>(t, u), S::mul(a, b));
  return Dist<S, std::pair<T, U>>::collect(std::move(raw));
}

/// Weighted sum of distributions. The weights are expected to sum to one.
template <Semiring S, class T>
Dist<S, T> mix_dists(const std::vector<std::pair<typename S::value_type, const Dist<S, T>*>>& parts) {
  std::vector<typename Dist<S, T>::Entry> raw;
  for (const auto& [w, d] : parts)
    for (const auto& [t, v] : d->entries()) raw.emplace_back(t, S::mul(w, v));
  return Dist<S, T>::collect(std::move(raw));
}

/// nu(Q): pointwise mixture of families indexed by position. Q ranges over
/// indices into `members`.
template <Semiring S, class T>
std::vector<Dist<S, T>> convex_mix(const Dist<S, std::size_t>& q, const std::vector<std::vector<Dist<S, T>>>& members) {
  if (q.size() == 0) fail("empty mixing distribution");
  std::size_t width = 0;
  bool first = true;
  for (const auto& [idx, w] : q.entries()) {
    if (idx >= members.size()) fail("mixing index out of range");
    if (first) {
      width = members[idx].size();
      first = false;
    } else if (members[idx].size() != width) {
      fail("mixed families have different index sets");
    }
  }
  std::vector<Dist<S, T>> out;
  out.reserve(width);
  for (std::size_t k = 0; k < width; ++k) {
    std::vector<std::pair<typename S::value_type, const Dist<S, T>*>> parts;
    for (const auto& [idx, w] : q.entries()) parts.emplace_back(w, &members[idx][k]);
    out.push_back(mix_dists<S, T>(parts));
  }
  return out;
}

/// Same mixture for families keyed by arbitrary ordered keys.
template <Semiring S, class K, class T>
std::map<K, Dist<S, T>> convex_mix(const Dist<S, std::size_t>& q, const std::vector<std::map<K, Dist<S, T>>>& members) {
  if (q.size() == 0) fail("empty mixing distribution");
  const auto& ref = members.at(q.entries().front().first);
  for (const auto& [idx, w] : q.entries()) {
    if (idx >= members.size()) fail("mixing index out of range");
    const auto& m = members[idx];
    if (m.size() != ref.size() ||
        !std::equal(m.begin(), m.end(), ref.begin(), [](const auto& a, const auto& b) { return !(a.first < b.first) && !(b.first < a.first); }))
      fail("mixed families have different index sets");
  }
  std::map<K, Dist<S, T>> out;
  for (const auto& [key, unused] : ref) {
    std::vector<std::pair<typename S::value_type, const Dist<S, T>*>> parts;
    for (const auto& [idx, w] : q.entries()) parts.emplace_back(w, &members[idx].at(key));
    out.emplace(key, mix_dists<S, T>(parts));
  }
  return out;
}

}  // namespace ctxscen
