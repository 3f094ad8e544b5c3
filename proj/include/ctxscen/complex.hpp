#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctxscen {

using VertexId = std::uint32_t;
using SimplexId = std::uint32_t;

/// Nonempty, strictly increasing list of vertex ids.
using Simplex = std::vector<VertexId>;

inline constexpr std::size_t kDefaultSimplexCap = 1'000'000;

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (VertexId v : s) {
      h ^= v + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Sorted union of two simplices.
Simplex simplex_union(const Simplex& a, const Simplex& b);
bool is_subset(const Simplex& small, const Simplex& big);

/// Finite simplicial complex. Vertex ids follow the order in which labels
/// were supplied; simplex ids follow (size, lexicographic) order.
class Complex {
 public:
  /// Downward closure of the given simplices (vertex ids index `labels`).
  /// Input simplices need not be sorted. Every label becomes a 0-simplex.
  static Complex close_downward(std::vector<std::string> labels, const std::vector<Simplex>& generators,
                                std::size_t cap = kDefaultSimplexCap);
  /// Same, with simplices given by vertex label.
  static Complex from_labels(std::vector<std::string> labels, const std::vector<std::vector<std::string>>& generators,
                             std::size_t cap = kDefaultSimplexCap);

  std::size_t num_vertices() const { return labels_.size(); }
  std::size_t size() const { return simplices_.size(); }
  const std::string& label(VertexId v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<VertexId> find_vertex(std::string_view label) const;
  VertexId vertex(std::string_view label) const;  // throws when missing

  const Simplex& simplex(SimplexId id) const { return simplices_.at(id); }
  const std::vector<Simplex>& simplices() const { return simplices_; }
  std::optional<SimplexId> find(const Simplex& s) const;
  SimplexId id_of(const Simplex& s) const;  // throws when missing
  bool contains(const Simplex& s) const { return find(s).has_value(); }
  SimplexId vertex_simplex(VertexId v) const { return vertex_simplex_.at(v); }
  std::size_t dim(SimplexId id) const { return simplices_.at(id).size() - 1; }

  const std::vector<SimplexId>& maximal() const { return maximal_; }
  /// All simplices containing `id`, in id order (includes `id`).
  std::vector<SimplexId> star(SimplexId id) const;
  /// All nonempty faces of `id`, in id order (includes `id`).
  std::vector<SimplexId> faces(SimplexId id) const;
  /// Simplices having `v` as a vertex, in id order.
  const std::vector<SimplexId>& incident(VertexId v) const { return incident_.at(v); }

  std::string simplex_label(SimplexId id) const;
  std::string simplex_label(const Simplex& s) const;
  std::vector<std::string> simplex_labels(const Simplex& s) const;

  /// Same labels and same simplices (as label sets), ignoring id order.
  bool same_as(const Complex& other) const;
  /// Identical ids: equal label order and equal simplex lists.
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.labels_ == b.labels_ && a.simplices_ == b.simplices_;
  }

 private:
  Complex() = default;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> label_index_;
  std::vector<Simplex> simplices_;
  std::unordered_map<Simplex, SimplexId, SimplexHash> index_;
  std::vector<SimplexId> vertex_simplex_;
  std::vector<SimplexId> maximal_;
  std::vector<std::vector<SimplexId>> incident_;
};

using ComplexPtr = std::shared_ptr<const Complex>;

/// Pointer equality, or identical complexes.
inline bool identical(const ComplexPtr& a, const ComplexPtr& b) { return a == b || (a && b && *a == *b); }

inline ComplexPtr share(Complex c) { return std::make_shared<const Complex>(std::move(c)); }

/// Simplicial map given by its vertex assignment.
class ComplexMap {
 public:
  ComplexMap(ComplexPtr source, ComplexPtr target, std::vector<VertexId> vertex_map);
  static ComplexMap identity(ComplexPtr c);

  const Complex& source() const { return *source_; }
  const Complex& target() const { return *target_; }
  const ComplexPtr& source_ptr() const { return source_; }
  const ComplexPtr& target_ptr() const { return target_; }
  VertexId operator()(VertexId v) const { return vertex_map_[v]; }
  const std::vector<VertexId>& vertex_map() const { return vertex_map_; }
  SimplexId apply(SimplexId s) const { return simplex_map_[s]; }
  Simplex image(const Simplex& s) const;

  friend bool operator==(const ComplexMap& a, const ComplexMap& b) {
    return identical(a.source_, b.source_) && identical(a.target_, b.target_) && a.vertex_map_ == b.vertex_map_;
  }

 private:
  ComplexPtr source_, target_;
  std::vector<VertexId> vertex_map_;
  std::vector<SimplexId> simplex_map_;
};

/// g after f.
ComplexMap compose(const ComplexMap& g, const ComplexMap& f);

struct MapFlags {
  bool surjective = false;
  bool locally_surjective = false;
  bool discrete_over_vertices = false;
  bool bundle_scenario() const { return surjective && locally_surjective && discrete_over_vertices; }
};

MapFlags classify_map(const ComplexMap& f);

/// Monotone map [m] -> [n]; m = -1 is the empty source (theta.size() == 0).
struct Monotone {
  int n = 0;
  std::vector<int> values;  // values[i] = theta(i)
};

/// Searches for h: [n] -> total with f∘h = bottom and h∘theta = top, where
/// `top` and `bottom` are vertex tuples spanning simplices. Throws when the
/// square does not commute.
std::optional<std::vector<VertexId>> lifting_check(const ComplexMap& f, const Monotone& theta,
                                                   const std::vector<VertexId>& top,
                                                   const std::vector<VertexId>& bottom);

/// Flags recomputed purely from lifting problems: empty-source lifts
/// (surjectivity), last coface maps (local surjectivity), s^0 (discreteness).
MapFlags lifting_flags(const ComplexMap& f);

}  // namespace ctxscen
