#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ctxscen/complex.hpp"

namespace ctxscen {

/// A surjective, locally surjective, vertex-discrete map f: total -> base,
/// with fibers over every base simplex.
class BundleScenario {
 public:
  explicit BundleScenario(ComplexMap f);

  const ComplexMap& map() const { return map_; }
  const Complex& total() const { return map_.source(); }
  const Complex& base() const { return map_.target(); }
  const ComplexPtr& total_ptr() const { return map_.source_ptr(); }
  const ComplexPtr& base_ptr() const { return map_.target_ptr(); }

  /// Total simplices over `sigma`, in id order.
  const std::vector<SimplexId>& fiber(SimplexId sigma) const { return fibers_.at(sigma); }
  /// Position of gamma within fiber(f(gamma)).
  std::size_t fiber_position(SimplexId gamma) const { return fiber_pos_.at(gamma); }

  /// The unique face of gamma lying over `face` (a face of f(gamma)).
  SimplexId restrict(SimplexId gamma, SimplexId face) const;

 private:
  ComplexMap map_;
  std::vector<std::vector<SimplexId>> fibers_;
  std::vector<std::size_t> fiber_pos_;
};

using BundlePtr = std::shared_ptr<const BundleScenario>;

inline BundlePtr share(BundleScenario b) { return std::make_shared<const BundleScenario>(std::move(b)); }

/// r_{sigma, face}: fiber(sigma) -> fiber(face), as a vector aligned with fiber(sigma).
std::vector<SimplexId> restrict_fiber(const BundleScenario& f, SimplexId sigma, SimplexId face);

/// Pull-back of a bundle scenario along a complex map into its base.
struct PullBack {
  ComplexPtr complex;
  std::vector<std::pair<VertexId, VertexId>> pairs;  // vertex -> (total vertex, new base vertex)
  std::shared_ptr<const ComplexMap> to_total;        // the projection onto the total complex
  BundlePtr projection;                              // the pulled-back bundle over the new base
};

PullBack pull_back(const BundleScenario& f, const ComplexMap& pi);

}  // namespace ctxscen
