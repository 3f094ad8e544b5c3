#include "ctxscen/bundle.hpp"

#include <algorithm>
#include <map>

#include "ctxscen/error.hpp"

namespace ctxscen {

BundleScenario::BundleScenario(ComplexMap f) : map_(std::move(f)) {
  MapFlags flags = classify_map(map_);
  if (!flags.surjective) fail("not a bundle scenario: map is not surjective");
  if (!flags.locally_surjective) fail("not a bundle scenario: map is not locally surjective");
  if (!flags.discrete_over_vertices) fail("not a bundle scenario: map is not discrete over vertices");
  fibers_.assign(base().size(), {});
  fiber_pos_.assign(total().size(), 0);
  for (SimplexId g = 0; g < total().size(); ++g) {
    auto& fib = fibers_[map_.apply(g)];
    fiber_pos_[g] = fib.size();
    fib.push_back(g);
  }
}

SimplexId BundleScenario::restrict(SimplexId gamma, SimplexId face) const {
  const Simplex& over = base().simplex(face);
  const Simplex& image = base().simplex(map_.apply(gamma));
  if (!is_subset(over, image)) fail("restriction target is not a face of the image");
  Simplex out;
  for (VertexId v : total().simplex(gamma))
    if (std::binary_search(over.begin(), over.end(), map_(v))) out.push_back(v);
  return total().id_of(out);
}

std::vector<SimplexId> restrict_fiber(const BundleScenario& f, SimplexId sigma, SimplexId face) {
  if (!is_subset(f.base().simplex(face), f.base().simplex(sigma))) fail("restriction target is not a face");
  std::vector<SimplexId> out;
  for (SimplexId g : f.fiber(sigma)) out.push_back(f.restrict(g, face));
  return out;
}

PullBack pull_back(const BundleScenario& f, const ComplexMap& pi) {
  if (!identical(pi.target_ptr(), f.base_ptr()))
    fail_compose("pull-back map does not land in the bundle base");
  const Complex& total = f.total();
  const Complex& newbase = pi.source();

  std::vector<std::vector<VertexId>> over(f.base().num_vertices());
  for (VertexId x = 0; x < total.num_vertices(); ++x) over[f.map()(x)].push_back(x);

  PullBack pb;
  std::vector<std::string> labels;
  std::map<std::pair<VertexId, VertexId>, VertexId> index;
  for (VertexId y = 0; y < newbase.num_vertices(); ++y) {
    for (VertexId x : over[pi(y)]) {
      index.emplace(std::make_pair(x, y), static_cast<VertexId>(pb.pairs.size()));
      pb.pairs.emplace_back(x, y);
      labels.push_back("(" + total.label(x) + "," + newbase.label(y) + ")");
    }
  }

  std::vector<Simplex> gens;
  for (SimplexId m : newbase.maximal()) {
    const Simplex& sp = newbase.simplex(m);
    for (SimplexId g : f.fiber(pi.apply(m))) {
      std::map<VertexId, VertexId> lift;  // base vertex -> vertex of g
      for (VertexId x : total.simplex(g)) lift[f.map()(x)] = x;
      Simplex s;
      for (VertexId y : sp) s.push_back(index.at({lift.at(pi(y)), y}));
      gens.push_back(std::move(s));
    }
  }
  pb.complex = share(Complex::close_downward(std::move(labels), gens));

  std::vector<VertexId> to_total, to_base;
  for (auto [x, y] : pb.pairs) {
    to_total.push_back(x);
    to_base.push_back(y);
  }
  pb.to_total = std::make_shared<const ComplexMap>(pb.complex, f.total_ptr(), std::move(to_total));
  pb.projection = share(BundleScenario(ComplexMap(pb.complex, pi.source_ptr(), std::move(to_base))));
  return pb;
}

}  // namespace ctxscen
