#include "ctxscen/contextuality.hpp"

#include <map>

#include "ctxscen/lp.hpp"

namespace ctxscen {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::noncontextual:
      return "noncontextual";
    case Verdict::contextual:
      return "contextual";
    case Verdict::undecided:
      return "undecided";
  }
  return "undecided";
}

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

void check_cap(std::size_t count, std::size_t cap) {
  if (count > cap) fail_cap("more than " + std::to_string(cap) + " sections");
}

}  // namespace

std::vector<GlobalAssignment> enumerate_sections(const Scenario& scn, std::size_t cap) {
  std::size_t n = scn.complex().num_vertices(), total = 1;
  for (VertexId x = 0; x < n; ++x) {
    total *= scn.num_outcomes(x);
    check_cap(total, cap);
  }
  std::vector<GlobalAssignment> out;
  out.reserve(total);
  GlobalAssignment g(n, 0);
  // last vertex varies fastest, matching lexicographic section order
  while (true) {
    out.push_back(g);
    std::size_t i = n;
    while (i > 0 && ++g[i - 1] == scn.num_outcomes(i - 1)) g[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

std::vector<BundleSection> enumerate_sections(const BundleScenario& f, std::size_t cap) {
  const Complex& base = f.base();
  const Complex& total = f.total();
  std::size_t n = base.num_vertices();
  std::vector<std::vector<VertexId>> choices(n);
  for (VertexId v = 0; v < n; ++v)
    for (SimplexId g : f.fiber(base.vertex_simplex(v))) choices[v].push_back(total.simplex(g)[0]);
  // simplices checked once their largest vertex is assigned
  std::vector<std::vector<SimplexId>> closing(n);
  for (SimplexId s = 0; s < base.size(); ++s)
    if (base.simplex(s).size() > 1) closing[base.simplex(s).back()].push_back(s);

  std::vector<BundleSection> out;
  BundleSection cur(n);
  std::vector<std::size_t> pos(n, 0);
  auto ok = [&](VertexId v) {
    for (SimplexId s : closing[v]) {
      Simplex img;
      for (VertexId u : base.simplex(s)) img.push_back(cur[u]);
      std::sort(img.begin(), img.end());
      if (!total.contains(img)) return false;
    }
    return true;
  };
  std::size_t depth = 0;
  if (n == 0) return {cur};
  while (true) {
    if (pos[depth] == choices[depth].size()) {
      pos[depth] = 0;
      if (depth == 0) break;
      ++pos[--depth];
      continue;
    }
    cur[depth] = choices[depth][pos[depth]];
    if (!ok(static_cast<VertexId>(depth))) {
      ++pos[depth];
      continue;
    }
    if (depth + 1 == n) {
      out.push_back(cur);
      check_cap(out.size(), cap);
      ++pos[depth];
    } else {
      ++depth;
    }
  }
  return out;
}

std::vector<SSetSection> enumerate_sections(const SimplicialScenario& f, std::size_t cap) {
  std::vector<SSetSection> out;
  const SSetMap& m = f.map();
  for_each_sset_map(
      f.base(), f.total(), [&](int n, ElemId x, ElemId y) { return m(n, y) == x; },
      [&](const SSetSection& s) {
        out.push_back(s);
        check_cap(out.size(), cap);
        return true;
      });
  return out;
}

ContextTable context_table(const Scenario& scn, const std::vector<GlobalAssignment>& sections) {
  ContextTable t;
  const Complex& c = scn.complex();
  for (SimplexId sigma : c.maximal()) {
    t.contexts.push_back(c.simplex_label(sigma));
    t.keys.emplace_back(0, sigma);
    std::vector<std::string> labels;
    for (const Section& s : scn.sections(sigma)) {
      std::vector<std::string> parts;
      for (std::size_t i = 0; i < s.size(); ++i) parts.push_back(scn.outcome_label(c.simplex(sigma)[i], s[i]));
      labels.push_back(join(parts));
    }
    t.coords.push_back(std::move(labels));
  }
  for (const auto& g : sections) {
    std::vector<std::uint32_t> col;
    for (SimplexId sigma : c.maximal())
      col.push_back(static_cast<std::uint32_t>(scn.section_index(sigma, scn.restrict_global(g, sigma))));
    t.columns.push_back(std::move(col));
    std::vector<std::string> parts;
    for (VertexId x = 0; x < g.size(); ++x) parts.push_back(c.label(x) + "=" + scn.outcome_label(x, g[x]));
    t.sections.push_back(join(parts));
  }
  return t;
}

namespace detail {
SimplexId section_simplex(const BundleScenario& f, const BundleSection& s, SimplexId sigma) {
  Simplex img;
  for (VertexId u : f.base().simplex(sigma)) img.push_back(s.at(u));
  std::sort(img.begin(), img.end());
  return f.total().id_of(img);
}
}  // namespace detail

ContextTable context_table(const BundleScenario& f, const std::vector<BundleSection>& sections) {
  ContextTable t;
  const Complex& base = f.base();
  const Complex& total = f.total();
  for (SimplexId sigma : base.maximal()) {
    t.contexts.push_back(base.simplex_label(sigma));
    t.keys.emplace_back(0, sigma);
    std::vector<std::string> labels;
    for (SimplexId g : f.fiber(sigma)) labels.push_back(total.simplex_label(g));
    t.coords.push_back(std::move(labels));
  }
  for (const auto& s : sections) {
    std::vector<std::uint32_t> col;
    for (SimplexId sigma : base.maximal())
      col.push_back(static_cast<std::uint32_t>(f.fiber_position(detail::section_simplex(f, s, sigma))));
    t.columns.push_back(std::move(col));
    std::vector<std::string> parts;
    for (VertexId v : s) parts.push_back(total.label(v));
    t.sections.push_back(join(parts));
  }
  return t;
}

ContextTable context_table(const SimplicialScenario& f, const std::vector<SSetSection>& sections) {
  ContextTable t;
  const BoundedSSet& x = f.base();
  const BoundedSSet& e = f.total();
  // fiber positions, per level
  std::vector<std::vector<std::uint32_t>> pos(f.dim() + 1);
  for (int n = 0; n <= f.dim(); ++n) {
    pos[n].resize(e.count(n));
    for (ElemId b = 0; b < x.count(n); ++b) {
      const auto& fib = f.fiber(n, b);
      for (std::uint32_t k = 0; k < fib.size(); ++k) pos[n][fib[k]] = k;
    }
  }
  for (int n = 0; n <= f.dim(); ++n)
    for (ElemId b = 0; b < x.count(n); ++b) {
      if (x.degenerate(n, b)) continue;
      t.contexts.push_back(x.label(n, b));
      t.keys.emplace_back(n, b);
      std::vector<std::string> labels;
      for (ElemId g : f.fiber(n, b)) labels.push_back(e.label(n, g));
      t.coords.push_back(std::move(labels));
    }
  for (const auto& s : sections) {
    std::vector<std::uint32_t> col;
    for (auto [n, b] : t.keys) col.push_back(pos[n][s[n][b]]);
    t.columns.push_back(std::move(col));
    std::vector<std::string> parts;
    int lvl = f.dim() >= 1 ? 1 : 0;
    for (ElemId b = 0; b < x.count(lvl); ++b)
      if (!x.degenerate(lvl, b)) parts.push_back(e.label(lvl, s[lvl][b]));
    t.sections.push_back(join(parts, ";"));
  }
  return t;
}

namespace {

void check_shape(const ContextTable& t, std::size_t values_size, const std::vector<std::size_t>& coord_sizes) {
  require(values_size == t.contexts.size(), "model values do not match the contexts");
  for (std::size_t c = 0; c < coord_sizes.size(); ++c)
    require(coord_sizes[c] == t.coords[c].size(), "model values do not match the coordinates of " + t.contexts[c]);
}

template <class V>
std::vector<std::size_t> sizes(const std::vector<std::vector<V>>& v) {
  std::vector<std::size_t> out;
  for (const auto& r : v) out.push_back(r.size());
  return out;
}

}  // namespace

Certificate decide_table(const ContextTable& t, const std::vector<std::vector<Rational>>& values) {
  check_shape(t, values.size(), sizes(values));
  const std::size_t ns = t.columns.size();
  Certificate cert;
  cert.semiring = RationalSemiring::name();

  // rows with identical column sets and right-hand side are merged
  struct Row {
    std::size_t context, coord;
  };
  std::vector<std::vector<std::vector<std::size_t>>> hits(t.contexts.size());
  for (std::size_t c = 0; c < t.contexts.size(); ++c) hits[c].resize(t.coords[c].size());
  for (std::size_t s = 0; s < ns; ++s)
    for (std::size_t c = 0; c < t.contexts.size(); ++c) hits[c][t.columns[s][c]].push_back(s);
  std::map<std::pair<std::vector<std::size_t>, std::string>, Row> unique;
  std::vector<Row> rows;
  for (std::size_t c = 0; c < t.contexts.size(); ++c)
    for (std::size_t k = 0; k < t.coords[c].size(); ++k) {
      if (hits[c][k].empty() && sgn(values[c][k]) == 0) continue;
      auto [it, fresh] = unique.emplace(std::make_pair(hits[c][k], values[c][k].get_str()), Row{c, k});
      if (fresh) rows.push_back(it->second);
    }

  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (const Row& r : rows) {
    std::vector<Rational> line(ns);
    for (std::size_t s : hits[r.context][r.coord]) line[s] = 1;
    A.push_back(std::move(line));
    b.push_back(values[r.context][r.coord]);
  }
  A.emplace_back(ns, Rational(1));
  b.emplace_back(1);

  FeasibilityResult res = solve_feasibility(A, b);
  if (res.feasible) {
    cert.verdict = Verdict::noncontextual;
    for (std::size_t s = 0; s < ns; ++s)
      if (sgn(res.x[s]) != 0) {
        cert.support.push_back(s);
        cert.weights.push_back(res.x[s]);
      }
    return cert;
  }
  cert.verdict = Verdict::contextual;
  cert.functional.resize(t.contexts.size());
  for (std::size_t c = 0; c < t.contexts.size(); ++c) cert.functional[c].assign(t.coords[c].size(), Rational(0));
  cert.model_value = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    cert.functional[rows[i].context][rows[i].coord] = res.farkas[i];
    cert.model_value += res.farkas[i] * b[i];
  }
  cert.bound = -res.farkas.back();
  return cert;
}

Certificate decide_table(const ContextTable& t, const std::vector<std::vector<bool>>& values) {
  check_shape(t, values.size(), sizes(values));
  Certificate cert;
  cert.semiring = BooleanSemiring::name();
  std::vector<std::vector<char>> covered(t.contexts.size());
  for (std::size_t c = 0; c < t.contexts.size(); ++c) covered[c].assign(t.coords[c].size(), 0);
  for (std::size_t s = 0; s < t.columns.size(); ++s) {
    bool fits = true;
    for (std::size_t c = 0; c < t.contexts.size() && fits; ++c) fits = values[c][t.columns[s][c]];
    if (!fits) continue;
    cert.support.push_back(s);
    for (std::size_t c = 0; c < t.contexts.size(); ++c) covered[c][t.columns[s][c]] = 1;
  }
  for (std::size_t c = 0; c < t.contexts.size(); ++c)
    for (std::size_t k = 0; k < t.coords[c].size(); ++k)
      if (values[c][k] && !covered[c][k]) {
        cert.verdict = Verdict::contextual;
        cert.support.clear();
        cert.unextendable = std::make_pair(c, k);
        return cert;
      }
  cert.verdict = Verdict::noncontextual;
  return cert;
}

std::optional<std::string> check_certificate(const ContextTable& t, const std::vector<std::vector<Rational>>& values,
                                             const Certificate& c) {
  check_shape(t, values.size(), sizes(values));
  if (c.verdict == Verdict::noncontextual) {
    if (c.weights.size() != c.support.size()) return "weights and support differ in length";
    Rational sum = 0;
    std::vector<std::vector<Rational>> mixed(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) mixed[k].assign(values[k].size(), Rational(0));
    for (std::size_t i = 0; i < c.support.size(); ++i) {
      if (c.support[i] >= t.columns.size()) return "weight on an unknown section";
      if (sgn(c.weights[i]) < 0) return "negative weight";
      sum += c.weights[i];
      for (std::size_t k = 0; k < values.size(); ++k) mixed[k][t.columns[c.support[i]][k]] += c.weights[i];
    }
    if (sum != 1) return "weights do not sum to one";
    for (std::size_t k = 0; k < values.size(); ++k)
      if (mixed[k] != values[k]) return "mixture differs from the model on " + t.contexts[k];
    return std::nullopt;
  }
  if (c.verdict == Verdict::contextual) {
    if (sizes(c.functional) != sizes(values)) return "functional has the wrong shape";
    Rational at_model = 0;
    for (std::size_t k = 0; k < values.size(); ++k)
      for (std::size_t j = 0; j < values[k].size(); ++j) at_model += c.functional[k][j] * values[k][j];
    if (at_model != c.model_value) return "stated model value is wrong";
    if (!(at_model > c.bound)) return "functional does not separate the model";
    for (std::size_t s = 0; s < t.columns.size(); ++s) {
      Rational v = 0;
      for (std::size_t k = 0; k < values.size(); ++k) v += c.functional[k][t.columns[s][k]];
      if (v > c.bound) return "section " + t.sections[s] + " exceeds the bound";
    }
    return std::nullopt;
  }
  return "no verdict";
}

std::optional<std::string> check_certificate(const ContextTable& t, const std::vector<std::vector<bool>>& values,
                                             const Certificate& c) {
  check_shape(t, values.size(), sizes(values));
  auto fits = [&](std::size_t s) {
    for (std::size_t k = 0; k < values.size(); ++k)
      if (!values[k][t.columns[s][k]]) return false;
    return true;
  };
  if (c.verdict == Verdict::noncontextual) {
    std::vector<std::vector<char>> covered(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) covered[k].assign(values[k].size(), 0);
    for (std::size_t s : c.support) {
      if (s >= t.columns.size() || !fits(s)) return "support contains an incompatible section";
      for (std::size_t k = 0; k < values.size(); ++k) covered[k][t.columns[s][k]] = 1;
    }
    for (std::size_t k = 0; k < values.size(); ++k)
      for (std::size_t j = 0; j < values[k].size(); ++j)
        if (static_cast<bool>(covered[k][j]) != values[k][j]) return "supports differ on " + t.contexts[k];
    return std::nullopt;
  }
  if (c.verdict == Verdict::contextual) {
    if (!c.unextendable) return "missing witness";
    auto [k, j] = *c.unextendable;
    if (k >= values.size() || j >= values[k].size() || !values[k][j]) return "witness is not in the support";
    for (std::size_t s = 0; s < t.columns.size(); ++s)
      if (t.columns[s][k] == j && fits(s)) return "witness extends to section " + t.sections[s];
    return std::nullopt;
  }
  return "no verdict";
}

}  // namespace ctxscen
