#include "ctxscen/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace ctxscen::io {

namespace {

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

std::vector<std::string> label_list(const Node& n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n.array().size(); ++i) {
    const std::string& s = n.at(i).str();
    if (s.empty() || s.find(',') != std::string::npos) n.at(i).fail("labels must be non-empty and contain no comma");
    out.push_back(s);
  }
  return out;
}

Simplex simplex_from(const Node& n, const Complex& c) {
  Simplex s;
  for (std::size_t i = 0; i < n.array().size(); ++i) {
    auto v = c.find_vertex(n.at(i).str());
    if (!v) n.at(i).fail("unknown vertex \"" + n.at(i).str() + "\"");
    s.push_back(*v);
  }
  if (s.empty()) n.fail("empty simplex");
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) n.fail("repeated vertex");
  return s;
}

template <class F>
auto located(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DocumentError&) {
    throw;
  } catch (const Error& e) {
    throw DocumentError(e.code(), n.path, e.what());
  }
}

}  // namespace

Node Node::at(const std::string& key) const {
  if (!value.is_object()) fail("expected an object");
  auto it = value.find(key);
  if (it == value.end()) fail("missing field \"" + key + "\"");
  return Node{*it, path + "/" + escape_pointer(key)};
}

Node Node::at(std::size_t i) const {
  if (!value.is_array() || i >= value.size()) fail("expected an array with index " + std::to_string(i));
  return Node{value[i], path + "/" + std::to_string(i)};
}

void Node::fail(const std::string& what) const {
  throw DocumentError(ErrorCode::invalid_input, path.empty() ? "/" : path, what);
}

const std::string& Node::str() const {
  if (!value.is_string()) fail("expected a string");
  return value.get_ref<const std::string&>();
}

const json::array_t& Node::array() const {
  if (!value.is_array()) fail("expected an array");
  return value.get_ref<const json::array_t&>();
}

const json::object_t& Node::object() const {
  if (!value.is_object()) fail("expected an object");
  return value.get_ref<const json::object_t&>();
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DocumentError(ErrorCode::invalid_input, "", "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DocumentError(ErrorCode::invalid_input, "", std::string("malformed JSON: ") + e.what());
  }
}

json envelope(const std::string& kind) { return json{{"kind", kind}, {"version", kFormatVersion}}; }

ComplexPtr parse_complex(const Node& n, std::vector<std::string>& warnings) {
  auto labels = label_list(n.at("vertices"));
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) n.at("vertices").fail("duplicate vertex label");
  std::vector<std::vector<std::string>> gens;
  // "maximal" lists generators; "simplices" is meant as the full list and is
  // closed with a warning when it is not
  if (n.has("maximal") && n.has("simplices")) n.fail("give either \"maximal\" or \"simplices\"");
  bool full_list = n.has("simplices");
  if (full_list || n.has("maximal")) {
    Node s = n.at(full_list ? "simplices" : "maximal");
    for (std::size_t i = 0; i < s.array().size(); ++i) {
      Node g = s.at(i);
      auto lbl = label_list(g);
      if (lbl.empty()) g.fail("empty simplex");
      for (std::size_t k = 0; k < lbl.size(); ++k)
        if (!seen.count(lbl[k])) g.at(k).fail("unknown vertex \"" + lbl[k] + "\"");
      gens.push_back(std::move(lbl));
    }
  }
  auto c = located(n, [&] { return share(Complex::from_labels(labels, gens)); });
  // closure adds faces that were not listed
  std::set<Simplex> listed;
  for (const auto& g : gens) {
    Simplex s;
    for (const auto& l : g) s.push_back(c->vertex(l));
    std::sort(s.begin(), s.end());
    listed.insert(s);
  }
  std::size_t added = 0;
  for (const auto& s : c->simplices())
    if (s.size() > 1 && !listed.count(s)) ++added;
  if (added && full_list) warnings.push_back(n.path + ": simplex list was not downward closed; added " + std::to_string(added) + " faces");
  return c;
}

json complex_json(const Complex& c) {
  json maximal = json::array();
  for (SimplexId m : c.maximal()) maximal.push_back(c.simplex_labels(c.simplex(m)));
  return json{{"vertices", c.labels()}, {"maximal", maximal}};
}

ScenarioPtr parse_scenario(const Node& n, std::vector<std::string>& warnings) {
  auto c = parse_complex(n.at("complex"), warnings);
  Node o = n.at("outcomes");
  std::vector<std::vector<std::string>> outs;
  if (o.value.is_array()) {
    auto same = label_list(o);
    outs.assign(c->num_vertices(), same);
  } else {
    for (const auto& [key, v] : o.object())
      if (!c->find_vertex(key)) o.at(key).fail("outcomes for unknown vertex \"" + key + "\"");
    for (VertexId x = 0; x < c->num_vertices(); ++x) outs.push_back(label_list(o.at(c->label(x))));
  }
  for (std::size_t x = 0; x < outs.size(); ++x) {
    if (outs[x].empty()) o.fail("vertex " + c->label(static_cast<VertexId>(x)) + " has no outcomes");
    std::set<std::string> u(outs[x].begin(), outs[x].end());
    if (u.size() != outs[x].size()) o.fail("repeated outcome at " + c->label(static_cast<VertexId>(x)));
  }
  return located(n, [&] { return share(Scenario(c, outs)); });
}

json scenario_json(const Scenario& s) {
  json outs = json::object();
  for (VertexId x = 0; x < s.complex().num_vertices(); ++x) outs[s.complex().label(x)] = s.outcomes()[x];
  return json{{"complex", complex_json(s.complex())}, {"outcomes", outs}};
}

BundlePtr parse_bundle(const Node& n, std::vector<std::string>& warnings) {
  auto base = parse_complex(n.at("base"), warnings);
  auto total = parse_complex(n.at("total"), warnings);
  Node m = n.at("map");
  std::vector<VertexId> vm(total->num_vertices());
  for (VertexId v = 0; v < total->num_vertices(); ++v) {
    Node t = m.at(total->label(v));
    auto b = base->find_vertex(t.str());
    if (!b) t.fail("unknown base vertex \"" + t.str() + "\"");
    vm[v] = *b;
  }
  if (m.object().size() != total->num_vertices()) m.fail("map has entries for unknown vertices");
  return located(m, [&] { return share(BundleScenario(ComplexMap(total, base, vm))); });
}

json bundle_json(const BundleScenario& f) {
  json m = json::object();
  for (VertexId v = 0; v < f.total().num_vertices(); ++v) m[f.total().label(v)] = f.base().label(f.map()(v));
  return json{{"base", complex_json(f.base())}, {"total", complex_json(f.total())}, {"map", m}};
}

SimplicialRelation parse_relation(const Node& n, ComplexPtr target, std::vector<std::string>& warnings) {
  auto source = parse_complex(n.at("source"), warnings);
  Node m = n.at("map");
  std::vector<SimplexId> vals;
  for (VertexId y = 0; y < source->num_vertices(); ++y) {
    Node v = m.at(source->label(y));
    auto id = target->find(simplex_from(v, *target));
    if (!id) v.fail("not a simplex of the target");
    vals.push_back(*id);
  }
  return located(m, [&] { return SimplicialRelation(source, target, vals); });
}

ScenarioMorphism parse_morphism(const Node& n, std::vector<std::string>& warnings) {
  auto src = parse_scenario(n.at("source"), warnings);
  auto tgt = parse_scenario(n.at("target"), warnings);
  const Complex& sc = src->complex();
  const Complex& tc = tgt->complex();
  Node r = n.at("relation");
  std::vector<SimplexId> vals;
  for (VertexId y = 0; y < tc.num_vertices(); ++y) {
    Node v = r.at(tc.label(y));
    auto id = sc.find(simplex_from(v, sc));
    if (!id) v.fail("not a simplex of the source");
    vals.push_back(*id);
  }
  auto rel = located(r, [&] { return SimplicialRelation(tgt->complex_ptr(), src->complex_ptr(), vals); });
  Node a = n.at("alpha");
  std::vector<std::vector<Outcome>> alpha;
  for (VertexId y = 0; y < tc.num_vertices(); ++y) {
    Node ay = a.at(tc.label(y));
    std::vector<Outcome> table(src->section_count(vals[y]));
    for (std::size_t k = 0; k < table.size(); ++k) {
      std::string key = section_key(*src, vals[y], src->section_at(vals[y], k));
      Node o = ay.at(key);
      auto out = located(o, [&] { return tgt->outcome(y, o.str()); });
      table[k] = out;
    }
    if (ay.object().size() != table.size()) ay.fail("entries for unknown sections");
    alpha.push_back(std::move(table));
  }
  return located(n, [&] { return ScenarioMorphism(src, tgt, rel, alpha); });
}

json morphism_json(const ScenarioMorphism& m) {
  json j = envelope("morphism");
  j["source"] = scenario_json(m.source());
  j["target"] = scenario_json(m.target());
  const Complex& sc = m.source().complex();
  const Complex& tc = m.target().complex();
  json rel = json::object(), alpha = json::object();
  for (VertexId y = 0; y < tc.num_vertices(); ++y) {
    SimplexId s = m.relation()(y);
    rel[tc.label(y)] = sc.simplex_labels(sc.simplex(s));
    json table = json::object();
    for (std::size_t k = 0; k < m.source().section_count(s); ++k)
      table[section_key(m.source(), s, m.source().section_at(s, k))] = m.target().outcome_label(y, m.alpha()[y][k]);
    alpha[tc.label(y)] = table;
  }
  j["relation"] = rel;
  j["alpha"] = alpha;
  return j;
}

bool is_bundle_morphism(const Node& n) { return n.has("flavor") && n.at("flavor").str() == "bundle"; }

BundleMorphism parse_bundle_morphism(const Node& n, std::vector<std::string>& warnings) {
  if (!is_bundle_morphism(n)) n.fail("expected \"flavor\": \"bundle\"");
  auto src = parse_bundle(n.at("source"), warnings);
  auto tgt = parse_bundle(n.at("target"), warnings);
  const Complex& sb = src->base();
  const Complex& tb = tgt->base();
  Node r = n.at("relation");
  std::vector<SimplexId> vals;
  for (VertexId y = 0; y < tb.num_vertices(); ++y) {
    Node v = r.at(tb.label(y));
    auto id = sb.find(simplex_from(v, sb));
    if (!id) v.fail("not a simplex of the source base");
    vals.push_back(*id);
  }
  if (r.object().size() != tb.num_vertices()) r.fail("relation has entries for unknown vertices");
  auto rel = located(r, [&] { return SimplicialRelation(tgt->base_ptr(), src->base_ptr(), vals); });
  auto pb = pull_back_relation(src, rel);
  const Complex& pc = *pb->complex;
  Node a = n.at("alpha");
  std::vector<VertexId> alpha;
  for (VertexId v = 0; v < pc.num_vertices(); ++v) {
    Node t = a.at(pc.label(v));
    auto w = tgt->total().find_vertex(t.str());
    if (!w) t.fail("unknown target total vertex \"" + t.str() + "\"");
    alpha.push_back(*w);
  }
  if (a.object().size() != pc.num_vertices()) a.fail("alpha has entries for unknown pull-back vertices");
  return located(a, [&] { return BundleMorphism(src, tgt, pb, alpha); });
}

json morphism_json(const BundleMorphism& m) {
  json j = envelope("morphism");
  j["flavor"] = "bundle";
  j["source"] = bundle_json(m.source());
  j["target"] = bundle_json(m.target());
  const Complex& sb = m.source().base();
  const Complex& tb = m.target().base();
  json rel = json::object(), alpha = json::object();
  for (VertexId y = 0; y < tb.num_vertices(); ++y) rel[tb.label(y)] = sb.simplex_labels(sb.simplex(m.relation()(y)));
  const Complex& pc = *m.pullback().complex;
  for (VertexId v = 0; v < pc.num_vertices(); ++v) alpha[pc.label(v)] = m.target().total().label(m.alpha()(v));
  j["relation"] = rel;
  j["alpha"] = alpha;
  return j;
}

SSetPtr parse_sset(const Node& n) {
  Node dn = n.at("dim");
  if (!dn.value.is_number_integer() || dn.value.get<int>() < 0) dn.fail("dim must be a non-negative integer");
  int dim = dn.value.get<int>();
  auto ids = [](const Node& t) {
    std::vector<ElemId> out;
    for (std::size_t i = 0; i < t.array().size(); ++i) {
      Node e = t.at(i);
      if (!e.value.is_number_unsigned()) e.fail("expected an element index");
      out.push_back(e.value.get<ElemId>());
    }
    return out;
  };
  std::vector<std::size_t> counts;
  for (ElemId c : ids(n.at("counts"))) counts.push_back(c);
  if (counts.size() != static_cast<std::size_t>(dim + 1)) n.at("counts").fail("need one count per level");
  std::vector<std::vector<BoundedSSet::Table>> faces(dim + 1), degens(dim);
  Node f = n.at("faces"), d = n.at("degeneracies");
  if (f.array().size() != static_cast<std::size_t>(dim)) f.fail("need face tables for levels 1..dim");
  if (d.array().size() != static_cast<std::size_t>(dim)) d.fail("need degeneracy tables for levels 0..dim-1");
  for (int k = 1; k <= dim; ++k)
    for (std::size_t i = 0; i < f.at(k - 1).array().size(); ++i) faces[k].push_back(ids(f.at(k - 1).at(i)));
  for (int k = 0; k < dim; ++k)
    for (std::size_t j = 0; j < d.at(k).array().size(); ++j) degens[k].push_back(ids(d.at(k).at(j)));
  std::vector<std::vector<std::string>> labels;
  if (n.has("labels"))
    for (std::size_t k = 0; k < n.at("labels").array().size(); ++k) {
      labels.emplace_back();
      for (std::size_t i = 0; i < n.at("labels").at(k).array().size(); ++i)
        labels.back().push_back(n.at("labels").at(k).at(i).str());
    }
  return located(n, [&] { return share(BoundedSSet(dim, counts, faces, degens, labels)); });
}

json sset_json(const BoundedSSet& x) {
  json j;
  j["dim"] = x.dim();
  json counts = json::array(), faces = json::array(), degens = json::array(), labels = json::array();
  for (int n = 0; n <= x.dim(); ++n) {
    counts.push_back(x.count(n));
    json lv = json::array();
    for (ElemId e = 0; e < x.count(n); ++e) lv.push_back(x.label(n, e));
    labels.push_back(lv);
  }
  for (int n = 1; n <= x.dim(); ++n) {
    json level = json::array();
    for (int i = 0; i <= n; ++i) {
      json t = json::array();
      for (ElemId e = 0; e < x.count(n); ++e) t.push_back(x.face(n, i, e));
      level.push_back(t);
    }
    faces.push_back(level);
  }
  for (int n = 0; n < x.dim(); ++n) {
    json level = json::array();
    for (int k = 0; k <= n; ++k) {
      json t = json::array();
      for (ElemId e = 0; e < x.count(n); ++e) t.push_back(x.degen(n, k, e));
      level.push_back(t);
    }
    degens.push_back(level);
  }
  j["counts"] = counts;
  j["faces"] = faces;
  j["degeneracies"] = degens;
  j["labels"] = labels;
  return j;
}

SMapPtr parse_sset_map(const Node& n) {
  auto total = parse_sset(n.at("total"));
  auto base = parse_sset(n.at("base"));
  Node m = n.at("map");
  std::vector<std::vector<ElemId>> levels;
  for (std::size_t k = 0; k < m.array().size(); ++k) {
    levels.emplace_back();
    for (std::size_t i = 0; i < m.at(k).array().size(); ++i) {
      Node e = m.at(k).at(i);
      if (!e.value.is_number_unsigned()) e.fail("expected an element index");
      levels.back().push_back(e.value.get<ElemId>());
    }
  }
  return located(m, [&] { return share(SSetMap(total, base, levels)); });
}

std::string section_key(const Scenario& s, SimplexId sigma, const Section& sec) {
  std::vector<std::string> parts;
  const Simplex& vs = s.complex().simplex(sigma);
  for (std::size_t i = 0; i < vs.size(); ++i) parts.push_back(s.outcome_label(vs[i], sec[i]));
  return join(parts);
}

std::string simplex_key(const Complex& c, SimplexId s) { return join(c.simplex_labels(c.simplex(s))); }

namespace detail {

SimplexId context_of(const Node& n, const Complex& c) {
  auto id = c.find(simplex_from(n, c));
  if (!id) n.fail("not a simplex");
  return *id;
}

Section section_of(const Node& n, const Scenario& s, SimplexId sigma) {
  const Simplex& vs = s.complex().simplex(sigma);
  if (n.array().size() != vs.size()) n.fail("need one outcome per vertex of the context");
  Section sec;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto& outs = s.outcomes()[vs[i]];
    const std::string& o = n.at(i).str();
    auto it = std::find(outs.begin(), outs.end(), o);
    if (it == outs.end()) n.at(i).fail("unknown outcome \"" + o + "\" at " + s.complex().label(vs[i]));
    sec.push_back(static_cast<Outcome>(it - outs.begin()));
  }
  return sec;
}

SimplexId total_simplex_of(const Node& n, const BundleScenario& f, SimplexId sigma) {
  const Simplex& vs = f.base().simplex(sigma);
  if (n.array().size() != vs.size()) n.fail("need one total vertex per vertex of the context");
  Simplex g;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string& l = n.at(i).str();
    auto v = f.total().find_vertex(l);
    if (!v) n.at(i).fail("unknown total vertex \"" + l + "\"");
    if (f.map()(*v) != vs[i]) n.at(i).fail("\"" + l + "\" does not lie over " + f.base().label(vs[i]));
    g.push_back(*v);
  }
  std::sort(g.begin(), g.end());
  auto id = f.total().find(g);
  if (!id) n.fail("not a simplex of the total complex");
  return *id;
}

json section_values(const Scenario& s, SimplexId sigma, const Section& sec) {
  json out = json::array();
  const Simplex& vs = s.complex().simplex(sigma);
  for (std::size_t i = 0; i < vs.size(); ++i) out.push_back(s.outcome_label(vs[i], sec[i]));
  return out;
}

json total_values(const BundleScenario& f, SimplexId g) {
  json out = json::array();
  const Simplex& gs = f.total().simplex(g);
  std::vector<std::pair<VertexId, VertexId>> by_base;
  for (VertexId v : gs) by_base.emplace_back(f.map()(v), v);
  std::sort(by_base.begin(), by_base.end());
  for (auto [x, v] : by_base) out.push_back(f.total().label(v));
  return out;
}

}  // namespace detail

json certificate_json(const std::string& flavor, const ContextTable& t, const Certificate& c) {
  json j = envelope("certificate");
  j["flavor"] = flavor;
  j["semiring"] = c.semiring;
  j["verdict"] = verdict_name(c.verdict);
  j["sections"] = t.columns.size();
  if (c.verdict == Verdict::noncontextual) {
    json w = json::array();
    for (std::size_t i = 0; i < c.support.size(); ++i) {
      json e{{"section", t.sections[c.support[i]]}};
      if (c.semiring == RationalSemiring::name())
        e["w"] = to_string(c.weights[i]);
      else
        e["w"] = true;
      w.push_back(e);
    }
    j["weights"] = w;
  } else if (c.verdict == Verdict::contextual) {
    json wit;
    if (c.unextendable) {
      wit["context"] = t.contexts[c.unextendable->first];
      wit["element"] = t.coords[c.unextendable->first][c.unextendable->second];
    } else {
      json f = json::array();
      for (std::size_t k = 0; k < t.contexts.size(); ++k) {
        json co = json::object();
        for (std::size_t i = 0; i < t.coords[k].size(); ++i)
          if (sgn(c.functional[k][i]) != 0) co[t.coords[k][i]] = to_string(c.functional[k][i]);
        if (!co.empty()) f.push_back({{"context", t.contexts[k]}, {"coefficients", co}});
      }
      wit["functional"] = f;
      wit["bound"] = to_string(c.bound);
      wit["value"] = to_string(c.model_value);
    }
    j["witness"] = wit;
  } else {
    j["reason"] = c.reason;
  }
  return j;
}

namespace {

void check_envelope(const Node& root, const std::string& kind) {
  if (root.at("version").str() != kFormatVersion) root.at("version").fail("unknown format version");
  (void)kind;
}

template <Semiring S>
void parse_model_doc(const Node& root, std::vector<std::string>& warnings) {
  std::string flavor = root.has("flavor") ? root.at("flavor").str() : "scenario";
  if (flavor == "scenario")
    parse_model<S>(root, parse_scenario(root.at("scenario"), warnings));
  else if (flavor == "bundle")
    parse_bundle_model<S>(root, parse_bundle(root.at("bundle"), warnings));
  else
    root.at("flavor").fail("flavor must be scenario or bundle");
}

}  // namespace

Document parse_document(const json& j) {
  Node root{j, ""};
  Document doc;
  doc.value = j;
  doc.kind = root.at("kind").str();
  check_envelope(root, doc.kind);
  auto& w = doc.warnings;
  if (doc.kind == "scenario") {
    parse_scenario(root, w);
  } else if (doc.kind == "bundle") {
    parse_bundle(root, w);
  } else if (doc.kind == "relation") {
    parse_relation(root, parse_complex(root.at("target"), w), w);
  } else if (doc.kind == "morphism") {
    if (is_bundle_morphism(root))
      parse_bundle_morphism(root, w);
    else
      parse_morphism(root, w);
  } else if (doc.kind == "sset") {
    parse_sset_map(root);
  } else if (doc.kind == "model") {
    std::string sr = root.has("semiring") ? root.at("semiring").str() : "rational";
    if (sr == "rational")
      parse_model_doc<RationalSemiring>(root, w);
    else if (sr == "boolean")
      parse_model_doc<BooleanSemiring>(root, w);
    else
      root.at("semiring").fail("semiring must be rational or boolean");
  } else if (doc.kind == "certificate") {
    const std::string& v = root.at("verdict").str();
    if (v != "noncontextual" && v != "contextual" && v != "undecided") root.at("verdict").fail("unknown verdict");
    if (v == "noncontextual") root.at("weights").array();
    if (v == "contextual") root.at("witness").object();
  } else if (doc.kind == "report") {
    root.at("command").str();
    root.at("result");
  } else if (doc.kind == "error") {
    root.at("code").str();
    root.at("message").str();
  } else {
    root.at("kind").fail("unknown document kind \"" + doc.kind + "\"");
  }
  return doc;
}

Document parse_document_file(const std::string& path) { return parse_document(read_file(path)); }

}  // namespace ctxscen::io
