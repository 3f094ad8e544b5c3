#include <CLI11.hpp>
#include <iostream>
#include <random>

#include "ctxscen/contextuality.hpp"
#include "ctxscen/io.hpp"
#include "ctxscen/simplicial_scen.hpp"

using namespace ctxscen;
using io::json;
using io::Node;

namespace {

enum Exit { kOk = 0, kContextual = 1, kInvalid = 2, kCap = 3 };

struct Options {
  int dim = kDefaultDim;
  std::size_t cap = 0;  // 0: library defaults
  std::string semiring = "rational";
  std::uint64_t seed = 1;
  std::string format = "json";
  std::string flavor = "scenario";
  bool hat = false;
  std::string morphism;
  std::vector<std::string> files;

  std::size_t simplex_cap() const { return cap ? cap : kDefaultSimplexCap; }
  std::size_t section_cap() const { return cap ? cap : kDefaultSectionCap; }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

json report(const std::string& command, json result, const std::vector<std::string>& warnings = {}) {
  json j = io::envelope("report");
  j["command"] = command;
  j["result"] = std::move(result);
  j["warnings"] = warnings;
  return j;
}

int emit_error(const std::string& code, const std::string& message, const std::string& path = "") {
  json j = io::envelope("error");
  j["code"] = code;
  j["message"] = message;
  if (!path.empty()) j["path"] = path;
  emit(j);
  return code == "cap_exceeded" ? kCap : kInvalid;
}

json levels_json(const BoundedSSet& x) {
  json counts = json::array(), nondeg = json::array();
  for (int n = 0; n <= x.dim(); ++n) {
    counts.push_back(x.count(n));
    std::size_t k = 0;
    for (ElemId e = 0; e < x.count(n); ++e) k += !x.degenerate(n, e);
    nondeg.push_back(k);
  }
  return json{{"elements", counts}, {"nondegenerate", nondeg}};
}

json flags_json(const SScenFlags& f) {
  json j{{"surjective", f.surjective},
         {"locally_surjective", f.locally_surjective},
         {"discrete_over_vertices", f.discrete_over_vertices},
         {"dim", f.dim}};
  if (!f.failure.empty()) j["failure"] = f.failure;
  return j;
}

json flags_json(const MapFlags& f) {
  return json{{"surjective", f.surjective},
              {"locally_surjective", f.locally_surjective},
              {"discrete_over_vertices", f.discrete_over_vertices}};
}

json dims_json(const Complex& c) {
  json out = json::array();
  for (SimplexId s = 0; s < c.size(); ++s) {
    std::size_t d = c.dim(s);
    while (out.size() <= d) out.push_back(0);
    out[d] = out[d].get<std::size_t>() + 1;
  }
  return out;
}

std::string semiring_of(const Node& root, const Options& o) {
  return root.has("semiring") ? root.at("semiring").str() : o.semiring;
}

template <class F>
auto with_semiring(const std::string& name, F&& f) {
  if (name == "rational") return f(RationalSemiring{});
  if (name == "boolean") return f(BooleanSemiring{});
  throw Error(ErrorCode::unsupported, "semiring must be rational or boolean, not " + name);
}

io::Document load(const std::string& path, const std::string& expect = "") {
  auto doc = io::parse_document_file(path);
  if (!expect.empty() && doc.kind != expect)
    throw io::DocumentError(ErrorCode::invalid_input, "/kind", "expected a " + expect + " document, got " + doc.kind);
  return doc;
}

int cmd_validate(const Options& o) {
  auto doc = load(o.files.at(0));
  Node root{doc.value, ""};
  std::vector<std::string> w;
  json r{{"kind", doc.kind}, {"valid", true}};
  int code = kOk;
  if (doc.kind == "scenario") {
    auto s = io::parse_scenario(root, w);
    Rational globals = 1;
    for (VertexId x = 0; x < s->complex().num_vertices(); ++x) globals *= static_cast<long>(s->num_outcomes(x));
    r["vertices"] = s->complex().num_vertices();
    r["simplices"] = s->complex().size();
    r["maximal"] = s->complex().maximal().size();
    r["global_assignments"] = globals.get_str();
  } else if (doc.kind == "bundle") {
    auto f = io::parse_bundle(root, w);
    r["flags"] = flags_json(classify_map(f->map()));
    r["base_simplices"] = f->base().size();
    r["total_simplices"] = f->total().size();
  } else if (doc.kind == "sset") {
    auto m = io::parse_sset_map(root);
    auto flags = check_simplicial_scenario(*m);
    r["flags"] = flags_json(flags);
    r["valid"] = flags.scenario();
    if (!flags.scenario()) code = kInvalid;
  } else if (doc.kind == "model") {
    r["semiring"] = semiring_of(root, o);
    r["flavor"] = root.has("flavor") ? root.at("flavor").str() : "scenario";
  }
  emit(report("validate", r, doc.warnings));
  return code;
}

int cmd_nerve(const Options& o) {
  auto doc = load(o.files.at(0));
  Node root{doc.value, ""};
  std::vector<std::string> w;
  json r;
  if (doc.kind == "bundle") {
    auto f = io::parse_bundle(root, w);
    if (o.hat) {
      auto hb = hat_N_bundle(*f, o.simplex_cap());
      r["total"] = dims_json(*hb.total);
      r["base"] = dims_json(*hb.base);
      r["flags"] = flags_json(classify_map(hb.bundle->map()));
    } else {
      auto nb = nerve_bundle(f, o.dim, o.simplex_cap());
      r["total"] = levels_json(*nb.total->sset);
      r["base"] = levels_json(*nb.base->sset);
      r["flags"] = flags_json(nb.scenario->flags());
    }
  } else {
    ComplexPtr c;
    if (doc.kind == "scenario")
      c = io::parse_scenario(root, w)->complex_ptr();
    else
      throw io::DocumentError(ErrorCode::invalid_input, "/kind", "nerve needs a scenario or bundle document");
    if (o.hat)
      r["simplices_by_dim"] = dims_json(hat_N(*c, o.simplex_cap()));
    else
      r["levels"] = levels_json(*nerve_space(c, o.dim, o.simplex_cap())->sset);
  }
  r["construction"] = o.hat ? "hat" : "simplicial";
  if (!o.hat) r["dim"] = o.dim;
  emit(report("nerve", r, doc.warnings));
  return kOk;
}

int cmd_pullback(const Options& o) {
  auto bdoc = load(o.files.at(0), "bundle");
  auto rdoc = load(o.files.at(1), "relation");
  std::vector<std::string> w = bdoc.warnings;
  auto f = io::parse_bundle(Node{bdoc.value, ""}, w);
  Node rn{rdoc.value, ""};
  auto declared = io::parse_complex(rn.at("target"), w);
  if (!declared->same_as(f->base())) rn.at("target").fail("relation target differs from the bundle base");
  auto rel = io::parse_relation(rn, f->base_ptr(), w);
  auto pb = pull_back_relation(f, rel);
  json b = io::envelope("bundle");
  b.update(io::bundle_json(*pb->projection));
  emit(report("pullback", json{{"bundle", b}, {"total_simplices", pb->complex->size()}}, w));
  return kOk;
}

template <Semiring S>
json nerve_dist_summary(const NerveBundle& nb, const SimplicialDistribution<S>& p) {
  json per = json::array();
  for (int n = 0; n <= nb.scenario->dim(); ++n) {
    std::size_t support = 0;
    for (ElemId x = 0; x < nb.scenario->base().count(n); ++x) support += p.at(n, x).size();
    per.push_back(support);
  }
  return json{{"support_sizes", per}, {"levels", levels_json(nb.scenario->base())}};
}

int cmd_embed(const Options& o) {
  auto doc = load(o.files.at(0));
  Node root{doc.value, ""};
  std::vector<std::string> w = doc.warnings;
  json r;
  if (doc.kind == "scenario") {
    auto s = io::parse_scenario(root, w);
    auto cb = canonical_bundle(s, o.simplex_cap());
    json b = io::envelope("bundle");
    b.update(io::bundle_json(*cb.bundle));
    r["bundle"] = b;
    auto nb = nerve_bundle(cb.bundle, o.dim, o.simplex_cap());
    r["nerve"] = json{{"total", levels_json(*nb.total->sset)}, {"base", levels_json(*nb.base->sset)}, {"dim", o.dim}};
  } else if (doc.kind == "model") {
    if (root.has("flavor") && root.at("flavor").str() != "scenario") root.at("flavor").fail("embed needs a scenario model");
    with_semiring(semiring_of(root, o), [&](auto tag) {
      using S = decltype(tag);
      auto s = io::parse_scenario(root.at("scenario"), w);
      auto e = io::parse_model<S>(root, s);
      auto cb = canonical_bundle(s, o.simplex_cap());
      auto p = eta(cb, e);
      r["model"] = io::model_json(p);
      auto nb = nerve_bundle(cb.bundle, o.dim, o.simplex_cap());
      r["nerve"] = nerve_dist_summary(nb, nerve_dist(nb, p));
      return 0;
    });
  } else if (doc.kind == "morphism") {
    auto m = io::parse_morphism(root, w);
    auto cs = canonical_bundle(m.source_ptr(), o.simplex_cap());
    auto ct = canonical_bundle(m.target_ptr(), o.simplex_cap());
    auto bm = embed_scenario(m, cs, ct);
    r["morphism"] = io::morphism_json(bm);
    auto ns = nerve_bundle(cs.bundle, o.dim, o.simplex_cap());
    auto nt = nerve_bundle(ct.bundle, o.dim, o.simplex_cap());
    auto sm = embed_bundle(bm, ns, nt);
    r["simplicial"] = json{{"pullback", levels_json(*sm.pullback().sset)}, {"dim", o.dim}};
  } else {
    throw io::DocumentError(ErrorCode::invalid_input, "/kind", "embed needs a scenario, model or morphism document");
  }
  emit(report("embed", r, w));
  return kOk;
}

int push_bundle(const Options& o, const Node& mroot, const Node& root, std::vector<std::string>& w) {
  auto m = io::parse_bundle_morphism(mroot, w);
  if (!root.has("flavor") || root.at("flavor").str() != "bundle") root.fail("a bundle morphism needs a bundle model");
  json r;
  with_semiring(semiring_of(root, o), [&](auto tag) {
    using S = decltype(tag);
    auto f = io::parse_bundle(root.at("bundle"), w);
    if (!(f->map() == m.source().map())) root.at("bundle").fail("model bundle differs from the morphism source");
    auto p = io::parse_bundle_model<S>(root, m.source_ptr());
    auto pushed = push_forward(m, p);
    r["model"] = io::model_json(pushed);
    r["flavor"] = o.flavor == "scenario" ? "bundle" : o.flavor;
    if (o.flavor == "sset") {
      auto ns = nerve_bundle(m.source_ptr(), o.dim, o.simplex_cap());
      auto nt = nerve_bundle(m.target_ptr(), o.dim, o.simplex_cap());
      r["agrees"] = push_forward(embed_bundle(m, ns, nt), nerve_dist(ns, p)) == nerve_dist(nt, pushed);
    }
    return 0;
  });
  emit(report("push", r, w));
  return r.value("agrees", true) ? kOk : kInvalid;
}

int cmd_push(const Options& o) {
  auto mdoc = load(o.files.at(0), "morphism");
  auto edoc = load(o.files.at(1), "model");
  std::vector<std::string> w = mdoc.warnings;
  w.insert(w.end(), edoc.warnings.begin(), edoc.warnings.end());
  Node mroot{mdoc.value, ""};
  Node root{edoc.value, ""};
  if (io::is_bundle_morphism(mroot)) return push_bundle(o, mroot, root, w);
  auto m = io::parse_morphism(mroot, w);
  if (root.has("flavor") && root.at("flavor").str() != "scenario") root.at("flavor").fail("push needs a scenario model");
  json r;
  with_semiring(semiring_of(root, o), [&](auto tag) {
    using S = decltype(tag);
    auto s = io::parse_scenario(root.at("scenario"), w);
    if (!(*s == m.source())) root.at("scenario").fail("model scenario differs from the morphism source");
    auto e = io::parse_model<S>(root, m.source_ptr());
    auto pushed = push_forward(m, e);
    r["model"] = io::model_json(pushed);
    r["flavor"] = o.flavor;
    if (o.flavor != "scenario") {
      auto cs = canonical_bundle(m.source_ptr(), o.simplex_cap());
      auto ct = canonical_bundle(m.target_ptr(), o.simplex_cap());
      auto bm = embed_scenario(m, cs, ct);
      bool agrees = push_forward(bm, eta(cs, e)) == eta(ct, pushed);
      if (o.flavor == "sset") {
        auto ns = nerve_bundle(cs.bundle, o.dim, o.simplex_cap());
        auto nt = nerve_bundle(ct.bundle, o.dim, o.simplex_cap());
        agrees = agrees && push_forward(embed_bundle(bm, ns, nt), nerve_dist(ns, eta(cs, e))) ==
                               nerve_dist(nt, eta(ct, pushed));
      }
      r["agrees"] = agrees;
    }
    return 0;
  });
  emit(report("push", r, w));
  return r.value("agrees", true) ? kOk : kInvalid;
}

template <class Sec>
json sections_json(const std::vector<Sec>& secs, const ContextTable& t) {
  (void)secs;
  return json{{"count", t.sections.size()}, {"sections", t.sections}};
}

int cmd_sections(const Options& o) {
  auto doc = load(o.files.at(0));
  Node root{doc.value, ""};
  std::vector<std::string> w = doc.warnings;
  BundlePtr bundle;
  ScenarioPtr scn;
  if (doc.kind == "scenario")
    scn = io::parse_scenario(root, w);
  else if (doc.kind == "bundle")
    bundle = io::parse_bundle(root, w);
  else if (doc.kind == "model" && (!root.has("flavor") || root.at("flavor").str() == "scenario"))
    scn = io::parse_scenario(root.at("scenario"), w);
  else if (doc.kind == "model")
    bundle = io::parse_bundle(root.at("bundle"), w);
  else
    throw io::DocumentError(ErrorCode::invalid_input, "/kind", "sections needs a scenario, bundle or model document");
  json r;
  std::string flavor = o.flavor;
  if (bundle && flavor == "scenario") flavor = "bundle";
  if (flavor == "scenario") {
    auto secs = enumerate_sections(*scn, o.section_cap());
    r = sections_json(secs, context_table(*scn, secs));
  } else {
    if (!bundle) bundle = canonical_bundle(scn, o.simplex_cap()).bundle;
    if (flavor == "bundle") {
      auto secs = enumerate_sections(*bundle, o.section_cap());
      r = sections_json(secs, context_table(*bundle, secs));
    } else {
      auto nb = nerve_bundle(bundle, o.dim, o.simplex_cap());
      auto secs = enumerate_sections(*nb.scenario, o.section_cap());
      r = sections_json(secs, context_table(*nb.scenario, secs));
    }
  }
  r["flavor"] = flavor;
  emit(report("sections", r, w));
  return kOk;
}

int cmd_decide(const Options& o) {
  auto doc = load(o.files.at(0), "model");
  Node root{doc.value, ""};
  std::vector<std::string> w = doc.warnings;
  std::string model_flavor = root.has("flavor") ? root.at("flavor").str() : "scenario";
  std::string flavor = o.flavor;
  if (model_flavor == "bundle" && flavor == "scenario") flavor = "bundle";
  json out;
  Verdict verdict = Verdict::undecided;
  with_semiring(semiring_of(root, o), [&](auto tag) {
    using S = decltype(tag);
    auto finish = [&](const ContextTable& t, const Certificate& c, const auto& values) {
      out = io::certificate_json(flavor, t, c);
      if constexpr (std::is_same_v<S, RationalSemiring> || std::is_same_v<S, BooleanSemiring>) {
        auto problem = check_certificate(t, values, c);
        out["verified"] = !problem.has_value();
        if (problem) out["verification_problem"] = *problem;
      }
      verdict = c.verdict;
    };
    auto bool_values = [](const auto& v) {
      if constexpr (std::is_same_v<S, BooleanSemiring>) {
        std::vector<std::vector<bool>> b(v.size());
        for (std::size_t c = 0; c < v.size(); ++c) b[c].assign(v[c].begin(), v[c].end());
        return b;
      } else {
        return v;
      }
    };
    std::optional<BundleModel<S>> p;
    BundlePtr bundle;
    if (model_flavor == "scenario") {
      auto s = io::parse_scenario(root.at("scenario"), w);
      auto e = io::parse_model<S>(root, s);
      if (flavor == "scenario") {
        auto d = decide(e, o.section_cap());
        finish(d.table, d.certificate, bool_values(table_values(d.table, e)));
        return 0;
      }
      auto cb = canonical_bundle(s, o.simplex_cap());
      p = eta(cb, e);
    } else if (model_flavor == "bundle") {
      if (flavor == "scenario") root.at("flavor").fail("a bundle model cannot be decided in the scenario setting");
      p = io::parse_bundle_model<S>(root, io::parse_bundle(root.at("bundle"), w));
    } else {
      root.at("flavor").fail("flavor must be scenario or bundle");
    }
    if (flavor == "bundle") {
      auto d = decide(*p, o.section_cap());
      finish(d.table, d.certificate, bool_values(table_values(d.table, *p)));
    } else if (flavor == "sset") {
      auto nb = nerve_bundle(p->bundle_ptr(), o.dim, o.simplex_cap());
      auto np = nerve_dist(nb, *p);
      auto d = decide(*nb.scenario, np, o.section_cap());
      finish(d.table, d.certificate, bool_values(table_values(d.table, *nb.scenario, np)));
      out["dim"] = o.dim;
    } else {
      throw Error(ErrorCode::invalid_input, "flavor must be scenario, bundle or sset");
    }
    return 0;
  });
  out["warnings"] = w;
  emit(out);
  return verdict == Verdict::contextual ? kContextual : kOk;
}

/// Random endomorphism of a scenario for naturality checks.
ScenarioMorphism random_endomorphism(std::mt19937_64& rng, ScenarioPtr s) {
  const Complex& c = s->complex();
  std::vector<SimplexId> vals(c.num_vertices());
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (auto& v : vals) v = std::uniform_int_distribution<SimplexId>(0, static_cast<SimplexId>(c.size() - 1))(rng);
    try {
      SimplicialRelation rel(s->complex_ptr(), s->complex_ptr(), vals);
      std::vector<std::vector<Outcome>> alpha;
      for (VertexId x = 0; x < c.num_vertices(); ++x) {
        std::vector<Outcome> a(s->section_count(vals[x]));
        for (auto& t : a) t = std::uniform_int_distribution<Outcome>(0, static_cast<Outcome>(s->num_outcomes(x) - 1))(rng);
        alpha.push_back(std::move(a));
      }
      return ScenarioMorphism(s, s, rel, alpha);
    } catch (const Error&) {
    }
  }
  return ScenarioMorphism::identity(s);
}

int cmd_roundtrip(const Options& o) {
  auto doc = load(o.files.at(0), "model");
  Node root{doc.value, ""};
  std::vector<std::string> w = doc.warnings;
  if (root.has("flavor") && root.at("flavor").str() != "scenario") root.at("flavor").fail("roundtrip needs a scenario model");
  json r;
  bool all = true;
  with_semiring(semiring_of(root, o), [&](auto tag) {
    using S = decltype(tag);
    auto s = io::parse_scenario(root.at("scenario"), w);
    auto e = io::parse_model<S>(root, s);
    auto cb = canonical_bundle(s, o.simplex_cap());
    auto nb = nerve_bundle(cb.bundle, o.dim, o.simplex_cap());
    auto p = eta(cb, e);
    bool eta_rt = eta_inverse(cb, p) == e;
    bool zeta_rt = zeta_inverse(nb, nerve_dist(nb, p)) == p;
    r["eta_inverse_eta"] = eta_rt;
    r["zeta_inverse_zeta"] = zeta_rt;
    std::optional<ScenarioMorphism> m;
    if (!o.morphism.empty()) {
      auto mdoc = load(o.morphism, "morphism");
      m = io::parse_morphism(Node{mdoc.value, ""}, w);
      if (!(m->source() == *s)) throw io::DocumentError(ErrorCode::invalid_input, "/source", "morphism source differs from the model scenario");
      r["morphism"] = "given";
    } else {
      std::mt19937_64 rng(o.seed);
      m = random_endomorphism(rng, s);
      r["morphism"] = "random endomorphism";
      r["seed"] = o.seed;
    }
    auto ct = canonical_bundle(m->target_ptr(), o.simplex_cap());
    auto nt = nerve_bundle(ct.bundle, o.dim, o.simplex_cap());
    auto bm = embed_scenario(*m, cb, ct);
    auto pushed = push_forward(*m, e);
    bool eta_nat = push_forward(bm, p) == eta(ct, pushed);
    bool zeta_nat = push_forward(embed_bundle(bm, nb, nt), nerve_dist(nb, p)) == nerve_dist(nt, eta(ct, pushed));
    r["eta_natural"] = eta_nat;
    r["zeta_natural"] = zeta_nat;
    r["dim"] = o.dim;
    all = eta_rt && zeta_rt && eta_nat && zeta_nat;
    return 0;
  });
  r["ok"] = all;
  emit(report("roundtrip", r, w));
  return all ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextuality scenarios: validation, constructions, push-forwards and decisions"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&o](CLI::App* a) {
    a->add_option("--dim", o.dim, "dimension bound for simplicial sets")->check(CLI::Range(1, 6));
    a->add_option("--cap", o.cap, "size cap for simplices and sections");
    a->add_option("--semiring", o.semiring, "semiring for documents without one")
        ->check(CLI::IsMember({"rational", "boolean"}));
    a->add_option("--seed", o.seed, "seed for random choices");
    a->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json"}));
  };

  struct Sub {
    const char* name;
    const char* help;
    int files;
    int (*run)(const Options&);
  };
  const Sub subs[] = {
      {"validate", "parse and validate a document", 1, cmd_validate},
      {"nerve", "hat nerve or simplicial nerve of a scenario or bundle", 1, cmd_nerve},
      {"pullback", "pull a bundle back along a relation", 2, cmd_pullback},
      {"embed", "carry a scenario, model or morphism to bundles and nerves", 1, cmd_embed},
      {"push", "push a model forward along a morphism", 2, cmd_push},
      {"sections", "list global sections", 1, cmd_sections},
      {"decide", "decide contextuality with a certificate", 1, cmd_decide},
      {"roundtrip", "check the comparison isomorphisms on a model", 1, cmd_roundtrip},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> apps;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    sub->add_option("files", o.files, s.files == 1 ? "input document" : "input documents")
        ->required()
        ->expected(s.files);
    if (std::string(s.name) == "nerve") sub->add_flag("--hat", o.hat, "build hat_N instead of N");
    if (std::string(s.name) == "push" || std::string(s.name) == "sections" || std::string(s.name) == "decide")
      sub->add_option("--flavor", o.flavor, "scenario, bundle or sset")
          ->check(CLI::IsMember({"scenario", "bundle", "sset"}));
    if (std::string(s.name) == "roundtrip") sub->add_option("--morphism", o.morphism, "morphism document");
    apps.emplace_back(sub, &s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("usage", e.what());
  }

  try {
    for (auto& [sub, s] : apps)
      if (sub->parsed()) return s->run(o);
  } catch (const io::DocumentError& e) {
    return emit_error(error_code_name(e.code()), e.what(), e.path());
  } catch (const Error& e) {
    return emit_error(error_code_name(e.code()), e.what());
  } catch (const std::exception& e) {
    return emit_error("internal", e.what());
  }
  return kInvalid;
}
