#include "selfsim/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "CLI11.hpp"
#include "selfsim/embed.hpp"
#include "selfsim/error.hpp"
#include "selfsim/io.hpp"
#include "selfsim/limitspace.hpp"
#include "selfsim/outsplit.hpp"
#include "selfsim/putnam.hpp"
#include "selfsim/selftest.hpp"

namespace selfsim {

namespace {

struct Options {
  std::string file;
  std::size_t depth = 0;  // 0: the command's default
  std::size_t samples = 0;
  std::int64_t kmax = 8;
  std::size_t dmax = 8;
  unsigned precision = 128;
  std::vector<std::string> r_override;
  bool r_override_set = false;
  bool paper_omega = false;
  std::string out_svg;
  std::string out_points;
  std::string mu;
  std::string nu;
};

// Input document rejected with a defect list.
struct InvalidDocument {
  std::vector<Defect> defects;
};

std::uint64_t seed_from_env() {
  const char* s = std::getenv("SELFSIM_SEED");
  if (!s || !*s) return 1;
  try {
    return std::stoull(s);
  } catch (...) {
    throw Error(ErrorCode::InvalidInput, "SELFSIM_SEED must be an unsigned integer");
  }
}

Json load(const std::string& file) {
  Json doc = read_json_file(file);
  auto defects = validate_document(doc);
  if (!defects.empty()) throw InvalidDocument{defects};
  return doc;
}

KatsuraPair pair_of(const Json& doc) {
  switch (detect_kind(doc)) {
    case DocKind::Katsura: return katsura_from_json(doc);
    case DocKind::EmbeddingPair:
      return putnam_to_kep(EmbeddingPair::from_decl(embedding_pair_from_json(doc))).pair;
    default: throw Error(ErrorCode::InvalidInput, "expected a Katsura pair or an embedding pair");
  }
}

EPPath path_arg(const Graph& g, const std::string& text, const Json& doc, const char* key) {
  if (!text.empty()) return eppath_from_json(g, parse_json(text));
  if (doc.contains(key)) return eppath_from_json(g, doc.at(key));
  throw Error(ErrorCode::InvalidInput, std::string("missing path --") + key);
}

EmbedConfig embed_config(const Options& o) {
  EmbedConfig cfg;
  if (o.r_override_set) {
    try {
      cfg.R_override = (o.r_override.empty() || o.r_override.front().empty()) ? 6 : std::stoll(o.r_override.front());
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "--paper-R-override needs an integer");
    }
  }
  cfg.omit_range_term = o.paper_omega;
  return cfg;
}

Json cmd_validate(const Options& o, int& code) {
  Json doc = read_json_file(o.file);
  auto defects = validate_document(doc);
  code = defects.empty() ? 0 : 2;
  return Json{{"kind", to_string(detect_kind(doc))}, {"valid", defects.empty()}, {"defects", to_json(defects)}};
}

Json cmd_analyze(const Options& o) {
  KatsuraPair p = pair_of(load(o.file));
  Json out = to_json(p, analyze(p, o.kmax, o.dmax));
  out["pair"] = to_json(p);
  return out;
}

Json cmd_rho(const Options& o) {
  KatsuraPair p = pair_of(load(o.file));
  GeometricMean rho = contraction_coefficient(p);
  Json out{{"rho", rho.none ? Json("none") : Json(rho.str())}, {"contracting", rho.less_than_one()}};
  if (!rho.none) out["witness"] = path_json(*build_graph(p).graph, rho.witness);
  return out;
}

Json cmd_regular(const Options& o) {
  KatsuraPair p = pair_of(load(o.file));
  RegularityResult r = is_01(p) ? regular_01(p) : regular_general(p, o.kmax, o.dmax);
  Json out = to_json(p, build_graph(p), r);
  out["method"] = is_01(p) ? "binary" : "general";
  out["certificate_rechecked"] = r.verdict == Verdict::Unknown ? false : recheck_certificate(p, r);
  return out;
}

Json cmd_ktheory(const Options& o) {
  KTheory kt = k_theory(pair_of(load(o.file)));
  return Json{{"K0", to_json(kt.K0)}, {"K1", to_json(kt.K1)}};
}

Json split_json(const OutSplit& os) {
  Json pi = Json::object(), beta = Json::object();
  for (EdgeIndex e = 0; e < os.E->num_edges(); ++e) pi[os.E->edge_name(e)] = os.graph->vertex_name(os.pi[e]);
  for (VertexIndex v = 0; v < os.beta.size(); ++v) beta[os.graph->vertex_name(v)] = os.E->vertex_name(os.beta[v]);
  return Json{{"vertices", os.graph->num_vertices()},
              {"edges", os.graph->num_edges()},
              {"graph", to_json(os.graph->to_decl())},
              {"pi", pi},
              {"beta", beta}};
}

Json cmd_outsplit(const Options& o) {
  Json doc = load(o.file);
  const std::size_t depth = o.depth ? o.depth : 6;
  Json out;
  auto check = [&](std::shared_ptr<const ActionSystem> sys, const OutSplit& os) {
    if (o.samples == 0) return;
    auto rep = conjugacy_check(sys, os, depth, o.samples, seed_from_env());
    out["conjugacy"] = Json{{"depth", depth},
                            {"samples", rep.samples},
                            {"related", rep.related},
                            {"discrepancies", rep.discrepancies}};
  };
  switch (detect_kind(doc)) {
    case DocKind::OutSplit: {
      auto E = std::make_shared<Graph>(Graph::from_decl(graph_decl_from_json(doc.at("graph"))));
      out = split_json(make_outsplit(E, outsplit_spec_from_json(doc)));
      break;
    }
    case DocKind::EmbeddingPair: {
      EmbeddingPair xi = EmbeddingPair::from_decl(embedding_pair_from_json(doc));
      PutnamKep pk = putnam_to_kep(xi);
      out = split_json(pk.os);
      check(xi_system(xi), pk.os);
      break;
    }
    case DocKind::Katsura: {
      KepSystem ks = kep_system(katsura_from_json(doc));
      OutSplit os = make_outsplit(ks.kg.graph, source_split(*ks.kg.graph));
      out = split_json(os);
      check(ks.system, os);
      break;
    }
    default: throw Error(ErrorCode::InvalidInput, "outsplit needs an out-split, embedding pair or Katsura pair");
  }
  return out;
}

Json cmd_putnam2kep(const Options& o) {
  Json doc = load(o.file);
  if (detect_kind(doc) != DocKind::EmbeddingPair) throw Error(ErrorCode::InvalidInput, "expected an embedding pair");
  PutnamKep pk = putnam_to_kep(EmbeddingPair::from_decl(embedding_pair_from_json(doc)));
  Json edges = Json::object();
  for (EdgeIndex f = 0; f < pk.kep_edge.size(); ++f)
    edges[pk.os.graph->edge_name(f)] = pk.kg.graph->edge_name(pk.kep_edge[f]);
  return Json{{"A", pk.pair.A}, {"B", pk.pair.B}, {"vertices", pk.vertex_names}, {"edges", edges}};
}

Json cmd_ae(const Options& o) {
  Json doc = load(o.file);
  const std::size_t depth = o.depth ? o.depth : 10;
  if (detect_kind(doc) == DocKind::EmbeddingPair) {
    EmbeddingPair xi = EmbeddingPair::from_decl(embedding_pair_from_json(doc));
    EPPath mu = path_arg(*xi.E, o.mu, doc, "mu"), nu = path_arg(*xi.E, o.nu, doc, "nu");
    auto sys = xi_system(xi);
    auto nr = stable_nucleus(*sys, standard_generators(*sys));
    Json out{{"xi_equivalent", xi_equivalent(xi, mu, nu)}};
    if (!nr.diverged) out["ae_exact"] = ae_periodic(*sys, nr.nucleus, mu, nu);
    return out;
  }
  KatsuraPair p = pair_of(doc);
  LimitSpace ls(p);
  EPPath mu = path_arg(ls.graph(), o.mu, doc, "mu"), nu = path_arg(ls.graph(), o.nu, doc, "nu");
  Json out{{"ae_equivalent", ls.ae_equivalent(mu, nu)}, {"component_equivalent", ls.component_equivalent(mu, nu)}};
  try {
    out["zeta_equal"] = Embedding(p).zeta_equal(mu, nu);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Degenerate) throw;
  }
  KepSystem ks = kep_system(p);
  auto nr = stable_nucleus(*ks.system, standard_generators(*ks.system));
  if (!nr.diverged) {
    out["oracle_depth"] = depth;
    out["oracle"] = ae_oracle(*ks.system, mu.truncate(ls.graph(), depth), nu.truncate(ls.graph(), depth),
                              nr.nucleus.elements);
  }
  return out;
}

Json cmd_components(const Options& o) {
  Json doc = load(o.file);
  LimitSpace ls(pair_of(doc));
  const Graph& g = ls.graph();
  std::vector<EPPath> paths;
  std::set<EPPath> seen;
  if (!o.mu.empty() || doc.contains("mu")) {
    paths.push_back(path_arg(g, o.mu, doc, "mu"));
  } else if (doc.contains("paths")) {
    for (const auto& j : doc.at("paths")) paths.push_back(eppath_from_json(g, j));
  } else {
    const std::size_t depth = o.depth ? o.depth : 2;
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) {
      if (g.range(e) != g.source(e)) continue;
      for (std::size_t n = 0; n <= depth; ++n)
        for (const Path& s : enumerate_paths_from(g, g.source(e), n)) {
          EPPath mu = EPPath::make(g, {e}, s.edges);
          if (seen.insert(mu).second) paths.push_back(mu);
        }
    }
  }
  Json arr = Json::array();
  for (const auto& mu : paths) arr.push_back(Json{{"path", to_json(g, mu)}, {"class", to_json(ls.classify(mu))}});
  return Json{{"components", arr}};
}

Json cmd_embed(const Options& o) {
  Json doc = load(o.file);
  KatsuraPair p = pair_of(doc);
  EmbedConfig cfg = embed_config(o);
  if (!o.mu.empty() || doc.contains("mu")) {
    Embedding emb(p, cfg);
    EPPath mu = path_arg(emb.graph(), o.mu, doc, "mu");
    auto terms = emb.terms(mu);
    Json out = to_json(terms);
    ComplexValue z = evaluate(terms, o.precision);
    out["value"] = Json{{"re", z.re_text}, {"im", z.im_text}};
    out["R"] = emb.constants().R;
    return out;
  }
  RenderConfig rc;
  rc.depth = o.depth ? o.depth : 6;
  rc.precision_bits = o.precision;
  rc.seed = seed_from_env();
  rc.embed = cfg;
  RenderResult r = render(p, rc, o.out_svg, o.out_points);
  Json radii = Json::array();
  for (const auto& c : r.circles)
    if (c.center_terms.empty()) radii.push_back(to_string(c.radius));
  return Json{{"M", r.constants.M},
              {"N", r.constants.N},
              {"R", r.constants.R},
              {"depth", rc.depth},
              {"points", r.points.size()},
              {"sampled", r.sampled},
              {"circles", r.circles.size()},
              {"centered_radii", radii},
              {"scale", r.scale},
              {"injectivity_guaranteed", r.injectivity_guaranteed},
              {"svg", o.out_svg},
              {"csv", o.out_points}};
}

Json cmd_selftest(int& code) {
  auto checks = selftest(seed_from_env());
  Json arr = Json::array();
  std::size_t passed = 0;
  for (const auto& c : checks) {
    passed += c.pass;
    Json j{{"name", c.name}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(j);
  }
  code = passed == checks.size() ? 0 : 1;
  return Json{{"checks", arr}, {"passed", passed}, {"failed", checks.size() - passed}};
}

bool input_error(ErrorCode c) { return c != ErrorCode::Overflow; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-similar groupoid actions on finite graphs", "selfsim"};
  app.require_subcommand(1);
  Options o;
  auto sub = [&](const char* name, const char* help, bool needs_file = true) {
    CLI::App* s = app.add_subcommand(name, help);
    if (needs_file) s->add_option("file", o.file, "input JSON document")->required();
    return s;
  };
  auto* validate = sub("validate", "check a document and list its defects");
  auto* analyze_cmd = sub("analyze", "contraction, regularity, isotropy and the finite/infinite split");
  auto* rho = sub("rho", "contraction coefficient");
  auto* regular = sub("regular", "regularity verdict with witness or certificate");
  auto* ktheory = sub("ktheory", "K-groups from Smith forms");
  auto* outsplit = sub("outsplit", "out-split graph, optionally with a conjugacy check");
  auto* putnam2kep = sub("putnam2kep", "convert an embedding pair to a Katsura pair");
  auto* ae = sub("ae", "asymptotic equivalence of two eventually periodic paths");
  auto* components = sub("components", "classify limit-space components");
  auto* embed = sub("embed", "planar embedding: render or dump terms");
  auto* selftest_cmd = sub("selftest", "replay built-in regressions", false);

  for (auto* s : {analyze_cmd, regular}) {
    s->add_option("--kmax", o.kmax, "exponent bound for fixed-path search");
    s->add_option("--dmax", o.dmax, "length bound for cycle search");
  }
  for (auto* s : {outsplit, ae, components, embed}) s->add_option("--depth", o.depth, "path depth");
  outsplit->add_option("--samples", o.samples, "conjugacy samples (0 skips the check)");
  for (auto* s : {ae, components, embed}) s->add_option("--mu", o.mu, "path as {\"cycle\":[..],\"suffix\":[..]}");
  ae->add_option("--nu", o.nu, "second path");
  embed->add_option("--precision-bits", o.precision, "binary precision of the evaluation")->check(CLI::Range(64u, 65536u));
  auto* r_opt = embed->add_option("--paper-R-override", o.r_override, "use this R (6 when no value is given)")
                    ->expected(0, 1);
  embed->add_flag("--paper-omega", o.paper_omega, "drop the range term from Omega on finite segments");
  embed->add_option("--out-svg", o.out_svg, "SVG output file");
  embed->add_option("--out-points", o.out_points, "CSV output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    out << Json{{"error", "INVALID_INPUT"}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  }
  o.r_override_set = r_opt->count() > 0;

  int code = 0;
  try {
    Json result;
    if (*validate) result = cmd_validate(o, code);
    else if (*analyze_cmd) result = cmd_analyze(o);
    else if (*rho) result = cmd_rho(o);
    else if (*regular) result = cmd_regular(o);
    else if (*ktheory) result = cmd_ktheory(o);
    else if (*outsplit) result = cmd_outsplit(o);
    else if (*putnam2kep) result = cmd_putnam2kep(o);
    else if (*ae) result = cmd_ae(o);
    else if (*components) result = cmd_components(o);
    else if (*embed) result = cmd_embed(o);
    else if (*selftest_cmd) result = cmd_selftest(code);
    out << result.dump(2) << "\n";
    return code;
  } catch (const InvalidDocument& d) {
    out << Json{{"error", "INVALID_INPUT"}, {"defects", to_json(d.defects)}}.dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    out << Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump(2) << "\n";
    err << e.what() << "\n";
    return input_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace selfsim
