#include "selfsim/io.hpp"

#include <fstream>
#include <sstream>

#include "selfsim/error.hpp"

namespace selfsim {

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

DocKind detect_kind(const Json& doc) {
  if (!doc.is_object()) return DocKind::Unknown;
  if (doc.contains("A")) return DocKind::Katsura;
  if (doc.contains("H") && doc.contains("E")) return DocKind::EmbeddingPair;
  if (doc.contains("outsplit")) return DocKind::OutSplit;
  if (doc.contains("vertices")) return DocKind::Graph;
  return DocKind::Unknown;
}

std::string to_string(DocKind k) {
  switch (k) {
    case DocKind::Katsura: return "katsura_pair";
    case DocKind::EmbeddingPair: return "embedding_pair";
    case DocKind::OutSplit: return "outsplit";
    case DocKind::Graph: return "graph";
    default: return "unknown";
  }
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

const Json& field(const Json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) bad(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

std::string str(const Json& j, const std::string& where) {
  if (!j.is_string()) bad(where + " must be a string");
  return j.get<std::string>();
}

std::vector<std::string> str_list(const Json& j, const std::string& where) {
  if (!j.is_array()) bad(where + " must be an array");
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(str(x, where));
  return out;
}

std::map<std::string, std::string> str_map(const Json& j, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  std::map<std::string, std::string> out;
  for (const auto& [k, v] : j.items()) out[k] = str(v, where + "." + k);
  return out;
}

Matrix matrix(const Json& j, const std::string& name) {
  if (!j.is_array()) bad(name + " must be an array of rows");
  Matrix m;
  for (const auto& row : j) {
    if (!row.is_array()) bad(name + " must be an array of rows");
    std::vector<std::int64_t> r;
    for (const auto& x : row) {
      if (!x.is_number_integer()) bad(name + " entries must be integers");
      r.push_back(x.get<std::int64_t>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

GraphMapDecl map_decl(const Json& j, const std::string& where) {
  return GraphMapDecl{str_map(field(j, "vertices"), where + ".vertices"), str_map(field(j, "edges"), where + ".edges")};
}

}  // namespace

KatsuraPair katsura_from_json(const Json& doc) {
  return KatsuraPair{matrix(field(doc, "A"), "A"), matrix(field(doc, "B"), "B")};
}

GraphDecl graph_decl_from_json(const Json& doc) {
  GraphDecl g;
  g.vertices = str_list(field(doc, "vertices"), "vertices");
  const Json& edges = field(doc, "edges");
  if (!edges.is_array()) bad("edges must be an array");
  for (const auto& e : edges)
    g.edges.push_back(EdgeDecl{str(field(e, "id"), "edge id"), str(field(e, "range"), "edge range"),
                               str(field(e, "source"), "edge source")});
  return g;
}

EmbeddingPairDecl embedding_pair_from_json(const Json& doc) {
  return EmbeddingPairDecl{graph_decl_from_json(field(doc, "H")), graph_decl_from_json(field(doc, "E")),
                           map_decl(field(doc, "xi0"), "xi0"), map_decl(field(doc, "xi1"), "xi1")};
}

OutSplitSpec outsplit_spec_from_json(const Json& doc) {
  const Json& os = field(doc, "outsplit");
  return OutSplitSpec{str_list(field(os, "targets"), "targets"), str_map(field(os, "pi"), "pi"),
                      str_map(field(os, "beta"), "beta")};
}

EPPath eppath_from_json(const Graph& g, const Json& doc) {
  auto ids = [&](const char* key) {
    std::vector<EdgeIndex> out;
    for (const auto& id : str_list(field(doc, key), key)) out.push_back(g.edge(id));
    return out;
  };
  return EPPath::make(g, ids("cycle"), ids("suffix"));
}

std::vector<Defect> validate_document(const Json& doc) {
  try {
    switch (detect_kind(doc)) {
      case DocKind::Katsura: return validate_pair(katsura_from_json(doc));
      case DocKind::Graph: return validate(graph_decl_from_json(doc));
      case DocKind::EmbeddingPair: return validate_pair(embedding_pair_from_json(doc));
      case DocKind::OutSplit: {
        GraphDecl gd = graph_decl_from_json(field(doc, "graph"));
        auto defects = validate(gd);
        if (!defects.empty()) return defects;
        return validate_outsplit(Graph::from_decl(gd), outsplit_spec_from_json(doc));
      }
      default: return {Defect{"document", "unrecognized document kind"}};
    }
  } catch (const Error& e) {
    return {Defect{"document", e.what()}};
  }
}

Json to_json(const KatsuraPair& p) { return Json{{"A", p.A}, {"B", p.B}}; }

Json to_json(const GraphDecl& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges) edges.push_back(Json{{"id", e.id}, {"range", e.range}, {"source", e.source}});
  return Json{{"vertices", g.vertices}, {"edges", edges}};
}

Json path_json(const Graph& g, const std::vector<EdgeIndex>& edges) {
  Json out = Json::array();
  for (EdgeIndex e : edges) out.push_back(g.edge_name(e));
  return out;
}

Json to_json(const Graph& g, const EPPath& mu) {
  return Json{{"cycle", path_json(g, mu.cycle())}, {"suffix", path_json(g, mu.suffix())}};
}

Json to_json(const std::vector<Defect>& defects) {
  Json out = Json::array();
  for (const auto& d : defects) out.push_back(Json{{"id", d.id}, {"message", d.message}});
  return out;
}

Json to_json(const AbelianGroup& a) {
  Json torsion = Json::array();
  for (const auto& t : a.torsion) torsion.push_back(to_string(t));
  return Json{{"group", a.str()}, {"torsion", torsion}, {"free_rank", a.free_rank}};
}

std::string modulus_text(Modulus m) { return m == kInfinite ? "inf" : std::to_string(m); }

Json to_json(const KatsuraPair&, const KepGraph& kg, const RegularityResult& r) {
  const Graph& g = *kg.graph;
  Json out{{"verdict", to_string(r.verdict)}, {"reason", r.reason}};
  if (!r.cycle.empty()) out["cycle"] = path_json(g, r.cycle);
  if (!r.connector.empty()) out["connector"] = path_json(g, r.connector);
  if (r.edge) out["edge"] = g.edge_name(*r.edge);
  if (r.element) out["element"] = Json{{"vertex", g.vertex_name(r.element->vertex)}, {"exponent", r.element->exponent}};
  if (!r.prime_certificates.empty()) {
    Json certs = Json::array();
    for (auto [comp, prime] : r.prime_certificates) certs.push_back(Json{{"component", comp}, {"prime", prime}});
    out["prime_certificates"] = certs;
  }
  return out;
}

Json to_json(const KatsuraPair& p, const AnalysisReport& r) {
  KepGraph kg = build_graph(p);
  Json orders = Json::array();
  for (Modulus m : r.orders) orders.push_back(modulus_text(m));
  auto names = [](const std::vector<VertexIndex>& vs) {
    Json out = Json::array();
    for (auto v : vs) out.push_back(std::to_string(v + 1));
    return out;
  };
  Json rho = r.rho.none ? Json("none") : Json(r.rho.str());
  Json out{{"contracting", r.contracting},
           {"rho", rho},
           {"finite_part_only", r.rho.none},
           {"regular", to_string(r.regular.verdict)},
           {"regularity", to_json(p, kg, r.regular)},
           {"isotropy_orders", orders},
           {"infinite_vertices", names(r.decomposition.infinite_vertices)},
           {"finite_vertices", names(r.decomposition.finite_vertices)},
           {"A_inf", r.decomposition.A_inf},
           {"B_inf", r.decomposition.B_inf},
           {"A_fin", r.decomposition.A_fin},
           {"B_fin", r.decomposition.B_fin}};
  if (!r.rho.none) out["rho_witness"] = path_json(*kg.graph, r.rho.witness);
  return out;
}

Json to_json(const ComponentClass& c) {
  Json out{{"kind", to_string(c.kind)},
           {"K", c.K ? Json(*c.K) : Json("inf")},
           {"case", c.case_number},
           {"dynamics_exponent", c.dynamics_exponent}};
  if (c.theta) out["theta"] = to_string(*c.theta);
  return out;
}

Json to_json(const std::vector<EmbedTerm>& terms) {
  Json arr = Json::array();
  for (const auto& t : terms) {
    Json iv = Json::array({t.interval.lo ? Json(*t.interval.lo) : Json("-inf"), t.interval.hi, std::to_string(t.interval.type)});
    Json term{{"scale", to_string(t.scale)}, {"angle", to_string(t.angle)}, {"interval", iv}};
    if (t.period) {
      term["period"] = t.period;
      term["fold"] = to_string(t.fold);
    }
    arr.push_back(term);
  }
  return Json{{"terms", arr}};
}

}  // namespace selfsim
