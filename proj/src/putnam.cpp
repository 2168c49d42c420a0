#include "selfsim/putnam.hpp"

#include <set>

#include "selfsim/error.hpp"

namespace selfsim {

std::vector<Defect> validate_pair(const EmbeddingPairDecl& d) {
  std::vector<Defect> out;
  for (const auto& x : validate(d.H)) out.push_back({"H." + x.id, x.message});
  for (const auto& x : validate(d.E)) out.push_back({"E." + x.id, x.message});
  if (!out.empty()) return out;
  Graph H = Graph::from_decl(d.H), E = Graph::from_decl(d.E);
  const GraphMapDecl* maps[2] = {&d.xi0, &d.xi1};
  for (int i = 0; i < 2; ++i) {
    const std::string tag = "xi" + std::to_string(i);
    const GraphMapDecl& m = *maps[i];
    std::set<std::string> images;
    for (VertexIndex v = 0; v < H.num_vertices(); ++v) {
      auto it = m.vertices.find(H.vertex_name(v));
      if (it == m.vertices.end()) {
        out.push_back({tag + "." + H.vertex_name(v), "injective homomorphism: vertex is not mapped"});
        continue;
      }
      if (!E.find_vertex(it->second))
        out.push_back({tag + "." + H.vertex_name(v), "injective homomorphism: image is not an E-vertex"});
      if (!images.insert(it->second).second)
        out.push_back({tag + "." + H.vertex_name(v), "injective homomorphism: vertex map is not injective"});
    }
    images.clear();
    for (EdgeIndex h = 0; h < H.num_edges(); ++h) {
      const std::string& name = H.edge_name(h);
      auto it = m.edges.find(name);
      if (it == m.edges.end()) {
        out.push_back({tag + "." + name, "injective homomorphism: edge is not mapped"});
        continue;
      }
      auto e = E.find_edge(it->second);
      if (!e) {
        out.push_back({tag + "." + name, "injective homomorphism: image is not an E-edge"});
        continue;
      }
      if (!images.insert(it->second).second)
        out.push_back({tag + "." + name, "injective homomorphism: edge map is not injective"});
      auto rv = m.vertices.find(H.vertex_name(H.range(h)));
      auto sv = m.vertices.find(H.vertex_name(H.source(h)));
      if (rv != m.vertices.end() && rv->second != E.vertex_name(E.range(*e)))
        out.push_back({tag + "." + name, "injective homomorphism: range is not preserved"});
      if (sv != m.vertices.end() && sv->second != E.vertex_name(E.source(*e)))
        out.push_back({tag + "." + name, "injective homomorphism: source is not preserved"});
    }
  }
  for (VertexIndex v = 0; v < H.num_vertices(); ++v) {
    auto a = d.xi0.vertices.find(H.vertex_name(v));
    auto b = d.xi1.vertices.find(H.vertex_name(v));
    if (a != d.xi0.vertices.end() && b != d.xi1.vertices.end() && a->second != b->second)
      out.push_back({H.vertex_name(v), "agreement on vertices: xi0 and xi1 differ"});
  }
  std::set<std::string> image0;
  for (const auto& [h, e] : d.xi0.edges) image0.insert(e);
  for (const auto& [h, e] : d.xi1.edges)
    if (image0.count(e)) out.push_back({e, "disjoint edge images: edge lies in both images"});
  return out;
}

EmbeddingPair EmbeddingPair::from_decl(const EmbeddingPairDecl& d) {
  auto defects = validate_pair(d);
  if (!defects.empty()) throw Error(ErrorCode::InvalidInput, defects.front().id + ": " + defects.front().message);
  EmbeddingPair xi;
  xi.H = Graph::from_decl(d.H);
  auto E = std::make_shared<Graph>(Graph::from_decl(d.E));
  for (VertexIndex v = 0; v < xi.H.num_vertices(); ++v)
    xi.vertex_map.push_back(E->vertex(d.xi0.vertices.at(xi.H.vertex_name(v))));
  xi.label.assign(E->num_edges(), std::nullopt);
  const GraphMapDecl* maps[2] = {&d.xi0, &d.xi1};
  for (int i = 0; i < 2; ++i) {
    for (EdgeIndex h = 0; h < xi.H.num_edges(); ++h) {
      EdgeIndex e = E->edge(maps[i]->edges.at(xi.H.edge_name(h)));
      xi.edge_map[i].push_back(e);
      xi.label[e] = std::pair{h, i};
    }
  }
  xi.E = std::move(E);
  return xi;
}

std::optional<VertexIndex> EmbeddingPair::h_vertex(VertexIndex e_vertex) const {
  for (VertexIndex v = 0; v < vertex_map.size(); ++v)
    if (vertex_map[v] == e_vertex) return v;
  return std::nullopt;
}

std::optional<std::size_t> ell(const EmbeddingPair& xi, VertexIndex h_vertex) {
  return longest_path_into(xi.H, h_vertex);
}

std::vector<Modulus> xi_moduli(const EmbeddingPair& xi) {
  std::vector<Modulus> m(xi.E->num_vertices(), 1);
  for (VertexIndex v = 0; v < xi.H.num_vertices(); ++v) {
    auto l = ell(xi, v);
    if (!l) {
      m[xi.vertex_map[v]] = kInfinite;
    } else {
      if (*l >= 62) throw Error(ErrorCode::Overflow, "2^ell exceeds 64 bits");
      m[xi.vertex_map[v]] = Modulus(1) << *l;
    }
  }
  return m;
}

StepResult xi_step(const EmbeddingPair& xi, const Element& g, EdgeIndex e) {
  const Graph& E = *xi.E;
  if (E.range(e) != g.vertex) throw Error(ErrorCode::DomainMismatch, "(m,v) applied to an edge with another range");
  const auto& lab = xi.label[e];
  if (!lab) return {e, Element{E.source(e), 0}};
  auto [h, i] = *lab;
  std::int64_t total = checked_add(g.exponent, i);
  std::int64_t j = floor_mod(total, 2);
  std::int64_t n = (total - j) / 2;
  return {xi.edge_map[j][h], Element{E.source(e), n}};
}

std::shared_ptr<const ActionSystem> xi_system(const EmbeddingPair& xi) {
  auto pair = std::make_shared<EmbeddingPair>(xi);
  return std::make_shared<ActionSystem>(xi.E, xi_moduli(xi),
                                        [pair](const Element& g, EdgeIndex e) { return xi_step(*pair, g, e); });
}

bool xi_equivalent(const EmbeddingPair& xi, const EPPath& mu, const EPPath& nu) {
  if (mu == nu) return true;
  // Classify each position: 0/1 = (xi^i(y), xi^{1-i}(y)); 2 = equal edge outside
  // H^1_xi; 3 = equal edge inside; 4 = anything else.
  auto kind = [&](std::int64_t pos) -> int {
    EdgeIndex a = mu.at(pos), b = nu.at(pos);
    if (a == b) return xi.label[a] ? 3 : 2;
    const auto& la = xi.label[a];
    const auto& lb = xi.label[b];
    if (la && lb && la->first == lb->first) return la->second;  // i with mu = xi^i(y)
    return 4;
  };
  const std::size_t pre = joint_preperiod(mu, nu);
  const std::size_t period = joint_period(mu, nu);
  const auto horizon = static_cast<std::int64_t>(pre + period);
  // The tail left of the horizon is one period repeated; it must be a constant
  // crossed type i.
  int tail = kind(-horizon);
  if (tail != 0 && tail != 1) return false;
  for (std::int64_t pos = -horizon; pos > -horizon - static_cast<std::int64_t>(period); --pos)
    if (kind(pos) != tail) return false;
  // Largest n with every position <= n of type `tail`.
  std::int64_t n = -horizon;
  while (n < -1 && kind(n + 1) == tail) ++n;
  if (n == -1) return true;
  int at = kind(n + 1);
  if (at != 1 - tail && at != 2) return false;
  for (std::int64_t pos = n + 2; pos <= -1; ++pos)
    if (kind(pos) != 2 && kind(pos) != 3) return false;
  return true;
}

}  // namespace selfsim
