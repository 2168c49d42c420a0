#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "selfsim/embed.hpp"
#include "selfsim/error.hpp"

namespace selfsim {

namespace {

BigInt count_paths(const Graph& g, std::size_t depth) {
  std::vector<BigInt> ending(g.num_vertices(), 1);  // paths of length t with range v
  for (std::size_t t = 0; t < depth; ++t) {
    std::vector<BigInt> next(g.num_vertices(), 0);
    for (EdgeIndex e = 0; e < g.num_edges(); ++e) next[g.range(e)] += ending[g.source(e)];
    ending = std::move(next);
  }
  BigInt total = 0;
  for (const auto& x : ending) total += x;
  return total;
}

std::vector<Path> sample_paths(const Graph& g, std::size_t depth, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Path> out;
  std::uniform_int_distribution<EdgeIndex> pick_edge(0, g.num_edges() - 1);
  while (out.size() < count) {
    std::vector<EdgeIndex> rev{pick_edge(rng)};
    while (rev.size() < depth) {
      const auto& before = g.edges_with_source(g.range(rev.back()));
      if (before.empty()) break;
      rev.push_back(before[std::uniform_int_distribution<std::size_t>(0, before.size() - 1)(rng)]);
    }
    if (rev.size() < depth) continue;
    std::reverse(rev.begin(), rev.end());
    out.push_back(make_path(g, std::move(rev)));
  }
  return out;
}

std::string path_id(const Graph& g, const Path& p) {
  std::string s;
  for (EdgeIndex e : p.edges) {
    if (!s.empty()) s += '.';
    s += g.edge_name(e);
  }
  return s;
}

std::string term_key(const std::vector<EmbedTerm>& terms, const Rational& radius) {
  std::string s = to_string(radius);
  for (const auto& t : terms)
    s += "|" + to_string(t.scale) + "," + to_string(t.angle) + "," + to_string(t.fold);
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": " + std::strerror(errno));
  out << content;
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace

RenderResult render(const KatsuraPair& p, const RenderConfig& cfg, const std::string& out_svg,
                    const std::string& out_points) {
  if (cfg.depth == 0) throw Error(ErrorCode::Precondition, "depth must be at least 1");
  Embedding emb(p, cfg.embed);
  const Graph& g = emb.graph();
  const auto& kg = emb.kep_graph();
  RenderResult res;
  res.constants = emb.constants();
  res.injectivity_guaranteed = emb.limit_space().binary() && emb.limit_space().regular();

  std::vector<Path> prefixes;
  if (count_paths(g, cfg.depth) <= cfg.sample_threshold) {
    prefixes = enumerate_paths(g, cfg.depth);
  } else {
    res.sampled = true;
    prefixes = sample_paths(g, cfg.depth, cfg.sample_threshold, cfg.seed);
  }

  res.points.resize(prefixes.size());
  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, prefixes.size() / 64)));
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < prefixes.size(); i += step) {
      const Path& pre = prefixes[i];
      auto terms = emb.terms(pre);
      RenderedPoint& pt = res.points[i];
      pt.id = path_id(g, pre);
      pt.z = evaluate(terms, cfg.precision_bits);
      const Interval& left = terms.front().interval;
      if (left.type == 1)
        for (std::int64_t j = *left.lo; j <= left.hi; ++j)
          if (kg.A(p, pre.edges[static_cast<std::size_t>(j + static_cast<std::int64_t>(pre.length()))]) >= 2)
            pt.circle = true;
    }
  };
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }

  // Circles: eventually periodic paths whose tail is an infinite B = 1 run with
  // unbounded A-products; the tail term is the radius, the rest the center.
  std::map<std::string, std::size_t> seen;
  for (std::size_t len = 1; len <= cfg.circle_cycle_max; ++len) {
    for (const Path& c : enumerate_paths(g, len)) {
      if (c.source(g) != c.start) continue;
      bool ok = true, expanding = false;
      for (EdgeIndex e : c.edges) {
        ok = ok && emb.type(e) == 1;
        expanding = expanding || kg.A(p, e) >= 2;
      }
      if (!ok || !expanding) continue;
      EPPath probe = EPPath::make(g, c.edges, {});
      if (probe.period() != c.length()) continue;  // not primitive
      for (std::size_t n = 0; n < cfg.depth; ++n) {
        for (const Path& s : enumerate_paths_from(g, c.source(g), n)) {
          EPPath mu = EPPath::make(g, c.edges, s.edges);
          auto terms = emb.terms(mu);
          Rational radius = terms.front().scale;
          std::vector<EmbedTerm> center(terms.begin() + 1, terms.end());
          auto key = term_key(center, radius);
          if (seen.count(key)) continue;
          seen[key] = res.circles.size();
          res.circles.push_back(RenderedCircle{center, radius, evaluate(center, cfg.precision_bits)});
        }
      }
    }
  }

  double extent = 0;
  for (const auto& pt : res.points) extent = std::max(extent, std::hypot(pt.z.re, pt.z.im));
  for (const auto& c : res.circles)
    extent = std::max(extent, std::hypot(c.center.re, c.center.im) + static_cast<double>(c.radius));
  if (extent <= 0) extent = 1;
  res.scale = (cfg.canvas / 2.0 - 8.0) / extent;

  if (!out_svg.empty()) write_file(out_svg, svg_document(res, cfg));
  if (!out_points.empty()) write_file(out_points, csv_document(res));
  return res;
}

std::string svg_document(const RenderResult& r, const RenderConfig& cfg) {
  std::ostringstream out;
  out.precision(10);
  const double half = cfg.canvas / 2.0;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cfg.canvas << "\" height=\"" << cfg.canvas
      << "\" viewBox=\"0 0 " << cfg.canvas << " " << cfg.canvas << "\" data-scale=\"" << r.scale << "\" data-R=\""
      << r.constants.R << "\" data-depth=\"" << cfg.depth << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!r.injectivity_guaranteed)
    out << "<text x=\"8\" y=\"20\" font-size=\"14\" fill=\"red\">no injectivity guarantee</text>\n";
  out << "<g fill=\"none\" stroke=\"black\" stroke-width=\"0.5\">\n";
  for (const auto& c : r.circles) {
    out << "<circle class=\"component\" cx=\"" << half + c.center.re * r.scale << "\" cy=\""
        << half - c.center.im * r.scale << "\" r=\"" << static_cast<double>(c.radius) * r.scale
        << "\" data-radius=\"" << to_string(c.radius) << "\"/>\n";
  }
  out << "</g>\n<g fill=\"steelblue\">\n";
  for (const auto& p : r.points) {
    out << "<rect class=\"point\" x=\"" << half + p.z.re * r.scale - 0.5 << "\" y=\"" << half - p.z.im * r.scale - 0.5
        << "\" width=\"1\" height=\"1\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

std::string csv_document(const RenderResult& r) {
  std::string out = "path_id,re,im,kind\n";
  for (const auto& p : r.points)
    out += p.id + "," + p.z.re_text + "," + p.z.im_text + "," + (p.circle ? "circle" : "point") + "\n";
  return out;
}

}  // namespace selfsim
