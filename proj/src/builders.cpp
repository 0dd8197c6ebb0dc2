#include "harmlab/builders.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

namespace harmlab {

namespace {

using Pairs = std::vector<std::pair<VertexId, VertexId>>;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

std::vector<long long> parse_ints(std::string_view body, std::string_view spec) {
  std::vector<long long> out;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto comma = body.find(',', pos);
    const auto tok = body.substr(pos, comma == std::string_view::npos ? body.size() - pos : comma - pos);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
      throw Error(ErrorKind::InvalidArgument, "malformed graph spec '" + std::string(spec) + "'");
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

OrientedGraph cycle_graph(int n) {
  require(n >= 3, "cycle needs at least 3 vertices");
  Pairs p;
  for (int i = 0; i < n; ++i) p.emplace_back(i, (i + 1) % n);
  return OrientedGraph::from_pairs(n, p);
}

OrientedGraph complete_graph(int n) {
  require(n >= 2, "complete graph needs at least 2 vertices");
  Pairs p;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) p.emplace_back(i, j);
  return OrientedGraph::from_pairs(n, p);
}

OrientedGraph hypercube_graph(int dim) {
  require(dim >= 1 && dim <= 20, "hypercube dimension must lie in [1,20]");
  const int n = 1 << dim;
  Pairs p;
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < dim; ++i)
      if (!(v & (1 << i))) p.emplace_back(v, v | (1 << i));
  return OrientedGraph::from_pairs(n, p);
}

OrientedGraph path_graph(int n) {
  require(n >= 1, "path needs at least one vertex");
  Pairs p;
  for (int i = 0; i + 1 < n; ++i) p.emplace_back(i, i + 1);
  return OrientedGraph::from_pairs(n, p);
}

OrientedGraph grid_graph(int w, int h) {
  require(w >= 1 && h >= 1, "grid sides must be positive");
  Pairs p;
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const int v = j * w + i;
      if (i + 1 < w) p.emplace_back(v, v + 1);
      if (j + 1 < h) p.emplace_back(v, v + w);
    }
  return OrientedGraph::from_pairs(w * h, p);
}

OrientedGraph torus_graph(int w, int h) {
  require(w >= 3 && h >= 3, "torus sides must be at least 3");
  Pairs p;
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) {
      const int v = j * w + i;
      p.emplace_back(v, j * w + (i + 1) % w);
      p.emplace_back(v, ((j + 1) % h) * w + i);
    }
  return OrientedGraph::from_pairs(w * h, p);
}

OrientedGraph regular_tree(int d, int depth) {
  require(d >= 2 && depth >= 0, "tree needs d >= 2 and depth >= 0");
  Pairs p;
  std::vector<VertexId> level{0};
  VertexId next = 1;
  for (int k = 0; k < depth; ++k) {
    std::vector<VertexId> children;
    const int fan = k == 0 ? d : d - 1;
    for (VertexId v : level)
      for (int c = 0; c < fan; ++c) {
        require(next < 50'000'000, "tree too large");
        p.emplace_back(v, next);
        children.push_back(next++);
      }
    level = std::move(children);
  }
  return OrientedGraph::from_pairs(next, p);
}

OrientedGraph random_regular_graph(int d, int n, std::uint64_t seed) {
  require(d >= 1 && n > d && (static_cast<long long>(d) * n) % 2 == 0,
          "random regular graph needs n > d and d*n even");
  std::mt19937_64 rng(seed);
  std::vector<VertexId> stubs;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    stubs.clear();
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    std::shuffle(stubs.begin(), stubs.end(), rng);
    Pairs p;
    std::unordered_set<long long> seen;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      VertexId a = stubs[i], b = stubs[i + 1];
      if (a == b) { ok = false; break; }
      if (a > b) std::swap(a, b);
      if (!seen.insert(static_cast<long long>(a) * n + b).second) { ok = false; break; }
      p.emplace_back(a, b);
    }
    if (!ok) continue;
    OrientedGraph::Options opts;
    opts.allow_disconnected = true;
    auto g = OrientedGraph::from_pairs(n, p, opts);
    if (g.connected()) return OrientedGraph::from_pairs(n, p);
  }
  throw Error(ErrorKind::NonConvergence, "configuration model kept producing invalid graphs");
}

OrientedGraph disjoint_union(const OrientedGraph& a, const OrientedGraph& b) {
  Pairs p;
  for (const Edge& e : a.edges()) p.emplace_back(e.tail, e.head);
  const VertexId off = a.num_vertices();
  for (const Edge& e : b.edges()) p.emplace_back(e.tail + off, e.head + off);
  OrientedGraph::Options opts;
  opts.allow_disconnected = true;
  return OrientedGraph::from_pairs(off + b.num_vertices(), p, opts);
}

bool is_builtin_graph_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) return false;
  const auto kind = spec.substr(0, colon);
  return kind == "cycle" || kind == "complete" || kind == "hypercube" || kind == "path" ||
         kind == "grid" || kind == "torus" || kind == "tree" || kind == "random-regular";
}

OrientedGraph parse_graph_spec(std::string_view spec) {
  if (!is_builtin_graph_spec(spec)) return load_graph_json(std::string(spec));
  const auto colon = spec.find(':');
  const auto kind = spec.substr(0, colon);
  const auto args = parse_ints(spec.substr(colon + 1), spec);
  auto want = [&](std::size_t k) {
    if (args.size() != k)
      throw Error(ErrorKind::InvalidArgument, "graph spec '" + std::string(spec) + "' expects " +
                                                  std::to_string(k) + " arguments");
  };
  for (long long a : args)
    if (a < 0 || a > 100'000'000) throw Error(ErrorKind::InvalidArgument, "graph spec argument out of range");
  auto i = [&](std::size_t k) { return static_cast<int>(args[k]); };
  if (kind == "cycle") { want(1); return cycle_graph(i(0)); }
  if (kind == "complete") { want(1); return complete_graph(i(0)); }
  if (kind == "hypercube") { want(1); return hypercube_graph(i(0)); }
  if (kind == "path") { want(1); return path_graph(i(0)); }
  if (kind == "grid") { want(2); return grid_graph(i(0), i(1)); }
  if (kind == "torus") { want(2); return torus_graph(i(0), i(1)); }
  if (kind == "tree") { want(2); return regular_tree(i(0), i(1)); }
  want(3);
  return random_regular_graph(i(0), i(1), static_cast<std::uint64_t>(args[2]));
}

}  // namespace harmlab
