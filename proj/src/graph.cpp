#include "harmlab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <unordered_set>

namespace harmlab {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

OrientedGraph OrientedGraph::from_pairs(VertexId vertex_count,
                                        std::span<const std::pair<VertexId, VertexId>> pairs,
                                        Options options) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a == b) throw Error(ErrorKind::InvalidGraph, "self-loop at vertex " + std::to_string(a));
    edges.push_back(a < b ? Edge{a, b} : Edge{b, a});
  }
  OrientedGraph g;
  g.build(vertex_count, std::move(edges), options);
  return g;
}

OrientedGraph OrientedGraph::from_canonical_pairs(
    VertexId vertex_count, std::span<const std::pair<VertexId, VertexId>> pairs, Options options) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a == b) throw Error(ErrorKind::InvalidGraph, "self-loop at vertex " + std::to_string(a));
    if (a > b)
      throw Error(ErrorKind::InvalidGraph, "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                               ") violates tail < head orientation");
    edges.push_back({a, b});
  }
  OrientedGraph g;
  g.build(vertex_count, std::move(edges), options);
  return g;
}

void OrientedGraph::build(VertexId vertex_count, std::vector<Edge> edges, Options options) {
  if (vertex_count < 0) throw Error(ErrorKind::InvalidGraph, "negative vertex count");
  vertex_count_ = vertex_count;
  const auto n = static_cast<std::size_t>(vertex_count);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  std::vector<std::size_t> deg(n, 0);
  for (const Edge& e : edges) {
    if (e.tail < 0 || e.head >= vertex_count)
      throw Error(ErrorKind::InvalidGraph, "edge endpoint out of range");
    if (!seen.insert(pair_key(e.tail, e.head)).second)
      throw Error(ErrorKind::InvalidGraph, "repeated edge {" + std::to_string(e.tail) + "," +
                                               std::to_string(e.head) + "}");
    ++deg[static_cast<std::size_t>(e.tail)];
    ++deg[static_cast<std::size_t>(e.head)];
  }
  edges_ = std::move(edges);
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  incidences_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    const auto id = static_cast<EdgeId>(i);
    incidences_[fill[static_cast<std::size_t>(e.tail)]++] = {id, e.head, +1};
    incidences_[fill[static_cast<std::size_t>(e.head)]++] = {id, e.tail, -1};
  }
  max_degree_ = 0;
  min_degree_ = n == 0 ? 0 : std::numeric_limits<int>::max();
  for (std::size_t v = 0; v < n; ++v) {
    max_degree_ = std::max(max_degree_, static_cast<int>(deg[v]));
    min_degree_ = std::min(min_degree_, static_cast<int>(deg[v]));
  }
  nominal_degree_ = options.nominal_degree > 0 ? options.nominal_degree : max_degree_;
  if (nominal_degree_ < max_degree_)
    throw Error(ErrorKind::InvalidGraph, "nominal degree below maximum degree");

  int components = 0;
  if (n > 0) component_labels(*this, {}, &components);
  connected_ = components <= 1;
  if (!connected_ && !options.allow_disconnected)
    throw Error(ErrorKind::InvalidGraph, "graph is not connected");
}

std::optional<EdgeId> OrientedGraph::find_edge(VertexId a, VertexId b) const {
  const VertexId probe = degree(a) <= degree(b) ? a : b;
  const VertexId other = probe == a ? b : a;
  for (const Incidence& inc : incident(probe))
    if (inc.neighbor == other) return inc.edge;
  return std::nullopt;
}

int OrientedGraph::require_regular() const {
  if (!is_regular())
    throw Error(ErrorKind::NonRegularGraph, "degrees range over [" + std::to_string(min_degree_) +
                                                "," + std::to_string(max_degree_) + "]");
  return max_degree_;
}

std::vector<int> bfs_distances(const OrientedGraph& g, std::span<const VertexId> sources,
                               std::span<const char> mask) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_vertices()), -1);
  std::vector<VertexId> queue;
  queue.reserve(dist.size());
  for (VertexId s : sources) {
    if (!mask.empty() && !mask[static_cast<std::size_t>(s)]) continue;
    if (dist[static_cast<std::size_t>(s)] == 0) continue;
    dist[static_cast<std::size_t>(s)] = 0;
    queue.push_back(s);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    const int next = dist[static_cast<std::size_t>(v)] + 1;
    for (const Incidence& inc : g.incident(v)) {
      const auto u = static_cast<std::size_t>(inc.neighbor);
      if (dist[u] >= 0) continue;
      if (!mask.empty() && !mask[u]) continue;
      dist[u] = next;
      queue.push_back(inc.neighbor);
    }
  }
  return dist;
}

std::vector<int> bfs_distances(const OrientedGraph& g, VertexId source, std::span<const char> mask) {
  return bfs_distances(g, std::span<const VertexId>(&source, 1), mask);
}

std::vector<int> component_labels(const OrientedGraph& g, std::span<const char> mask, int* count) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  std::vector<int> label(n, -1);
  std::vector<VertexId> stack;
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0 || (!mask.empty() && !mask[s])) continue;
    label[s] = next;
    stack.push_back(static_cast<VertexId>(s));
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : g.incident(v)) {
        const auto u = static_cast<std::size_t>(inc.neighbor);
        if (label[u] >= 0 || (!mask.empty() && !mask[u])) continue;
        label[u] = next;
        stack.push_back(inc.neighbor);
      }
    }
    ++next;
  }
  if (count) *count = next;
  return label;
}

VertexField dirac(VertexId vertex_count, VertexId v, double mass) {
  VertexField f(static_cast<std::size_t>(vertex_count));
  f[static_cast<std::size_t>(v)] = mass;
  return f;
}

Distribution Distribution::dirac(VertexId vertex_count, VertexId v) {
  if (v < 0 || v >= vertex_count) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
  return Distribution(harmlab::dirac(vertex_count, v));
}

Distribution Distribution::uniform_on(VertexId vertex_count, std::span<const VertexId> support) {
  if (support.empty()) throw Error(ErrorKind::InvalidArgument, "empty support");
  VertexField f(static_cast<std::size_t>(vertex_count));
  const double w = 1.0 / static_cast<double>(support.size());
  for (VertexId v : support) {
    if (f[static_cast<std::size_t>(v)] != 0.0)
      throw Error(ErrorKind::InvalidArgument, "repeated support vertex");
    f[static_cast<std::size_t>(v)] = w;
  }
  return Distribution(std::move(f));
}

Distribution Distribution::from_field(VertexField f, double tolerance) {
  double mass = 0.0;
  for (double v : f.values()) {
    if (!(v >= 0.0)) throw Error(ErrorKind::NegativeMass, "distribution has a negative or NaN entry");
    mass += v;
  }
  if (std::abs(mass - 1.0) > tolerance)
    throw Error(ErrorKind::MassMismatch, "distribution mass " + std::to_string(mass));
  return Distribution(std::move(f));
}

EdgeField gradient(const VertexField& f, const OrientedGraph& g) {
  EdgeField out(static_cast<std::size_t>(g.num_edges()));
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    out[i] = f[static_cast<std::size_t>(edges[i].head)] - f[static_cast<std::size_t>(edges[i].tail)];
  return out;
}

VertexField divergence(const EdgeField& tau, const OrientedGraph& g) {
  VertexField out(static_cast<std::size_t>(g.num_vertices()));
  const auto edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out[static_cast<std::size_t>(edges[i].tail)] -= tau[i];
    out[static_cast<std::size_t>(edges[i].head)] += tau[i];
  }
  return out;
}

VertexField apply_walk(const VertexField& f, const OrientedGraph& g, double laziness) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  const double d = g.nominal_degree();
  const double move = (1.0 - laziness) / d;
  VertexField out(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double fv = f[v];
    if (fv == 0.0) continue;
    if (!g.is_full(static_cast<VertexId>(v)))
      throw Error(ErrorKind::SupportHitsBoundary,
                  "support reaches vertex " + std::to_string(v) + " of deficient degree");
  }
  for (std::size_t v = 0; v < n; ++v) {
    double acc = 0.0;
    for (const Incidence& inc : g.incident(static_cast<VertexId>(v)))
      acc += f[static_cast<std::size_t>(inc.neighbor)];
    out[v] = laziness * f[v] + move * acc;
  }
  return out;
}

VertexField apply_laplacian(const VertexField& f, const OrientedGraph& g) {
  VertexField pf = apply_walk(f, g, 0.0);
  VertexField out(f);
  out -= pf;
  return out;
}

VertexField laplacian(const VertexField& f, const OrientedGraph& g) {
  g.require_regular();
  return apply_laplacian(f, g);
}

Distribution walk_step(const Distribution& nu, const OrientedGraph& g, double laziness) {
  g.require_regular();
  if (!(laziness >= 0.0 && laziness < 1.0))
    throw Error(ErrorKind::InvalidArgument, "laziness must lie in [0,1)");
  return Distribution::from_field(apply_walk(nu.field(), g, laziness), 1e-10);
}

double lp_norm(std::span<const double> values, double p) {
  if (p == 0.0) {
    double count = 0.0;
    for (double v : values) count += v != 0.0 ? 1.0 : 0.0;
    return count;
  }
  if (std::isinf(p) && p > 0) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "p must be 0, >= 1 or infinity");
  if (p == 1.0) {
    double s = 0.0;
    for (double v : values) s += std::abs(v);
    return s;
  }
  // Scale by the max entry so large p neither overflows nor underflows.
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  if (p == 2.0) {
    for (double v : values) s += (v / m) * (v / m);
    return m * std::sqrt(s);
  }
  for (double v : values) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double inner(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

SubsetView::SubsetView(const OrientedGraph& g, std::span<const VertexId> members)
    : members_(members.begin(), members.end()),
      mask_(static_cast<std::size_t>(g.num_vertices()), 0) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (VertexId v : members_) {
    if (v < 0 || v >= g.num_vertices()) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
    mask_[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<char> outer_seen(mask_.size(), 0);
  for (VertexId v : members_) {
    for (const Incidence& inc : g.incident(v)) {
      const auto u = static_cast<std::size_t>(inc.neighbor);
      if (mask_[u]) {
        if (inc.sign > 0) induced_.push_back(inc.edge);
      } else {
        boundary_.push_back(inc.edge);
        if (!outer_seen[u]) {
          outer_seen[u] = 1;
          outer_.push_back(inc.neighbor);
        }
      }
    }
  }
  std::sort(boundary_.begin(), boundary_.end());
  std::sort(induced_.begin(), induced_.end());
  std::sort(outer_.begin(), outer_.end());
}

SubsetView subset_view(const OrientedGraph& g, std::span<const VertexId> members) {
  return SubsetView(g, members);
}

SubsetView ball(const OrientedGraph& g, VertexId center, int radius) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "negative radius");
  const auto dist = bfs_distances(g, center);
  std::vector<VertexId> members;
  for (std::size_t v = 0; v < dist.size(); ++v)
    if (dist[v] >= 0 && dist[v] <= radius) members.push_back(static_cast<VertexId>(v));
  return SubsetView(g, members);
}

InducedGraph induced_subgraph(const OrientedGraph& g, std::span<const VertexId> members,
                              bool allow_disconnected) {
  InducedGraph out;
  out.to_parent.assign(members.begin(), members.end());
  std::sort(out.to_parent.begin(), out.to_parent.end());
  out.to_parent.erase(std::unique(out.to_parent.begin(), out.to_parent.end()), out.to_parent.end());
  out.from_parent.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < out.to_parent.size(); ++i)
    out.from_parent[static_cast<std::size_t>(out.to_parent[i])] = static_cast<VertexId>(i);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (VertexId v : out.to_parent) {
    for (const Incidence& inc : g.incident(v)) {
      if (inc.sign < 0) continue;
      const VertexId w = out.from_parent[static_cast<std::size_t>(inc.neighbor)];
      if (w < 0) continue;
      pairs.emplace_back(out.from_parent[static_cast<std::size_t>(v)], w);
      out.edge_to_parent.push_back(inc.edge);
    }
  }
  OrientedGraph::Options opts;
  opts.allow_disconnected = allow_disconnected;
  out.graph = OrientedGraph::from_canonical_pairs(static_cast<VertexId>(out.to_parent.size()), pairs, opts);
  if (!allow_disconnected && !out.graph.connected())
    throw Error(ErrorKind::DisconnectedRegion, "induced subgraph is disconnected");
  return out;
}

OrientedGraph graph_from_json(const nlohmann::json& j, OrientedGraph::Options options) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw Error(ErrorKind::InvalidGraph, "graph JSON needs \"vertices\" and \"edges\"");
  if (!j["vertices"].is_number_integer()) throw Error(ErrorKind::InvalidGraph, "\"vertices\" must be an integer");
  const auto n = j["vertices"].get<std::int64_t>();
  if (n < 0 || n > std::numeric_limits<VertexId>::max())
    throw Error(ErrorKind::InvalidGraph, "vertex count out of range");
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
      throw Error(ErrorKind::InvalidGraph, "edges must be [x,y] integer pairs");
    pairs.emplace_back(e[0].get<VertexId>(), e[1].get<VertexId>());
  }
  return OrientedGraph::from_canonical_pairs(static_cast<VertexId>(n), pairs, options);
}

OrientedGraph load_graph_json(const std::string& path, OrientedGraph::Options options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidGraph, std::string("malformed graph JSON: ") + e.what());
  }
  return graph_from_json(j, options);
}

nlohmann::json graph_to_json(const OrientedGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.tail, e.head});
  return {{"vertices", g.num_vertices()}, {"edges", std::move(edges)}};
}

}  // namespace harmlab
