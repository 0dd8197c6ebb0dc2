#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmlab/error.hpp"

namespace harmlab {

using VertexId = std::int32_t;
using EdgeId = std::int32_t;

/// Oriented edge; the tail always carries the smaller vertex id.
struct Edge {
  VertexId tail;
  VertexId head;
};

/// One entry of the adjacency index: `sign` is +1 when the vertex is the
/// tail of `edge`, -1 when it is the head.
struct Incidence {
  EdgeId edge;
  VertexId neighbor;
  int sign;
};

struct GraphOptions {
  bool allow_disconnected = false;
  // Degree used by the walk operator. 0 means the maximum degree; truncated
  // Cayley balls set it to |S| so that boundary vertices are visibly deficient.
  int nominal_degree = 0;
};

class OrientedGraph {
 public:
  using Options = GraphOptions;

  OrientedGraph() = default;

  // Pairs may come in either order; they are canonicalized. Self-loops and
  // repeated pairs are rejected.
  static OrientedGraph from_pairs(VertexId vertex_count,
                                  std::span<const std::pair<VertexId, VertexId>> pairs,
                                  Options options = {});
  // Pairs must already satisfy tail < head.
  static OrientedGraph from_canonical_pairs(VertexId vertex_count,
                                            std::span<const std::pair<VertexId, VertexId>> pairs,
                                            Options options = {});

  VertexId num_vertices() const noexcept { return vertex_count_; }
  EdgeId num_edges() const noexcept { return static_cast<EdgeId>(edges_.size()); }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const Incidence> incident(VertexId v) const {
    auto b = offsets_[static_cast<std::size_t>(v)];
    auto e = offsets_[static_cast<std::size_t>(v) + 1];
    return {incidences_.data() + b, e - b};
  }
  int degree(VertexId v) const {
    return static_cast<int>(offsets_[static_cast<std::size_t>(v) + 1] -
                            offsets_[static_cast<std::size_t>(v)]);
  }
  int max_degree() const noexcept { return max_degree_; }
  int min_degree() const noexcept { return min_degree_; }
  int nominal_degree() const noexcept { return nominal_degree_; }
  bool is_regular() const noexcept { return min_degree_ == max_degree_; }
  bool is_full(VertexId v) const { return degree(v) == nominal_degree_; }
  bool connected() const noexcept { return connected_; }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  // Throws NonRegularGraph unless every vertex has the same degree.
  int require_regular() const;

 private:
  void build(VertexId vertex_count, std::vector<Edge> edges, Options options);

  VertexId vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Incidence> incidences_;
  int max_degree_ = 0;
  int min_degree_ = 0;
  int nominal_degree_ = 0;
  bool connected_ = true;
};

// Breadth-first distances from the sources; unreachable vertices get -1.
// A non-empty `mask` restricts the search to vertices with mask[v] != 0.
std::vector<int> bfs_distances(const OrientedGraph& g, std::span<const VertexId> sources,
                               std::span<const char> mask = {});
std::vector<int> bfs_distances(const OrientedGraph& g, VertexId source,
                               std::span<const char> mask = {});

// Component label per vertex (restricted to mask when given, -1 outside).
std::vector<int> component_labels(const OrientedGraph& g, std::span<const char> mask,
                                  int* count = nullptr);

/// Real-valued function on vertices or edges, stored densely. Values outside
/// the index range do not exist; entries default to zero.
template <class Tag>
class Field {
 public:
  Field() = default;
  explicit Field(std::size_t size) : values_(size, 0.0) {}
  explicit Field(std::vector<double> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::vector<double>& raw() noexcept { return values_; }
  const std::vector<double>& raw() const noexcept { return values_; }

  std::vector<std::int32_t> support() const {
    std::vector<std::int32_t> out;
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (values_[i] != 0.0) out.push_back(static_cast<std::int32_t>(i));
    return out;
  }
  double sum() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

  Field& operator+=(const Field& o) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  Field& operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
  }
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

 private:
  std::vector<double> values_;
};

using VertexField = Field<struct VertexTag>;
using EdgeField = Field<struct EdgeTag>;

VertexField dirac(VertexId vertex_count, VertexId v, double mass = 1.0);

/// Nonnegative vertex field of unit mass.
class Distribution {
 public:
  static constexpr double kMassTolerance = 1e-12;

  Distribution() = default;
  static Distribution dirac(VertexId vertex_count, VertexId v);
  static Distribution uniform_on(VertexId vertex_count, std::span<const VertexId> support);
  // Validates nonnegativity and mass within `tolerance`.
  static Distribution from_field(VertexField f, double tolerance = kMassTolerance);

  const VertexField& field() const noexcept { return field_; }
  double operator[](VertexId v) const { return field_[static_cast<std::size_t>(v)]; }
  std::size_t size() const noexcept { return field_.size(); }

 private:
  explicit Distribution(VertexField f) : field_(std::move(f)) {}
  VertexField field_;
};

EdgeField gradient(const VertexField& f, const OrientedGraph& g);
VertexField divergence(const EdgeField& tau, const OrientedGraph& g);
// I - P on a regular graph; NonRegularGraph otherwise.
VertexField laplacian(const VertexField& f, const OrientedGraph& g);

// laziness*f + (1-laziness)*(1/d) sum over neighbours, d = nominal degree.
// Raises SupportHitsBoundary when f is nonzero on a vertex whose degree is
// below the nominal degree (a truncated Cayley ball boundary).
VertexField apply_walk(const VertexField& f, const OrientedGraph& g, double laziness = 0.0);
// f - Pf with the nominal degree, same boundary policy.
VertexField apply_laplacian(const VertexField& f, const OrientedGraph& g);

Distribution walk_step(const Distribution& nu, const OrientedGraph& g, double laziness);

double lp_norm(std::span<const double> values, double p);
template <class Tag>
double lp_norm(const Field<Tag>& f, double p) {
  return lp_norm(f.values(), p);
}
double inner(std::span<const double> a, std::span<const double> b);

/// A vertex subset together with its boundary data.
class SubsetView {
 public:
  SubsetView() = default;
  SubsetView(const OrientedGraph& g, std::span<const VertexId> members);

  const std::vector<VertexId>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool contains(VertexId v) const { return mask_[static_cast<std::size_t>(v)] != 0; }
  std::span<const char> mask() const noexcept { return mask_; }
  const std::vector<EdgeId>& boundary_edges() const noexcept { return boundary_; }
  const std::vector<VertexId>& outer_boundary() const noexcept { return outer_; }
  const std::vector<EdgeId>& induced_edges() const noexcept { return induced_; }

 private:
  std::vector<VertexId> members_;
  std::vector<char> mask_;
  std::vector<EdgeId> boundary_;
  std::vector<VertexId> outer_;
  std::vector<EdgeId> induced_;
};

SubsetView subset_view(const OrientedGraph& g, std::span<const VertexId> members);
SubsetView ball(const OrientedGraph& g, VertexId center, int radius);

/// Graph induced on a subset, with maps back to the parent. Members are kept
/// in increasing id order so parent orientations carry over unchanged.
struct InducedGraph {
  OrientedGraph graph;
  std::vector<VertexId> to_parent;
  std::vector<EdgeId> edge_to_parent;
  std::vector<VertexId> from_parent;  // -1 outside the subset
};
InducedGraph induced_subgraph(const OrientedGraph& g, std::span<const VertexId> members,
                              bool allow_disconnected = true);

// Graph JSON format: {"vertices": N, "edges": [[x,y],...], "labels": {...}}.
OrientedGraph graph_from_json(const nlohmann::json& j, OrientedGraph::Options options = {});
OrientedGraph load_graph_json(const std::string& path, OrientedGraph::Options options = {});
nlohmann::json graph_to_json(const OrientedGraph& g);

}  // namespace harmlab
