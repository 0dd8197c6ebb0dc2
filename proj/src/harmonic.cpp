#include "harmlab/harmonic.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>

#include "harmlab/error.hpp"
#include "harmlab/walk.hpp"

namespace harmlab {

namespace {

// Components of {dist > radius}; a component is unbounded when it reaches a
// vertex of deficient degree.
std::vector<char> unbounded_beyond(const OrientedGraph& g, const std::vector<int>& dist, int radius) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  std::vector<char> mask(n);
  for (std::size_t v = 0; v < n; ++v) mask[v] = dist[v] > radius ? 1 : 0;
  int count = 0;
  const auto labels = component_labels(g, mask, &count);
  std::vector<char> open(static_cast<std::size_t>(count), 0);
  for (std::size_t v = 0; v < n; ++v)
    if (mask[v] && !g.is_full(static_cast<VertexId>(v))) open[static_cast<std::size_t>(labels[v])] = 1;
  std::vector<char> out(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (mask[v] && open[static_cast<std::size_t>(labels[v])]) out[v] = 1;
  return out;
}

int max_reachable(const std::vector<int>& d, std::span<const VertexId> among, bool* unreachable) {
  int best = 0;
  for (VertexId y : among) {
    const int dy = d[static_cast<std::size_t>(y)];
    if (dy < 0) *unreachable = true;
    else best = std::max(best, dy);
  }
  return best;
}

}  // namespace

double harmonic_residual(const VertexField& f, const OrientedGraph& g) {
  const VertexField lap = divergence(gradient(f, g), g);
  double worst = 0.0;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (g.is_full(v)) worst = std::max(worst, std::abs(lap[static_cast<std::size_t>(v)]));
  return worst;
}

DirichletResult dirichlet_extend(const OrientedGraph& g, const SubsetView& a, const VertexField& boundary,
                                 bool crosscheck) {
  if (a.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty region");
  if (boundary.size() != static_cast<std::size_t>(g.num_vertices()))
    throw Error(ErrorKind::InvalidArgument, "boundary data has the wrong size");
  const auto& members = a.members();
  std::vector<int> local(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < members.size(); ++i) local[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
  const auto m = static_cast<Eigen::Index>(members.size());
  std::vector<Eigen::Triplet<double>> t;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto ii = static_cast<int>(i);
    t.emplace_back(ii, ii, g.degree(members[i]));
    for (const Incidence& inc : g.incident(members[i])) {
      const int j = local[static_cast<std::size_t>(inc.neighbor)];
      if (j >= 0) t.emplace_back(ii, j, -1.0);
      else rhs[ii] += boundary[static_cast<std::size_t>(inc.neighbor)];
    }
  }
  Eigen::SparseMatrix<double> mat(m, m);
  mat.setFromTriplets(t.begin(), t.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(mat);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "Dirichlet system is singular");
  const Eigen::VectorXd u = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success || !u.allFinite() || (mat * u - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
    throw Error(ErrorKind::SingularSystem, "Dirichlet solve failed");

  DirichletResult out;
  out.values = VertexField(boundary.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (VertexId y : a.outer_boundary()) {
    const double b = boundary[static_cast<std::size_t>(y)];
    out.values[static_cast<std::size_t>(y)] = b;
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  if (a.outer_boundary().empty()) throw Error(ErrorKind::SingularSystem, "region has no outer boundary");
  out.max_principle = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double x = u[static_cast<Eigen::Index>(i)];
    out.values[static_cast<std::size_t>(members[i])] = x;
    const double tol = 1e-10 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (x < lo - tol || x > hi + tol) out.max_principle = false;
  }
  const bool all_full = std::all_of(members.begin(), members.end(), [&](VertexId x) { return g.is_full(x); });
  if (crosscheck && all_full) {
    const ExitSolver solver(g, a);
    double worst = 0.0;
    for (VertexId x : members) {
      const ExitDistribution ex = solver.exit(x);
      double pairing = 0.0;
      for (VertexId y : a.outer_boundary()) pairing += boundary[static_cast<std::size_t>(y)] * ex.distribution[y];
      worst = std::max(worst, std::abs(pairing - out.values[static_cast<std::size_t>(x)]));
    }
    out.crosscheck = worst;
  }
  return out;
}

VertexField truncate(const VertexField& f, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "truncation level must be positive");
  VertexField out = f;
  for (std::size_t v = 0; v < out.size(); ++v)
    if (std::abs(out[v]) >= t) out[v] = out[v] > 0 ? t : -t;
  return out;
}

GradientDecay gradient_decay(const VertexField& f, const OrientedGraph& g, VertexId root, int n_max) {
  if (n_max < 0) throw Error(ErrorKind::InvalidArgument, "n_max must be nonnegative");
  const auto dist = bfs_distances(g, root);
  const EdgeField grad = gradient(f, g);
  GradientDecay out;
  for (int n = 0; n <= n_max; ++n) {
    const auto far = unbounded_beyond(g, dist, n);
    double sup = 0.0;
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edge(e);
      if (far[static_cast<std::size_t>(ed.tail)] && far[static_cast<std::size_t>(ed.head)])
        sup = std::max(sup, std::abs(grad[static_cast<std::size_t>(e)]));
    }
    out.values.push_back(sup);
  }
  return out;
}

std::vector<DivergenceRow> divergence_profile(const OrientedGraph& g, VertexId root, int K, int n_max,
                                              const VertexField* h) {
  if (K < 2) throw Error(ErrorKind::InvalidArgument, "K must be at least 2");
  if (n_max < 1) throw Error(ErrorKind::InvalidArgument, "n_max must be positive");
  const auto dist = bfs_distances(g, root);
  const int reach = *std::max_element(dist.begin(), dist.end());
  if (K * n_max + 1 > reach) throw Error(ErrorKind::InvalidArgument, "K n_max + 1 exceeds the graph radius");
  const auto n_vertices = static_cast<std::size_t>(g.num_vertices());
  std::vector<double> decay;
  if (h) decay = gradient_decay(*h, g, root, n_max).values;

  std::vector<DivergenceRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const auto far = unbounded_beyond(g, dist, K * n);
    std::vector<char> annulus(n_vertices, 0);
    std::vector<VertexId> members, outer;
    for (std::size_t v = 0; v < n_vertices; ++v)
      if (dist[v] > n && !far[v]) {
        annulus[v] = 1;
        members.push_back(static_cast<VertexId>(v));
      }
    for (VertexId x : members) {
      bool touches = false;
      for (const Incidence& inc : g.incident(x))
        if (dist[static_cast<std::size_t>(inc.neighbor)] == K * n + 1) touches = true;
      if (touches) outer.push_back(x);
    }
    DivergenceRow row;
    row.n = n;
    row.annulus_size = members.size();
    row.outer_size = outer.size();
    const auto labels = component_labels(g, annulus, &row.components);
    for (VertexId x : outer) {
      const auto d = bfs_distances(g, x, annulus);
      row.divergence = std::max(row.divergence, max_reachable(d, outer, &row.unreachable_pairs));
    }
    if (members.size() <= 5000) {
      row.component_diameters.assign(static_cast<std::size_t>(row.components), 0);
      bool ignored = false;
      for (VertexId x : members) {
        const auto d = bfs_distances(g, x, annulus);
        auto& diam = row.component_diameters[static_cast<std::size_t>(labels[static_cast<std::size_t>(x)])];
        diam = std::max(diam, max_reachable(d, members, &ignored));
      }
    }
    if (h) row.product = row.divergence * decay[static_cast<std::size_t>(n)];
    rows.push_back(std::move(row));
  }
  return rows;
}

LiouvilleProbe liouville_probe(const CayleyBall& ball, VertexId v, VertexId w, std::span<const int> radii) {
  const OrientedGraph& g = ball.graph();
  LiouvilleProbe out;
  double previous = std::numeric_limits<double>::infinity();
  for (int r : radii) {
    const SubsetView a = harmlab::ball(g, ball.identity_vertex(), r);
    if (!a.contains(v) || !a.contains(w)) throw Error(ErrorKind::InvalidArgument, "v and w must lie in every region");
    const ExitSolver solver(g, a);
    const VertexField diff = solver.exit(v).distribution.field() - solver.exit(w).distribution.field();
    const double value = lp_norm(diff, 1.0);
    out.radii.push_back(r);
    out.values.push_back(value);
    if (value > previous + 1e-12) out.nonincreasing = false;
    previous = value;
    out.max_value = std::max(out.max_value, value);
  }
  return out;
}

std::vector<double> TreeFlow::level_sums(double p) const {
  int deepest = 0;
  for (int d : depth) deepest = std::max(deepest, d);
  std::vector<double> sums(static_cast<std::size_t>(deepest) + 1, 0.0);
  for (std::size_t e = 0; e < depth.size(); ++e)
    if (side[e] >= 0) sums[static_cast<std::size_t>(depth[e])] += std::pow(std::abs(flow[e]), p);
  return sums;
}

TreeFlow tree_flow(const OrientedGraph& tree, EdgeId root_edge) {
  if (!tree.connected() || tree.num_edges() != tree.num_vertices() - 1)
    throw Error(ErrorKind::NotATree, "graph is not a tree");
  if (root_edge < 0 || root_edge >= tree.num_edges()) throw Error(ErrorKind::InvalidArgument, "root edge out of range");
  const auto n = static_cast<std::size_t>(tree.num_vertices());
  const Edge& r = tree.edge(root_edge);
  TreeFlow out;
  out.flow = EdgeField(static_cast<std::size_t>(tree.num_edges()));
  out.depth.assign(static_cast<std::size_t>(tree.num_edges()), 0);
  out.side.assign(static_cast<std::size_t>(tree.num_edges()), 0);
  out.flow[static_cast<std::size_t>(root_edge)] = 1.0;
  // Head side carries the unit away from the root edge, tail side brings it in.
  for (const auto& [start, direction] : {std::pair{r.head, +1}, std::pair{r.tail, -1}}) {
    std::vector<double> weight(n, 0.0);
    std::vector<int> level(n, -1);
    weight[static_cast<std::size_t>(start)] = 1.0 / std::max(1, tree.degree(start) - 1);
    level[static_cast<std::size_t>(start)] = 0;
    std::vector<VertexId> queue{start};
    for (std::size_t i = 0; i < queue.size(); ++i) {
      const VertexId p = queue[i];
      for (const Incidence& inc : tree.incident(p)) {
        if (inc.edge == root_edge) continue;
        const auto c = static_cast<std::size_t>(inc.neighbor);
        if (level[c] >= 0) continue;
        level[c] = level[static_cast<std::size_t>(p)] + 1;
        weight[c] = weight[static_cast<std::size_t>(p)] / std::max(1, tree.degree(inc.neighbor) - 1);
        const auto e = static_cast<std::size_t>(inc.edge);
        // inc.sign is +1 when p is the tail, i.e. the edge points away from p.
        out.flow[e] = direction * inc.sign * weight[static_cast<std::size_t>(p)];
        out.depth[e] = level[c];
        out.side[e] = direction;
        queue.push_back(inc.neighbor);
      }
    }
  }
  const VertexField div = divergence(out.flow, tree);
  for (VertexId v = 0; v < tree.num_vertices(); ++v)
    if (tree.is_full(v)) out.max_divergence = std::max(out.max_divergence, std::abs(div[static_cast<std::size_t>(v)]));
  return out;
}

LaplacianWitness laplacian_witness(const OrientedGraph& g, VertexId root, WitnessKind kind, int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "n must be nonnegative");
  LaplacianWitness out;
  out.kind = kind;
  out.n = n;
  const auto size = static_cast<std::size_t>(g.num_vertices());
  const double inv = 1.0 / (n + 1);
  if (kind == WitnessKind::C0) {
    const auto dist = bfs_distances(g, root);
    out.f = VertexField(size);
    for (std::size_t v = 0; v < size; ++v)
      if (dist[v] >= 0 && dist[v] <= n) out.f[v] = (n + 1 - dist[v]) * inv;
  } else {
    VertexField step = dirac(g.num_vertices(), root);
    out.f = step;
    for (int i = 1; i <= n; ++i) {
      step = apply_walk(step, g);
      out.f += step;
    }
    out.f *= inv;
  }
  const VertexField lap = out.f - apply_walk(out.f, g);
  out.gradient_sup = lp_norm(gradient(out.f, g), std::numeric_limits<double>::infinity());
  if (kind == WitnessKind::C0) {
    out.f_norm = lp_norm(out.f, std::numeric_limits<double>::infinity());
    out.laplacian_norm = lp_norm(lap, std::numeric_limits<double>::infinity());
    out.ratio = out.gradient_sup / out.f_norm;
    out.bound = inv;
  } else {
    out.f_norm = lp_norm(out.f, 1.0);
    out.laplacian_norm = lp_norm(lap, 1.0);
    out.ratio = out.laplacian_norm / out.f_norm;
    out.bound = 2.0 * inv;
  }
  out.holds = out.ratio <= out.bound + 1e-12;
  return out;
}

}  // namespace harmlab
