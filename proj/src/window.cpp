#include "harmlab/window.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "harmlab/error.hpp"

namespace harmlab {

int WindowSpaces::index_of(EdgeId e) const {
  const auto it = std::lower_bound(edges.begin(), edges.end(), e);
  return it != edges.end() && *it == e ? static_cast<int>(it - edges.begin()) : -1;
}

WindowSpaces build_window(const OrientedGraph& g, std::span<const VertexId> window) {
  const SubsetView f(g, window);
  WindowSpaces w;
  w.window = f.members();
  w.boundary = f.boundary_edges();
  w.interior = f.induced_edges();
  w.edges = w.boundary;
  w.edges.insert(w.edges.end(), w.interior.begin(), w.interior.end());
  std::sort(w.edges.begin(), w.edges.end());
  std::sort(w.boundary.begin(), w.boundary.end());
  std::sort(w.interior.begin(), w.interior.end());

  // BFS forest over interior edges; non-tree edges close fundamental cycles.
  const auto n = static_cast<std::size_t>(g.num_vertices());
  std::vector<int> depth(n, -1);
  std::vector<Incidence> up(n);  // incidence from the parent's side
  std::vector<char> tree_edge(static_cast<std::size_t>(g.num_edges()), 0);
  for (VertexId root : w.window) {
    if (depth[static_cast<std::size_t>(root)] >= 0) continue;
    ++w.components;
    bool leaves = false;
    depth[static_cast<std::size_t>(root)] = 0;
    std::vector<VertexId> queue{root};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const VertexId u = queue[h];
      if (!g.is_full(u)) leaves = true;
      for (const Incidence& inc : g.incident(u)) {
        if (!f.contains(inc.neighbor)) {
          leaves = true;
          continue;
        }
        const auto v = static_cast<std::size_t>(inc.neighbor);
        if (depth[v] >= 0) continue;
        depth[v] = depth[static_cast<std::size_t>(u)] + 1;
        up[v] = Incidence{inc.edge, u, inc.sign};
        tree_edge[static_cast<std::size_t>(inc.edge)] = 1;
        queue.push_back(inc.neighbor);
      }
    }
    if (!leaves) ++w.closed_components;
  }
  for (EdgeId e : w.interior) {
    if (tree_edge[static_cast<std::size_t>(e)]) continue;
    const Edge& ed = g.edge(e);
    // Cycle: tail -> head along e, then head back to tail through the tree.
    std::vector<SignedEdge> cycle{{e, +1}};
    std::vector<SignedEdge> from_tail;
    VertexId a = ed.head, b = ed.tail;
    while (a != b) {
      if (depth[static_cast<std::size_t>(a)] >= depth[static_cast<std::size_t>(b)]) {
        // Walk a up towards its parent.
        const Incidence& in = up[static_cast<std::size_t>(a)];
        cycle.push_back({in.edge, -in.sign});
        a = in.neighbor;
      } else {
        // Later reversed: parent(b) -> b.
        const Incidence& in = up[static_cast<std::size_t>(b)];
        from_tail.push_back({in.edge, in.sign});
        b = in.neighbor;
      }
    }
    cycle.insert(cycle.end(), from_tail.rbegin(), from_tail.rend());
    w.cycles.push_back(std::move(cycle));
  }

  w.cut_dimension = static_cast<int>(w.window.size()) - w.closed_components;
  w.cycle_dimension = static_cast<int>(w.cycles.size());
  w.expected_cycle_dimension = static_cast<int>(w.interior.size()) - static_cast<int>(w.window.size()) + w.components;
  w.codimension = static_cast<int>(w.edges.size()) - w.cut_dimension - w.cycle_dimension;

  // <grad delta_x, c> = sum over cycle edges entering x minus leaving x.
  double defect = 0.0;
  for (const auto& c : w.cycles) {
    std::unordered_map<VertexId, double> pairing;
    for (const SignedEdge& s : c) {
      const Edge& ed = g.edge(s.edge);
      pairing[ed.head] += s.sign;
      pairing[ed.tail] -= s.sign;
    }
    for (const auto& [x, val] : pairing) defect = std::max(defect, std::abs(val));
  }
  w.orthogonality_defect = defect;
  w.dimensions_ok = w.cycle_dimension == w.expected_cycle_dimension && w.codimension >= 0;
  return w;
}

WindowStats window_projection_stats(const CayleyBall& ball, std::span<const VertexId> window, int generator,
                                    std::size_t edge_budget) {
  const OrientedGraph& g = ball.graph();
  if (generator < 0 || generator >= ball.generator_count())
    throw Error(ErrorKind::InvalidArgument, "generator index out of range");
  const WindowSpaces w = build_window(g, window);
  const auto m = static_cast<Eigen::Index>(w.edges.size());
  if (w.edges.size() > edge_budget)
    throw Error(ErrorKind::DenseBudgetExceeded,
                "window has " + std::to_string(w.edges.size()) + " edges, budget " + std::to_string(edge_budget));

  WindowStats st;
  st.generator = generator;
  st.window_size = w.window.size();
  st.boundary_size = w.boundary.size();
  st.edge_count = w.edges.size();
  st.expected_codimension = static_cast<int>(w.boundary.size()) - 1;
  st.orthogonality_defect = w.orthogonality_defect;

  const auto k = static_cast<Eigen::Index>(w.window.size());
  const auto c = static_cast<Eigen::Index>(w.cycles.size());
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(m, k + c);
  for (Eigen::Index j = 0; j < k; ++j)
    for (const Incidence& inc : g.incident(w.window[static_cast<std::size_t>(j)]))
      basis(w.index_of(inc.edge), j) = -inc.sign;
  for (Eigen::Index j = 0; j < c; ++j)
    for (const SignedEdge& s : w.cycles[static_cast<std::size_t>(j)]) basis(w.index_of(s.edge), k + j) += s.sign;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(basis);
  qr.setThreshold(1e-10);
  st.rank = static_cast<int>(qr.rank());
  st.codimension = static_cast<int>(m) - st.rank;
  const Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(st.rank);

  // s-labelled edges (x, x s) for x in F.
  std::vector<char> labelled(static_cast<std::size_t>(m), 0);
  std::vector<Eigen::Index> rows;
  for (VertexId x : w.window) {
    const auto y = ball.step(x, generator);
    if (!y) throw Error(ErrorKind::PathExitsBall, "window touches the edge of the ball");
    const auto e = g.find_edge(x, *y);
    const int idx = w.index_of(*e);
    if (!labelled[static_cast<std::size_t>(idx)]) {
      labelled[static_cast<std::size_t>(idx)] = 1;
      rows.push_back(idx);
    }
  }
  // V' = {q a : q a vanishes off the s-edges} = q * null(q_off).
  Eigen::MatrixXd off(m - static_cast<Eigen::Index>(rows.size()), st.rank);
  for (Eigen::Index i = 0, r = 0; i < m; ++i)
    if (!labelled[static_cast<std::size_t>(i)]) off.row(r++) = q.row(i);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(off.transpose() * off);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigensolveFailure, "window projection eigensolve failed");
  std::vector<Eigen::Index> null_cols;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()[i] < 1e-9) null_cols.push_back(i);
  st.labelled_dimension = static_cast<int>(null_cols.size());
  Eigen::MatrixXd vprime(m, static_cast<Eigen::Index>(null_cols.size()));
  for (std::size_t j = 0; j < null_cols.size(); ++j)
    vprime.col(static_cast<Eigen::Index>(j)) = q * es.eigenvectors().col(null_cols[j]);

  const double n = static_cast<double>(rows.size());
  const double kk = static_cast<double>(st.expected_codimension);
  st.proportion_bound = std::sqrt(std::max(0.0, kk) / n);
  std::size_t below = 0;
  for (Eigen::Index r : rows) {
    const double d = vprime.cols() ? vprime.row(r).squaredNorm() : 0.0;
    st.diagonals.push_back(d);
    st.trace += d;
    st.max_diagonal = std::max(st.max_diagonal, d);
    if (d < 1.0 - st.proportion_bound) ++below;
  }
  st.trace_defect = std::abs(st.trace - st.labelled_dimension);
  st.bound = 1.0 - kk / static_cast<double>(st.window_size);
  st.bound_holds = st.max_diagonal >= st.bound - 1e-12;
  st.proportion_below = static_cast<double>(below) / n;
  st.proportion_holds = st.proportion_below <= st.proportion_bound + 1e-12;
  return st;
}

std::vector<VertexId> box_window(const CayleyBall& ball, int side) {
  if (ball.group().name().rfind("zd:", 0) != 0)
    throw Error(ErrorKind::UnsupportedGroup, "box windows need a free abelian group");
  if (side < 1) throw Error(ErrorKind::InvalidArgument, "side must be positive");
  const std::size_t dim = ball.group().identity().size();
  const std::int64_t lo = -static_cast<std::int64_t>((side - 1) / 2);
  std::vector<VertexId> out;
  GroupElement x(dim, lo);
  while (true) {
    const auto v = ball.find(x);
    if (!v) throw Error(ErrorKind::InvalidArgument, "ball too small for the requested box");
    out.push_back(*v);
    std::size_t i = 0;
    while (i < dim && ++x[i] == lo + side) x[i++] = lo;
    if (i == dim) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace harmlab
