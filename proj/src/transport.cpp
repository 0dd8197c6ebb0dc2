#include "harmlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "harmlab/walk.hpp"
#include "linalg.hpp"

namespace harmlab {

namespace {

constexpr double kMassScale = 1e9;
constexpr long long kUnreached = std::numeric_limits<long long>::max() / 4;

void add_along_edge(EdgeField& tau, const OrientedGraph& g, EdgeId e, VertexId from, double amount) {
  tau[static_cast<std::size_t>(e)] += g.edge(e).tail == from ? amount : -amount;
}

// Successive shortest paths with potentials on the unit-cost network where
// every edge can carry flow both ways. Flow per direction is kept separately
// so that cancelling flow is a -1 arc.
struct MinCostFlow {
  const OrientedGraph& g;
  std::vector<long long> fwd, bwd, excess, potential;
  int augmentations = 0;

  MinCostFlow(const OrientedGraph& graph, std::vector<long long> supply)
      : g(graph),
        fwd(static_cast<std::size_t>(graph.num_edges()), 0),
        bwd(static_cast<std::size_t>(graph.num_edges()), 0),
        excess(std::move(supply)),
        potential(static_cast<std::size_t>(graph.num_vertices()), 0) {}

  // Cancelling capacity when moving from `from` across incidence `inc`.
  long long cancel_cap(VertexId from, const Incidence& inc) const {
    (void)from;
    return inc.sign > 0 ? bwd[static_cast<std::size_t>(inc.edge)] : fwd[static_cast<std::size_t>(inc.edge)];
  }

  void run() {
    const auto n = static_cast<std::size_t>(g.num_vertices());
    std::vector<long long> dist(n);
    std::vector<char> done(n);
    std::vector<Incidence> via(n);
    std::vector<VertexId> prev(n);
    using Item = std::pair<long long, VertexId>;
    while (true) {
      bool any = false;
      for (long long e : excess)
        if (e > 0) any = true;
      if (!any) return;
      std::fill(dist.begin(), dist.end(), kUnreached);
      std::fill(done.begin(), done.end(), 0);
      std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
      for (std::size_t v = 0; v < n; ++v)
        if (excess[v] > 0) {
          dist[v] = 0;
          prev[v] = -1;
          heap.push({0, static_cast<VertexId>(v)});
        }
      VertexId sink = -1;
      long long reach = 0;
      while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        const auto uu = static_cast<std::size_t>(u);
        if (done[uu] || du != dist[uu]) continue;
        done[uu] = 1;
        if (excess[uu] < 0) {
          sink = u;
          reach = du;
          break;
        }
        for (const Incidence& inc : g.incident(u)) {
          const auto vv = static_cast<std::size_t>(inc.neighbor);
          if (done[vv]) continue;
          const long long cost = cancel_cap(u, inc) > 0 ? -1 : 1;
          const long long reduced = cost + potential[uu] - potential[vv];
          if (reduced < 0) throw Error(ErrorKind::NumericalFailure, "negative reduced cost in flow solver");
          if (du + reduced < dist[vv]) {
            dist[vv] = du + reduced;
            prev[vv] = u;
            via[vv] = inc;
            heap.push({dist[vv], inc.neighbor});
          }
        }
      }
      if (sink < 0) throw Error(ErrorKind::Infeasible, "supports lie in different components");
      for (std::size_t v = 0; v < n; ++v) potential[v] += std::min(dist[v], reach);

      long long amount = -excess[static_cast<std::size_t>(sink)];
      VertexId v = sink;
      while (prev[static_cast<std::size_t>(v)] >= 0) {
        const VertexId u = prev[static_cast<std::size_t>(v)];
        const long long cap = cancel_cap(u, via[static_cast<std::size_t>(v)]);
        if (cap > 0) amount = std::min(amount, cap);
        v = u;
      }
      amount = std::min(amount, excess[static_cast<std::size_t>(v)]);
      const VertexId source = v;
      v = sink;
      while (prev[static_cast<std::size_t>(v)] >= 0) {
        const VertexId u = prev[static_cast<std::size_t>(v)];
        const Incidence& inc = via[static_cast<std::size_t>(v)];
        const auto e = static_cast<std::size_t>(inc.edge);
        if (inc.sign > 0) {
          if (bwd[e] > 0) bwd[e] -= amount;
          else fwd[e] += amount;
        } else {
          if (fwd[e] > 0) fwd[e] -= amount;
          else bwd[e] += amount;
        }
        v = u;
      }
      excess[static_cast<std::size_t>(source)] -= amount;
      excess[static_cast<std::size_t>(sink)] += amount;
      ++augmentations;
    }
  }
};

// Ships leftover divergence error along breadth-first shortest paths.
void route_leftovers(const OrientedGraph& g, EdgeField& tau, const VertexField& source, const VertexField& target) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  for (std::size_t round = 0; round < 4 * n + 4; ++round) {
    VertexField div = divergence(tau, g);
    std::vector<double> need(n);
    VertexId from = -1;
    for (std::size_t v = 0; v < n; ++v) {
      need[v] = target[v] - source[v] - div[v];
      if (need[v] < -1e-15 && (from < 0 || need[v] < need[static_cast<std::size_t>(from)])) from = static_cast<VertexId>(v);
    }
    if (from < 0) return;
    std::vector<VertexId> parent(n, -1);
    std::vector<EdgeId> pedge(n, -1);
    std::vector<char> seen(n, 0);
    std::vector<VertexId> queue{from};
    seen[static_cast<std::size_t>(from)] = 1;
    VertexId to = -1;
    for (std::size_t h = 0; h < queue.size() && to < 0; ++h) {
      const VertexId u = queue[h];
      for (const Incidence& inc : g.incident(u)) {
        const auto w = static_cast<std::size_t>(inc.neighbor);
        if (seen[w]) continue;
        seen[w] = 1;
        parent[w] = u;
        pedge[w] = inc.edge;
        if (need[w] > 1e-15) {
          to = inc.neighbor;
          break;
        }
        queue.push_back(inc.neighbor);
      }
    }
    if (to < 0) return;
    const double amount = std::min(-need[static_cast<std::size_t>(from)], need[static_cast<std::size_t>(to)]);
    for (VertexId v = to; v != from; v = parent[static_cast<std::size_t>(v)])
      add_along_edge(tau, g, pedge[static_cast<std::size_t>(v)], parent[static_cast<std::size_t>(v)], amount);
  }
}

void check_measure(const VertexField& f, const OrientedGraph& g, const char* what) {
  if (f.size() != static_cast<std::size_t>(g.num_vertices()))
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " has the wrong size");
  for (double x : f.values())
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorKind::NegativeMass, std::string(what) + " must be nonnegative");
}

}  // namespace

double divergence_residual(const OrientedGraph& g, const EdgeField& tau, const VertexField& source,
                           const VertexField& target) {
  const VertexField div = divergence(tau, g);
  double r = 0.0;
  for (std::size_t v = 0; v < div.size(); ++v) r += std::abs(div[v] - (target[v] - source[v]));
  return r;
}

TransportPattern make_pattern(const OrientedGraph& g, EdgeField tau, VertexField source, VertexField target) {
  TransportPattern p{std::move(tau), std::move(source), std::move(target), 0.0};
  p.residual = divergence_residual(g, p.tau, p.source, p.target);
  return p;
}

WassersteinResult wasserstein1(const OrientedGraph& g, const VertexField& source, const VertexField& target) {
  check_measure(source, g, "source");
  check_measure(target, g, "target");
  const double ms = source.sum(), mt = target.sum();
  if (std::abs(ms - mt) > 1e-9 * std::max(1.0, ms))
    throw Error(ErrorKind::MassMismatch, "source and target masses differ");
  const auto n = static_cast<std::size_t>(g.num_vertices());
  std::vector<long long> supply(n, 0);
  long long total = 0;
  std::size_t largest = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const long long s = std::llround(source[v] * kMassScale);
    const long long t = std::llround(target[v] * kMassScale);
    supply[v] = s - t;
    total += supply[v];
    if (std::abs(supply[v]) > std::abs(supply[largest])) largest = v;
  }
  // Rounding can leave a few units of imbalance; absorb them at the largest
  // entry and let the leftover routing repair the real-valued residual.
  supply[largest] -= total;

  MinCostFlow flow(g, std::move(supply));
  flow.run();

  WassersteinResult out;
  out.augmentations = flow.augmentations;
  EdgeField tau(static_cast<std::size_t>(g.num_edges()));
  for (std::size_t e = 0; e < tau.size(); ++e)
    tau[e] = static_cast<double>(flow.fwd[e] - flow.bwd[e]) / kMassScale;
  route_leftovers(g, tau, source, target);

  out.potential = VertexField(n);
  double dual = 0.0;
  double max_pot = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    out.potential[v] = static_cast<double>(flow.potential[v]);
    dual += out.potential[v] * (target[v] - source[v]);
    max_pot = std::max(max_pot, std::abs(out.potential[v]));
  }
  bool lipschitz = true;
  for (const Edge& e : g.edges())
    if (std::abs(out.potential[static_cast<std::size_t>(e.head)] - out.potential[static_cast<std::size_t>(e.tail)]) > 1.0)
      lipschitz = false;
  out.pattern = make_pattern(g, std::move(tau), source, target);
  out.cost = lp_norm(out.pattern.tau, 1.0);
  out.dual_value = dual;
  const double support = static_cast<double>(source.support().size() + target.support().size());
  const double tol = 1e-9 * std::max(1.0, out.cost) + 2.0 * support * (max_pot + 1.0) / kMassScale;
  out.certified_optimal = lipschitz && std::abs(out.cost - dual) <= tol;
  return out;
}

TransportPattern random_step_transport(const OrientedGraph& g, const VertexField& mu, const SubsetView& region) {
  EdgeField tau(static_cast<std::size_t>(g.num_edges()));
  VertexField source(static_cast<std::size_t>(g.num_vertices()));
  VertexField target(static_cast<std::size_t>(g.num_vertices()));
  const double d = g.nominal_degree();
  for (VertexId x : region.members()) {
    const double m = mu[static_cast<std::size_t>(x)];
    if (m == 0.0) continue;
    if (!g.is_full(x)) throw Error(ErrorKind::NonRegularGraph, "random step from a vertex of deficient degree");
    source[static_cast<std::size_t>(x)] += m;
    for (const Incidence& inc : g.incident(x)) {
      tau[static_cast<std::size_t>(inc.edge)] += inc.sign * m / d;
      target[static_cast<std::size_t>(inc.neighbor)] += m / d;
    }
  }
  return make_pattern(g, std::move(tau), std::move(source), std::move(target));
}

LaplacianTransport laplacian_transport(const OrientedGraph& g, const SubsetView& region, const VertexField& gfield,
                                       double p, const IterationOptions& it) {
  if (!(p > 1.0) || std::isinf(p)) throw Error(ErrorKind::InvalidExponent, "laplacian transport needs 1 < p < infinity");
  double total = 0.0, l1 = 0.0;
  for (std::size_t v = 0; v < gfield.size(); ++v) {
    if (gfield[v] != 0.0 && !region.contains(static_cast<VertexId>(v)))
      throw Error(ErrorKind::InvalidArgument, "g must be supported in the region");
    total += gfield[v];
    l1 += std::abs(gfield[v]);
  }
  if (std::abs(total) > 1e-12 * std::max(1.0, l1)) throw Error(ErrorKind::NonZeroSum, "g must sum to zero");
  InducedGraph ind = induced_subgraph(g, region.members(), true);
  if (!ind.graph.connected()) throw Error(ErrorKind::DisconnectedRegion, "region induces a disconnected graph");
  const auto m = static_cast<Eigen::Index>(ind.to_parent.size());

  LaplacianTransport out;
  out.p = p;
  EdgeField tau(static_cast<std::size_t>(g.num_edges()));
  if (m >= 2 && l1 > 0.0) {
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) rhs[i] = gfield[static_cast<std::size_t>(ind.to_parent[static_cast<std::size_t>(i)])];
    const detail::ZeroMeanSolver solver(ind.graph, 1.0, 1e-12);
    const Eigen::VectorXd h = solver.solve(rhs);
    for (EdgeId e = 0; e < ind.graph.num_edges(); ++e) {
      const Edge& ed = ind.graph.edge(e);
      tau[static_cast<std::size_t>(ind.edge_to_parent[static_cast<std::size_t>(e)])] = h[ed.head] - h[ed.tail];
    }
  }
  VertexField source(gfield.size()), target(gfield.size());
  for (std::size_t v = 0; v < gfield.size(); ++v) {
    if (gfield[v] > 0) target[v] = gfield[v];
    else source[v] = -gfield[v];
  }
  out.pattern = make_pattern(g, std::move(tau), std::move(source), std::move(target));
  out.tau_norm = lp_norm(out.pattern.tau, p);
  out.g_norm = lp_norm(gfield, p);
  if (m >= 2) {
    out.lambda = lambda_p_scaled(ind.graph, g.nominal_degree(), p, it);
    out.bound = g.nominal_degree() / out.lambda.value * out.g_norm;
  }
  out.weak_bound = 2.0 * out.bound;
  const double slack = 1e-12 * std::max(1.0, out.bound);
  out.bound_holds = out.tau_norm <= out.bound + slack;
  out.weak_bound_holds = out.tau_norm <= out.weak_bound + slack;
  return out;
}

TransportPattern central_transport(const CayleyBall& ball, std::span<const int> word, const VertexField& mu) {
  const OrientedGraph& g = ball.graph();
  EdgeField tau(static_cast<std::size_t>(g.num_edges()));
  VertexField target(mu.size());
  for (std::size_t x = 0; x < mu.size(); ++x) {
    const double m = mu[x];
    if (m == 0.0) continue;
    const auto path = path_of_element(ball, word, static_cast<VertexId>(x));
    VertexId end = static_cast<VertexId>(x);
    for (const EdgeStep& s : path) {
      tau[static_cast<std::size_t>(s.edge)] += s.direction * m;
      const Edge& e = g.edge(s.edge);
      end = s.direction > 0 ? e.head : e.tail;
    }
    target[static_cast<std::size_t>(end)] += m;
  }
  return make_pattern(g, std::move(tau), mu, std::move(target));
}

TransportPattern cycle_cancel(const OrientedGraph& g, const TransportPattern& pattern) {
  EdgeField tau = pattern.tau;
  const auto n = static_cast<std::size_t>(g.num_vertices());
  // Out-arcs in the direction of positive flow.
  auto flows_out = [&](VertexId u, const Incidence& inc) {
    (void)u;
    return inc.sign * tau[static_cast<std::size_t>(inc.edge)] > 0.0;
  };
  std::vector<std::size_t> cursor(n, 0);
  std::vector<char> state(n, 0);  // 0 new, 1 on stack, 2 finished
  std::vector<VertexId> stack;
  std::vector<Incidence> arc_into;  // arc used to enter stack[i], i >= 1
  std::vector<std::size_t> stack_pos(n, 0);
  for (std::size_t root = 0; root < n; ++root) {
    if (state[root] != 0) continue;
    stack.assign(1, static_cast<VertexId>(root));
    arc_into.assign(1, Incidence{-1, -1, 0});
    state[root] = 1;
    stack_pos[root] = 0;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      const auto uu = static_cast<std::size_t>(u);
      const auto inc_list = g.incident(u);
      bool advanced = false;
      while (cursor[uu] < inc_list.size()) {
        const Incidence& inc = inc_list[cursor[uu]];
        if (!flows_out(u, inc)) {
          ++cursor[uu];
          continue;
        }
        const auto vv = static_cast<std::size_t>(inc.neighbor);
        if (state[vv] == 2) {
          ++cursor[uu];
          continue;
        }
        if (state[vv] == 0) {
          state[vv] = 1;
          stack_pos[vv] = stack.size();
          stack.push_back(inc.neighbor);
          arc_into.push_back(inc);
          advanced = true;
          break;
        }
        // Cycle: stack[pos(v)] -> ... -> u -> v.
        const std::size_t start = stack_pos[vv];
        double bottleneck = std::abs(tau[static_cast<std::size_t>(inc.edge)]);
        for (std::size_t i = start + 1; i < stack.size(); ++i)
          bottleneck = std::min(bottleneck, std::abs(tau[static_cast<std::size_t>(arc_into[i].edge)]));
        auto reduce = [&](const Incidence& a) {
          auto& t = tau[static_cast<std::size_t>(a.edge)];
          t -= a.sign * bottleneck;
          if (std::abs(t) <= 1e-300 || a.sign * t < 0.0) t = 0.0;
        };
        reduce(inc);
        for (std::size_t i = start + 1; i < stack.size(); ++i) reduce(arc_into[i]);
        // Unwind to the first arc that became empty.
        std::size_t cut = stack.size();
        for (std::size_t i = start + 1; i < stack.size(); ++i)
          if (tau[static_cast<std::size_t>(arc_into[i].edge)] == 0.0) {
            cut = i;
            break;
          }
        for (std::size_t i = cut; i < stack.size(); ++i) state[static_cast<std::size_t>(stack[i])] = 0;
        stack.resize(cut);
        arc_into.resize(cut);
        advanced = true;
        break;
      }
      if (!advanced) {
        state[uu] = 2;
        stack.pop_back();
        arc_into.pop_back();
      }
    }
  }
  return make_pattern(g, std::move(tau), pattern.source, pattern.target);
}

TransportPattern exit_chain(const OrientedGraph& g, const SubsetView& region, VertexId v) {
  const ExitSolver solver(g, region);
  const VertexField green = solver.green(dirac(g.num_vertices(), v));
  EdgeField tau = gradient(green, g);
  tau *= -1.0 / g.nominal_degree();
  VertexField target = solver.exit_measure(dirac(g.num_vertices(), v));
  return make_pattern(g, std::move(tau), dirac(g.num_vertices(), v), std::move(target));
}

TransportPattern exit_chain_by_steps(const OrientedGraph& g, const SubsetView& region, VertexId v, double tolerance,
                                     int max_steps) {
  const StoppedWalk walk(g, region);
  VertexField mu = dirac(g.num_vertices(), v);
  EdgeField tau(static_cast<std::size_t>(g.num_edges()));
  for (int step = 0; step < max_steps; ++step) {
    double inside = 0.0;
    for (VertexId x : region.members()) inside += mu[static_cast<std::size_t>(x)];
    if (inside < tolerance) return make_pattern(g, std::move(tau), dirac(g.num_vertices(), v), std::move(mu));
    tau += random_step_transport(g, mu, region).tau;
    mu = walk.apply(mu);
  }
  throw Error(ErrorKind::NonConvergence, "walk did not leave the region");
}

std::vector<ChainLevel> exit_transport_chain(const OrientedGraph& g, VertexId v, VertexId w,
                                             const std::vector<SubsetView>& regions, const std::vector<int>& levels,
                                             double p, bool crosscheck) {
  const auto edge = g.find_edge(v, w);
  if (!edge) throw Error(ErrorKind::InvalidArgument, "v and w must be adjacent");
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidExponent, "p must be at least 1");
  std::vector<ChainLevel> out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const SubsetView& a = regions[i];
    if (!a.contains(v) || !a.contains(w)) throw Error(ErrorKind::InvalidArgument, "regions must contain v and w");
    const TransportPattern cv = exit_chain(g, a, v);
    const TransportPattern cw = exit_chain(g, a, w);
    EdgeField tau = cw.tau - cv.tau;
    add_along_edge(tau, g, *edge, v, 1.0);
    TransportPattern pattern = make_pattern(g, std::move(tau), cv.target, cw.target);
    const TransportPattern cancelled = cycle_cancel(g, pattern);
    ChainLevel row;
    row.level = i < levels.size() ? levels[i] : static_cast<int>(i);
    row.region_size = a.size();
    row.tau_p = lp_norm(pattern.tau, p);
    row.tau_inf = lp_norm(pattern.tau, std::numeric_limits<double>::infinity());
    row.cancelled_p = lp_norm(cancelled.tau, p);
    row.cancelled_inf = lp_norm(cancelled.tau, std::numeric_limits<double>::infinity());
    const VertexField diff = cw.target - cv.target;
    row.exit_diff_l1 = lp_norm(diff, 1.0);
    row.exit_diff_inf = lp_norm(diff, std::numeric_limits<double>::infinity());
    row.residual = std::max(pattern.residual, cancelled.residual);
    row.sup_bound_holds = row.cancelled_inf <= row.exit_diff_inf + 1e-12;
    if (crosscheck) {
      const TransportPattern sv = exit_chain_by_steps(g, a, v);
      const TransportPattern sw = exit_chain_by_steps(g, a, w);
      row.chain_crosscheck = std::max(lp_norm(sv.tau - cv.tau, std::numeric_limits<double>::infinity()),
                                      lp_norm(sw.tau - cw.tau, std::numeric_limits<double>::infinity()));
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace harmlab
