#include "harmlab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace harmlab {

namespace {

void require_full_support(const VertexField& f, const OrientedGraph& g) {
  for (std::size_t v = 0; v < f.size(); ++v)
    if (f[v] != 0.0 && !g.is_full(static_cast<VertexId>(v)))
      throw Error(ErrorKind::SupportHitsBoundary, "support reaches vertex " + std::to_string(v) + " of deficient degree");
}

void require_full_region(const OrientedGraph& g, const SubsetView& a) {
  for (VertexId v : a.members())
    if (!g.is_full(v))
      throw Error(ErrorKind::SupportHitsBoundary,
                  "region contains vertex " + std::to_string(v) + " whose neighbourhood is truncated");
}

void check_laziness(double laziness) {
  if (!(laziness >= 0.0 && laziness < 1.0)) throw Error(ErrorKind::InvalidArgument, "laziness must lie in [0,1)");
}

Distribution to_distribution(VertexField f) {
  for (double& x : f.raw())
    if (x < 0.0 && x > -1e-15) x = 0.0;
  return Distribution::from_field(std::move(f), 1e-9);
}

}  // namespace

std::vector<Distribution> walk_distributions(const CayleyBall& ball, int n, double laziness) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative step count");
  check_laziness(laziness);
  std::vector<Distribution> out;
  out.push_back(Distribution::dirac(ball.size(), ball.identity_vertex()));
  for (int i = 0; i < n; ++i)
    out.push_back(Distribution::from_field(apply_walk(out.back().field(), ball.graph(), laziness), 1e-10));
  return out;
}

Distribution walk_distribution(const CayleyBall& ball, int n, double laziness) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative step count");
  check_laziness(laziness);
  VertexField cur = dirac(ball.size(), ball.identity_vertex());
  for (int i = 0; i < n; ++i) cur = apply_walk(cur, ball.graph(), laziness);
  return Distribution::from_field(std::move(cur), 1e-10);
}

StoppedWalk::StoppedWalk(const OrientedGraph& g, SubsetView region) : graph_(&g), region_(std::move(region)) {
  require_full_region(g, region_);
}

VertexField StoppedWalk::apply(const VertexField& mu) const {
  VertexField out(mu.size());
  const double d = graph_->nominal_degree();
  for (std::size_t v = 0; v < mu.size(); ++v) {
    const double m = mu[v];
    if (m == 0.0) continue;
    if (!region_.contains(static_cast<VertexId>(v))) {
      out[v] += m;
      continue;
    }
    for (const Incidence& inc : graph_->incident(static_cast<VertexId>(v)))
      out[static_cast<std::size_t>(inc.neighbor)] += m / d;
  }
  return out;
}

Distribution StoppedWalk::apply(const Distribution& mu) const {
  return Distribution::from_field(apply(mu.field()), 1e-10);
}

struct ExitSolver::Impl {
  const OrientedGraph* graph = nullptr;
  SubsetView region;
  std::vector<int> local;  // vertex -> index in region, -1 outside
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

ExitSolver::ExitSolver(const OrientedGraph& g, const SubsetView& region) : impl_(std::make_unique<Impl>()) {
  impl_->graph = &g;
  impl_->region = region;
  if (region.size() == 0) throw Error(ErrorKind::InvalidArgument, "empty region");
  require_full_region(g, region);
  // Every component of A must see its boundary, otherwise I - Q is singular.
  int comps = 0;
  const auto labels = component_labels(g, region.mask(), &comps);
  std::vector<char> escapes(static_cast<std::size_t>(comps), 0);
  for (EdgeId e : region.boundary_edges()) {
    const Edge& ed = g.edge(e);
    const VertexId inside = region.contains(ed.tail) ? ed.tail : ed.head;
    escapes[static_cast<std::size_t>(labels[static_cast<std::size_t>(inside)])] = 1;
  }
  if (std::find(escapes.begin(), escapes.end(), 0) != escapes.end())
    throw Error(ErrorKind::SingularSystem, "part of the region has no boundary, the walk never exits");

  const auto& members = region.members();
  impl_->local.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  for (std::size_t i = 0; i < members.size(); ++i) impl_->local[static_cast<std::size_t>(members[i])] = static_cast<int>(i);
  const auto m = static_cast<Eigen::Index>(members.size());
  const double d = g.nominal_degree();
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < members.size(); ++i) {
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), d);
    for (const Incidence& inc : g.incident(members[i])) {
      const int j = impl_->local[static_cast<std::size_t>(inc.neighbor)];
      if (j >= 0) t.emplace_back(static_cast<int>(i), j, -1.0);
    }
  }
  Eigen::SparseMatrix<double> mat(m, m);
  mat.setFromTriplets(t.begin(), t.end());
  impl_->ldlt.compute(mat);
  if (impl_->ldlt.info() != Eigen::Success) throw Error(ErrorKind::SingularSystem, "absorbing system factorization failed");
}

ExitSolver::~ExitSolver() = default;
ExitSolver::ExitSolver(ExitSolver&&) noexcept = default;
ExitSolver& ExitSolver::operator=(ExitSolver&&) noexcept = default;

const SubsetView& ExitSolver::region() const noexcept { return impl_->region; }

VertexField ExitSolver::green(const VertexField& source) const {
  const auto& members = impl_->region.members();
  const double d = impl_->graph->nominal_degree();
  Eigen::VectorXd b(static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) b[static_cast<Eigen::Index>(i)] = d * source[static_cast<std::size_t>(members[i])];
  const Eigen::VectorXd u = impl_->ldlt.solve(b);
  if (impl_->ldlt.info() != Eigen::Success || !u.allFinite())
    throw Error(ErrorKind::SingularSystem, "absorbing system solve failed");
  VertexField out(static_cast<std::size_t>(impl_->graph->num_vertices()));
  for (std::size_t i = 0; i < members.size(); ++i) out[static_cast<std::size_t>(members[i])] = u[static_cast<Eigen::Index>(i)];
  return out;
}

VertexField ExitSolver::exit_measure(const VertexField& source) const {
  const VertexField visits = green(source);
  const OrientedGraph& g = *impl_->graph;
  const double d = g.nominal_degree();
  VertexField out(source.size());
  for (std::size_t v = 0; v < source.size(); ++v)
    if (!impl_->region.contains(static_cast<VertexId>(v))) out[v] = source[v];
  for (VertexId z : impl_->region.outer_boundary())
    for (const Incidence& inc : g.incident(z))
      if (impl_->region.contains(inc.neighbor)) out[static_cast<std::size_t>(z)] += visits[static_cast<std::size_t>(inc.neighbor)] / d;
  return out;
}

ExitDistribution ExitSolver::exit(VertexId origin) const {
  if (origin < 0 || origin >= impl_->graph->num_vertices() || !impl_->region.contains(origin))
    throw Error(ErrorKind::InvalidArgument, "origin must lie in the region");
  VertexField ex = exit_measure(dirac(impl_->graph->num_vertices(), origin));
  const double mass = ex.sum();
  ExitDistribution out;
  out.origin = origin;
  out.residual = 1.0 - mass;
  out.distribution = to_distribution(std::move(ex));
  return out;
}

ExitDistribution exit_distribution(const OrientedGraph& g, const SubsetView& region, VertexId origin) {
  return ExitSolver(g, region).exit(origin);
}

std::vector<ExitDistribution> exit_distributions(const OrientedGraph& g, const SubsetView& region,
                                                 std::span<const VertexId> origins) {
  const ExitSolver solver(g, region);
  std::vector<ExitDistribution> out;
  for (VertexId v : origins) out.push_back(solver.exit(v));
  return out;
}

VertexField fire(const VertexField& nu, const OrientedGraph& g, VertexId v, double r) {
  if (!g.is_full(v)) throw Error(ErrorKind::SupportHitsBoundary, "cannot fire at a truncated vertex");
  VertexField out(nu);
  out[static_cast<std::size_t>(v)] -= r;
  const double share = r / g.nominal_degree();
  for (const Incidence& inc : g.incident(v)) out[static_cast<std::size_t>(inc.neighbor)] += share;
  return out;
}

Distribution fire(const Distribution& nu, const OrientedGraph& g, VertexId v, double r) {
  if (r < 0.0 || r > nu[v]) throw Error(ErrorKind::NegativeMass, "firing more mass than sits at the vertex");
  VertexField out = fire(nu.field(), g, v, r);
  return to_distribution(std::move(out));
}

VertexField fire_until_exit(const VertexField& nu, const OrientedGraph& g, const SubsetView& region, double tolerance,
                            int max_sweeps) {
  require_full_region(g, region);
  VertexField cur(nu);
  const double d = g.nominal_degree();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double inside = 0.0;
    for (VertexId v : region.members()) inside += std::abs(cur[static_cast<std::size_t>(v)]);
    if (inside < tolerance) return cur;
    for (VertexId v : region.members()) {
      const double m = cur[static_cast<std::size_t>(v)];
      if (m == 0.0) continue;
      cur[static_cast<std::size_t>(v)] = 0.0;
      for (const Incidence& inc : g.incident(v)) cur[static_cast<std::size_t>(inc.neighbor)] += m / d;
    }
  }
  throw Error(ErrorKind::NonConvergence, "firing did not empty the region");
}

double entropy(std::span<const double> mu) {
  double h = 0.0;
  for (double x : mu)
    if (x > 0.0) h -= x * std::log(x);
  return h;
}

double entropy(const Distribution& mu) { return entropy(mu.field().values()); }

double renyi(std::span<const double> mu, double q) {
  if (!(q >= 0.0)) throw Error(ErrorKind::InvalidExponent, "Renyi order must be nonnegative");
  if (q == 0.0) return std::log(lp_norm(mu, 0.0));
  if (q == 1.0) return entropy(mu);
  if (std::isinf(q)) return -std::log(lp_norm(mu, q));
  double s = 0.0;
  for (double x : mu)
    if (x > 0.0) s += std::pow(x, q);
  return std::log(s) / (1.0 - q);
}

double renyi(const Distribution& mu, double q) { return renyi(mu.field().values(), q); }

double speed(const Distribution& mu, std::span<const int> word_length) {
  double s = 0.0;
  for (std::size_t v = 0; v < mu.size(); ++v) s += mu[static_cast<VertexId>(v)] * word_length[v];
  return s;
}

GreenPartial green_partial(const CayleyBall& ball, VertexId x, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "green partial sums start at n = 1");
  const OrientedGraph& g = ball.graph();
  VertexField cur = dirac(ball.size(), x);
  VertexField sum(static_cast<std::size_t>(ball.size()));
  for (int i = 0; i < n; ++i) {
    sum += cur;
    if (i + 1 < n) cur = apply_walk(cur, g, 0.0);
  }
  sum *= 1.0 / n;
  const double residual = lp_norm(apply_laplacian(sum, g), 1.0);
  return {Distribution::from_field(std::move(sum), 1e-10), residual};
}

std::vector<double> green_residual_sequence(const CayleyBall& ball, VertexId x, int n_max) {
  const OrientedGraph& g = ball.graph();
  VertexField cur = dirac(ball.size(), x);
  VertexField sum(static_cast<std::size_t>(ball.size()));
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) {
    sum += cur;
    out.push_back(lp_norm(apply_laplacian(sum, g), 1.0) / n);
    if (n < n_max) cur = apply_walk(cur, g, 0.0);
  }
  return out;
}

namespace {

std::vector<double> tree_step(const std::vector<double>& m, int degree) {
  const double d = degree;
  std::vector<double> out(m.size() + 1, 0.0);
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] == 0.0) continue;
    if (k == 0) {
      out[1] += m[0];
    } else {
      out[k - 1] += m[k] / d;
      out[k + 1] += m[k] * (d - 1) / d;
    }
  }
  return out;
}

}  // namespace

std::vector<double> tree_level_masses(int degree, int n) {
  if (degree < 2) throw Error(ErrorKind::InvalidArgument, "tree degree must be at least 2");
  std::vector<double> m{1.0};
  for (int i = 0; i < n; ++i) m = tree_step(m, degree);
  return m;
}

std::vector<double> tree_green_residuals(int degree, int n_max) {
  if (degree < 2) throw Error(ErrorKind::InvalidArgument, "tree degree must be at least 2");
  std::vector<double> cur{1.0};
  std::vector<double> sum;
  std::vector<double> out;
  for (int n = 1; n <= n_max; ++n) {
    sum.resize(std::max(sum.size(), cur.size()), 0.0);
    for (std::size_t k = 0; k < cur.size(); ++k) sum[k] += cur[k];
    const auto stepped = tree_step(sum, degree);
    double r = 0.0;
    for (std::size_t k = 0; k < stepped.size(); ++k) r += std::abs((k < sum.size() ? sum[k] : 0.0) - stepped[k]);
    out.push_back(r / n);
    cur = tree_step(cur, degree);
  }
  return out;
}

std::vector<GradientProfileRow> gradient_l1_profile(const CayleyBall& ball, int n_max, double laziness) {
  check_laziness(laziness);
  const OrientedGraph& g = ball.graph();
  VertexField cur = dirac(ball.size(), ball.identity_vertex());
  VertexField sum(static_cast<std::size_t>(ball.size()));
  std::vector<GradientProfileRow> rows;
  for (int n = 0; n <= n_max; ++n) {
    require_full_support(cur, g);
    const double walk = lp_norm(gradient(cur, g), 1.0);
    const double green = n == 0 ? walk : lp_norm(gradient(sum, g), 1.0) / n;
    rows.push_back({n, walk, green});
    sum += cur;
    if (n < n_max) cur = apply_walk(cur, g, laziness);
  }
  return rows;
}

std::vector<EntropyProfileRow> entropy_profile(const CayleyBall& ball, int steps, double laziness) {
  check_laziness(laziness);
  const OrientedGraph& g = ball.graph();
  VertexField cur = dirac(ball.size(), ball.identity_vertex());
  std::vector<EntropyProfileRow> rows;
  for (int n = 0; n <= steps; ++n) {
    require_full_support(cur, g);
    const Distribution mu = Distribution::from_field(cur, 1e-10);
    EntropyProfileRow r;
    r.n = n;
    r.h0 = renyi(mu, 0.0);
    r.h1 = renyi(mu, 1.0);
    r.h2 = renyi(mu, 2.0);
    r.hinf = renyi(mu, std::numeric_limits<double>::infinity());
    r.speed = speed(mu, ball.word_lengths());
    r.gradient_l1 = lp_norm(gradient(cur, g), 1.0);
    r.return_probability = cur[static_cast<std::size_t>(ball.identity_vertex())];
    rows.push_back(r);
    if (n < steps) cur = apply_walk(cur, g, laziness);
  }
  return rows;
}

EntropyIsoCheck entropy_isoperimetry_check(const OrientedGraph& g, const Distribution& f, double nu, double K) {
  if (!(nu > 0.0) || !(K > 0.0)) throw Error(ErrorKind::InvalidArgument, "nu and K must be positive");
  if (lp_norm(f.field(), std::numeric_limits<double>::infinity()) > std::exp(-1.0))
    throw Error(ErrorKind::MaxNormTooLarge, "the check needs ||f||_inf <= 1/e");
  require_full_support(f.field(), g);
  EntropyIsoCheck c;
  c.lhs = lp_norm(gradient(f.field(), g), 1.0);
  c.rhs = K * nu / (nu + 1.0) * std::pow(entropy(f), -1.0 / nu);
  c.holds = c.lhs >= c.rhs;
  return c;
}

}  // namespace harmlab
