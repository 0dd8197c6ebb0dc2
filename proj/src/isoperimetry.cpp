#include "harmlab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "harmlab/error.hpp"

namespace harmlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

IsoProfile empty_profile(int max_size) {
  IsoProfile p;
  p.max_size = max_size;
  const auto n = static_cast<std::size_t>(max_size) + 1;
  p.min_boundary.assign(n, std::numeric_limits<std::int64_t>::max());
  p.ratio.assign(n, kInf);
  p.envelope.assign(n, kInf);
  p.witness.assign(n, {});
  p.exact.assign(n, 1);
  return p;
}

void finish_profile(IsoProfile& p) {
  double run = kInf;
  for (std::size_t s = 1; s < p.ratio.size(); ++s) {
    if (p.min_boundary[s] != std::numeric_limits<std::int64_t>::max())
      p.ratio[s] = static_cast<double>(p.min_boundary[s]) / static_cast<double>(s);
    run = std::min(run, p.ratio[s]);
    p.envelope[s] = run;
    if (!p.complete && s > 1) p.exact[s] = 0;
  }
  if (!p.ratio.empty()) p.exact[0] = 0;
}

// Redelmeier-style growth: each connected set containing the root and
// otherwise made of allowed vertices is produced exactly once.
class Enumerator {
 public:
  Enumerator(const OrientedGraph& g, const std::vector<char>& allowed, IsoProfile& profile, std::uint64_t budget)
      : g_(g),
        allowed_(allowed),
        profile_(profile),
        budget_(budget),
        marked_(static_cast<std::size_t>(g.num_vertices()), 0),
        in_count_(static_cast<std::size_t>(g.num_vertices()), 0),
        levels_(static_cast<std::size_t>(profile.max_size) + 2),
        fresh_(levels_.size()) {}

  bool exhausted() const { return stopped_; }

  void run(VertexId root) {
    marked_[static_cast<std::size_t>(root)] = 1;
    levels_[0].assign(1, root);
    grow(0);
    marked_[static_cast<std::size_t>(root)] = 0;
  }

 private:
  void add(VertexId u) {
    current_.push_back(u);
    boundary_ += g_.degree(u) - 2 * in_count_[static_cast<std::size_t>(u)];
    for (const Incidence& inc : g_.incident(u)) ++in_count_[static_cast<std::size_t>(inc.neighbor)];
  }

  void remove(VertexId u) {
    for (const Incidence& inc : g_.incident(u)) --in_count_[static_cast<std::size_t>(inc.neighbor)];
    boundary_ -= g_.degree(u) - 2 * in_count_[static_cast<std::size_t>(u)];
    current_.pop_back();
  }

  void record() {
    const std::size_t s = current_.size();
    if (boundary_ < profile_.min_boundary[s]) {
      profile_.min_boundary[s] = boundary_;
      profile_.witness[s] = current_;
    }
  }

  void grow(std::size_t depth) {
    std::vector<VertexId>& untried = levels_[depth];
    while (!untried.empty() && !stopped_) {
      const VertexId u = untried.back();
      untried.pop_back();
      add(u);
      if (++profile_.sets_visited > budget_) {
        stopped_ = true;
        remove(u);
        return;
      }
      record();
      if (current_.size() < static_cast<std::size_t>(profile_.max_size)) {
        std::vector<VertexId>& next = levels_[depth + 1];
        next = untried;
        const std::size_t fresh_from = next.size();
        for (const Incidence& inc : g_.incident(u)) {
          const auto w = static_cast<std::size_t>(inc.neighbor);
          if (allowed_[w] && !marked_[w]) {
            marked_[w] = 1;
            next.push_back(inc.neighbor);
          }
        }
        std::vector<VertexId>& fresh = fresh_[depth];
        fresh.assign(next.begin() + static_cast<std::ptrdiff_t>(fresh_from), next.end());
        grow(depth + 1);
        for (VertexId w : fresh) marked_[static_cast<std::size_t>(w)] = 0;
      }
      remove(u);
    }
  }

  const OrientedGraph& g_;
  const std::vector<char>& allowed_;
  IsoProfile& profile_;
  std::uint64_t budget_;
  std::vector<char> marked_;
  std::vector<int> in_count_;
  std::vector<std::vector<VertexId>> levels_;
  std::vector<std::vector<VertexId>> fresh_;
  std::vector<VertexId> current_;
  std::int64_t boundary_ = 0;
  bool stopped_ = false;
};

void check_max_size(int max_size, VertexId n) {
  if (max_size < 1) throw Error(ErrorKind::InvalidArgument, "max_size must be positive");
  if (2 * static_cast<std::int64_t>(max_size) > n)
    throw Error(ErrorKind::InvalidArgument, "max_size must not exceed half the vertex count");
}

}  // namespace

const IsoProfile& IsoProfile::require_complete() const {
  if (!complete)
    throw Error(ErrorKind::EnumerationBudgetExceeded,
                "connected-set enumeration stopped after " + std::to_string(sets_visited) + " sets");
  return *this;
}

IsoProfile iso_profile(const OrientedGraph& g, int max_size, const ProfileOptions& opts) {
  check_max_size(max_size, g.num_vertices());
  if (!g.connected()) throw Error(ErrorKind::InvalidGraph, "profile needs a connected graph");
  IsoProfile p = empty_profile(max_size);
  std::vector<char> allowed(static_cast<std::size_t>(g.num_vertices()), 1);
  Enumerator en(g, allowed, p, opts.budget);
  for (VertexId root = 0; root < g.num_vertices() && !en.exhausted(); ++root) {
    // Sets rooted here use only larger ids; the root itself is already marked.
    allowed[static_cast<std::size_t>(root)] = 0;
    en.run(root);
  }
  p.complete = !en.exhausted();
  finish_profile(p);
  return p;
}

IsoProfile iso_profile(const CayleyBall& ball, int max_size, const ProfileOptions& opts) {
  const OrientedGraph& g = ball.graph();
  if (max_size < 1) throw Error(ErrorKind::InvalidArgument, "max_size must be positive");
  const bool abelian = ball.group().name().rfind("zd:", 0) == 0;
  std::vector<char> allowed(static_cast<std::size_t>(g.num_vertices()), 0);
  for (VertexId v = 1; v < g.num_vertices(); ++v) {
    if (ball.word_length(v) > ball.radius() - 2) continue;
    if (abelian) {
      const GroupElement x = ball.element(v);
      const auto nz = std::find_if(x.begin(), x.end(), [](std::int64_t c) { return c != 0; });
      if (nz == x.end() || *nz < 0) continue;
    }
    allowed[static_cast<std::size_t>(v)] = 1;
  }
  if (ball.radius() < 2) throw Error(ErrorKind::InvalidArgument, "ball radius must be at least 2 for a profile");
  IsoProfile p = empty_profile(max_size);
  p.truncated_ball = true;
  Enumerator en(g, allowed, p, opts.budget);
  en.run(ball.identity_vertex());
  p.complete = !en.exhausted();
  finish_profile(p);
  return p;
}

std::vector<int> depth_in_set(const OrientedGraph& g, const SubsetView& f) {
  if (f.size() == 0) throw Error(ErrorKind::InvalidArgument, "set must be nonempty");
  std::vector<VertexId> edge_of_set;
  for (VertexId x : f.members()) {
    bool exposed = !g.is_full(x);
    for (const Incidence& inc : g.incident(x))
      if (!f.contains(inc.neighbor)) exposed = true;
    if (exposed) edge_of_set.push_back(x);
  }
  std::vector<int> depth;
  if (edge_of_set.empty()) {
    // F is the whole (closed) graph: nothing to leave to.
    const auto d = bfs_distances(g, f.members().front(), f.mask());
    return std::vector<int>(f.size(), *std::max_element(d.begin(), d.end()) + 1);
  }
  const auto d = bfs_distances(g, edge_of_set, f.mask());
  depth.reserve(f.size());
  for (VertexId x : f.members()) depth.push_back(d[static_cast<std::size_t>(x)]);
  return depth;
}

int inradius(const OrientedGraph& g, const SubsetView& f) {
  const auto d = depth_in_set(g, f);
  int best = 0;
  for (int x : d)
    if (x >= 0) best = std::max(best, x);
  return best;
}

double mean_boundary_distance(const OrientedGraph& g, const SubsetView& f) {
  const auto d = depth_in_set(g, f);
  double total = 0.0;
  for (int x : d) total += x;
  return total / static_cast<double>(d.size());
}

int diameter(const OrientedGraph& g, const SubsetView& f) {
  if (f.size() == 0) throw Error(ErrorKind::InvalidArgument, "set must be nonempty");
  int best = 0;
  for (VertexId x : f.members()) {
    const auto d = bfs_distances(g, x, f.mask());
    for (VertexId y : f.members()) {
      const int dy = d[static_cast<std::size_t>(y)];
      if (dy < 0) throw Error(ErrorKind::DisconnectedSet, "set does not induce a connected graph");
      best = std::max(best, dy);
    }
  }
  return best;
}

std::optional<int> GrowthFunctions::min_growth_inverse(std::int64_t volume) const {
  for (std::size_t r = 0; r < min_growth.size(); ++r)
    if (min_growth[r] >= volume) return static_cast<int>(r);
  return std::nullopt;
}

std::optional<int> GrowthFunctions::max_growth_inverse(std::int64_t volume) const {
  for (std::size_t r = 0; r < max_growth.size(); ++r)
    if (max_growth[r] >= volume) return static_cast<int>(r);
  return std::nullopt;
}

GrowthFunctions growth_functions(const OrientedGraph& g, int radius, std::span<const VertexId> centers) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
  std::vector<VertexId> all;
  if (centers.empty()) {
    all.resize(static_cast<std::size_t>(g.num_vertices()));
    for (VertexId v = 0; v < g.num_vertices(); ++v) all[static_cast<std::size_t>(v)] = v;
    centers = all;
  }
  const auto R = static_cast<std::size_t>(radius);
  std::vector<std::int64_t> lo(R + 1, std::numeric_limits<std::int64_t>::max()), hi(R + 1, -1);
  GrowthFunctions out;
  out.boundary_affected.assign(R + 1, 0);
  for (VertexId c : centers) {
    const auto d = bfs_distances(g, c);
    std::vector<std::int64_t> count(R + 1, 0);
    int first_deficient = std::numeric_limits<int>::max();
    for (std::size_t v = 0; v < d.size(); ++v) {
      if (d[v] < 0) continue;
      if (static_cast<std::size_t>(d[v]) <= R) ++count[static_cast<std::size_t>(d[v])];
      if (!g.is_full(static_cast<VertexId>(v))) first_deficient = std::min(first_deficient, d[v]);
    }
    std::int64_t vol = 0;
    for (std::size_t r = 0; r <= R; ++r) {
      vol += count[r];
      lo[r] = std::min(lo[r], vol);
      hi[r] = std::max(hi[r], vol);
      // A vertex of deficient degree strictly inside the r-ball means the
      // ball may differ from the one in an untruncated graph.
      if (static_cast<int>(r) > first_deficient) out.boundary_affected[r] = 1;
    }
  }
  out.min_growth = std::move(lo);
  out.max_growth = std::move(hi);
  return out;
}

GrowthFunctions growth_functions(const CayleyBall& ball, int radius) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
  const auto R = static_cast<std::size_t>(radius);
  std::vector<std::int64_t> sphere(R + 1, 0);
  for (int w : ball.word_lengths())
    if (static_cast<std::size_t>(w) <= R) ++sphere[static_cast<std::size_t>(w)];
  GrowthFunctions out;
  out.boundary_affected.assign(R + 1, 0);
  std::int64_t vol = 0;
  for (std::size_t r = 0; r <= R; ++r) {
    vol += sphere[r];
    out.min_growth.push_back(vol);
    out.max_growth.push_back(vol);
    if (static_cast<int>(r) > ball.radius()) out.boundary_affected[r] = 1;
  }
  return out;
}

RadialCheck radial_iso_check(const OrientedGraph& g, const SubsetView& a, double K, double k) {
  std::vector<char> outside(static_cast<std::size_t>(g.num_vertices()));
  for (std::size_t v = 0; v < outside.size(); ++v) outside[v] = a.contains(static_cast<VertexId>(v)) ? 0 : 1;
  int pieces = 0;
  component_labels(g, outside, &pieces);
  if (pieces > 1) throw Error(ErrorKind::ComplementDisconnected, "complement of the set is disconnected");

  RadialCheck out;
  out.boundary = static_cast<std::int64_t>(a.boundary_edges().size());
  out.volume = static_cast<std::int64_t>(a.size());
  out.inradius = inradius(g, a);
  out.lhs = K * static_cast<double>(out.boundary) * std::pow(1.0 + out.inradius, k);
  out.rhs = static_cast<double>(out.volume);
  out.holds = out.lhs >= out.rhs;
  try {
    out.diameter = diameter(g, a);
    out.diameter_lhs = static_cast<double>(out.boundary) * (1.0 + out.diameter);
    out.diameter_holds = out.diameter_lhs >= out.rhs;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DisconnectedSet) throw;
    out.diameter = -1;
  }
  return out;
}

double OptimalSet::inradius_lower_bound(double K, double k) const {
  return 1.0 / (K * std::pow(ratio, 1.0 / k)) - 1.0;
}

std::vector<OptimalSet> optimal_sets(const OrientedGraph& g, const IsoProfile& profile) {
  std::vector<OptimalSet> out;
  for (int s = 1; s <= profile.max_size; ++s) {
    const auto& w = profile.witness[static_cast<std::size_t>(s)];
    if (w.empty()) continue;
    const SubsetView f(g, w);
    OptimalSet o;
    o.members = f.members();
    o.ratio = profile.at(s);
    o.inradius = inradius(g, f);
    o.diameter = diameter(g, f);
    o.mean_boundary_distance = mean_boundary_distance(g, f);
    o.optimal = o.ratio == profile.envelope_at(s);
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace harmlab
