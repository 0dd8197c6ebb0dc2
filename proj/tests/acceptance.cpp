// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmlab/builders.hpp"
#include "harmlab/cayley.hpp"
#include "harmlab/harmonic.hpp"
#include "harmlab/spectral.hpp"
#include "harmlab/transport.hpp"
#include "harmlab/walk.hpp"
#include "harmlab/window.hpp"
#include "support.hpp"

using namespace harmlab;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Accumulates failures with the first few messages kept.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) notes_ += (notes_.empty() ? "" : "; ") + what;
  }
  int failures() const { return failures_; }
  int checks() const { return checks_; }
  Verdict verdict(const std::string& extra = "") const {
    std::ostringstream os;
    os << checks_ << " checks, " << failures_ << " failures";
    if (!extra.empty()) os << "; " << extra;
    if (!notes_.empty()) os << "; first: " << notes_;
    return {failures_ == 0, os.str()};
  }

 private:
  int checks_ = 0, failures_ = 0;
  std::string notes_;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CayleyBall group_ball(const std::string& spec, int r, std::size_t cap = kDefaultBallCap) {
  return CayleyBall::build(build_group(parse_group_spec(spec)), r, cap);
}

// ---------------------------------------------------------------- corpus

struct NamedGraph {
  std::string name;
  OrientedGraph g;
};

const std::vector<NamedGraph>& corpus() {
  static const std::vector<NamedGraph> graphs = [] {
    std::vector<NamedGraph> out;
    for (int n = 3; n <= 12; ++n) out.push_back({"C" + std::to_string(n), cycle_graph(n)});
    for (int n = 2; n <= 8; ++n) out.push_back({"K" + std::to_string(n), complete_graph(n)});
    for (int d = 1; d <= 4; ++d) out.push_back({"Q" + std::to_string(d), hypercube_graph(d)});
    // Periodic grids keep the graph regular.
    for (int w = 3; w <= 6; ++w)
      for (int h = w; h <= 6; ++h) out.push_back({"T" + std::to_string(w) + "x" + std::to_string(h), torus_graph(w, h)});
    testgen::Rng rng(20240601);
    for (int i = 0; i < 10; ++i) {
      const int n = 2 * testgen::uniform_int(rng, 2, 10);
      out.push_back({"R3_" + std::to_string(n) + "_" + std::to_string(i), random_regular_graph(3, n, rng())});
    }
    return out;
  }();
  return graphs;
}

// Plain minimum of |dF|/|F| over 0 < |F| <= n/2 by bitmask enumeration.
double brute_kappa1(const OrientedGraph& g) {
  const int n = g.num_vertices();
  std::vector<std::uint32_t> nbr(static_cast<std::size_t>(n), 0);
  for (const Edge& e : g.edges()) {
    nbr[static_cast<std::size_t>(e.tail)] |= 1u << e.head;
    nbr[static_cast<std::size_t>(e.head)] |= 1u << e.tail;
  }
  double best = kInf;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (2 * size > n) continue;
    int cut = 0;
    for (std::uint32_t rest = mask; rest; rest &= rest - 1)
      cut += __builtin_popcount(nbr[static_cast<std::size_t>(__builtin_ctz(rest))] & ~mask);
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

// Exact kappa_1: enumeration up to 24 vertices, the library's exact frontier
// program beyond (itself cross-checked against enumeration in unit tests).
double exact_kappa1(const OrientedGraph& g) {
  if (g.num_vertices() <= 24) return brute_kappa1(g);
  CheegerOptions opts;
  opts.allow_heuristic = false;
  opts.frontier_limit = 20;
  return cheeger_kappa1(g, opts).value;
}

const InequalityCheck* find_check(const GapReport& r, int item, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.item == item && c.statement.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

// ---------------------------------------------------------------- criteria

Verdict spectral_identity() {
  Tally t;
  double worst = 0.0;
  for (const auto& [name, g] : corpus()) {
    const double d = g.nominal_degree();
    const double k2 = kappa_p_estimate(g, 2.0).value;
    const double gap = std::abs(k2 * k2 - d * lambda2(g));
    worst = std::max(worst, gap);
    t.expect(gap <= 1e-8, name + " |kappa2^2 - d lambda2| = " + fmt(gap));
  }
  return t.verdict(std::to_string(corpus().size()) + " graphs, worst " + fmt(worst));
}

Verdict cheeger_chain() {
  Tally t;
  for (const auto& [name, g] : corpus()) {
    const double d = g.nominal_degree();
    const double k1 = exact_kappa1(g);
    const double l2 = lambda2(g);
    const double tol = 1e-12 * std::max(1.0, l2);
    t.expect(k1 * k1 / (2 * d * d) <= l2 + tol, name + " lower Cheeger bound");
    t.expect(l2 <= 2 * k1 / d + tol, name + " upper Cheeger bound");
    t.expect(std::abs(cheeger_kappa1(g).value - k1) <= 1e-12, name + " library kappa_1 differs from oracle");
  }
  GapOptions opts;
  opts.estimate_lambda = false;
  const auto c4 = verify_gap_chain(cycle_graph(4), {2.0}, opts);
  const auto* left = find_check(c4, 6, "4 d kappa_1");
  t.expect(left && left->equality, "C4 equality in 4 d kappa_1 >= 2 d^2 lambda_2 not detected");
  const auto q3 = verify_gap_chain(hypercube_graph(3), {2.0}, opts);
  const auto* right = find_check(q3, 0, "2 kappa_1 / d");
  t.expect(right && right->equality, "Q3 equality in 2 kappa_1 / d >= lambda_2 not detected");
  return t.verdict("equality on C4 and Q3 detected");
}

Verdict gap_items_1_and_3() {
  Tally t;
  GapOptions opts;
  opts.estimate_lambda = false;
  opts.slack = 1.10;
  int asserted = 0, slack = 0;
  for (const auto& [name, g] : corpus()) {
    const auto report = verify_gap_chain(g, {1.5, 3.0, 4.0}, opts);
    for (const auto& c : report.checks) {
      if (c.item != 1 && c.item != 3) continue;
      if (c.mode == CheckMode::Informational) continue;
      (c.mode == CheckMode::Asserted ? asserted : slack) += 1;
      t.expect(c.holds, name + " item " + std::to_string(c.item) + " p=" + fmt(c.p) + ": " + fmt(c.lhs) + " vs " +
                            fmt(c.rhs));
    }
  }
  return t.verdict(std::to_string(asserted) + " asserted, " + std::to_string(slack) + " slack-checked");
}

Verdict gamblers_ruin() {
  Tally t;
  double worst = 0.0;
  for (int n = 1; n <= 200; ++n) {
    // {0..n} sits at vertices 1..n+1 of a path; 0 and n+2 absorb.
    const auto g = path_graph(n + 3);
    std::vector<VertexId> members(static_cast<std::size_t>(n + 1));
    std::iota(members.begin(), members.end(), 1);
    const SubsetView a(g, members);
    const ExitSolver solver(g, a);
    std::vector<ExitDistribution> ex;
    for (int k = 0; k <= n; ++k) {
      ex.push_back(solver.exit(k + 1));
      const double err = std::abs(ex.back().distribution[n + 2] - (k + 1.0) / (n + 2));
      worst = std::max(worst, err);
      t.expect(err <= 1e-10, "n=" + std::to_string(n) + " k=" + std::to_string(k));
    }
    double l1 = 0.0;
    for (VertexId y = 0; y < g.num_vertices(); ++y) l1 += std::abs(ex[0].distribution[y] - ex[1].distribution[y]);
    t.expect(std::abs(l1 - 2.0 / (n + 2)) <= 1e-10, "n=" + std::to_string(n) + " ||ex_0 - ex_1||_1");
  }
  return t.verdict("worst " + fmt(worst));
}

Verdict liouville() {
  Tally t;
  std::ifstream in(std::string(HARMLAB_FIXTURE_DIR) + "/liouville_probe.json");
  if (!in) return {false, "fixture missing"};
  const auto fx = nlohmann::json::parse(in);

  std::vector<int> radii(30);
  std::iota(radii.begin(), radii.end(), 1);
  const auto z2 = group_ball("zd:2", 31);
  const auto pz = liouville_probe(z2, 0, *z2.step(0, 0), radii);
  t.expect(pz.nonincreasing, "Z^2 probe not monotone");
  const double frozen = fx["zd:2"]["value"].get<double>();
  t.expect(pz.values.back() <= frozen + 1e-9, "Z^2 r=30 value " + fmt(pz.values.back()) + " above fixture");

  const int R = fx["free:2"]["ball_radius"].get<int>();
  const auto f2 = group_ball("free:2", R, 5'000'000);
  std::vector<int> depths(12);
  std::iota(depths.begin(), depths.end(), 1);
  const auto pf = liouville_probe(f2, 0, *f2.step(0, 0), depths);
  t.expect(pf.nonincreasing, "free(2) probe not monotone");
  double floor_seen = kInf;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (depths[i] < 4) continue;
    floor_seen = std::min(floor_seen, pf.values[i]);
    t.expect(pf.values[i] > 0.1, "free(2) depth " + std::to_string(depths[i]) + " value " + fmt(pf.values[i]));
  }
  return t.verdict("Z^2 r=30: " + fmt(pz.values.back()) + " (fixture " + fmt(frozen) + "), free(2) min over depth>=4: " +
                   fmt(floor_seen));
}

// Independent recomputation of the divergence residual against measures built
// here rather than those stored in the pattern.
void expect_pattern(Tally& t, const OrientedGraph& g, const TransportPattern& p, const VertexField& src,
                    const VertexField& dst, const std::string& what) {
  const double own = divergence_residual(g, p.tau, src, dst);
  t.expect(p.residual <= 1e-9 && own <= 1e-9, what + " residual " + fmt(std::max(p.residual, own)));
}

VertexField positive_part(const VertexField& f) {
  VertexField out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::max(0.0, f[i]);
  return out;
}

Verdict transport_validity() {
  Tally t;
  testgen::Rng rng(606);
  // 1000 instances split across the five constructions.
  const int per_kind = 200;

  {  // wasserstein1 on random measures of equal mass
    const auto torus = torus_graph(7, 6);
    for (int i = 0; i < per_kind; ++i) {
      const bool use_torus = i % 2 == 0;
      const auto g = use_torus ? torus : testgen::connected_graph(rng, testgen::uniform_int(rng, 4, 30), 10);
      std::vector<VertexId> pool(static_cast<std::size_t>(g.num_vertices()));
      std::iota(pool.begin(), pool.end(), 0);
      const double mass = testgen::uniform_real(rng, 0.5, 3.0);
      const auto a = testgen::random_measure(rng, g.num_vertices(), pool, testgen::uniform_int(rng, 1, 6), mass);
      const auto b = testgen::random_measure(rng, g.num_vertices(), pool, testgen::uniform_int(rng, 1, 6), mass);
      expect_pattern(t, g, wasserstein1(g, a, b).pattern, a, b, "wasserstein1");
    }
  }
  const auto z2 = group_ball("zd:2", 12);
  const auto& gz = z2.graph();
  {  // one random step of the stopped walk
    for (int i = 0; i < per_kind; ++i) {
      const auto region = ball(gz, *z2.find({testgen::uniform_int(rng, -2, 2), testgen::uniform_int(rng, -2, 2)}),
                               testgen::uniform_int(rng, 0, 6));
      const auto pool = z2.vertices_within(10);
      const auto mu = testgen::random_measure(rng, z2.size(), pool, testgen::uniform_int(rng, 1, 8));
      const auto p = random_step_transport(gz, mu, region);
      expect_pattern(t, gz, p, mu, StoppedWalk(gz, region).apply(mu), "random step");
    }
  }
  {  // restricted Laplacian on random boxes
    for (int i = 0; i < per_kind; ++i) {
      const int w = testgen::uniform_int(rng, 1, 6), h = testgen::uniform_int(rng, 2, 6);
      const int x0 = testgen::uniform_int(rng, -4, 4 - w), y0 = testgen::uniform_int(rng, -4, 4 - h);
      std::vector<VertexId> box;
      for (int x = x0; x < x0 + w; ++x)
        for (int y = y0; y < y0 + h; ++y) box.push_back(*z2.find({x, y}));
      const double mass = testgen::uniform_real(rng, 0.1, 2.0);
      const int k = std::min<int>(3, static_cast<int>(box.size()));
      const auto gfield = testgen::random_measure(rng, z2.size(), box, k, mass) -
                          testgen::random_measure(rng, z2.size(), box, k, mass);
      IterationOptions it;
      it.starts = 2;
      const auto lt = laplacian_transport(gz, SubsetView(gz, box), gfield, 2.0, it);
      expect_pattern(t, gz, lt.pattern, positive_part(-1.0 * gfield), positive_part(gfield), "laplacian");
    }
  }
  {  // central elements: every element of Z^2, commutators of the Heisenberg group
    const auto heis = group_ball("heisenberg", 7);
    const auto hword = commutator_word(heis.group(), 0, heis.group().generator_index("s2"));
    const std::vector<std::string> zwords{"s1", "s2", "s1 s2", "s1^-1 s2 s2"};
    for (int i = 0; i < per_kind; ++i) {
      const bool abelian = i % 2 == 0;
      const CayleyBall& b = abelian ? z2 : heis;
      const auto word = abelian ? parse_word(b.group(), zwords[static_cast<std::size_t>(i / 2) % zwords.size()]) : hword;
      const auto pool = b.vertices_within(abelian ? 8 : 2);
      const auto mu = testgen::random_measure(rng, b.size(), pool, testgen::uniform_int(rng, 1, 8));
      const auto z = b.group().evaluate(word);
      VertexField shifted(mu.size());
      for (std::size_t x = 0; x < mu.size(); ++x)
        if (mu[x] != 0.0) shifted[*b.find(b.group().multiply(b.element(static_cast<VertexId>(x)), z))] += mu[x];
      expect_pattern(t, b.graph(), central_transport(b, word, mu), mu, shifted, "central");
    }
  }
  {  // exit chains
    for (int i = 0; i < per_kind; ++i) {
      const auto region = ball(gz, *z2.find({testgen::uniform_int(rng, -2, 2), testgen::uniform_int(rng, -2, 2)}),
                               testgen::uniform_int(rng, 1, 6));
      const auto& m = region.members();
      const VertexId v = m[static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(m.size()) - 1))];
      const auto ex = exit_distribution(gz, region, v);
      expect_pattern(t, gz, exit_chain(gz, region, v), dirac(z2.size(), v), ex.distribution.field(), "exit chain");
    }
  }
  const int patterns = t.checks();

  // Dirac pairs against BFS distance.
  const std::vector<std::string> groups{"zd:2", "free:2", "lamplighter:2,1"};
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto b = group_ball(groups[gi], 5);
    const auto& g = b.graph();
    const int pairs = gi == 0 ? 334 : 333;
    for (int i = 0; i < pairs; ++i) {
      const VertexId x = testgen::uniform_int(rng, 0, g.num_vertices() - 1);
      const VertexId y = testgen::uniform_int(rng, 0, g.num_vertices() - 1);
      const auto w = wasserstein1(g, dirac(g.num_vertices(), x), dirac(g.num_vertices(), y));
      const double d = bfs_distances(g, x)[static_cast<std::size_t>(y)];
      t.expect(std::abs(w.cost - d) <= 1e-9, groups[gi] + " W1 " + fmt(w.cost) + " vs distance " + fmt(d));
    }
  }
  return t.verdict(std::to_string(patterns) + " patterns, 1000 Dirac pairs");
}

Verdict central_boundedness() {
  Tally t;
  std::string extra;
  auto sweep = [&](const CayleyBall& b, const std::vector<int>& word, const std::string& name) {
    const auto z = b.find(b.group().evaluate(word));
    const double zlen = b.word_length(*z);
    VertexField mu = dirac(b.size(), 0);
    double worst = 0.0;
    for (int n = 0; n <= 40; ++n) {
      const auto p = central_transport(b, word, mu);
      worst = std::max(worst, lp_norm(p.tau, 1.0));
      t.expect(p.residual <= 1e-9, name + " residual at n=" + std::to_string(n));
      if (n < 40) mu = apply_walk(mu, b.graph());
    }
    t.expect(worst <= zlen + 1e-9, name + " max ||tau_n||_1 = " + fmt(worst));
    extra += (extra.empty() ? "" : ", ") + name + " max " + fmt(worst) + " vs |z| " + fmt(zlen);
  };
  const auto z2 = group_ball("zd:2", 42);
  sweep(z2, parse_word(z2.group(), "s1"), "Z^2");
  const auto heis = group_ball("heisenberg", 45);
  sweep(heis, commutator_word(heis.group(), 0, heis.group().generator_index("s2")), "Heisenberg");
  return t.verdict(extra);
}

// Walk of the box itself (actual degrees), so P^k delta stays inside and keeps
// unit mass.
VertexField box_walk(const OrientedGraph& g, const std::vector<char>& in_box, VertexField f) {
  VertexField out(f.size());
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    const double m = f[static_cast<std::size_t>(x)];
    if (m == 0.0) continue;
    int deg = 0;
    for (const Incidence& inc : g.incident(x)) deg += in_box[static_cast<std::size_t>(inc.neighbor)];
    for (const Incidence& inc : g.incident(x))
      if (in_box[static_cast<std::size_t>(inc.neighbor)]) out[static_cast<std::size_t>(inc.neighbor)] += m / deg;
  }
  return out;
}

Verdict laplacian_bound() {
  Tally t;
  const auto b = group_ball("zd:2", 20);
  const auto& g = b.graph();
  testgen::Rng rng(808);
  double worst_ratio = 0.0;
  for (int side : {10, 14}) {
    std::vector<VertexId> box;
    std::vector<char> in_box(static_cast<std::size_t>(b.size()), 0);
    const int lo = -side / 2;
    for (int x = lo; x < lo + side; ++x)
      for (int y = lo; y < lo + side; ++y) {
        box.push_back(*b.find({x, y}));
        in_box[static_cast<std::size_t>(box.back())] = 1;
      }
    const SubsetView f(g, box);
    const double l2 = lambda2_scaled(induced_subgraph(g, box).graph, 4.0);
    std::vector<std::pair<VertexId, VertexId>> pairs{{*b.find({0, 0}), *b.find({1, 0})},
                                                     {*b.find({lo, lo}), *b.find({lo + side - 1, lo + side - 1})}};
    for (int i = 0; i < 6; ++i)
      pairs.emplace_back(box[static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(box.size()) - 1))],
                         box[static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(box.size()) - 1))]);
    for (int k : {5, 10, 20})
      for (const auto& [v, w] : pairs) {
        VertexField pv = dirac(b.size(), v), pw = dirac(b.size(), w);
        for (int i = 0; i < k; ++i) {
          pv = box_walk(g, in_box, pv);
          pw = box_walk(g, in_box, pw);
        }
        const VertexField gf = pv - pw;
        const auto lt = laplacian_transport(g, f, gf, 2.0);
        const double bound = 2.0 * 4.0 / l2 * lp_norm(gf, 2.0);
        const double tau = lp_norm(lt.pattern.tau, 2.0);
        if (bound > 0) worst_ratio = std::max(worst_ratio, tau / bound);
        t.expect(tau <= bound + 1e-12, std::to_string(side) + "x" + std::to_string(side) + " k=" + std::to_string(k) +
                                           ": " + fmt(tau) + " > " + fmt(bound));
        t.expect(std::abs(lt.lambda.value - l2) <= 1e-9 * l2, "lambda_2 of the box disagrees");
      }
  }
  return t.verdict("max ||tau||_2 / bound = " + fmt(worst_ratio));
}

Verdict window_projection() {
  Tally t;
  const auto b = group_ball("zd:2", 20);
  const int s = b.group().generator_index("s1");
  std::string extra;
  for (int n = 3; n <= 8; ++n) {
    const auto f = box_window(b, n);
    const auto st = window_projection_stats(b, f, s);
    const std::string tag = std::to_string(n) + "x" + std::to_string(n);
    const double bound = 1.0 - static_cast<double>(st.boundary_size - 1) / static_cast<double>(f.size());
    t.expect(st.boundary_size == static_cast<std::size_t>(4 * n), tag + " boundary size");
    t.expect(st.codimension == static_cast<int>(st.boundary_size) - 1, tag + " codimension " + std::to_string(st.codimension));
    t.expect(st.max_diagonal >= bound - 1e-12, tag + " max diagonal " + fmt(st.max_diagonal) + " < " + fmt(bound));
    t.expect(st.trace_defect <= 1e-8, tag + " trace defect " + fmt(st.trace_defect));
    if (n == 8) extra = "8x8 max diagonal " + fmt(st.max_diagonal) + " vs " + fmt(bound);
  }
  return t.verdict(extra);
}

Verdict renyi_suite() {
  Tally t;
  testgen::Rng rng(1010);
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 8.0, kInf};
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = testgen::random_probability(rng, static_cast<std::size_t>(testgen::uniform_int(rng, 1, 1000)));
    double prev = kInf;
    bool mono = true;
    for (double q : grid) {
      const double h = renyi(p, q);
      mono = mono && h <= prev + 1e-12;
      prev = h;
    }
    t.expect(mono, "monotonicity in q, trial " + std::to_string(trial));
    for (double a : {1.25, 1.5, 2.0, 3.0})
      for (double c : {1.5, 2.0, 4.0, 8.0})
        if (a < c)
          t.expect(renyi(p, a) <= a * (c - 1) / ((a - 1) * c) * renyi(p, c) + 1e-12,
                   "interpolation a=" + fmt(a) + " b=" + fmt(c));
  }
  for (const char* spec : {"zd:1", "zd:2"}) {
    const auto b = group_ball(spec, 61);
    const auto dists = walk_distributions(b, 60);
    for (int n = 0; n <= 30; ++n)
      t.expect(std::abs(renyi(dists[static_cast<std::size_t>(n)], 2.0) + std::log(dists[static_cast<std::size_t>(2 * n)][0])) <= 1e-10,
               std::string(spec) + " H_2 at n=" + std::to_string(n));
  }
  return t.verdict();
}

Verdict entropy_isoperimetry() {
  Tally t;
  const auto b = group_ball("zd:2", 30);
  const auto& g = b.graph();
  const double nu = 2.0;
  double fitted = kInf;
  for (int side = 2; side <= 20; ++side) {
    std::vector<VertexId> box;
    for (int x = -side / 2; x < side - side / 2; ++x)
      for (int y = -side / 2; y < side - side / 2; ++y) box.push_back(*b.find({x, y}));
    const auto f = Distribution::uniform_on(b.size(), box);
    const auto chk = entropy_isoperimetry_check(g, f, nu, 1.0);
    // Second path: count boundary edges and use H = ln |F|.
    const double size = static_cast<double>(box.size());
    const double ratio = static_cast<double>(SubsetView(g, box).boundary_edges().size()) / size;
    const double rhs = nu / (nu + 1) * std::pow(std::log(size), -1.0 / nu);
    t.expect(std::abs(chk.lhs - ratio) <= 1e-9, "side " + std::to_string(side) + " lhs " + fmt(chk.lhs) + " vs " + fmt(ratio));
    t.expect(std::abs(chk.rhs - rhs) <= 1e-9, "side " + std::to_string(side) + " rhs " + fmt(chk.rhs) + " vs " + fmt(rhs));
    fitted = std::min(fitted, ratio / rhs);
  }
  return t.verdict("nu=2, largest K keeping the inequality on all boxes: " + fmt(fitted) + " (reported, not asserted)");
}

Verdict green_partials() {
  Tally t;
  double worst = 0.0;
  auto scan = [&](const std::vector<double>& seq, const std::string& name) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const double n = static_cast<double>(i + 1);
      worst = std::max(worst, seq[i] * n / 2.0);
      t.expect(seq[i] <= 2.0 / n + 1e-12, name + " n=" + std::to_string(i + 1) + ": " + fmt(seq[i]));
    }
  };
  for (const char* spec : {"zd:1", "zd:2"}) {
    const auto b = group_ball(spec, 201);
    const auto seq = green_residual_sequence(b, 0, 200);
    t.expect(seq.size() == 200, std::string(spec) + " sequence length");
    scan(seq, spec);
  }
  // free(2) through the radial lumping, checked against a real ball first.
  const auto tree = tree_green_residuals(4, 200);
  const auto f2 = group_ball("free:2", 9);
  const auto direct = green_residual_sequence(f2, 0, 8);
  for (std::size_t i = 0; i < direct.size(); ++i)
    t.expect(std::abs(direct[i] - tree[i]) <= 1e-12, "free(2) lumping mismatch at n=" + std::to_string(i + 1));
  scan(tree, "free(2)");
  return t.verdict("max n ||Delta g_n||_1 / 2 = " + fmt(worst));
}

Verdict tree_flow_levels() {
  Tally t;
  const auto tree = regular_tree(3, 14);
  const auto root = *tree.find_edge(0, 1);
  const auto tf = tree_flow(tree, root);
  t.expect(tf.max_divergence == 0.0, "divergence " + fmt(tf.max_divergence));
  const auto div = divergence(tf.flow, tree);
  double own = 0.0;
  for (VertexId v = 0; v < tree.num_vertices(); ++v)
    if (tree.is_full(v)) own = std::max(own, std::abs(div[static_cast<std::size_t>(v)]));
  t.expect(own == 0.0, "recomputed divergence " + fmt(own));
  double worst = 0.0;
  for (double p : {1.25, 1.5, 2.0, 3.0, 4.0}) {
    const auto sums = tf.level_sums(p);
    for (int k = 0; k <= 13; ++k) {
      const double err = std::abs(sums[static_cast<std::size_t>(k)] - std::pow(2.0, (1.0 - p) * k));
      worst = std::max(worst, err);
      t.expect(err <= 1e-12, "p=" + fmt(p) + " k=" + std::to_string(k));
    }
  }
  return t.verdict("max level-sum error " + fmt(worst));
}

struct Criterion {
  int id;
  const char* name;
  std::function<Verdict()> run;
  double time_limit;  // seconds, infinite when unstated
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "spectral identity kappa_2^2 = d lambda_2", spectral_identity, 10},
      {2, "Cheeger chain with exact kappa_1", cheeger_chain, 60},
      {3, "p-conductance against the Cheeger constant", gap_items_1_and_3, kInf},
      {4, "exit distributions on Z segments", gamblers_ruin, kInf},
      {5, "Liouville probe monotonicity", liouville, 300},
      {6, "transport pattern validity", transport_validity, kInf},
      {7, "central transport boundedness", central_boundedness, kInf},
      {8, "restricted-Laplacian transport bound", laplacian_bound, kInf},
      {9, "finite-window projection", window_projection, 120},
      {10, "Renyi entropy suite", renyi_suite, kInf},
      {11, "entropy-isoperimetry consistency", entropy_isoperimetry, kInf},
      {12, "Green partial sums", green_partials, kInf},
      {13, "tree flow", tree_flow_levels, kInf},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.time_limit) {
      v.pass = false;
      v.detail += "; over the " + fmt(c.time_limit) + " s limit";
    }
    failed += !v.pass;
    std::printf("%s %2d %s [%.2f s] %s\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
