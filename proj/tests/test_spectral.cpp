#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "harmlab/builders.hpp"
#include "harmlab/spectral.hpp"
#include "support.hpp"

using namespace harmlab;

namespace {

// Plain bitmask minimum of |dF|/|F| over 0 < |F| <= n/2.
double brute_kappa1(const OrientedGraph& g) {
  const int n = g.num_vertices();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = __builtin_popcount(mask);
    if (2 * size > n) continue;
    int cut = 0;
    for (const Edge& e : g.edges()) cut += ((mask >> e.tail) & 1u) != ((mask >> e.head) & 1u);
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

double torus_lambda2(int w, int h) { return (1.0 - std::cos(2 * std::numbers::pi / std::max(w, h))) / 2.0; }

const InequalityCheck* find_check(const GapReport& r, int item, double p, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.item == item && c.p == p && c.statement.rfind(prefix, 0) == 0) return &c;
  return nullptr;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("cheeger constant examples") {
    const auto c4 = cheeger_kappa1(cycle_graph(4));
    CHECK(c4.value == 1.0);
    CHECK(c4.direction == Direction::Exact);
    CHECK(c4.witness.size() == 2);
    CHECK(cycle_graph(4).find_edge(c4.witness[0], c4.witness[1]).has_value());

    const auto q3 = cheeger_kappa1(hypercube_graph(3));
    CHECK(q3.value == 1.0);
    CHECK(q3.witness.size() == 4);

    for (int n = 3; n <= 8; ++n) CHECK(cheeger_kappa1(complete_graph(n)).value == (n + 1) / 2);
  }

  TEST_CASE("lambda2 examples") {
    CHECK(lambda2(cycle_graph(4)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lambda2(hypercube_graph(3)) == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(lambda2(complete_graph(4)) == doctest::Approx(4.0 / 3).epsilon(1e-10));
  }

  TEST_CASE("kappa_p and lambda_p examples") {
    const auto c4 = cycle_graph(4);
    const auto q3 = hypercube_graph(3);
    CHECK(kappa_p_estimate(c4, 2).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(kappa_p_estimate(q3, 2).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    CHECK(kappa_p_estimate(q3, 1).value == cheeger_kappa1(q3).value);
    CHECK(lambda_p_estimate(c4, 2).value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(lambda_p_estimate(complete_graph(4), 2).value == doctest::Approx(4.0 / 3).epsilon(1e-10));
    const auto l4 = lambda_p_estimate(c4, 4);
    CHECK(l4.direction == Direction::UpperBound);
    CHECK(l4.value >= lambda2(c4) / 2 - 1e-9);
    CHECK(kappa_p_estimate(c4, 3).direction == Direction::UpperBound);
    CHECK_THROWS_AS(kappa_p_estimate(c4, 0.5), Error);
  }

  TEST_CASE("gap chain examples") {
    const auto c4 = verify_gap_chain(cycle_graph(4), {2.0});
    const auto* left = find_check(c4, 6, 2.0, "4 d kappa_1");
    REQUIRE(left);
    CHECK(left->lhs == doctest::Approx(8.0));
    CHECK(left->rhs == doctest::Approx(8.0));
    CHECK(left->equality);

    const auto q3 = verify_gap_chain(hypercube_graph(3), {2.0});
    const auto* right = find_check(q3, 0, 2.0, "2 kappa_1 / d");
    REQUIRE(right);
    CHECK(right->equality);
    CHECK(q3.all_hold());
  }

  TEST_CASE("oracle: exact kappa_1 and lambda_2 on the corpus") {
    for (int n = 3; n <= 12; ++n) {
      const auto g = cycle_graph(n);
      CHECK(cheeger_kappa1(g).value == doctest::Approx(brute_kappa1(g)).epsilon(1e-14));
      CHECK(lambda2(g) == doctest::Approx(1.0 - std::cos(2 * std::numbers::pi / n)).epsilon(1e-10));
    }
    for (int n = 2; n <= 8; ++n) {
      const auto g = complete_graph(n);
      CHECK(cheeger_kappa1(g).value == doctest::Approx(brute_kappa1(g)).epsilon(1e-14));
      CHECK(lambda2(g) == doctest::Approx(n / (n - 1.0)).epsilon(1e-10));
    }
    for (int d = 1; d <= 4; ++d) {
      const auto g = hypercube_graph(d);
      CHECK(cheeger_kappa1(g).value == doctest::Approx(brute_kappa1(g)).epsilon(1e-14));
      CHECK(lambda2(g) == doctest::Approx(2.0 / d).epsilon(1e-10));
    }
    for (int w = 3; w <= 4; ++w)
      for (int h = w; h <= 5; ++h) {
        const auto g = torus_graph(w, h);
        CHECK(cheeger_kappa1(g).value == doctest::Approx(brute_kappa1(g)).epsilon(1e-14));
      }
    for (int w = 3; w <= 6; ++w)
      for (int h = w; h <= 6; ++h) CHECK(lambda2(torus_graph(w, h)) == doctest::Approx(torus_lambda2(w, h)).epsilon(1e-10));
  }

  TEST_CASE("frontier program agrees with enumeration") {
    testgen::Rng rng(31);
    for (int i = 0; i < 6; ++i) {
      const auto g = random_regular_graph(3, 18, rng());
      CheegerOptions dp;
      dp.exact_limit = 0;
      dp.frontier_limit = 18;
      dp.allow_heuristic = false;
      const auto a = cheeger_kappa1(g, dp);
      CHECK(a.direction == Direction::Exact);
      CHECK(a.value == doctest::Approx(brute_kappa1(g)).epsilon(1e-14));
    }
  }

  TEST_CASE("large graphs fall back to a flagged heuristic") {
    CheegerOptions opts;
    opts.exact_limit = 8;
    opts.frontier_limit = 1;
    const auto r = cheeger_kappa1(cycle_graph(40), opts);
    CHECK(r.direction == Direction::UpperBound);
    CHECK(r.value >= cheeger_kappa1(cycle_graph(40)).value);
    opts.allow_heuristic = false;
    CHECK_THROWS_AS(cheeger_kappa1(cycle_graph(40), opts), Error);
  }

  TEST_CASE("property: spectral identity and Cheeger bounds on random cubic graphs") {
    testgen::Rng rng(32);
    for (int i = 0; i < 20; ++i) {
      const int n = 2 * testgen::uniform_int(rng, 3, 10);
      const auto g = random_regular_graph(3, n, rng());
      const double l2 = lambda2(g);
      const double k1 = brute_kappa1(g);
      CHECK(std::abs(std::pow(kappa_p_estimate(g, 2).value, 2) - 3 * l2) <= 1e-8);
      CHECK(gradient_gap(g) == doctest::Approx(std::sqrt(3 * l2)).epsilon(1e-8));
      CHECK(k1 * k1 / 18.0 <= l2 + 1e-12);
      CHECK(l2 <= 2.0 * k1 / 3.0 + 1e-12);
    }
  }

  TEST_CASE("property: p-conductance witnesses bound the Cheeger constant") {
    // Every witness ratio is >= kappa_p, so 2^{(p-1)/p} kappa_1 <= max(2,p) d^{(p-1)/p} ratio.
    testgen::Rng rng(33);
    IterationOptions it;
    it.starts = 8;
    for (int i = 0; i < 8; ++i) {
      const auto g = random_regular_graph(3, 12, rng());
      const double k1 = brute_kappa1(g);
      for (double p : {1.5, 3.0, 4.0}) {
        const auto k = kappa_p_estimate(g, p, it);
        CHECK(std::max(2.0, p) * std::pow(3.0, (p - 1) / p) * k.value >= std::pow(2.0, (p - 1) / p) * k1 - 1e-12);
      }
    }
  }

  TEST_CASE("doubling: two copies of an optimal set keep its ratio") {
    const auto g = cycle_graph(6);
    const auto both = disjoint_union(g, g);
    CheegerOptions opts;
    const auto single = cheeger_kappa1(g);
    const auto doubled = exact_boundary_profile(both, opts);
    const auto k = single.witness.size();
    CHECK(doubled.min_boundary[2 * k] <= 2 * static_cast<int>(single.value * k + 0.5));
  }
}
