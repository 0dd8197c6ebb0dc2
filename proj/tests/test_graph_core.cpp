#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "harmlab/builders.hpp"
#include "harmlab/graph.hpp"
#include "support.hpp"

using namespace harmlab;

TEST_SUITE("graph_core") {
  TEST_CASE("orientation is canonical and repeated pairs are rejected") {
    std::vector<std::pair<VertexId, VertexId>> pairs{{1, 0}, {2, 1}};
    const auto g = OrientedGraph::from_pairs(3, pairs);
    for (const Edge& e : g.edges()) CHECK(e.tail < e.head);
    std::vector<std::pair<VertexId, VertexId>> dup{{0, 1}, {1, 0}};
    CHECK_THROWS_AS(OrientedGraph::from_pairs(2, dup), Error);
    std::vector<std::pair<VertexId, VertexId>> loop{{0, 0}};
    CHECK_THROWS_AS(OrientedGraph::from_pairs(1, loop), Error);
  }

  TEST_CASE("disconnected graphs need an explicit flag") {
    std::vector<std::pair<VertexId, VertexId>> pairs{{0, 1}, {2, 3}};
    CHECK_THROWS_AS(OrientedGraph::from_pairs(4, pairs), Error);
    GraphOptions opts;
    opts.allow_disconnected = true;
    CHECK_FALSE(OrientedGraph::from_pairs(4, pairs, opts).connected());
  }

  TEST_CASE("gradient examples") {
    const auto p = path_graph(2);
    VertexField f(2);
    f[1] = 1.0;
    CHECK(gradient(f, p)[0] == 1.0);

    const auto c4 = cycle_graph(4);
    VertexField c(4);
    for (int i = 0; i < 4; ++i) c[i] = 3.5;
    CHECK(lp_norm(gradient(c, c4), INFINITY) == 0.0);

    const auto grad = gradient(dirac(4, 2), c4);
    int nonzero = 0;
    for (double x : grad.values())
      if (x != 0.0) {
        ++nonzero;
        CHECK(std::abs(x) == 1.0);
      }
    CHECK(nonzero == 2);
  }

  TEST_CASE("divergence examples") {
    const auto p = path_graph(2);
    EdgeField g(1);
    g[0] = 1.0;
    const auto d = divergence(g, p);
    CHECK(d[0] == -1.0);
    CHECK(d[1] == 1.0);

    // Cyclic orientation 0->1->2->3->0: edge (0,3) is stored as 0->3 so it
    // carries -1.
    const auto c4 = cycle_graph(4);
    EdgeField cyc(4);
    for (EdgeId e = 0; e < 4; ++e) {
      const Edge& ed = c4.edge(e);
      cyc[e] = (ed.head == ed.tail + 1) ? 1.0 : -1.0;
    }
    const auto dc = divergence(cyc, c4);
    for (double x : dc.values()) CHECK(x == 0.0);
  }

  TEST_CASE("laplacian examples") {
    const auto k4 = complete_graph(4);
    const auto l = laplacian(dirac(4, 0), k4);
    CHECK(l[0] == doctest::Approx(1.0).epsilon(1e-15));
    for (int w = 1; w < 4; ++w) CHECK(l[w] == doctest::Approx(-1.0 / 3).epsilon(1e-15));

    testgen::Rng rng(7);
    const auto c4 = cycle_graph(4);
    const auto f = testgen::random_field<VertexField>(rng, 4);
    const auto a = laplacian(f, c4);
    auto b = divergence(gradient(f, c4), c4);
    b *= 0.5;
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);

    CHECK_THROWS_AS(laplacian(dirac(3, 0), path_graph(3)), Error);
  }

  TEST_CASE("walk_step examples") {
    const auto c4 = cycle_graph(4);
    const auto mu = walk_step(Distribution::dirac(4, 0), c4, 0.0);
    CHECK(mu[1] == 0.5);
    CHECK(mu[3] == 0.5);
    CHECK(mu[0] == 0.0);

    const auto c8 = cycle_graph(8);
    const auto lazy = walk_step(Distribution::dirac(8, 3), c8, 0.5);
    CHECK(lazy[3] == 0.5);
    CHECK(lazy[2] == 0.25);
    CHECK(lazy[4] == 0.25);
  }

  TEST_CASE("lp_norm examples") {
    const std::vector<double> u(5, 0.2);
    CHECK(lp_norm(u, 1.0) == doctest::Approx(1.0));
    CHECK(lp_norm(u, 0.0) == 5.0);
    const std::vector<double> pm{1.0, -1.0};
    CHECK(lp_norm(pm, INFINITY) == 1.0);
    CHECK_THROWS_AS(lp_norm(pm, 0.5), Error);
  }

  TEST_CASE("subset and ball examples") {
    const auto c4 = cycle_graph(4);
    const std::vector<VertexId> one{0};
    const SubsetView s(c4, one);
    CHECK(s.boundary_edges().size() == 2);
    CHECK(s.outer_boundary().size() == 2);

    const auto q3 = hypercube_graph(3);
    const std::vector<VertexId> face{0, 1, 2, 3};
    CHECK(SubsetView(q3, face).boundary_edges().size() == 4);

    const std::vector<VertexId> all{0, 1, 2, 3};
    const SubsetView whole(c4, all);
    CHECK(whole.boundary_edges().empty());
    CHECK(whole.outer_boundary().empty());

    CHECK(ball(c4, 2, 0).members() == std::vector<VertexId>{2});
    const auto grid = grid_graph(5, 5);
    CHECK(ball(grid, 12, 1).size() == 5);
    const auto tree = regular_tree(3, 4);
    CHECK(ball(tree, 0, 2).size() == 10);
  }

  TEST_CASE("property: adjointness and zero-sum divergence on random graphs") {
    testgen::Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = testgen::uniform_int(rng, 2, 50);
      const auto g = testgen::connected_graph(rng, n, testgen::uniform_int(rng, 0, 2 * n));
      const auto f = testgen::random_field<VertexField>(rng, static_cast<std::size_t>(n));
      const auto tau = testgen::random_field<EdgeField>(rng, static_cast<std::size_t>(g.num_edges()));
      const auto div = divergence(tau, g);
      CHECK(std::abs(inner(div.values(), f.values()) - inner(tau.values(), gradient(f, g).values())) <= 1e-10);
      CHECK(std::abs(div.sum()) <= 1e-10);
    }
  }

  TEST_CASE("property: zero gradient only for constants") {
    testgen::Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = testgen::uniform_int(rng, 2, 30);
      const auto g = testgen::connected_graph(rng, n, testgen::uniform_int(rng, 0, n));
      auto f = testgen::random_field<VertexField>(rng, static_cast<std::size_t>(n));
      CHECK(lp_norm(gradient(f, g), INFINITY) > 0.0);
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = 2.0;
      CHECK(lp_norm(gradient(f, g), INFINITY) == 0.0);
    }
  }

  TEST_CASE("property: divergence operator norm bound") {
    testgen::Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = testgen::uniform_int(rng, 3, 4);
      const int n = 2 * testgen::uniform_int(rng, 3, 12);
      const auto g = random_regular_graph(d, n, rng());
      const auto tau = testgen::random_field<EdgeField>(rng, static_cast<std::size_t>(g.num_edges()));
      for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const double bound = 2.0 * std::pow(d, 1.0 - 1.0 / p) * lp_norm(tau, p);
        CHECK(lp_norm(divergence(tau, g), p) <= bound + 1e-12);
      }
    }
  }

  TEST_CASE("property: walk_step preserves mass and sign") {
    testgen::Rng rng(14);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 * testgen::uniform_int(rng, 3, 20);
      const auto g = random_regular_graph(3, n, rng());
      const auto p = testgen::random_probability(rng, static_cast<std::size_t>(n));
      auto mu = Distribution::from_field(VertexField(p));
      for (int step = 0; step < 5; ++step) mu = walk_step(mu, g, testgen::uniform_real(rng, 0.0, 0.9));
      CHECK(std::abs(mu.field().sum() - 1.0) <= 1e-12);
      for (double x : mu.field().values()) CHECK(x >= 0.0);
    }
  }

  TEST_CASE("induced subgraph keeps orientation") {
    const auto g = grid_graph(4, 4);
    const std::vector<VertexId> members{5, 6, 9, 10};
    const auto ind = induced_subgraph(g, members);
    CHECK(ind.graph.num_edges() == 4);
    for (EdgeId e = 0; e < ind.graph.num_edges(); ++e) {
      const Edge& a = ind.graph.edge(e);
      const Edge& b = g.edge(ind.edge_to_parent[e]);
      CHECK(ind.to_parent[a.tail] == b.tail);
      CHECK(ind.to_parent[a.head] == b.head);
    }
  }

  TEST_CASE("graph JSON round trip") {
    const auto g = hypercube_graph(3);
    const auto j = graph_to_json(g);
    const auto h = graph_from_json(j);
    CHECK(h.num_vertices() == 8);
    CHECK(h.num_edges() == 12);
    nlohmann::json bad = {{"vertices", 3}, {"edges", {{0, 1}}}};
    CHECK_THROWS_AS(graph_from_json(bad), Error);
  }
}
