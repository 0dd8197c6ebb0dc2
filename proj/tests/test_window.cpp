#include <doctest.h>

#include <cmath>

#include "harmlab/builders.hpp"
#include "harmlab/window.hpp"

using namespace harmlab;

namespace {

const CayleyBall& z2_ball() {
  static const CayleyBall b = CayleyBall::build(build_group(parse_group_spec("zd:2")), 20);
  return b;
}

}  // namespace

TEST_SUITE("cohomology_window") {
  TEST_CASE("closed cycle window") {
    const auto c4 = cycle_graph(4);
    const std::vector<VertexId> all{0, 1, 2, 3};
    const auto w = build_window(c4, all);
    CHECK(w.cut_dimension == 3);
    CHECK(w.cycle_dimension == 1);
    CHECK(w.boundary.empty());
    CHECK(w.dimensions_ok);
  }

  TEST_CASE("2x2 square window") {
    const auto& b = z2_ball();
    const auto w = build_window(b.graph(), box_window(b, 2));
    CHECK(w.edges.size() == 12);
    CHECK(w.boundary.size() == 8);
    CHECK(w.cycle_dimension == 1);
    CHECK(w.expected_cycle_dimension == 1);
  }

  TEST_CASE("tree windows have no cycles") {
    const auto t = regular_tree(3, 5);
    const auto inner = ball(t, 0, 3);
    const auto w = build_window(t, inner.members());
    CHECK(w.cycle_dimension == 0);
    CHECK(w.orthogonality_defect == 0.0);
  }

  TEST_CASE("projection bound on the 5x5 square") {
    const auto& b = z2_ball();
    const auto st = window_projection_stats(b, box_window(b, 5), b.group().generator_index("s1"));
    CHECK(st.boundary_size == 20);
    CHECK(st.bound == doctest::Approx(0.24));
    CHECK(st.max_diagonal >= 0.24);
    CHECK(st.bound_holds);
    CHECK(st.proportion_holds);
  }

  TEST_CASE("codimension, trace and orthogonality on squares") {
    const auto& b = z2_ball();
    for (int n = 2; n <= 8; ++n) {
      const auto f = box_window(b, n);
      const auto w = build_window(b.graph(), f);
      CHECK(w.dimensions_ok);
      CHECK(w.orthogonality_defect == 0.0);
      CHECK(w.codimension == static_cast<int>(w.boundary.size()) - 1);
      const auto st = window_projection_stats(b, f, 0);
      CHECK(st.codimension == st.expected_codimension);
      CHECK(st.codimension == w.codimension);
      CHECK(st.trace_defect <= 1e-8);
      CHECK(st.bound_holds);
      CHECK(st.proportion_holds);
      for (double d : st.diagonals) {
        CHECK(d >= -1e-12);
        CHECK(d <= 1.0 + 1e-12);
      }
    }
  }

  TEST_CASE("dimension formula on irregular windows") {
    const auto& b = z2_ball();
    // An L-shape and a plus sign.
    std::vector<VertexId> ell, plus;
    for (int x = 0; x < 4; ++x) ell.push_back(*b.find({x, 0}));
    for (int y = 1; y < 4; ++y) ell.push_back(*b.find({0, y}));
    for (int i = -3; i <= 3; ++i) {
      plus.push_back(*b.find({i, 0}));
      if (i) plus.push_back(*b.find({0, i}));
    }
    for (const auto& f : {ell, plus}) {
      const auto w = build_window(b.graph(), f);
      CHECK(w.cycle_dimension == w.expected_cycle_dimension);
      CHECK(w.orthogonality_defect == 0.0);
    }
  }

  TEST_CASE("budgets and preconditions") {
    const auto& b = z2_ball();
    CHECK_THROWS_AS(window_projection_stats(b, box_window(b, 8), 0, 100), Error);
    CHECK_THROWS_AS(box_window(b, 0), Error);
    const auto fb = CayleyBall::build(build_group(parse_group_spec("free:2")), 3);
    CHECK_THROWS_AS(box_window(fb, 2), Error);
  }
}
