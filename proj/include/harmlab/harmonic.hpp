#pragma once

#include <limits>
#include <span>
#include <vector>

#include "harmlab/cayley.hpp"
#include "harmlab/graph.hpp"

namespace harmlab {

// Sup of |div grad f| over vertices of full degree.
double harmonic_residual(const VertexField& f, const OrientedGraph& g);

struct DirichletResult {
  VertexField values;     // boundary data outside A, harmonic extension inside
  double crosscheck = -1;  // max |f(x) - <g, ex_x>|, -1 when not computed
  bool max_principle = false;
};
// `boundary` is read on the outer boundary of A only.
DirichletResult dirichlet_extend(const OrientedGraph& g, const SubsetView& a, const VertexField& boundary,
                                 bool crosscheck = true);

// Radial clamp at level t.
VertexField truncate(const VertexField& f, double t);

struct GradientDecay {
  std::vector<double> values;  // n = 0..n_max
  // Finite-ball stand-in: the unbounded part of the complement is the part
  // that reaches a vertex of deficient degree.
  bool approximated = true;
};
GradientDecay gradient_decay(const VertexField& f, const OrientedGraph& g, VertexId root, int n_max);

struct DivergenceRow {
  int n = 0;
  std::size_t annulus_size = 0;
  std::size_t outer_size = 0;
  int components = 0;
  // Max induced distance over reachable pairs of outer vertices.
  int divergence = 0;
  bool unreachable_pairs = false;  // some outer pair lies in different components
  std::vector<int> component_diameters;
  double product = std::numeric_limits<double>::quiet_NaN();  // D(n) gd_h(n) when h is given
};
std::vector<DivergenceRow> divergence_profile(const OrientedGraph& g, VertexId root, int K, int n_max,
                                              const VertexField* h = nullptr);

struct LiouvilleProbe {
  std::vector<int> radii;
  std::vector<double> values;  // || ex_v - ex_w ||_1 for A = B_r(identity)
  bool nonincreasing = true;
  double max_value = 0.0;      // compared against 2 - eps
};
LiouvilleProbe liouville_probe(const CayleyBall& ball, VertexId v, VertexId w, std::span<const int> radii);

struct TreeFlow {
  EdgeField flow;
  std::vector<int> depth;  // per edge, root edge 0
  std::vector<int> side;   // +1 on the head side of the root edge, -1 on the tail side, 0 for the root edge
  double max_divergence = 0.0;  // over full-degree vertices
  // Sum of |flow|^p over edges of the given depth on one side of the root
  // edge.
  std::vector<double> level_sums(double p) const;
};
TreeFlow tree_flow(const OrientedGraph& tree, EdgeId root_edge);

enum class WitnessKind { C0, L1 };

struct LaplacianWitness {
  WitnessKind kind = WitnessKind::C0;
  int n = 0;
  VertexField f;
  double f_norm = 0.0;          // sup norm (c0) or l1 norm
  double laplacian_norm = 0.0;  // of (I - P) f in the same norm
  double gradient_sup = 0.0;
  double ratio = 0.0;           // c0: gradient_sup / f_norm, l1: laplacian_norm / f_norm
  double bound = 0.0;           // 1/(n+1) or 2/(n+1)
  bool holds = false;
};
LaplacianWitness laplacian_witness(const OrientedGraph& g, VertexId root, WitnessKind kind, int n);

}  // namespace harmlab
