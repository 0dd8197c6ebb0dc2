#pragma once

#include <cstddef>
#include <vector>

#include "harmlab/cayley.hpp"
#include "harmlab/graph.hpp"

namespace harmlab {

inline constexpr std::size_t kWindowEdgeBudget = 4000;

struct SignedEdge {
  EdgeId edge;
  int sign;  // +1 when the cycle runs tail -> head
};

/// Cut and cycle spaces seen through a finite window F. Edge coordinates are
/// positions in `edges` (all edges touching F).
struct WindowSpaces {
  std::vector<VertexId> window;
  std::vector<EdgeId> edges;     // edges with at least one endpoint in F
  std::vector<EdgeId> boundary;  // exactly one endpoint in F
  std::vector<EdgeId> interior;  // both endpoints in F
  std::vector<std::vector<SignedEdge>> cycles;  // fundamental cycles, BFS forest
  int components = 0;            // of the graph (F, interior)
  int closed_components = 0;     // components with no edge leaving F
  int cut_dimension = 0;         // |F| - closed_components
  int cycle_dimension = 0;       // number of fundamental cycles
  int expected_cycle_dimension = 0;  // |interior| - |F| + components
  int codimension = 0;           // |edges| - cut - cycle
  double orthogonality_defect = 0.0;  // max |<grad delta_x, c>|
  bool dimensions_ok = false;

  int index_of(EdgeId e) const;  // position in `edges`, -1 if absent
};

WindowSpaces build_window(const OrientedGraph& g, std::span<const VertexId> window);

struct WindowStats {
  int generator = 0;
  std::size_t window_size = 0;
  std::size_t boundary_size = 0;
  std::size_t edge_count = 0;
  int rank = 0;                   // numerical rank of cut + cycle bases
  int codimension = 0;            // |E_F| - rank
  int expected_codimension = 0;   // |dF| - 1
  int labelled_dimension = 0;     // dim of V' = V_F restricted to s-edges
  std::vector<double> diagonals;  // <P e_i, e_i> over the s-edges
  double max_diagonal = 0.0;
  double bound = 0.0;             // 1 - (|dF| - 1) / |F|
  bool bound_holds = false;
  double trace = 0.0;
  double trace_defect = 0.0;      // |trace - dim V'|
  double proportion_below = 0.0;  // share of diagonals < 1 - sqrt(k/N)
  double proportion_bound = 0.0;  // sqrt(k/N)
  bool proportion_holds = false;
  double orthogonality_defect = 0.0;
};

// Dense projection experiment on the s-labelled edges (g, g s), g in F.
WindowStats window_projection_stats(const CayleyBall& ball, std::span<const VertexId> window, int generator,
                                    std::size_t edge_budget = kWindowEdgeBudget);

// Box of the given side in Z^d around the identity (offset -floor((side-1)/2)
// in every coordinate).
std::vector<VertexId> box_window(const CayleyBall& ball, int side);

}  // namespace harmlab
