#pragma once

#include <span>
#include <vector>

#include "harmlab/cayley.hpp"
#include "harmlab/graph.hpp"
#include "harmlab/spectral.hpp"

namespace harmlab {

/// Edge function whose divergence should equal target - source.
struct TransportPattern {
  EdgeField tau;
  VertexField source;
  VertexField target;
  double residual = 0.0;  // || div tau - (target - source) ||_1
};

double divergence_residual(const OrientedGraph& g, const EdgeField& tau, const VertexField& source,
                           const VertexField& target);
TransportPattern make_pattern(const OrientedGraph& g, EdgeField tau, VertexField source, VertexField target);

struct WassersteinResult {
  double cost = 0.0;
  TransportPattern pattern;
  VertexField potential;  // 1-Lipschitz dual witness
  double dual_value = 0.0;
  bool certified_optimal = false;
  int augmentations = 0;
};

// l1-optimal transport with unit edge costs (min-cost flow on masses scaled
// to integers).
WassersteinResult wasserstein1(const OrientedGraph& g, const VertexField& source, const VertexField& target);

// One step of the walk stopped outside A, written as a transport.
TransportPattern random_step_transport(const OrientedGraph& g, const VertexField& mu, const SubsetView& region);

struct LaplacianTransport {
  TransportPattern pattern;
  double p = 2.0;
  double tau_norm = 0.0;
  double g_norm = 0.0;
  Estimate lambda;        // lambda_p of the region's L / d, d the ambient degree
  double bound = 0.0;     // d / lambda * ||g||_p
  bool bound_holds = false;
  double weak_bound = 0.0;  // twice the above
  bool weak_bound_holds = false;
};

LaplacianTransport laplacian_transport(const OrientedGraph& g, const SubsetView& region, const VertexField& source_field,
                                       double p, const IterationOptions& it = {});

// Moves every point x to x z along the path labelled by the word z.
TransportPattern central_transport(const CayleyBall& ball, std::span<const int> word, const VertexField& mu);

// Removes directed cycles from the flow support; |tau'| <= |tau| pointwise.
TransportPattern cycle_cancel(const OrientedGraph& g, const TransportPattern& pattern);

struct ChainLevel {
  int level = 0;
  std::size_t region_size = 0;
  double tau_p = 0.0;
  double tau_inf = 0.0;
  double cancelled_p = 0.0;
  double cancelled_inf = 0.0;
  double exit_diff_l1 = 0.0;
  double exit_diff_inf = 0.0;
  double residual = 0.0;
  bool sup_bound_holds = false;  // cancelled_inf <= exit_diff_inf
  double chain_crosscheck = 0.0;  // only when requested: step-sum vs solve
};

// Walk-to-exit transport as a solved chain: -grad(G_A delta_v) / d.
TransportPattern exit_chain(const OrientedGraph& g, const SubsetView& region, VertexId v);
// Same transport built by summing random-step transports until the mass in
// A drops below `tolerance`.
TransportPattern exit_chain_by_steps(const OrientedGraph& g, const SubsetView& region, VertexId v,
                                     double tolerance = 1e-14, int max_steps = 1'000'000);

// For each region, the pattern -chain_v + (edge v->w) + chain_w moving
// ex_v to ex_w, with norms before and after cycle cancellation.
std::vector<ChainLevel> exit_transport_chain(const OrientedGraph& g, VertexId v, VertexId w,
                                             const std::vector<SubsetView>& regions, const std::vector<int>& levels,
                                             double p, bool crosscheck = false);

}  // namespace harmlab
