#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "harmlab/graph.hpp"

namespace harmlab {

enum class Direction { Exact, UpperBound, LowerBound };
const char* to_string(Direction d) noexcept;

struct CheegerOptions {
  int exact_limit = 24;       // bitmask enumeration up to this many vertices
  int frontier_limit = 14;    // exact frontier dynamic program up to this width
  bool allow_heuristic = true;  // otherwise GraphTooLargeForExact
};

struct CheegerResult {
  double value = 0.0;
  std::vector<VertexId> witness;
  Direction direction = Direction::Exact;
  std::string method;
};

// min |dF|/|F| over nonempty F with |F| <= |V|/2.
CheegerResult cheeger_kappa1(const OrientedGraph& g, const CheegerOptions& options = {});

// Exact minimum edge boundary for every set size 0..|V| together with one
// minimizer per size. Uses bitmask enumeration or the frontier program.
struct BoundaryProfile {
  std::vector<int> min_boundary;
  std::vector<std::vector<VertexId>> witness;
  std::string method;
};
BoundaryProfile exact_boundary_profile(const OrientedGraph& g, const CheegerOptions& options = {});
CheegerResult sweep_cut(const OrientedGraph& g);

// Second smallest eigenvalue of I - P.
double lambda2(const OrientedGraph& g);
// Second smallest eigenvalue of L/degree for a possibly non-regular graph;
// used for regions of a larger regular graph with their ambient degree.
double lambda2_scaled(const OrientedGraph& g, double degree);
// Smallest singular value of the gradient on zero-sum functions.
double gradient_gap(const OrientedGraph& g);

struct IterationOptions {
  int starts = 64;
  int iterations = 500;
  double tolerance = 1e-9;
  double cg_tolerance = 1e-12;
  std::uint64_t seed = 1;
};

struct Estimate {
  double value = 0.0;
  Direction direction = Direction::Exact;
  std::string method;
  bool converged = true;
  std::vector<double> witness;
};

Estimate kappa_p_estimate(const OrientedGraph& g, double p, const IterationOptions& it = {},
                          const CheegerOptions& cheeger = {});
Estimate lambda_p_estimate(const OrientedGraph& g, double p, const IterationOptions& it = {});
// lambda_p of L/degree on a connected (possibly non-regular) graph.
Estimate lambda_p_scaled(const OrientedGraph& g, double degree, double p, const IterationOptions& it = {});

enum class CheckMode { Asserted, Slack, Informational };
const char* to_string(CheckMode m) noexcept;

struct InequalityCheck {
  int item = 0;
  double p = 0.0;
  std::string statement;
  double lhs = 0.0;
  double rhs = 0.0;
  CheckMode mode = CheckMode::Asserted;
  bool holds = true;
  bool equality = false;
};

struct PEntry {
  double p = 0.0;
  Estimate kappa;
  Estimate lambda;
};

struct GapOptions {
  IterationOptions iteration;
  CheegerOptions cheeger;
  double slack = 1.10;
  double equality_tolerance = 1e-9;
  bool estimate_lambda = true;
};

struct GapReport {
  int degree = 0;
  int vertices = 0;
  CheegerResult kappa1;
  double lambda2 = 0.0;
  double kappa2 = 0.0;
  std::vector<PEntry> entries;
  std::vector<InequalityCheck> checks;

  // False when an asserted or slack check fails.
  bool all_hold() const;
};

GapReport verify_gap_chain(const OrientedGraph& g, const std::vector<double>& p_list,
                           const GapOptions& options = {});
nlohmann::json to_json(const GapReport& report);

}  // namespace harmlab
