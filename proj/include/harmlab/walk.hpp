#pragma once

#include <memory>
#include <span>
#include <vector>

#include "harmlab/cayley.hpp"
#include "harmlab/graph.hpp"

namespace harmlab {

// P^n delta_identity on a Cayley ball; SupportHitsBoundary when the ball is
// too small for n.
Distribution walk_distribution(const CayleyBall& ball, int n, double laziness = 0.0);
// P^0 .. P^n in one pass.
std::vector<Distribution> walk_distributions(const CayleyBall& ball, int n, double laziness = 0.0);

/// Simple random walk that moves inside A and freezes outside A.
class StoppedWalk {
 public:
  StoppedWalk(const OrientedGraph& g, SubsetView region);

  VertexField apply(const VertexField& mu) const;
  Distribution apply(const Distribution& mu) const;
  const SubsetView& region() const noexcept { return region_; }

 private:
  const OrientedGraph* graph_;
  SubsetView region_;
};

struct ExitDistribution {
  VertexId origin = 0;
  Distribution distribution;  // supported on the outer boundary of A
  double residual = 0.0;      // 1 - exit mass, from the linear solve
};

/// Absorbing-chain solver for one region; the factorization is shared by all
/// origins. Every vertex of A must have the nominal degree.
class ExitSolver {
 public:
  ExitSolver(const OrientedGraph& g, const SubsetView& region);
  ~ExitSolver();
  ExitSolver(ExitSolver&&) noexcept;
  ExitSolver& operator=(ExitSolver&&) noexcept;

  // Expected visits to each vertex of A before leaving A, for a walk whose
  // starting law is `source` (restricted to A).
  VertexField green(const VertexField& source) const;
  ExitDistribution exit(VertexId origin) const;
  // Law of the exit point for a general starting measure (mass outside A
  // stays where it is).
  VertexField exit_measure(const VertexField& source) const;

  const SubsetView& region() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

ExitDistribution exit_distribution(const OrientedGraph& g, const SubsetView& region, VertexId origin);
std::vector<ExitDistribution> exit_distributions(const OrientedGraph& g, const SubsetView& region,
                                                 std::span<const VertexId> origins);

// nu - r delta_v + r P delta_v. The field version accepts any r; the
// distribution version raises NegativeMass when r > nu(v).
VertexField fire(const VertexField& nu, const OrientedGraph& g, VertexId v, double r);
Distribution fire(const Distribution& nu, const OrientedGraph& g, VertexId v, double r);
// Fires all mass sitting in A until less than `tolerance` remains there.
VertexField fire_until_exit(const VertexField& nu, const OrientedGraph& g, const SubsetView& region,
                            double tolerance = 1e-13, int max_sweeps = 1'000'000);

double entropy(const Distribution& mu);
double entropy(std::span<const double> mu);
// q = 0, q = 1 (Shannon) and q = infinity included.
double renyi(const Distribution& mu, double q);
double renyi(std::span<const double> mu, double q);
double speed(const Distribution& mu, std::span<const int> word_length);

struct GreenPartial {
  Distribution g;
  double laplacian_residual;  // || Delta g_n ||_1
};
GreenPartial green_partial(const CayleyBall& ball, VertexId x, int n);
// || Delta g_n ||_1 for n = 1..n_max.
std::vector<double> green_residual_sequence(const CayleyBall& ball, VertexId x, int n_max);

// The same sequence on the infinite d-regular tree (free group of rank d/2),
// computed exactly by lumping vertices at equal distance from the start.
std::vector<double> tree_green_residuals(int degree, int n_max);
// Mass of P^n delta_root per distance level on the infinite d-regular tree.
std::vector<double> tree_level_masses(int degree, int n);

struct GradientProfileRow {
  int n;
  double walk_gradient_l1;   // || grad P^n ||_1
  double green_gradient_l1;  // || grad g_n ||_1, g_0 taken as delta
};
std::vector<GradientProfileRow> gradient_l1_profile(const CayleyBall& ball, int n_max, double laziness = 0.5);

struct EntropyProfileRow {
  int n;
  double h0, h1, h2, hinf;
  double speed;
  double gradient_l1;
  double return_probability;
};
std::vector<EntropyProfileRow> entropy_profile(const CayleyBall& ball, int steps, double laziness = 0.5);

struct EntropyIsoCheck {
  double lhs;  // || grad f ||_1
  double rhs;  // (K nu / (nu + 1)) H(f)^(-1/nu)
  bool holds;
};
EntropyIsoCheck entropy_isoperimetry_check(const OrientedGraph& g, const Distribution& f, double nu, double K);

}  // namespace harmlab
