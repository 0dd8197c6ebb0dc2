#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "harmlab/graph.hpp"

namespace harmlab::detail {

inline constexpr int kDenseVertexLimit = 5000;

// Combinatorial Laplacian D - A.
Eigen::SparseMatrix<double> laplacian_matrix(const OrientedGraph& g);
Eigen::MatrixXd dense_laplacian(const OrientedGraph& g);
// |E| x |V| incidence matrix of the gradient.
Eigen::MatrixXd dense_gradient(const OrientedGraph& g);

// Sorted eigen-decomposition of L / scale; throws EigensolveFailure.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};
Spectrum dense_spectrum(const OrientedGraph& g, double scale);

void project_zero_mean(Eigen::VectorXd& x);

/// Solves (L / scale) y = x for zero-mean x on a connected graph with
/// conjugate gradients; the returned y has zero mean.
class ZeroMeanSolver {
 public:
  ZeroMeanSolver(const OrientedGraph& g, double scale, double tolerance);
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

 private:
  Eigen::SparseMatrix<double> matrix_;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg_;
  double scale_;
};

}  // namespace harmlab::detail
