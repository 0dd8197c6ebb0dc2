#include "linalg.hpp"

#include <vector>

namespace harmlab::detail {

Eigen::SparseMatrix<double> laplacian_matrix(const OrientedGraph& g) {
  const auto n = g.num_vertices();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(g.num_edges()));
  for (VertexId v = 0; v < n; ++v) t.emplace_back(v, v, g.degree(v));
  for (const Edge& e : g.edges()) {
    t.emplace_back(e.tail, e.head, -1.0);
    t.emplace_back(e.head, e.tail, -1.0);
  }
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Eigen::MatrixXd dense_laplacian(const OrientedGraph& g) {
  const auto n = g.num_vertices();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (VertexId v = 0; v < n; ++v) m(v, v) = g.degree(v);
  for (const Edge& e : g.edges()) {
    m(e.tail, e.head) -= 1.0;
    m(e.head, e.tail) -= 1.0;
  }
  return m;
}

Eigen::MatrixXd dense_gradient(const OrientedGraph& g) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(g.num_edges(), g.num_vertices());
  for (EdgeId i = 0; i < g.num_edges(); ++i) {
    b(i, g.edge(i).tail) = -1.0;
    b(i, g.edge(i).head) = 1.0;
  }
  return b;
}

Spectrum dense_spectrum(const OrientedGraph& g, double scale) {
  if (g.num_vertices() > kDenseVertexLimit)
    throw Error(ErrorKind::DenseBudgetExceeded, "dense eigensolve limited to " +
                                                    std::to_string(kDenseVertexLimit) + " vertices");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_laplacian(g) / scale);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::EigensolveFailure, "symmetric eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

void project_zero_mean(Eigen::VectorXd& x) { x.array() -= x.mean(); }

ZeroMeanSolver::ZeroMeanSolver(const OrientedGraph& g, double scale, double tolerance)
    : matrix_(laplacian_matrix(g)), scale_(scale) {
  cg_.setTolerance(tolerance);
  cg_.setMaxIterations(std::max<Eigen::Index>(1000, 20 * static_cast<Eigen::Index>(g.num_vertices())));
  cg_.compute(matrix_);
}

Eigen::VectorXd ZeroMeanSolver::solve(const Eigen::VectorXd& rhs) const {
  Eigen::VectorXd b = rhs * scale_;
  project_zero_mean(b);
  if (b.norm() == 0.0) return Eigen::VectorXd::Zero(rhs.size());
  Eigen::VectorXd y = cg_.solve(b);
  if (cg_.info() != Eigen::Success || !y.allFinite()) {
    // The system is singular along constants; a tiny stall is normal, but a
    // large residual is a genuine failure.
    Eigen::VectorXd r = matrix_ * y - b;
    if (!y.allFinite() || r.norm() > 1e-8 * b.norm())
      throw Error(ErrorKind::NonConvergence, "conjugate gradient did not converge");
  }
  project_zero_mean(y);
  return y;
}

}  // namespace harmlab::detail
