#include "oamturb/quadrature.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "oamturb/errors.hpp"

namespace oamturb {

namespace {

// Symmetric Jacobi matrix with zero diagonal and the given off-diagonal;
// nodes are its eigenvalues and weights mu0 * (first eigenvector component)^2.
void golub_welsch(const Eigen::VectorXd& off_diagonal, double mu0, std::vector<double>& nodes,
                  std::vector<double>& weights) {
    const auto n = off_diagonal.size() + 1;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        jacobi(i, i + 1) = off_diagonal(i);
        jacobi(i + 1, i) = off_diagonal(i);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    nodes.resize(n);
    weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        nodes[i] = solver.eigenvalues()(i);
        const double v = solver.eigenvectors()(0, i);
        weights[i] = mu0 * v * v;
    }
}

}  // namespace

GaussLegendre::GaussLegendre(int nodes) {
    if (nodes < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
    Eigen::VectorXd off(nodes - 1);
    for (int k = 1; k < nodes; ++k) {
        off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    }
    golub_welsch(off, 2.0, nodes_, weights_);
}

GaussHermite::GaussHermite(int nodes) {
    if (nodes < 1) throw DomainError("Gauss-Hermite rule needs at least one node");
    Eigen::VectorXd off(nodes - 1);
    for (int k = 1; k < nodes; ++k) {
        off(k - 1) = std::sqrt(0.5 * k);
    }
    golub_welsch(off, std::sqrt(std::numbers::pi), nodes_, weights_);
}

}  // namespace oamturb
