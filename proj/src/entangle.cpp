#include "oamturb/entangle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "oamturb/errors.hpp"

namespace oamturb::entangle {

namespace {

constexpr double kSpectrumTolerance = 1e-8;

Matrix4c spin_flip() {
    // sigma_y (x) sigma_y
    Matrix4c y = Matrix4c::Zero();
    y(0, 3) = -1.0;
    y(1, 2) = 1.0;
    y(2, 1) = 1.0;
    y(3, 0) = -1.0;
    return y;
}

}  // namespace

ConcurrenceResult concurrence(const Matrix4c& rho) {
    static const Matrix4c flip = spin_flip();
    if ((rho - rho.adjoint()).norm() > 1e-10 * std::max(1.0, rho.norm())) {
        throw InvalidStateError("concurrence needs a Hermitian density matrix");
    }
    const Matrix4c r = rho * flip * rho.conjugate() * flip;
    const Eigen::ComplexEigenSolver<Matrix4c> solver(r, false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigenvalue solver failed on the concurrence matrix");
    }
    for (int i = 0; i < 4; ++i) {
        const Complex lambda = solver.eigenvalues()(i);
        if (lambda.real() < -kSpectrumTolerance || std::abs(lambda.imag()) > kSpectrumTolerance) {
            throw InvalidStateError("concurrence matrix has an eigenvalue off the non-negative axis");
        }
    }

    // sqrt(lambda_i) directly loses half the digits near zero. With
    // rho = L L^H the eigenvalues of R are those of A A^H, A = L^H Y L^*, so
    // the roots are the singular values of A.
    const Eigen::SelfAdjointEigenSolver<Matrix4c> hermitian(0.5 * (rho + rho.adjoint()));
    if (hermitian.eigenvalues().minCoeff() < -kSpectrumTolerance) {
        throw InvalidStateError("density matrix has a negative eigenvalue");
    }
    const Matrix4c factor =
        hermitian.eigenvectors() * hermitian.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
    const Matrix4c a = factor.adjoint() * flip * factor.conjugate();
    const Eigen::JacobiSVD<Matrix4c> svd(a);
    std::array<double, 4> roots{};
    for (int i = 0; i < 4; ++i) roots[i] = svd.singularValues()(i);
    std::sort(roots.begin(), roots.end(), std::greater<>());
    const double raw = roots[0] - roots[1] - roots[2] - roots[3];
    return {std::max(raw, 0.0), roots, raw <= 0.0};
}

ConcurrenceResult concurrence(const project::QubitState& state) { return concurrence(state.rho()); }

double sps_concurrence(int q, double chi) {
    if (!(chi >= 0.0)) throw DomainError("chi must be non-negative");
    const double x = chi;
    const double x2 = x * x;
    const double x3 = x2 * x;
    const double x4 = x3 * x;
    switch (q) {
        case 1:
            return (x + 1.0) / (x2 + x + 1.0);
        case 2:
            return 2.0 * (x + 1.0) * (3.0 * x2 + 2.0 * x + 2.0) /
                   (3.0 * x4 + 6.0 * x3 + 10.0 * x2 + 8.0 * x + 4.0);
        case 3: {
            const double x5 = x4 * x;
            const double x6 = x5 * x;
            return (x + 1.0) * (15.0 * x4 + 24.0 * x3 + 32.0 * x2 + 16.0 * x + 8.0) /
                   (5.0 * x6 + 15.0 * x5 + 39.0 * x4 + 56.0 * x3 + 48.0 * x2 + 24.0 * x + 8.0);
        }
        default:
            throw DomainError("single-phase-screen concurrence is available for q = 1, 2, 3");
    }
}

double chi(double W, Medium medium) {
    if (!(W >= 0.0)) throw DomainError("W must be non-negative");
    const double c = medium == Medium::Correlated ? kChiCorrelated : kChiUncorrelated;
    return c * std::pow(W, 5.0 / 3.0);
}

}  // namespace oamturb::entangle
