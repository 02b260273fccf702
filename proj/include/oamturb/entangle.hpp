#pragma once

#include <array>

#include "oamturb/linalg.hpp"
#include "oamturb/project.hpp"

namespace oamturb::entangle {

struct ConcurrenceResult {
    double value;
    std::array<double, 4> eigenvalue_roots;  // sqrt(lambda_i), descending
    bool clamped;                            // max{..., 0} selected the zero
};

// Wootters concurrence from the spectrum of rho (sy x sy) rho^* (sy x sy),
// with rho^* the entrywise conjugate in the computational basis. Eigenvalues
// with real part below -1e-8 or imaginary part above 1e-8 throw
// InvalidStateError, as does a non-Hermitian or non-PSD rho. The roots
// themselves are taken as singular values of a factorized form, which keeps
// full precision for nearly pure states.
ConcurrenceResult concurrence(const project::QubitState& state);
ConcurrenceResult concurrence(const Matrix4c& rho);

// Single-phase-screen concurrence curves C_1, C_2, C_3 as functions of chi.
double sps_concurrence(int q, double chi);

// chi = 0.456 W^{5/3} for uncorrelated media, 0.912 W^{5/3} for a correlated one.
double chi(double W, Medium medium);

inline constexpr double kChiUncorrelated = 0.456;
inline constexpr double kChiCorrelated = 0.912;

}  // namespace oamturb::entangle
