#pragma once

#include <array>

#include "oamturb/kernel.hpp"
#include "oamturb/linalg.hpp"

namespace oamturb::evolve {

// Coefficient blocks of the thin-crystal SPDC state after propagation to
// normalized distance t with turbulence strength K.
//   uncorrelated media: values = {N0, N1, N2, N3, N4}
//   correlated medium:  values = {H0, H1, H2, H3} (values[4] unused, zero)
struct EvolvedCoefficients {
    Medium scenario;
    double K;
    double t;
    std::array<Complex, 5> values;
};

EvolvedCoefficients uncorrelated_coefficients(double K, double t);
EvolvedCoefficients correlated_coefficients(double K, double t);

// Closed-form evolved thin-crystal SPDC kernels. The factor beta has already
// been dropped from the normalization, so the prefactor at t = 0 is
// 8 pi^2 w_p^4.
kernel::DotProductKernel evolve_spdc_uncorrelated(double K, double t, double pump_waist);
kernel::DotProductKernel evolve_spdc_correlated(double K, double t, double pump_waist);
kernel::DotProductKernel evolve_spdc(Medium medium, double K, double t, double pump_waist);

// Below this value of K t the propagation weight is treated as a delta
// function and only the free-space phases are applied.
inline constexpr double kFreePropagationThreshold = 1e-12;

// Integrand of the propagation solution before the auxiliary integration:
// the input kernel shifted by u (correlated) or by u1 on photon one and u2
// on photon two (uncorrelated), with free-space phases, cross phases,
// t^3 damping and the 1/(2 K t) Gaussian weight. Variables are
// a1..a4 followed by u, or by u1, u2. Requires K t > 0.
kernel::ExtendedKernel propagation_integrand(const kernel::DotProductKernel& input, double K,
                                             double t, Medium medium);

// Propagates an arbitrary Gaussian input kernel through turbulence by
// marginalizing the auxiliary variables of propagation_integrand. The
// kernel's scale is taken as the beam radius w_0 that normalizes K and t.
kernel::DotProductKernel propagate_general(const kernel::DotProductKernel& input, double K,
                                           double t, Medium medium);

// Multiplies the input by exp[i pi^2 w^2 t (|a1|^2 - |a2|^2 + |a3|^2 - |a4|^2)].
kernel::DotProductKernel free_propagation(const kernel::DotProductKernel& input, double t);

}  // namespace oamturb::evolve
