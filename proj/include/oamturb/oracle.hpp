#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oamturb/kernel.hpp"
#include "oamturb/linalg.hpp"
#include "oamturb/project.hpp"

// Brute-force checks that share no code path with the closed-form
// Gaussian algebra: tensor-grid quadrature and finite differences.
namespace oamturb::oracle {

enum class Scheme { GaussHermite, Trapezoid };

struct QuadratureSpec {
    int nodes_per_dim = 64;
    // Box halfwidth in units of 1 / (pi w) around the integrand's peak. Zero
    // picks the halfwidth where the envelope has fallen to exp(-40).
    double domain_halfwidth = 0.0;
    Scheme scheme = Scheme::Trapezoid;
    // Integrate the x and y components separately when the integrand
    // factorizes; false forces the full tensor grid.
    bool separate_components = true;
};

// Integrates a Gaussian-enveloped integrand over R^dims (dims <= 4). The
// envelope log|f| is probed by finite differences to place the grid.
// Throws InsufficientDomainError when the trapezoid box boundary carries
// more than 1e-12 of the peak magnitude, or when the envelope is not
// confining.
Complex integrate_enveloped(const std::function<Complex(std::span<const double>)>& f, int dims,
                            double length_unit, const QuadratureSpec& spec);

// Evaluates the propagated density matrix at each sample point
// (a1, a2, a3, a4) by direct quadrature of the propagation integral over u
// (correlated) or u1, u2 (uncorrelated).
std::vector<Complex> quad_propagate(const kernel::DotProductKernel& input, double K, double t,
                                    Medium medium, const QuadratureSpec& spec,
                                    const std::vector<std::array<Vec2, 4>>& samples);

// int int R(a, a, b, b) d^2a d^2b by quadrature.
Complex quad_trace(const kernel::DotProductKernel& kernel, const QuadratureSpec& spec);

// Integrates the named variables of an extended kernel numerically, with the
// remaining variables fixed to `kept_values` (in variable-list order) and the
// generating parameters fixed to mu.
Complex quad_marginalize(const kernel::ExtendedKernel& extended,
                         const std::vector<std::string>& variables,
                         const std::vector<Vec2>& kept_values, const VectorXc& mu,
                         const QuadratureSpec& spec);

// N_LG^4 times the mixed derivative d^q_mu1..d^q_mu4 of the form at mu = 0,
// by central differences in 50-digit arithmetic with three Richardson
// levels. step must lie in [1e-3, 1e-1]; throws PrecisionError when the
// extrapolation residual exceeds 1e-8 relative.
Complex fd_extract(const project::MuQuadraticForm& form, int q, double step);

}  // namespace oamturb::oracle
