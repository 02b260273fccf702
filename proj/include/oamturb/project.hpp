#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "oamturb/kernel.hpp"
#include "oamturb/linalg.hpp"

namespace oamturb::project {

enum class ModeSign : int { Plus = 1, Minus = -1 };

// Generating functions for the p = 0 LG modes of azimuthal index +-q, one sign
// per kernel slot (a1, a2, a3, a4). The ket slots a1, a3 use the conjugated
// generating function.
struct LGGeneratingSpec {
    std::array<ModeSign, 4> signs;
    int q = 1;
    double waist = 1.0;  // detection-mode radius w_0
    double t = 0.0;      // detection modes propagated to the same distance as the state
};

// H(mu) = constant * exp(sum_ij quad_ij mu_i mu_j) over mu_1..mu_4.
struct MuQuadraticForm {
    Complex constant;
    Matrix4c quad;
};

// (2^{1+q} / (pi q!))^{1/2}
double lg_normalization(int q);

// Closed-form overlap of the kernel with four LG generating functions.
// Throws IntegrabilityError when the combined form is not integrable.
MuQuadraticForm overlap_generating(const kernel::DotProductKernel& kernel,
                                   const LGGeneratingSpec& spec);

// N_LG^4 d^q_mu1 d^q_mu2 d^q_mu3 d^q_mu4 H(mu) at mu = 0, via truncated series
// exponentiation. series_order = 0 selects the minimal order 4q; a smaller
// positive order throws CapacityError.
Complex extract_element(const MuQuadraticForm& form, int q, int series_order = 0);

// Two-photon state on span{|+q>, |-q>} (x) span{|+q>, |-q>} in basis order
// [(+,+), (+,-), (-,+), (-,-)].
class QubitState {
public:
    // Validates Hermiticity (1e-10), unit trace (1e-10) and PSD (-1e-9);
    // throws InvalidStateError otherwise.
    explicit QubitState(const Matrix4c& rho);

    const Matrix4c& rho() const noexcept { return rho_; }

    // Four rows of four "re,im" entries separated by spaces, 17 significant digits.
    std::string to_text() const;
    static QubitState from_text(std::string_view text);

private:
    Matrix4c rho_;
};

struct ProjectionOptions {
    // Defaults to the kernel scale (pump waist).
    std::optional<double> mode_waist;
    int series_order = 0;
};

// Unnormalized 4x4 projection (element (r, c) uses ket signs of basis r on
// slots a1, a3 and bra signs of basis c on slots a2, a4).
Matrix4c projected_matrix(const kernel::DotProductKernel& kernel, int q, double t,
                          const ProjectionOptions& options = {});

// Projection divided by its trace. Throws NumericalError when the trace
// vanishes.
QubitState project_qubit(const kernel::DotProductKernel& kernel, int q, double t,
                         const ProjectionOptions& options = {});

}  // namespace oamturb::project
