#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "oamturb/linalg.hpp"

namespace oamturb::kernel {

// Biphoton density matrix in the plane-wave basis,
//
//   R(a1, a2, a3, a4) = prefactor * exp(-pi^2 w^2 sum_ij M_ij a_i . a_j),
//
// with a1, a3 the ket-side and a2, a4 the bra-side spatial frequencies of
// photons one and two. Every kernel produced here is rotationally invariant,
// so M acts on dot products rather than on vector components.
class DotProductKernel {
public:
    // coeff must be symmetric to 1e-12 relative; it is stored symmetrized.
    DotProductKernel(Complex prefactor, double scale, const Matrix4c& coeff);

    Complex prefactor() const noexcept { return prefactor_; }
    double scale() const noexcept { return scale_; }
    const Matrix4c& coeff() const noexcept { return coeff_; }

    Complex evaluate(const Vec2& a1, const Vec2& a2, const Vec2& a3, const Vec2& a4) const;
    Complex evaluate(const std::array<Vec2, 4>& a) const { return evaluate(a[0], a[1], a[2], a[3]); }

    // Same value computed from the 8x8 quadratic form over the x and y
    // components, M (x) I_2.
    Complex evaluate_components(const std::array<Vec2, 4>& a) const;

    // One key=value pair per line; complex numbers as "re,im", 17 significant
    // digits: prefactor, scale, m11, m12, m13, m14, m22, m23, m24, m33, m34, m44.
    std::string to_text() const;
    static DotProductKernel from_text(std::string_view text);

private:
    Complex prefactor_;
    double scale_;
    Matrix4c coeff_;
};

// psi_spdc(a1, a3) psi_spdc^*(a2, a4) for a Gaussian pump of radius w_p and a
// Gaussian-approximated phase-matching function with crystal parameter beta.
// beta = 0 is accepted here but the result cannot be traced.
DotProductKernel spdc_kernel(double pump_waist, double beta);

// Distance from the Hermitian symmetry R(a1,a2,a3,a4) = R^*(a2,a1,a4,a3):
// ||P M^* P - M||_F + |Im prefactor| / |prefactor|, P swapping 1<->2 and 3<->4.
double hermiticity_defect(const DotProductKernel& kernel);

// int int R(a, a, b, b) d^2a d^2b in closed form. Throws DivergenceError when
// the restricted form is not integrable.
Complex trace(const DotProductKernel& kernel);

// True when the real part of a complex symmetric matrix is positive definite
// with margin 1e-10 * ||Re M||.
bool real_part_positive_definite(const MatrixXc& m);

// Gaussian kernel over an arbitrary list of two-dimensional variables with
// optional linear sources,
//
//   prefactor * exp(-pi^2 w^2 sum_ij M_ij v_i . v_j + sum_{v,c} v_c (S mu)_{v,c} + mu^T B mu),
//
// where S has one row per vector component (row 2v is x, row 2v + 1 is y)
// and one column per generating parameter mu_k. Sources need not be
// rotationally invariant even though M is.
class ExtendedKernel {
public:
    ExtendedKernel(Complex prefactor, double scale, std::vector<std::string> variables,
                   MatrixXc coeff);
    ExtendedKernel(Complex prefactor, double scale, std::vector<std::string> variables,
                   MatrixXc coeff, MatrixXc sources, MatrixXc source_quad);

    // Variables named a1..a4, no sources.
    static ExtendedKernel from_dot_product(const DotProductKernel& kernel);

    Complex prefactor() const noexcept { return prefactor_; }
    double scale() const noexcept { return scale_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const MatrixXc& coeff() const noexcept { return coeff_; }
    const MatrixXc& sources() const noexcept { return sources_; }
    const MatrixXc& source_quad() const noexcept { return source_quad_; }
    Eigen::Index variable_count() const noexcept { return coeff_.rows(); }
    Eigen::Index source_count() const noexcept { return sources_.cols(); }

    // Throws DomainError for an unknown name.
    Eigen::Index index_of(std::string_view name) const;

    Complex evaluate(const std::vector<Vec2>& values, const VectorXc& mu) const;
    Complex evaluate(const std::vector<Vec2>& values) const;

    // Requires exactly four variables and vanishing sources.
    DotProductKernel to_dot_product() const;

private:
    Complex prefactor_;
    double scale_;
    std::vector<std::string> variables_;
    MatrixXc coeff_;
    MatrixXc sources_;
    MatrixXc source_quad_;
};

// Integrates the named variables out of the kernel by completing the square.
// Variables are eliminated one pivot at a time in the order given; each
// elimination of a two-dimensional variable with pivot p multiplies the
// prefactor by pi / (pi^2 w^2 p). The surviving coefficients are the Schur
// complement, the surviving sources are shifted, and the eliminated sources
// fold into the quadratic form over mu. Throws IntegrabilityError naming the
// offending variable when the block's real part is not positive definite.
ExtendedKernel gaussian_marginalize(const ExtendedKernel& extended,
                                    const std::vector<std::string>& variables);

}  // namespace oamturb::kernel
