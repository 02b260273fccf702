#include "oamturb/project.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "oamturb/errors.hpp"
#include "oamturb/series.hpp"

namespace oamturb::project {

namespace {

constexpr std::array<std::array<ModeSign, 2>, 4> kBasis{{
    {ModeSign::Plus, ModeSign::Plus},
    {ModeSign::Plus, ModeSign::Minus},
    {ModeSign::Minus, ModeSign::Plus},
    {ModeSign::Minus, ModeSign::Minus},
}};

constexpr std::array<bool, 4> kConjugatedSlot{true, false, true, false};

void require_q(int q) {
    if (q < 1) throw DomainError("azimuthal magnitude q must be at least 1");
}

}  // namespace

double lg_normalization(int q) {
    require_q(q);
    return std::sqrt(std::pow(2.0, 1 + q) / (kPi * std::tgamma(q + 1.0)));
}

MuQuadraticForm overlap_generating(const kernel::DotProductKernel& kernel,
                                   const LGGeneratingSpec& spec) {
    if (!(spec.waist > 0.0)) throw DomainError("mode waist must be positive");
    const double w = kernel.scale();
    const double ratio = spec.waist / w;

    // G_s(a; mu) = pi w0 exp[i pi w0 (a_x + s i a_y) mu - pi^2 w0^2 |a|^2 (1 - i t)],
    // conjugated on ket slots. The Gaussian envelope joins the kernel's
    // quadratic form (expressed in units of the kernel scale); the rest is a
    // linear source per component.
    MatrixXc m = kernel.coeff();
    MatrixXc sources = MatrixXc::Zero(8, 4);
    for (int slot = 0; slot < 4; ++slot) {
        const bool conj = kConjugatedSlot[slot];
        const double sign = static_cast<double>(spec.signs[slot]);
        m(slot, slot) += ratio * ratio * (conj ? Complex(1.0, spec.t) : Complex(1.0, -spec.t));
        const Complex lead = (conj ? -1.0 : 1.0) * kI * kPi * spec.waist;
        const double effective_sign = conj ? -sign : sign;
        sources(2 * slot, slot) = lead;
        sources(2 * slot + 1, slot) = lead * kI * effective_sign;
    }
    const double mode_amplitude = kPi * spec.waist;
    const Complex prefactor = kernel.prefactor() * std::pow(mode_amplitude, 4);
    const kernel::ExtendedKernel integrand(prefactor, w, {"a1", "a2", "a3", "a4"}, std::move(m),
                                           std::move(sources), MatrixXc::Zero(4, 4));
    const auto reduced = kernel::gaussian_marginalize(integrand, {"a1", "a2", "a3", "a4"});
    return {reduced.prefactor(), Matrix4c(reduced.source_quad())};
}

Complex extract_element(const MuQuadraticForm& form, int q, int series_order) {
    require_q(q);
    const int needed = 4 * q;
    const int order = series_order == 0 ? needed : series_order;
    if (order < needed) {
        throw CapacityError("extracting q = " + std::to_string(q) + " needs series order " +
                            std::to_string(needed) + ", configured " + std::to_string(order));
    }
    const auto generating = series::exp(series::quadratic_form(MatrixXc(form.quad), order));
    const std::array<int, 4> exponents{q, q, q, q};
    const double n = lg_normalization(q);
    return form.constant * (n * n * n * n) * generating.derivative_at_zero(exponents);
}

QubitState::QubitState(const Matrix4c& rho) : rho_(rho) {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw InvalidStateError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) {
        throw InvalidStateError("density matrix does not have unit trace");
    }
    const Matrix4c hermitian = 0.5 * (rho + rho.adjoint());
    const Eigen::SelfAdjointEigenSolver<Matrix4c> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues()(0) < -1e-9) {
        throw InvalidStateError("density matrix has a negative eigenvalue");
    }
}

std::string QubitState::to_text() const {
    std::ostringstream out;
    char buf[96];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", rho_(r, c).real(), rho_(r, c).imag());
            out << buf << (c == 3 ? '\n' : ' ');
        }
    }
    return out.str();
}

QubitState QubitState::from_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    Matrix4c rho;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            std::string token;
            if (!(in >> token)) throw DomainError("qubit state block needs 16 entries");
            const auto comma = token.find(',');
            if (comma == std::string::npos) throw DomainError("expected re,im entry: " + token);
            try {
                std::size_t used_re = 0;
                std::size_t used_im = 0;
                const std::string re = token.substr(0, comma);
                const std::string im = token.substr(comma + 1);
                rho(r, c) = Complex(std::stod(re, &used_re), std::stod(im, &used_im));
                if (used_re != re.size() || used_im != im.size()) throw std::invalid_argument(token);
            } catch (const std::logic_error&) {
                throw DomainError("malformed qubit state entry: " + token);
            }
        }
    }
    return QubitState(rho);
}

Matrix4c projected_matrix(const kernel::DotProductKernel& kernel, int q, double t,
                          const ProjectionOptions& options) {
    require_q(q);
    const double waist = options.mode_waist.value_or(kernel.scale());
    Matrix4c rho;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            LGGeneratingSpec spec{{kBasis[r][0], kBasis[c][0], kBasis[r][1], kBasis[c][1]},
                                  q, waist, t};
            rho(r, c) = extract_element(overlap_generating(kernel, spec), q, options.series_order);
        }
    }
    return rho;
}

QubitState project_qubit(const kernel::DotProductKernel& kernel, int q, double t,
                         const ProjectionOptions& options) {
    Matrix4c rho = projected_matrix(kernel, q, t, options);
    const Complex tr = rho.trace();
    if (!(std::abs(tr) > 0.0) || !std::isfinite(std::abs(tr))) {
        throw NumericalError("projection onto the qubit subspace has vanishing trace");
    }
    rho /= tr;
    return QubitState(rho);
}

}  // namespace oamturb::project
