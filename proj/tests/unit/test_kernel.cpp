#include <doctest.h>

#include <cmath>
#include <random>

#include "oamturb/errors.hpp"
#include "oamturb/kernel.hpp"
#include "oamturb/oracle.hpp"

using namespace oamturb;
using namespace oamturb::kernel;

namespace {

Matrix4c swap_ket_bra(const Matrix4c& m) {
    static const int p[4] = {1, 0, 3, 2};
    Matrix4c out;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) out(i, j) = m(p[i], p[j]);
    }
    return out;
}

// Hermitian kernel with a comfortably positive-definite real part.
DotProductKernel random_hermitian(std::mt19937& rng, double imag_scale = 0.5) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix4c x;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) x(i, j) = x(j, i) = Complex(0.4 * u(rng), imag_scale * u(rng));
    }
    Matrix4c m = 0.5 * (x + swap_ket_bra(x.conjugate()));
    m += 2.0 * Matrix4c::Identity();
    return DotProductKernel(Complex(1.0 + u(rng) * 0.5, 0.0), 0.8, m);
}

std::array<Vec2, 4> random_point(std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 0.3);
    std::array<Vec2, 4> a;
    for (auto& v : a) v = Vec2(n(rng), n(rng));
    return a;
}

}  // namespace

TEST_CASE("spdc kernel structure") {
    const auto k = spdc_kernel(1.3, 0.2);
    CHECK(hermiticity_defect(k) == 0.0);
    CHECK(k.evaluate(Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero()) == k.prefactor());
    CHECK(k.prefactor().real() == doctest::Approx(8 * kPi * kPi * std::pow(1.3, 4) * 0.2));
    CHECK(k.coeff()(0, 0).real() == doctest::Approx(1.1));
    CHECK(k.coeff()(0, 2).real() == doctest::Approx(0.9));
    CHECK(std::abs(k.coeff()(0, 1)) == 0.0);
    CHECK_THROWS_AS(spdc_kernel(1.0, -0.1), DomainError);
    CHECK_THROWS_AS(spdc_kernel(0.0, 0.1), DomainError);
}

TEST_CASE("spdc kernel trace is one for every waist and beta") {
    // Hand evaluation: restricted determinant (2 + b)^2 - (2 - b)^2 = 8b
    // cancels the 8 pi^2 w^4 b prefactor.
    for (double w : {0.3, 1.0, 4.0}) {
        for (double beta : {1e-4, 1e-2, 0.5, 3.0}) {
            const Complex tr = trace(spdc_kernel(w, beta));
            CHECK(tr.real() == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(std::abs(tr.imag()) < 1e-12);
        }
    }
}

TEST_CASE("thin-crystal spdc kernel has no trace") {
    CHECK_NOTHROW(spdc_kernel(1.0, 0.0));
    CHECK_THROWS_AS(trace(spdc_kernel(1.0, 0.0)), DivergenceError);
}

TEST_CASE("evaluate matches term-by-term summation and the component form") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto k = random_hermitian(rng);
        const auto a = random_point(rng);
        Complex exponent = 0.0;
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) exponent += k.coeff()(i, j) * a[i].dot(a[j]);
        }
        const double w = k.scale();
        const Complex direct = k.prefactor() * std::exp(-kPi * kPi * w * w * exponent);
        CHECK(std::abs(k.evaluate(a) - direct) < 1e-14 * std::abs(direct));
        CHECK(std::abs(k.evaluate_components(a) - direct) < 1e-13 * std::abs(direct));
    }
}

TEST_CASE("Hermitian kernels conjugate under the ket-bra swap") {
    std::mt19937 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto k = random_hermitian(rng);
        CHECK(hermiticity_defect(k) < 1e-15);
        const auto a = random_point(rng);
        const Complex lhs = k.evaluate(a[0], a[1], a[2], a[3]);
        const Complex rhs = std::conj(k.evaluate(a[1], a[0], a[3], a[2]));
        CHECK(std::abs(lhs - rhs) < 1e-14 * std::abs(lhs));
    }
}

TEST_CASE("Hermiticity defect grows linearly with a perturbation") {
    const auto base = spdc_kernel(1.0, 0.3);
    for (double eps : {1e-6, 1e-4, 1e-2}) {
        Matrix4c m = base.coeff();
        m(0, 0) += Complex(0.0, eps);
        // Entries (1,1) and (2,2) of P M* P - M both pick up -i eps.
        const double defect = hermiticity_defect(DotProductKernel(base.prefactor(), 1.0, m));
        CHECK(defect == doctest::Approx(std::sqrt(2.0) * eps).epsilon(1e-9));
    }
}

TEST_CASE("coefficients must be symmetric") {
    Matrix4c m = Matrix4c::Identity();
    m(0, 1) = 0.5;
    CHECK_THROWS_AS(DotProductKernel(1.0, 1.0, m), DomainError);
}

TEST_CASE("text round trip is exact") {
    std::mt19937 rng(5);
    const auto k = random_hermitian(rng);
    const auto back = DotProductKernel::from_text(k.to_text());
    CHECK(back.prefactor() == k.prefactor());
    CHECK(back.scale() == k.scale());
    CHECK(back.coeff() == k.coeff());
    CHECK(k.to_text().find("m13=") != std::string::npos);
    CHECK_THROWS(DotProductKernel::from_text("prefactor=1,0\n"));
}

TEST_CASE("trace matches quadrature for random Hermitian kernels") {
    std::mt19937 rng(6);
    oracle::QuadratureSpec spec;
    spec.nodes_per_dim = 48;
    for (int trial = 0; trial < 5; ++trial) {
        const auto k = random_hermitian(rng);
        const Complex exact = trace(k);
        CHECK(std::abs(exact.imag()) < 1e-12 * std::abs(exact));
        const Complex numeric = oracle::quad_trace(k, spec);
        CHECK(std::abs(numeric - exact) < 1e-6 * std::abs(exact));
    }
}

TEST_CASE("marginalizing a decoupled variable only rescales the prefactor") {
    const auto k = spdc_kernel(1.0, 0.4);
    MatrixXc m = MatrixXc::Zero(5, 5);
    m.topLeftCorner(4, 4) = k.coeff();
    m(4, 4) = Complex(2.0, 0.5);
    const ExtendedKernel ext(k.prefactor(), 1.0, {"a1", "a2", "a3", "a4", "u"}, m);
    const auto out = gaussian_marginalize(ext, {"u"});
    REQUIRE(out.variable_count() == 4);
    CHECK((out.coeff() - k.coeff()).norm() == 0.0);
    // int exp(-pi^2 w^2 p |u|^2) d^2u = 1 / (pi w^2 p)
    const Complex expected = k.prefactor() / (kPi * Complex(2.0, 0.5));
    CHECK(std::abs(out.prefactor() - expected) < 1e-15 * std::abs(expected));
}

TEST_CASE("marginalization order does not matter") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    MatrixXc m(6, 6);
    for (int i = 0; i < 6; ++i) {
        for (int j = i; j < 6; ++j) m(i, j) = m(j, i) = Complex(u(rng), u(rng));
        m(i, i) += 3.0;
    }
    MatrixXc sources(12, 2);
    for (int i = 0; i < 12; ++i) sources.row(i) << Complex(u(rng), u(rng)), Complex(u(rng), u(rng));
    const ExtendedKernel ext(1.7, 0.9, {"a1", "a2", "a3", "a4", "u1", "u2"}, m, sources,
                             MatrixXc::Zero(2, 2));
    const auto a = gaussian_marginalize(gaussian_marginalize(ext, {"u1"}), {"u2"});
    const auto b = gaussian_marginalize(gaussian_marginalize(ext, {"u2"}), {"u1"});
    const auto c = gaussian_marginalize(ext, {"u1", "u2"});
    for (const auto* other : {&b, &c}) {
        CHECK(std::abs(a.prefactor() - other->prefactor()) < 1e-12 * std::abs(a.prefactor()));
        CHECK((a.coeff() - other->coeff()).norm() < 1e-12 * a.coeff().norm());
        CHECK((a.sources() - other->sources()).norm() < 1e-12 * a.sources().norm());
        CHECK((a.source_quad() - other->source_quad()).norm() < 1e-12 * a.source_quad().norm());
    }
}

TEST_CASE("marginalization agrees with quadrature on random extensions") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    oracle::QuadratureSpec spec;
    spec.scheme = oracle::Scheme::GaussHermite;
    spec.nodes_per_dim = 28;
    for (int trial = 0; trial < 3; ++trial) {
        MatrixXc m(4, 4);
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) m(i, j) = m(j, i) = Complex(0.4 * u(rng), 0.3 * u(rng));
            m(i, i) += 1.5;
        }
        MatrixXc sources(8, 1);
        for (int i = 0; i < 8; ++i) sources(i, 0) = Complex(u(rng), u(rng));
        const ExtendedKernel ext(Complex(1.0, 0.2), 1.0, {"a1", "a2", "x", "y"}, m, sources,
                                 MatrixXc::Zero(1, 1));
        const auto closed = gaussian_marginalize(ext, {"x", "y"});
        VectorXc mu(1);
        mu << Complex(0.7, -0.4);
        const std::vector<Vec2> kept{Vec2(0.1, -0.2), Vec2(0.05, 0.15)};
        const Complex expected = closed.evaluate(kept, mu);
        const Complex numeric = oracle::quad_marginalize(ext, {"x", "y"}, kept, mu, spec);
        CHECK(std::abs(numeric - expected) < 1e-8 * std::abs(expected));
    }
}

TEST_CASE("non-integrable block names the variable") {
    MatrixXc m = MatrixXc::Identity(5, 5);
    m(4, 4) = Complex(-1.0, 0.3);
    const ExtendedKernel ext(1.0, 1.0, {"a1", "a2", "a3", "a4", "u"}, m);
    try {
        gaussian_marginalize(ext, {"u"});
        FAIL("expected an integrability error");
    } catch (const IntegrabilityError& e) {
        CHECK(e.variable() == "u");
    }
    CHECK_THROWS_AS(gaussian_marginalize(ext, {"v"}), DomainError);
}

TEST_CASE("marginalization preserves Hermiticity") {
    std::mt19937 rng(10);
    const auto k = random_hermitian(rng, 0.3);
    // Auxiliary variable coupled symmetrically to ket and bra slots.
    MatrixXc m = MatrixXc::Zero(5, 5);
    m.topLeftCorner(4, 4) = k.coeff();
    m(4, 4) = 2.0;
    for (int i = 0; i < 4; ++i) m(i, 4) = m(4, i) = 0.3;
    const auto out = gaussian_marginalize(ExtendedKernel(k.prefactor(), k.scale(), {"a1", "a2", "a3", "a4", "u"}, m), {"u"})
                         .to_dot_product();
    CHECK(hermiticity_defect(out) < 1e-14);
}
