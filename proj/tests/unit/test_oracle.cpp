#include <doctest.h>

#include <cmath>
#include <random>

#include "oamturb/errors.hpp"
#include "oamturb/evolve.hpp"
#include "oamturb/kernel.hpp"
#include "oamturb/oracle.hpp"
#include "oamturb/project.hpp"

using namespace oamturb;
using namespace oamturb::oracle;

namespace {

std::vector<std::array<Vec2, 4>> random_points(int count, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 0.3);
    std::vector<std::array<Vec2, 4>> points(count);
    for (auto& p : points) {
        for (auto& v : p) v = Vec2(n(rng), n(rng));
    }
    return points;
}

double worst_relative(const std::vector<Complex>& numeric, const kernel::DotProductKernel& exact,
                      const std::vector<std::array<Vec2, 4>>& points) {
    double worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Complex e = exact.evaluate(points[i]);
        worst = std::max(worst, std::abs(numeric[i] - e) / std::abs(e));
    }
    return worst;
}

}  // namespace

TEST_CASE("complex Gaussian integrals in closed form") {
    // int exp(-x^T A x + b^T x) = pi^{d/2} / sqrt(det A) exp(b^T A^{-1} b / 4)
    Eigen::Matrix2cd a;
    a << Complex(2.0, 0.5), Complex(0.3, -0.2), Complex(0.3, -0.2), Complex(1.0, 1.0);
    Eigen::Vector2cd b(Complex(0.4, 0.1), Complex(-0.2, 0.6));
    const auto f = [&](std::span<const double> x) {
        const Eigen::Vector2cd v(x[0], x[1]);
        return std::exp(-(v.transpose() * a * v)(0) + (b.transpose() * v)(0));
    };
    const Complex exact = kPi / std::sqrt(a.determinant()) *
                          std::exp((b.transpose() * a.inverse() * b)(0) / 4.0);
    for (auto scheme : {Scheme::Trapezoid, Scheme::GaussHermite}) {
        QuadratureSpec spec;
        spec.scheme = scheme;
        CHECK(std::abs(integrate_enveloped(f, 2, 1.0, spec) - exact) < 1e-12 * std::abs(exact));
    }
}

TEST_CASE("a box that is too small is reported") {
    const auto f = [](std::span<const double> x) { return Complex(std::exp(-x[0] * x[0])); };
    QuadratureSpec spec;
    spec.domain_halfwidth = 2.0;
    CHECK_THROWS_AS(integrate_enveloped(f, 1, 1.0, spec), InsufficientDomainError);
    spec.domain_halfwidth = 7.0;
    CHECK(integrate_enveloped(f, 1, 1.0, spec).real() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("invalid quadrature requests") {
    const auto grow = [](std::span<const double> x) { return Complex(std::exp(x[0] * x[0])); };
    CHECK_THROWS_AS(integrate_enveloped(grow, 1, 1.0, {}), InsufficientDomainError);
    const auto f = [](std::span<const double>) { return Complex(1.0); };
    CHECK_THROWS_AS(integrate_enveloped(f, 5, 1.0, {}), DomainError);
    QuadratureSpec coarse;
    coarse.nodes_per_dim = 4;
    CHECK_THROWS_AS(integrate_enveloped(f, 1, 1.0, coarse), DomainError);
}

TEST_CASE("propagation by quadrature matches the Gaussian algebra") {
    const auto input = kernel::spdc_kernel(1.0, 1e-2);
    const auto points = random_points(5, 41);
    // Stronger channels oscillate faster across the envelope and need a
    // finer grid.
    for (auto medium : {Medium::Correlated, Medium::Uncorrelated}) {
        for (auto [K, t, nodes] : {std::tuple{1.0, 0.5, 64}, std::tuple{10.0, 1.0, 256}}) {
            QuadratureSpec spec;
            spec.nodes_per_dim = nodes;
            const auto exact = evolve::propagate_general(input, K, t, medium);
            CHECK(worst_relative(quad_propagate(input, K, t, medium, spec, points), exact, points) < 1e-6);
        }
    }
}

TEST_CASE("full tensor grid agrees with the separated quadrature") {
    const auto input = kernel::spdc_kernel(1.0, 0.1);
    const auto points = random_points(2, 42);
    QuadratureSpec full;
    full.separate_components = false;
    full.scheme = Scheme::GaussHermite;
    full.nodes_per_dim = 20;
    for (auto medium : {Medium::Correlated, Medium::Uncorrelated}) {
        const auto exact = evolve::propagate_general(input, 1.0, 0.5, medium);
        CHECK(worst_relative(quad_propagate(input, 1.0, 0.5, medium, full, points), exact, points) < 1e-6);
    }
}

TEST_CASE("weak turbulence reproduces free propagation") {
    const auto input = kernel::spdc_kernel(1.0, 0.2);
    const auto points = random_points(3, 43);
    const auto free = evolve::free_propagation(input, 0.5);
    for (auto medium : {Medium::Correlated, Medium::Uncorrelated}) {
        CHECK(worst_relative(quad_propagate(input, 1e-7, 0.5, medium, {}, points), free, points) < 1e-4);
    }
}

TEST_CASE("uncorrelated propagation factorizes for a product input") {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = m(1, 1) = 1.2;
    m(0, 1) = m(1, 0) = 0.4;
    m(2, 2) = m(3, 3) = 0.9;
    m(2, 3) = m(3, 2) = -0.3;
    const kernel::DotProductKernel input(1.0, 1.0, m);
    const Vec2 a1(0.1, -0.2), a2(0.05, 0.3), a3(-0.15, 0.1), a4(0.2, 0.0), zero(0.0, 0.0);
    const auto values = quad_propagate(input, 2.0, 0.4, Medium::Uncorrelated, {},
                                       {{a1, a2, a3, a4}, {zero, zero, zero, zero}, {a1, a2, zero, zero},
                                        {zero, zero, a3, a4}});
    CHECK(std::abs(values[0] * values[1] - values[2] * values[3]) < 1e-12 * std::abs(values[0] * values[1]));
}

TEST_CASE("quadrature respects the Hermitian sample symmetry") {
    const auto input = kernel::spdc_kernel(1.0, 0.05);
    const auto points = random_points(3, 44);
    std::vector<std::array<Vec2, 4>> swapped;
    for (const auto& p : points) swapped.push_back({p[1], p[0], p[3], p[2]});
    for (auto medium : {Medium::Correlated, Medium::Uncorrelated}) {
        const auto a = quad_propagate(input, 1.0, 1.0, medium, {}, points);
        const auto b = quad_propagate(input, 1.0, 1.0, medium, {}, swapped);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - std::conj(b[i])) < 1e-10 * std::abs(a[i]));
    }
}

TEST_CASE("doubling the node count does not move the result") {
    const auto input = kernel::spdc_kernel(1.0, 1e-2);
    const auto points = random_points(3, 45);
    QuadratureSpec base;
    QuadratureSpec fine;
    fine.nodes_per_dim = 2 * base.nodes_per_dim;
    for (auto medium : {Medium::Correlated, Medium::Uncorrelated}) {
        const auto a = quad_propagate(input, 1.0, 0.5, medium, base, points);
        const auto b = quad_propagate(input, 1.0, 0.5, medium, fine, points);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-8 * std::abs(b[i]));
    }
}

TEST_CASE("propagation quadrature needs a positive weight width") {
    const auto input = kernel::spdc_kernel(1.0, 0.1);
    CHECK_THROWS_AS(quad_propagate(input, 0.0, 1.0, Medium::Correlated, {}, {}), DomainError);
}

TEST_CASE("finite-difference extraction") {
    project::MuQuadraticForm zero{1.0, Matrix4c::Zero()};
    CHECK(std::abs(fd_extract(zero, 1, 1e-2)) < 1e-30);

    project::MuQuadraticForm pairs{1.0, Matrix4c::Zero()};
    const Complex b(0.6, 0.2);
    pairs.quad(0, 2) = pairs.quad(2, 0) = b;
    pairs.quad(1, 3) = pairs.quad(3, 1) = b;
    const double n = project::lg_normalization(1);
    const Complex expected = n * n * n * n * 4.0 * b * b;
    CHECK(std::abs(fd_extract(pairs, 1, 1e-2) - expected) < 1e-12 * std::abs(expected));

    CHECK_THROWS_AS(fd_extract(pairs, 1, 1e-4), DomainError);
    CHECK_THROWS_AS(fd_extract(pairs, 0, 1e-2), DomainError);
}

TEST_CASE("finite differences flag an unresolved extrapolation") {
    // Large entries make the stencil error dominate at the widest step.
    project::MuQuadraticForm steep{1.0, Matrix4c::Constant(Complex(400.0, 300.0))};
    CHECK_THROWS_AS(fd_extract(steep, 3, 1e-1), PrecisionError);
}
