#include <doctest.h>

#include <cmath>
#include <random>

#include "oamturb/errors.hpp"
#include "oamturb/params.hpp"

using namespace oamturb;
using namespace oamturb::params;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("fried parameter reference value") {
    // 30-digit evaluation of the formula.
    CHECK(fried_parameter(1e-14, 633e-9, 1e3) == doctest::Approx(0.0268445532278004).epsilon(1e-12));
}

TEST_CASE("fried parameter halves when z grows by 2^(5/3)") {
    const double r = fried_parameter(3e-15, 1550e-9, 2e3);
    CHECK(fried_parameter(3e-15, 1550e-9, 2e3 * std::pow(2.0, 5.0 / 3.0)) ==
          doctest::Approx(r / 2).epsilon(1e-13));
}

TEST_CASE("fried parameter rejects non-positive inputs") {
    CHECK_THROWS_AS(fried_parameter(0.0, 633e-9, 1e3), DomainError);
    CHECK_THROWS_AS(fried_parameter(1e-14, -1.0, 1e3), DomainError);
    CHECK_THROWS_AS(fried_parameter(1e-14, 633e-9, 0.0), DomainError);
}

TEST_CASE("rytov variance") {
    CHECK(rytov_variance(0.0, 1e7, 1e3) == 0.0);
    CHECK(rytov_variance(1e-14, 2 * kPi / 633e-9, 1e3) ==
          doctest::Approx(0.565992438928614).epsilon(1e-12));
    const double base = rytov_variance(2e-15, 1e7, 500.0);
    CHECK(rytov_variance(2e-15, 1e7, 1000.0) == doctest::Approx(base * std::pow(2.0, 11.0 / 6.0)));
    CHECK_THROWS_AS(rytov_variance(-1e-15, 1e7, 1e3), DomainError);
}

TEST_CASE("rytov variance from W and K") {
    CHECK(rytov_from_wk(1.0, 1.0) == doctest::Approx(2.57).epsilon(1e-15));
    CHECK(rytov_from_wk(1.0, 1e30) < 1e-20);
    CHECK_THROWS_AS(rytov_from_wk(1.0, 0.0), DomainError);
}

TEST_CASE("turbulence strength") {
    CHECK(turbulence_strength(0.0, 0.01, 633e-9) == 0.0);
    CHECK(turbulence_strength(1e-14, 0.01, 633e-9) == doctest::Approx(0.165346384178293).epsilon(1e-12));
    CHECK(turbulence_strength(3e-14, 0.01, 633e-9) ==
          doctest::Approx(3 * turbulence_strength(1e-14, 0.01, 633e-9)).epsilon(1e-14));
}

TEST_CASE("weak scintillation distance") {
    CHECK(weak_scint_t(1.0, 1.72) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(weak_scint_t(0.0, 3.0) == 0.0);
    CHECK(weak_scint_t(0.7, 2.0) * 2.0 == doctest::Approx(weak_scint_t(0.7, 5.0) * 5.0).epsilon(1e-14));
    CHECK_THROWS_AS(weak_scint_t(1.0, 0.0), DomainError);
}

TEST_CASE("W equals one when the waist equals r0") {
    const double r0 = fried_parameter(1e-14, 633e-9, 1e3);
    const TurbulenceScales s(1e-14, 633e-9, r0, 1e3);
    CHECK(s.W() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("derived quantities round-trip through the free functions") {
    const TurbulenceScales s(2e-15, 810e-9, 0.02, 1500.0, 2e-3, 1.66);
    CHECK(s.wavenumber() == doctest::Approx(2 * kPi / 810e-9).epsilon(1e-14));
    CHECK(s.fried_parameter() == doctest::Approx(fried_parameter(2e-15, 810e-9, 1500.0)).epsilon(1e-12));
    CHECK(s.K() == doctest::Approx(turbulence_strength(2e-15, 0.02, 810e-9)).epsilon(1e-12));
    CHECK(s.rytov() == doctest::Approx(rytov_variance(2e-15, s.wavenumber(), 1500.0)).epsilon(1e-12));
    CHECK(s.t() == doctest::Approx(1500.0 * 810e-9 / (kPi * 0.02 * 0.02)).epsilon(1e-12));
    REQUIRE(s.beta().has_value());
    CHECK(*s.beta() == doctest::Approx(1.66 * 2e-3 * 810e-9 / (kPi * 0.02 * 0.02)).epsilon(1e-12));
    CHECK_FALSE(TurbulenceScales(2e-15, 810e-9, 0.02, 1500.0).beta().has_value());
}

TEST_CASE("zero turbulence gives vanishing strength and infinite coherence length") {
    const TurbulenceScales s(0.0, 633e-9, 0.01, 1e3);
    CHECK(s.K() == 0.0);
    CHECK(s.W() == 0.0);
    CHECK(s.rytov() == 0.0);
    CHECK(s.rytov_wk() == 0.0);
    CHECK(std::isinf(s.fried_parameter()));
}

TEST_CASE("invalid physical fields are named") {
    try {
        TurbulenceScales(1e-14, 633e-9, -0.01, 1e3);
        FAIL("expected a domain error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("waist") != std::string::npos);
    }
}

TEST_CASE("dimensionless quantities are invariant under unit rescaling") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> log_c(std::log(0.1), std::log(10.0));
    const TurbulenceScales base(1e-14, 633e-9, 0.01, 1e3, 1e-3, 1.6);
    for (int i = 0; i < 20; ++i) {
        const double c = std::exp(log_c(rng));
        const TurbulenceScales s(1e-14 * std::pow(c, -2.0 / 3.0), 633e-9 * c, 0.01 * c, 1e3 * c, 1e-3 * c, 1.6);
        CHECK(s.K() == doctest::Approx(base.K()).epsilon(1e-10));
        CHECK(s.W() == doctest::Approx(base.W()).epsilon(1e-10));
        CHECK(s.t() == doctest::Approx(base.t()).epsilon(1e-10));
        CHECK(s.rytov() == doctest::Approx(base.rytov()).epsilon(1e-10));
        CHECK(*s.beta() == doctest::Approx(*base.beta()).epsilon(1e-10));
    }
}

TEST_CASE("both scintillation formulas agree to one percent") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> log_u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double cn2 = std::pow(10.0, -16 + 3 * log_u(rng));
        const double lambda = std::pow(10.0, -6.5 + log_u(rng));
        const double waist = std::pow(10.0, -3 + 1.5 * log_u(rng));
        const double z = std::pow(10.0, 2 + 2 * log_u(rng));
        const TurbulenceScales s(cn2, lambda, waist, z);
        CHECK(std::abs(s.rytov_wk() - s.rytov()) <= 0.01 * s.rytov());
    }
}

TEST_CASE("monotone in the structure constant") {
    double K = 0, W = 0, sigma = 0, r0 = INFINITY;
    for (double cn2 : {1e-16, 1e-15, 1e-14, 1e-13}) {
        const TurbulenceScales s(cn2, 633e-9, 0.01, 1e3);
        CHECK(s.K() > K);
        CHECK(s.W() > W);
        CHECK(s.rytov() > sigma);
        CHECK(s.fried_parameter() < r0);
        K = s.K();
        W = s.W();
        sigma = s.rytov();
        r0 = s.fried_parameter();
    }
}

TEST_CASE("structure constant from the Kolmogorov spectrum") {
    const auto est = verify_structure_constant();
    // mpmath value of the same integral over (0, inf).
    CHECK(est.value == doctest::Approx(1.45695178559742).epsilon(1e-6));
    CHECK(std::abs(est.value - kStructureConstant) <= 0.01);
}

TEST_CASE("structure constant is converged in the lower cutoff") {
    const double full = verify_structure_constant().value;
    StructureQuadrature q;
    q.u_min = 5e-5;
    CHECK(std::abs(verify_structure_constant(q).value - full) < 1e-3 * full);
}

TEST_CASE("structure constant rejects a bad window") {
    StructureQuadrature q;
    q.u_min = 1.0;
    q.u_max = 0.5;
    CHECK_THROWS_AS(verify_structure_constant(q), ConvergenceError);
    q.u_min = 0.5;
    q.u_max = 2.0;
    CHECK_THROWS_AS(verify_structure_constant(q), ConvergenceError);
}
