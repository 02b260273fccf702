#include "oamturb/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "oamturb/evolve.hpp"
#include "oamturb/kernel.hpp"
#include "oamturb/oracle.hpp"
#include "oamturb/params.hpp"
#include "oamturb/project.hpp"

namespace oamturb::verify {

namespace {

constexpr double kPairingTolerance = 1e-6;

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

double propagate_pairing_error(Medium medium, double K, double t, int samples, std::uint32_t seed) {
    const double w = 1.0;
    const auto input = kernel::spdc_kernel(w, 1e-2);
    const auto closed = evolve::propagate_general(input, K, t, medium);
    std::mt19937 rng(seed);
    // Sample within the state's support, a few tenths of w.
    std::normal_distribution<double> normal(0.0, 0.3 * w);
    std::vector<std::array<Vec2, 4>> points(samples);
    for (auto& p : points) {
        for (auto& v : p) v = Vec2(normal(rng), normal(rng));
    }
    const auto numeric = oracle::quad_propagate(input, K, t, medium, {}, points);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const auto& p = points[i];
        const Complex expected = closed.evaluate(p[0], p[1], p[2], p[3]);
        worst = std::max(worst, std::abs(numeric[i] - expected) / std::abs(expected));
    }
    return worst;
}

double extract_pairing_error(int forms, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    double worst = 0.0;
    for (int q = 1; q <= 3; ++q) {
        for (int f = 0; f < forms; ++f) {
            project::MuQuadraticForm form{Complex(uniform(rng), uniform(rng)), Matrix4c::Zero()};
            for (int i = 0; i < 4; ++i) {
                for (int j = i; j < 4; ++j) {
                    form.quad(i, j) = form.quad(j, i) = Complex(uniform(rng), uniform(rng));
                }
            }
            const Complex series = project::extract_element(form, q);
            const Complex fd = oracle::fd_extract(form, q, 1e-2);
            worst = std::max(worst, std::abs(fd - series) / std::abs(series));
        }
    }
    return worst;
}

std::vector<Check> run_all() {
    std::vector<Check> checks;
    const auto s = params::verify_structure_constant();
    const bool s_ok = std::abs(s.value - params::kStructureConstant) <= 0.01;
    checks.push_back({"structure constant", s_ok, "S = " + sci(s.value) + ", residual " + sci(s.residual)});

    for (auto medium : {Medium::Correlated, Medium::Uncorrelated}) {
        const double err = propagate_pairing_error(medium, 1.0, 0.5, 5, 20240601u);
        checks.push_back({medium == Medium::Correlated ? "propagation pairing (correlated)"
                                                       : "propagation pairing (uncorrelated)",
                          err <= kPairingTolerance, "max relative error " + sci(err)});
    }
    const double err = extract_pairing_error(20, 20240602u);
    checks.push_back({"extraction pairing", err <= kPairingTolerance, "max relative error " + sci(err)});
    return checks;
}

}  // namespace oamturb::verify
