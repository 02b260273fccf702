#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oamturb/linalg.hpp"

// Self-checks shared by the `verify` subcommand and the acceptance suite.
namespace oamturb::verify {

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

// Largest relative difference between quadrature and the Gaussian-algebra
// propagation of a finite-beta SPDC kernel over `samples` random points.
double propagate_pairing_error(Medium medium, double K, double t, int samples, std::uint32_t seed);

// Largest relative difference between finite differences and series
// extraction over `forms` random quadratic forms for each q in 1..3.
double extract_pairing_error(int forms, std::uint32_t seed);

std::vector<Check> run_all();

}  // namespace oamturb::verify
