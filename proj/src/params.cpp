#include "oamturb/params.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "oamturb/errors.hpp"
#include "oamturb/linalg.hpp"
#include "oamturb/quadrature.hpp"

namespace oamturb::params {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be positive and finite");
    }
}

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(name) + " must be non-negative and finite");
    }
}

// 1 - J0(x) without cancellation at small x.
double one_minus_j0(double x) {
    if (x < 0.5) {
        const double h = 0.25 * x * x;
        double term = h;
        double sum = term;
        for (int k = 2; k < 12; ++k) {
            term *= -h / (static_cast<double>(k) * k);
            sum += term;
        }
        return sum;
    }
    return 1.0 - std::cyl_bessel_j(0.0, x);
}

}  // namespace

double fried_parameter(double cn2, double wavelength, double distance) {
    require_positive(cn2, "cn2");
    require_positive(wavelength, "wavelength");
    require_positive(distance, "distance");
    return kFriedCoefficient * std::pow(wavelength * wavelength / (cn2 * distance), 0.6);
}

double rytov_variance(double cn2, double wavenumber, double distance) {
    require_non_negative(cn2, "cn2");
    require_positive(wavenumber, "wavenumber");
    require_positive(distance, "distance");
    return kRytovCoefficient * cn2 * std::pow(wavenumber, 7.0 / 6.0) *
           std::pow(distance, 11.0 / 6.0);
}

double rytov_from_wk(double W, double K) {
    require_non_negative(W, "W");
    require_positive(K, "K");
    return kRytovWKCoefficient * std::pow(W, 55.0 / 18.0) / std::pow(K, 5.0 / 6.0);
}

double turbulence_strength(double cn2, double waist, double wavelength) {
    require_non_negative(cn2, "cn2");
    require_positive(waist, "waist");
    require_positive(wavelength, "wavelength");
    return 2.0 * kPi * kPi * kPi * kStructureConstant * cn2 * std::pow(waist, 11.0 / 3.0) /
           (wavelength * wavelength * wavelength);
}

double weak_scint_t(double W, double K) {
    require_non_negative(W, "W");
    require_positive(K, "K");
    return kWeakScintTCoefficient * std::pow(W, 5.0 / 3.0) / K;
}

TurbulenceScales::TurbulenceScales(double cn2, double wavelength, double waist, double distance,
                                   std::optional<double> crystal_length,
                                   std::optional<double> ordinary_index)
    : cn2_(cn2),
      wavelength_(wavelength),
      waist_(waist),
      distance_(distance),
      crystal_length_(crystal_length),
      ordinary_index_(ordinary_index) {
    require_non_negative(cn2, "cn2");
    require_positive(wavelength, "wavelength");
    require_positive(waist, "waist");
    require_positive(distance, "distance");
    if (crystal_length) require_positive(*crystal_length, "crystal_length");
    if (ordinary_index) require_positive(*ordinary_index, "ordinary_index");
}

double TurbulenceScales::wavenumber() const noexcept { return 2.0 * kPi / wavelength_; }

double TurbulenceScales::fried_parameter() const {
    if (cn2_ == 0.0) return std::numeric_limits<double>::infinity();
    return params::fried_parameter(cn2_, wavelength_, distance_);
}

double TurbulenceScales::W() const {
    if (cn2_ == 0.0) return 0.0;
    return waist_ / fried_parameter();
}

double TurbulenceScales::K() const { return turbulence_strength(cn2_, waist_, wavelength_); }

double TurbulenceScales::t() const noexcept {
    return distance_ * wavelength_ / (kPi * waist_ * waist_);
}

double TurbulenceScales::rytov() const { return rytov_variance(cn2_, wavenumber(), distance_); }

double TurbulenceScales::rytov_wk() const {
    if (cn2_ == 0.0) return 0.0;
    return rytov_from_wk(W(), K());
}

double TurbulenceScales::zeta() const noexcept {
    return kStructureConstant * cn2_ / std::cbrt(waist_);
}

std::optional<double> TurbulenceScales::beta() const {
    if (!crystal_length_ || !ordinary_index_) return std::nullopt;
    return *ordinary_index_ * *crystal_length_ * wavelength_ / (kPi * waist_ * waist_);
}

StructureConstantEstimate verify_structure_constant(const StructureQuadrature& quadrature) {
    const double u_min = quadrature.u_min;
    const double u_max = quadrature.u_max;
    if (!(u_min > 0.0) || !(u_max > u_min)) {
        throw ConvergenceError("structure-constant window must satisfy 0 < u_min < u_max",
                               std::numeric_limits<double>::infinity());
    }
    if (quadrature.panels_per_decade < 1 || quadrature.nodes_per_panel < 2) {
        throw DomainError("structure-constant quadrature needs panels and nodes");
    }

    // Angular integral done in closed form: int_0^{2pi} [1 - cos(2 pi u cos phi)] dphi
    // = 2 pi [1 - J0(2 pi u)]. What remains is radial:
    //   I = int u^{-8/3} [1 - J0(2 pi u)] du.
    const auto integrand = [](double u) {
        return std::pow(u, -8.0 / 3.0) * one_minus_j0(2.0 * kPi * u);
    };
    const GaussLegendre rule(quadrature.nodes_per_panel);

    // Log-spaced panels up to u = 1, then half-period panels that follow the
    // oscillation of J0(2 pi u).
    std::vector<double> edges;
    const double log_lo = std::log10(u_min);
    const double split = std::min(1.0, u_max);
    const double log_hi = std::log10(split);
    const int log_panels =
        std::max(1, static_cast<int>(std::ceil((log_hi - log_lo) * quadrature.panels_per_decade)));
    for (int i = 0; i <= log_panels; ++i) {
        edges.push_back(std::pow(10.0, log_lo + (log_hi - log_lo) * i / log_panels));
    }
    edges.back() = split;
    if (u_max > split) {
        const int linear_panels = static_cast<int>(std::ceil((u_max - split) / 0.5));
        for (int i = 1; i <= linear_panels; ++i) {
            edges.push_back(split + (u_max - split) * i / linear_panels);
        }
    }
    double radial = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        radial += rule.integrate(integrand, edges[i], edges[i + 1]);
    }

    // Below u_min: 1 - J0(x) = sum_k (-1)^{k+1} (x/2)^{2k} / (k!)^2, integrated termwise.
    double lower = 0.0;
    double lower_residual = 0.0;
    {
        double coeff = 1.0;  // pi^{2k} / (k!)^2 with alternating sign
        for (int k = 1; k <= 6; ++k) {
            coeff *= (k == 1 ? 1.0 : -1.0) * kPi * kPi / (static_cast<double>(k) * k);
            const double p = 2.0 * k - 5.0 / 3.0;
            const double term = coeff * std::pow(u_min, p) / p;
            if (k < 6) {
                lower += term;
            } else {
                lower_residual = std::abs(term);
            }
        }
    }
    // Above u_max: the constant part integrates exactly; the J0 part is bounded
    // by its asymptotic envelope sqrt(2 / (pi x)) and left as residual.
    const double upper = 0.6 * std::pow(u_max, -5.0 / 3.0);
    const double upper_residual =
        std::pow(u_max, -8.0 / 3.0) * std::sqrt(1.0 / (kPi * kPi * u_max)) / kPi;

    const double prefactor = kKolmogorovCoefficient * std::cbrt(2.0 * kPi);
    const double value = prefactor * (radial + lower + upper);
    const double residual = prefactor * (lower_residual + upper_residual);
    if (!(residual <= quadrature.tolerance * std::abs(value))) {
        throw ConvergenceError("structure-constant window too narrow; residual " +
                                   std::to_string(residual),
                               residual);
    }
    return {value, residual};
}

}  // namespace oamturb::params
