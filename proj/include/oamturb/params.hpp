#pragma once

#include <optional>

namespace oamturb::params {

// Printed constants of the weak-scintillation formulas. They carry three or
// four significant figures and are used as exact inputs.
inline constexpr double kStructureConstant = 1.457;  // S in Q(x) = S C_n^2 |x|^{5/3}
inline constexpr double kFriedCoefficient = 0.185;
inline constexpr double kRytovCoefficient = 1.23;
inline constexpr double kRytovWKCoefficient = 2.57;
inline constexpr double kWeakScintTCoefficient = 1.72;
inline constexpr double kKolmogorovCoefficient = 0.033;

// r0 = 0.185 (lambda^2 / (C_n^2 z))^{3/5}
double fried_parameter(double cn2, double wavelength, double distance);

// sigma_R^2 = 1.23 C_n^2 k^{7/6} z^{11/6}; C_n^2 = 0 is allowed and gives 0.
double rytov_variance(double cn2, double wavenumber, double distance);

// sigma_R^2 = 2.57 W^{55/18} / K^{5/6}
double rytov_from_wk(double W, double K);

// K = 2 pi^3 S C_n^2 w^{11/3} / lambda^3
double turbulence_strength(double cn2, double waist, double wavelength);

// Weak-scintillation substitution t = 1.72 W^{5/3} / K.
double weak_scint_t(double W, double K);

// Physical inputs plus every derived dimensionless quantity. All lengths in
// metres, C_n^2 in m^{-2/3}. C_n^2 may be zero (no turbulence); the other
// physical fields must be strictly positive.
class TurbulenceScales {
public:
    TurbulenceScales(double cn2, double wavelength, double waist, double distance,
                     std::optional<double> crystal_length = std::nullopt,
                     std::optional<double> ordinary_index = std::nullopt);

    double cn2() const noexcept { return cn2_; }
    double wavelength() const noexcept { return wavelength_; }
    double waist() const noexcept { return waist_; }
    double distance() const noexcept { return distance_; }
    std::optional<double> crystal_length() const noexcept { return crystal_length_; }
    std::optional<double> ordinary_index() const noexcept { return ordinary_index_; }

    double wavenumber() const noexcept;
    // Infinite when C_n^2 = 0.
    double fried_parameter() const;
    double W() const;
    double K() const;
    // Distance in Rayleigh ranges, z lambda / (pi w^2).
    double t() const noexcept;
    double rytov() const;
    double rytov_wk() const;
    // zeta = S C_n^2 / w^{1/3}
    double zeta() const noexcept;
    // beta = n_o L lambda / (pi w^2); empty unless both L and n_o are set.
    std::optional<double> beta() const;

private:
    double cn2_;
    double wavelength_;
    double waist_;
    double distance_;
    std::optional<double> crystal_length_;
    std::optional<double> ordinary_index_;
};

// Radial window used to evaluate the Kolmogorov structure constant. The
// window only regulates the numerics: contributions below u_min and above
// u_max are added back analytically.
struct StructureQuadrature {
    double u_min = 1e-4;
    double u_max = 1e4;
    int panels_per_decade = 8;
    int nodes_per_panel = 16;
    double tolerance = 1e-4;  // relative residual accepted
};

struct StructureConstantEstimate {
    double value;
    double residual;  // estimate of the neglected tail contributions
};

// Evaluates int Phi_0(u) [1 - cos(2 pi u.x)] d^2u / C_n^2 at |x| = 1 for the
// pure Kolmogorov spectrum. Throws ConvergenceError when the residual
// estimate exceeds the tolerance.
StructureConstantEstimate verify_structure_constant(const StructureQuadrature& quadrature = {});

}  // namespace oamturb::params
