#include "oamturb/evolve.hpp"

#include <string>
#include <vector>

#include "oamturb/errors.hpp"

namespace oamturb::evolve {

namespace {

// Ket slots carry +, bra slots -.
constexpr std::array<double, 4> kSlotSign{1.0, -1.0, 1.0, -1.0};

void require_evolution_args(double K, double t) {
    if (!(K >= 0.0)) throw DomainError("K must be non-negative");
    if (!(t >= 0.0)) throw DomainError("t must be non-negative");
}

void set_pair(Matrix4c& m, int i, int j, Complex coefficient_of_dot) {
    // A term c (a_i . a_j) with i != j contributes c / 2 to both M_ij and M_ji.
    m(i, j) += 0.5 * coefficient_of_dot;
    m(j, i) += 0.5 * coefficient_of_dot;
}

}  // namespace

EvolvedCoefficients uncorrelated_coefficients(double K, double t) {
    require_evolution_args(K, t);
    const double Kt = K * t;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    EvolvedCoefficients c{Medium::Uncorrelated, K, t, {}};
    c.values[0] = 8.0 * Kt + 1.0;
    c.values[1] = Complex(2.0 * (10.0 * K * K * t4 + 2.0 * K * t3 + 12.0 * Kt + 3.0),
                          -6.0 * t * (6.0 * Kt + 1.0));
    c.values[2] = Complex(2.0 * K * K * t4 - 4.0 * Kt - 1.0, -2.0 * K * t2);
    c.values[3] = 2.0 * (5.0 * K * t3 + t2 + 6.0);
    c.values[4] = K * t3 - 2.0;
    return c;
}

EvolvedCoefficients correlated_coefficients(double K, double t) {
    require_evolution_args(K, t);
    const double Kt = K * t;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    const double common = 2.0 * (8.0 * K * K * t4 + 2.0 * K * t3 + 24.0 * Kt + 3.0);
    EvolvedCoefficients c{Medium::Correlated, K, t, {}};
    c.values[0] = 16.0 * Kt + 1.0;
    c.values[1] = Complex(common, -6.0 * t * (12.0 * Kt + 1.0));
    c.values[2] = Complex(common, 24.0 * K * t2);
    c.values[3] = 4.0 * K * t3 + t2 + 12.0;
    c.values[4] = 0.0;
    return c;
}

kernel::DotProductKernel evolve_spdc_uncorrelated(double K, double t, double pump_waist) {
    if (!(pump_waist > 0.0)) throw DomainError("pump waist must be positive");
    const auto c = uncorrelated_coefficients(K, t);
    const Complex n0 = c.values[0], n1 = c.values[1], n2 = c.values[2];
    const Complex n3 = c.values[3], n4 = c.values[4];
    const double Kt = K * t;

    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = m(2, 2) = n1 / 6.0;
    m(1, 1) = m(3, 3) = std::conj(n1) / 6.0;
    set_pair(m, 0, 2, -2.0 * n2);
    set_pair(m, 1, 3, -2.0 * std::conj(n2));
    set_pair(m, 0, 1, -2.0 * Kt * n3 / 3.0);
    set_pair(m, 2, 3, -2.0 * Kt * n3 / 3.0);
    set_pair(m, 0, 3, 4.0 * Kt * n4);
    set_pair(m, 2, 1, 4.0 * Kt * n4);
    m /= n0;

    const double w2 = pump_waist * pump_waist;
    return kernel::DotProductKernel(8.0 * kPi * kPi * w2 * w2 / n0, pump_waist, m);
}

kernel::DotProductKernel evolve_spdc_correlated(double K, double t, double pump_waist) {
    if (!(pump_waist > 0.0)) throw DomainError("pump waist must be positive");
    const auto c = correlated_coefficients(K, t);
    const Complex h0 = c.values[0], h1 = c.values[1], h2 = c.values[2], h3 = c.values[3];
    const double Kt = K * t;

    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = m(2, 2) = h1 / 6.0;
    m(1, 1) = m(3, 3) = std::conj(h1) / 6.0;
    set_pair(m, 0, 2, h2 / 3.0);
    set_pair(m, 1, 3, std::conj(h2) / 3.0);
    // (a1 + a3) . (a2 + a4)
    for (const int ket : {0, 2}) {
        for (const int bra : {1, 3}) set_pair(m, ket, bra, -4.0 * Kt * h3 / 3.0);
    }
    m /= h0;

    const double w2 = pump_waist * pump_waist;
    return kernel::DotProductKernel(8.0 * kPi * kPi * w2 * w2 / h0, pump_waist, m);
}

kernel::DotProductKernel evolve_spdc(Medium medium, double K, double t, double pump_waist) {
    return medium == Medium::Correlated ? evolve_spdc_correlated(K, t, pump_waist)
                                        : evolve_spdc_uncorrelated(K, t, pump_waist);
}

kernel::DotProductKernel free_propagation(const kernel::DotProductKernel& input, double t) {
    Matrix4c m = input.coeff();
    for (int i = 0; i < 4; ++i) m(i, i) -= kI * t * kSlotSign[i];
    return kernel::DotProductKernel(input.prefactor(), input.scale(), m);
}

kernel::ExtendedKernel propagation_integrand(const kernel::DotProductKernel& input, double K,
                                             double t, Medium medium) {
    require_evolution_args(K, t);
    const double Kt = K * t;
    if (!(Kt > 0.0)) throw DomainError("the propagation integrand needs K t > 0");

    // Slot i is shifted by auxiliary variable shift[i] (index into the full list).
    const bool correlated = medium == Medium::Correlated;
    const int aux_count = correlated ? 1 : 2;
    const std::array<int, 4> shift = correlated ? std::array<int, 4>{4, 4, 4, 4}
                                                : std::array<int, 4>{4, 4, 5, 5};
    std::vector<std::string> names{"a1", "a2", "a3", "a4"};
    if (correlated) {
        names.emplace_back("u");
    } else {
        names.emplace_back("u1");
        names.emplace_back("u2");
    }
    const int n = 4 + aux_count;
    MatrixXc m = MatrixXc::Zero(n, n);
    const Matrix4c& m0 = input.coeff();

    // R0(a_i - u_{shift(i)})
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            m(i, j) += m0(i, j);
            m(i, shift[j]) -= m0(i, j);
            m(shift[j], i) -= m0(i, j);
            m(shift[i], shift[j]) += m0(i, j);
        }
    }
    for (int i = 0; i < 4; ++i) {
        // Free-space phase exp[i pi^2 w^2 t s_i |a_i|^2].
        m(i, i) -= kI * t * kSlotSign[i];
        // Cross phase exp[-i pi^2 w^2 t s_i a_i . u].
        m(i, shift[i]) += 0.5 * kI * t * kSlotSign[i];
        m(shift[i], i) += 0.5 * kI * t * kSlotSign[i];
    }
    // exp[-(pi^2/6) w^2 K t^3 |sum over a group of s_i a_i|^2], one group per medium.
    const double damping = K * t * t * t / 6.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (shift[i] == shift[j]) m(i, j) += damping * kSlotSign[i] * kSlotSign[j];
        }
    }
    // Weight exp[-pi^2 w^2 |u|^2 / (2 K t)] with normalization pi w^2 / (2 K t) per variable.
    const double w2 = input.scale() * input.scale();
    Complex prefactor = input.prefactor();
    for (int k = 4; k < n; ++k) {
        m(k, k) += 1.0 / (2.0 * Kt);
        prefactor *= kPi * w2 / (2.0 * Kt);
    }
    return kernel::ExtendedKernel(prefactor, input.scale(), std::move(names), std::move(m));
}

kernel::DotProductKernel propagate_general(const kernel::DotProductKernel& input, double K,
                                           double t, Medium medium) {
    require_evolution_args(K, t);
    if (K * t < kFreePropagationThreshold) return free_propagation(input, t);
    const auto integrand = propagation_integrand(input, K, t, medium);
    const std::vector<std::string> aux = medium == Medium::Correlated
                                             ? std::vector<std::string>{"u"}
                                             : std::vector<std::string>{"u1", "u2"};
    return kernel::gaussian_marginalize(integrand, aux).to_dot_product();
}

}  // namespace oamturb::evolve
