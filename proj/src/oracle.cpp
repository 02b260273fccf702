#include "oamturb/oracle.hpp"

#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "oamturb/errors.hpp"
#include "oamturb/parallel.hpp"
#include "oamturb/quadrature.hpp"

namespace oamturb::oracle {

namespace {

constexpr int kMaxDims = 4;
constexpr double kEnvelopeLevel = 40.0;
constexpr double kBoundaryTolerance = 1e-12;
constexpr std::array<double, 4> kSlotSign{1.0, -1.0, 1.0, -1.0};

struct Envelope {
    Eigen::VectorXd center;
    Eigen::MatrixXd curvature;  // log|f(u)| = const - (u - c)^T A (u - c)
};

Envelope probe_envelope_at(const std::function<Complex(std::span<const double>)>& f, int dims,
                           double step) {
    std::vector<double> point(dims, 0.0);
    const auto log_abs = [&](const std::vector<double>& u) {
        const double magnitude = std::abs(f(u));
        if (!(magnitude > 0.0) || !std::isfinite(magnitude)) {
            throw InsufficientDomainError("integrand vanishes or overflows at an envelope probe");
        }
        return std::log(magnitude);
    };
    const auto at = [&](int k, double sk, int l, double sl) {
        std::fill(point.begin(), point.end(), 0.0);
        if (k >= 0) point[k] += sk * step;
        if (l >= 0) point[l] += sl * step;
        return log_abs(point);
    };
    const double l0 = at(-1, 0, -1, 0);
    Eigen::VectorXd gradient(dims);
    Eigen::MatrixXd hessian(dims, dims);
    for (int k = 0; k < dims; ++k) {
        const double lp = at(k, 1, -1, 0);
        const double lm = at(k, -1, -1, 0);
        gradient(k) = (lp - lm) / (2.0 * step);
        hessian(k, k) = (lp - 2.0 * l0 + lm) / (step * step);
        for (int l = 0; l < k; ++l) {
            const double v = (at(k, 1, l, 1) - at(k, 1, l, -1) - at(k, -1, l, 1) + at(k, -1, l, -1)) /
                             (4.0 * step * step);
            hessian(k, l) = hessian(l, k) = v;
        }
    }
    Envelope env;
    env.curvature = -0.5 * hessian;
    const Eigen::LLT<Eigen::MatrixXd> llt(env.curvature);
    if (llt.info() != Eigen::Success) {
        throw InsufficientDomainError("integrand envelope is not confining");
    }
    env.center = 0.5 * llt.solve(gradient);
    return env;
}

// Narrow integrands underflow at a probe one length unit away; shrink the
// probe until every sample is representable. log|f| is quadratic, so the
// stencil is exact at any step.
Envelope probe_envelope(const std::function<Complex(std::span<const double>)>& f, int dims,
                        double step) {
    for (int attempt = 0;; ++attempt) {
        try {
            return probe_envelope_at(f, dims, step);
        } catch (const InsufficientDomainError&) {
            if (attempt == 40) throw;
            step /= 4.0;
        }
    }
}

// Visits every point of an n^dims tensor grid in a fixed order.
template <typename Visit>
void for_each_grid_point(int dims, int n, Visit&& visit) {
    std::array<int, kMaxDims> idx{};
    while (true) {
        visit(idx);
        int k = 0;
        while (k < dims && ++idx[k] == n) idx[k++] = 0;
        if (k == dims) break;
    }
}

Complex exp_weighted_trapezoid(const std::function<Complex(std::span<const double>)>& f, int dims,
                               const Envelope& env, double length_unit,
                               const QuadratureSpec& spec) {
    const int n = spec.nodes_per_dim;
    const Eigen::MatrixXd inverse = env.curvature.inverse();
    std::array<double, kMaxDims> lo{}, delta{};
    for (int k = 0; k < dims; ++k) {
        const double half = spec.domain_halfwidth > 0.0 ? spec.domain_halfwidth * length_unit
                                                        : std::sqrt(kEnvelopeLevel * inverse(k, k));
        lo[k] = env.center(k) - half;
        delta[k] = 2.0 * half / (n - 1);
    }
    std::vector<double> u(dims);
    for (int k = 0; k < dims; ++k) u[k] = env.center(k);
    const double peak = std::abs(f(u));

    Complex sum = 0.0;
    double boundary = 0.0;
    for_each_grid_point(dims, n, [&](const std::array<int, kMaxDims>& idx) {
        double weight = 1.0;
        bool on_boundary = false;
        for (int k = 0; k < dims; ++k) {
            u[k] = lo[k] + delta[k] * idx[k];
            if (idx[k] == 0 || idx[k] == n - 1) {
                weight *= 0.5;
                on_boundary = true;
            }
        }
        const Complex value = f(u);
        if (on_boundary) boundary = std::max(boundary, std::abs(value));
        sum += weight * value;
    });
    if (boundary > kBoundaryTolerance * peak) {
        throw InsufficientDomainError("quadrature box boundary carries " +
                                      std::to_string(boundary / peak) + " of the peak magnitude");
    }
    double volume = 1.0;
    for (int k = 0; k < dims; ++k) volume *= delta[k];
    return sum * volume;
}

Complex gauss_hermite(const std::function<Complex(std::span<const double>)>& f, int dims,
                      const Envelope& env, const QuadratureSpec& spec) {
    const GaussHermite rule(spec.nodes_per_dim);
    const Eigen::LLT<Eigen::MatrixXd> llt(env.curvature);
    // u = c + L^{-T} x maps (u - c)^T A (u - c) to |x|^2.
    const Eigen::MatrixXd lower = llt.matrixL();
    const Eigen::MatrixXd map = lower.transpose().inverse();
    const double jacobian = 1.0 / lower.diagonal().prod();
    const auto& nodes = rule.nodes();
    const auto& weights = rule.weights();
    Eigen::VectorXd x(dims);
    std::vector<double> u(dims);
    Complex sum = 0.0;
    for_each_grid_point(dims, spec.nodes_per_dim, [&](const std::array<int, kMaxDims>& idx) {
        double weight = 1.0;
        for (int k = 0; k < dims; ++k) {
            x(k) = nodes[idx[k]];
            weight *= weights[idx[k]];
        }
        const Eigen::VectorXd point = env.center + map * x;
        for (int k = 0; k < dims; ++k) u[k] = point(k);
        sum += weight * std::exp(x.squaredNorm()) * f(u);
    });
    return sum * jacobian;
}

void require_valid(const QuadratureSpec& spec) {
    if (spec.nodes_per_dim < 8) throw DomainError("quadrature needs at least 8 nodes per dimension");
    if (spec.domain_halfwidth < 0.0) throw DomainError("domain halfwidth must be non-negative");
}

}  // namespace

Complex integrate_enveloped(const std::function<Complex(std::span<const double>)>& f, int dims,
                            double length_unit, const QuadratureSpec& spec) {
    require_valid(spec);
    if (dims < 1 || dims > kMaxDims) throw DomainError("quadrature supports 1 to 4 dimensions");
    const Envelope env = probe_envelope(f, dims, length_unit);
    return spec.scheme == Scheme::GaussHermite ? gauss_hermite(f, dims, env, spec)
                                               : exp_weighted_trapezoid(f, dims, env, length_unit, spec);
}

std::vector<Complex> quad_propagate(const kernel::DotProductKernel& input, double K, double t,
                                    Medium medium, const QuadratureSpec& spec,
                                    const std::vector<std::array<Vec2, 4>>& samples) {
    require_valid(spec);
    if (!(K > 0.0) || !(t > 0.0)) throw DomainError("quadrature propagation needs K > 0 and t > 0");
    if (input.prefactor() == Complex(0.0)) throw DomainError("input kernel vanishes identically");

    const bool correlated = medium == Medium::Correlated;
    const int aux = correlated ? 1 : 2;
    // Which auxiliary variable shifts each slot.
    const std::array<int, 4> group = correlated ? std::array<int, 4>{0, 0, 0, 0}
                                                : std::array<int, 4>{0, 0, 1, 1};
    const double w = input.scale();
    const double pw2 = kPi * kPi * w * w;
    const double Kt = K * t;
    const double unit = 1.0 / (kPi * w);
    const Complex normalization = std::pow(kPi * w * w / (2.0 * Kt), aux);

    std::vector<Complex> out(samples.size());
    parallel_for(samples.size(), [&](std::size_t s) {
        const auto& a = samples[s];

        // Factors that do not depend on the auxiliary variables.
        double phase = 0.0;
        for (int i = 0; i < 4; ++i) phase += kSlotSign[i] * a[i].squaredNorm();
        double damping = 0.0;
        for (int g = 0; g < aux; ++g) {
            Vec2 combined = Vec2::Zero();
            for (int i = 0; i < 4; ++i) {
                if (group[i] == g) combined += kSlotSign[i] * a[i];
            }
            damping += combined.squaredNorm();
        }
        const Complex outside = input.prefactor() * normalization *
                                std::exp(kI * pw2 * t * phase - pw2 * K * t * t * t / 6.0 * damping);

        if (spec.separate_components) {
            // Every factor of the integrand is a product over the x and y components.
            Complex inside = 1.0;
            for (int c = 0; c < 2; ++c) {
                const auto integrand = [&](std::span<const double> u) {
                    std::array<Vec2, 4> shifted;
                    double cross = 0.0;
                    for (int i = 0; i < 4; ++i) {
                        shifted[i] = Vec2(a[i](c) - u[group[i]], 0.0);
                        cross += kSlotSign[i] * a[i](c) * u[group[i]];
                    }
                    double weight = 0.0;
                    for (int g = 0; g < aux; ++g) weight += u[g] * u[g];
                    return input.evaluate(shifted) / input.prefactor() *
                           std::exp(-kI * pw2 * t * cross - pw2 * weight / (2.0 * Kt));
                };
                inside *= integrate_enveloped(integrand, aux, unit, spec);
            }
            out[s] = outside * inside;
        } else {
            const auto integrand = [&](std::span<const double> u) {
                std::array<Vec2, 4> shifted;
                double cross = 0.0;
                for (int i = 0; i < 4; ++i) {
                    const Vec2 ug(u[2 * group[i]], u[2 * group[i] + 1]);
                    shifted[i] = a[i] - ug;
                    cross += kSlotSign[i] * a[i].dot(ug);
                }
                double weight = 0.0;
                for (int k = 0; k < 2 * aux; ++k) weight += u[k] * u[k];
                return input.evaluate(shifted) / input.prefactor() *
                       std::exp(-kI * pw2 * t * cross - pw2 * weight / (2.0 * Kt));
            };
            out[s] = outside * integrate_enveloped(integrand, 2 * aux, unit, spec);
        }
    });
    return out;
}

Complex quad_trace(const kernel::DotProductKernel& kernel, const QuadratureSpec& spec) {
    if (kernel.prefactor() == Complex(0.0)) return 0.0;
    const double unit = 1.0 / (kPi * kernel.scale());
    if (spec.separate_components) {
        const auto integrand = [&](std::span<const double> z) {
            const Vec2 a(z[0], 0.0);
            const Vec2 b(z[1], 0.0);
            return kernel.evaluate(a, a, b, b) / kernel.prefactor();
        };
        const Complex component = integrate_enveloped(integrand, 2, unit, spec);
        return kernel.prefactor() * component * component;
    }
    const auto integrand = [&](std::span<const double> z) {
        const Vec2 a(z[0], z[1]);
        const Vec2 b(z[2], z[3]);
        return kernel.evaluate(a, a, b, b);
    };
    return integrate_enveloped(integrand, 4, unit, spec);
}

Complex quad_marginalize(const kernel::ExtendedKernel& extended,
                         const std::vector<std::string>& variables,
                         const std::vector<Vec2>& kept_values, const VectorXc& mu,
                         const QuadratureSpec& spec) {
    std::vector<Eigen::Index> integrated;
    for (const auto& name : variables) integrated.push_back(extended.index_of(name));
    const auto n = extended.variable_count();
    if (static_cast<Eigen::Index>(kept_values.size() + integrated.size()) != n) {
        throw DomainError("kept values do not match the surviving variables");
    }
    std::vector<Vec2> values(n);
    std::vector<bool> is_integrated(n, false);
    for (const auto idx : integrated) is_integrated[idx] = true;
    std::size_t next = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!is_integrated[i]) values[i] = kept_values[next++];
    }
    const auto integrand = [&](std::span<const double> u) {
        std::vector<Vec2> point = values;
        for (std::size_t k = 0; k < integrated.size(); ++k) {
            point[integrated[k]] = Vec2(u[2 * k], u[2 * k + 1]);
        }
        return extended.evaluate(point, mu);
    };
    return integrate_enveloped(integrand, static_cast<int>(2 * integrated.size()),
                               1.0 / (kPi * extended.scale()), spec);
}

Complex fd_extract(const project::MuQuadraticForm& form, int q, double step) {
    using Real = boost::multiprecision::cpp_bin_float_50;
    if (q < 1) throw DomainError("q must be at least 1");
    if (!(step >= 1e-3 && step <= 1e-1)) throw DomainError("finite-difference step must lie in [1e-3, 1e-1]");

    // Central stencil for the q-th derivative: offsets (q/2 - k) h with
    // weights (-1)^k C(q, k) / h^q. Error expands in even powers of h.
    std::vector<Real> binomial(q + 1);
    binomial[0] = 1;
    for (int k = 1; k <= q; ++k) binomial[k] = binomial[k - 1] * (q - k + 1) / k;

    std::array<std::array<Real, 4>, 4> b_re, b_im;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            b_re[i][j] = form.quad(i, j).real();
            b_im[i][j] = form.quad(i, j).imag();
        }
    }

    const auto mixed_difference = [&](const Real& h) {
        Real sum_re = 0, sum_im = 0;
        std::array<Real, 4> mu;
        for_each_grid_point(4, q + 1, [&](const std::array<int, kMaxDims>& idx) {
            Real weight = 1;
            for (int v = 0; v < 4; ++v) {
                mu[v] = (Real(q) / 2 - idx[v]) * h;
                weight *= (idx[v] % 2 == 0 ? binomial[idx[v]] : -binomial[idx[v]]);
            }
            Real z_re = 0, z_im = 0;
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    const Real mm = mu[i] * mu[j];
                    z_re += b_re[i][j] * mm;
                    z_im += b_im[i][j] * mm;
                }
            }
            const Real magnitude = exp(z_re);
            sum_re += weight * magnitude * cos(z_im);
            sum_im += weight * magnitude * sin(z_im);
        });
        const Real scale = pow(h, 4 * q);
        return std::pair<Real, Real>{sum_re / scale, sum_im / scale};
    };

    constexpr int kLevels = 4;
    std::array<std::array<std::pair<Real, Real>, kLevels>, kLevels> table;
    Real h = step;
    for (int i = 0; i < kLevels; ++i, h /= 2) {
        table[i][0] = mixed_difference(h);
        Real factor = 1;
        for (int j = 1; j <= i; ++j) {
            factor *= 4;
            const auto& fine = table[i][j - 1];
            const auto& coarse = table[i - 1][j - 1];
            table[i][j] = {fine.first + (fine.first - coarse.first) / (factor - 1),
                           fine.second + (fine.second - coarse.second) / (factor - 1)};
        }
    }
    const auto& best = table[kLevels - 1][kLevels - 1];
    const auto& previous = table[kLevels - 2][kLevels - 2];
    const Complex value(static_cast<double>(best.first), static_cast<double>(best.second));
    const double residual = std::hypot(static_cast<double>(best.first - previous.first),
                                       static_cast<double>(best.second - previous.second));
    if (residual > 1e-8 * std::abs(value) + 1e-300) {
        throw PrecisionError("finite-difference extrapolation residual " + std::to_string(residual) +
                             " too large relative to " + std::to_string(std::abs(value)));
    }
    const double n = project::lg_normalization(q);
    return form.constant * (n * n * n * n) * value;
}

}  // namespace oamturb::oracle
