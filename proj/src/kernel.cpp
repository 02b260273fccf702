#include "oamturb/kernel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "oamturb/errors.hpp"

namespace oamturb::kernel {

namespace {

constexpr double kDefiniteTolerance = 1e-10;

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex z) { return format_real(z.real()) + "," + format_real(z.imag()); }

double parse_real(std::string_view s, std::string_view key) {
    // std::from_chars for double is available in libstdc++ 11.
    double value = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw DomainError("malformed number for '" + std::string(key) + "': " + std::string(s));
    }
    return value;
}

Complex parse_complex(std::string_view s, std::string_view key) {
    const auto comma = s.find(',');
    if (comma == std::string_view::npos) {
        throw DomainError("expected re,im for '" + std::string(key) + "'");
    }
    return {parse_real(s.substr(0, comma), key), parse_real(s.substr(comma + 1), key)};
}

constexpr std::array<std::pair<int, int>, 10> kUpperTriangle{{
    {0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};

std::string entry_key(int i, int j) { return "m" + std::to_string(i + 1) + std::to_string(j + 1); }

void require_symmetric(const MatrixXc& m, const char* what) {
    const double scale = std::max(1.0, m.norm());
    if ((m - m.transpose()).norm() > 1e-12 * scale) {
        throw DomainError(std::string(what) + " coefficient matrix must be symmetric");
    }
}

}  // namespace

DotProductKernel::DotProductKernel(Complex prefactor, double scale, const Matrix4c& coeff)
    : prefactor_(prefactor), scale_(scale) {
    if (!(scale > 0.0)) throw DomainError("kernel scale must be positive");
    require_symmetric(coeff, "kernel");
    coeff_ = 0.5 * (coeff + coeff.transpose());
}

Complex DotProductKernel::evaluate(const Vec2& a1, const Vec2& a2, const Vec2& a3,
                                   const Vec2& a4) const {
    const std::array<const Vec2*, 4> a{&a1, &a2, &a3, &a4};
    Complex sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            sum += coeff_(i, j) * a[i]->dot(*a[j]);
        }
    }
    return prefactor_ * std::exp(-kPi * kPi * scale_ * scale_ * sum);
}

Complex DotProductKernel::evaluate_components(const std::array<Vec2, 4>& a) const {
    Eigen::Matrix<Complex, 8, 8> q = Eigen::Matrix<Complex, 8, 8>::Zero();
    Eigen::Matrix<double, 8, 1> x;
    for (int i = 0; i < 4; ++i) {
        x(2 * i) = a[i].x();
        x(2 * i + 1) = a[i].y();
        for (int j = 0; j < 4; ++j) {
            q(2 * i, 2 * j) = coeff_(i, j);
            q(2 * i + 1, 2 * j + 1) = coeff_(i, j);
        }
    }
    const Complex form = (x.cast<Complex>().transpose() * q * x.cast<Complex>())(0, 0);
    return prefactor_ * std::exp(-kPi * kPi * scale_ * scale_ * form);
}

std::string DotProductKernel::to_text() const {
    std::ostringstream out;
    out << "prefactor=" << format_complex(prefactor_) << '\n';
    out << "scale=" << format_real(scale_) << '\n';
    for (const auto& [i, j] : kUpperTriangle) {
        out << entry_key(i, j) << '=' << format_complex(coeff_(i, j)) << '\n';
    }
    return out.str();
}

DotProductKernel DotProductKernel::from_text(std::string_view text) {
    std::map<std::string, std::string, std::less<>> fields;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("kernel record line without '=': " + line);
        fields[line.substr(0, eq)] = line.substr(eq + 1);
    }
    const auto field = [&](const std::string& key) -> std::string_view {
        const auto it = fields.find(key);
        if (it == fields.end()) throw DomainError("kernel record missing '" + key + "'");
        return it->second;
    };
    Matrix4c m;
    for (const auto& [i, j] : kUpperTriangle) {
        const auto key = entry_key(i, j);
        m(i, j) = parse_complex(field(key), key);
        m(j, i) = m(i, j);
    }
    return DotProductKernel(parse_complex(field("prefactor"), "prefactor"),
                            parse_real(field("scale"), "scale"), m);
}

DotProductKernel spdc_kernel(double pump_waist, double beta) {
    if (!(pump_waist > 0.0)) throw DomainError("pump waist must be positive");
    if (!(beta >= 0.0)) throw DomainError("beta must be non-negative");
    // |a1 + a3|^2 + (beta / 2) |a1 - a3|^2 on the ket side, mirrored on (2, 4).
    Matrix4c m = Matrix4c::Zero();
    for (const auto& [i, j] : {std::pair{0, 2}, std::pair{1, 3}}) {
        m(i, i) = m(j, j) = 1.0 + 0.5 * beta;
        m(i, j) = m(j, i) = 1.0 - 0.5 * beta;
    }
    const double w2 = pump_waist * pump_waist;
    return DotProductKernel(8.0 * kPi * kPi * w2 * w2 * beta, pump_waist, m);
}

double hermiticity_defect(const DotProductKernel& kernel) {
    static constexpr std::array<int, 4> swap{1, 0, 3, 2};
    const Matrix4c& m = kernel.coeff();
    Matrix4c mirrored;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            mirrored(i, j) = std::conj(m(swap[i], swap[j]));
        }
    }
    double defect = (mirrored - m).norm();
    const double magnitude = std::abs(kernel.prefactor());
    if (magnitude > 0.0) defect += std::abs(kernel.prefactor().imag()) / magnitude;
    return defect;
}

bool real_part_positive_definite(const MatrixXc& m) {
    if (m.rows() == 0) return true;
    const Eigen::MatrixXd re = 0.5 * (m.real() + m.real().transpose());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(re, Eigen::EigenvaluesOnly);
    const double norm = re.norm();
    return solver.eigenvalues()(0) > kDefiniteTolerance * norm && norm > 0.0;
}

Complex trace(const DotProductKernel& kernel) {
    const Matrix4c& m = kernel.coeff();
    Eigen::Matrix<Complex, 2, 2> restricted;
    restricted(0, 0) = m(0, 0) + m(1, 1) + 2.0 * m(0, 1);
    restricted(1, 1) = m(2, 2) + m(3, 3) + 2.0 * m(2, 3);
    restricted(0, 1) = restricted(1, 0) = m(0, 2) + m(0, 3) + m(1, 2) + m(1, 3);
    if (!real_part_positive_definite(restricted)) {
        throw DivergenceError("kernel trace diverges: restricted form is not integrable");
    }
    const double w = kernel.scale();
    return kernel.prefactor() / (kPi * kPi * w * w * w * w * restricted.determinant());
}

ExtendedKernel::ExtendedKernel(Complex prefactor, double scale, std::vector<std::string> variables,
                               MatrixXc coeff)
    : ExtendedKernel(prefactor, scale, std::move(variables), std::move(coeff),
                     MatrixXc::Zero(0, 0), MatrixXc::Zero(0, 0)) {}

ExtendedKernel::ExtendedKernel(Complex prefactor, double scale, std::vector<std::string> variables,
                               MatrixXc coeff, MatrixXc sources, MatrixXc source_quad)
    : prefactor_(prefactor),
      scale_(scale),
      variables_(std::move(variables)),
      coeff_(std::move(coeff)),
      sources_(std::move(sources)),
      source_quad_(std::move(source_quad)) {
    if (!(scale > 0.0)) throw DomainError("kernel scale must be positive");
    const auto n = static_cast<Eigen::Index>(variables_.size());
    if (coeff_.rows() != n || coeff_.cols() != n) {
        throw DomainError("coefficient matrix does not match the variable list");
    }
    require_symmetric(coeff_, "extended kernel");
    coeff_ = 0.5 * (coeff_ + coeff_.transpose()).eval();
    if (sources_.size() == 0) sources_ = MatrixXc::Zero(2 * n, source_quad_.rows());
    if (sources_.rows() != 2 * n) throw DomainError("sources need one row per vector component");
    if (source_quad_.size() == 0) {
        source_quad_ = MatrixXc::Zero(sources_.cols(), sources_.cols());
    }
    if (source_quad_.rows() != sources_.cols() || source_quad_.cols() != sources_.cols()) {
        throw DomainError("source quadratic form does not match the source count");
    }
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        for (std::size_t j = i + 1; j < variables_.size(); ++j) {
            if (variables_[i] == variables_[j]) {
                throw DomainError("duplicate variable name '" + variables_[i] + "'");
            }
        }
    }
}

ExtendedKernel ExtendedKernel::from_dot_product(const DotProductKernel& kernel) {
    return ExtendedKernel(kernel.prefactor(), kernel.scale(), {"a1", "a2", "a3", "a4"},
                          MatrixXc(kernel.coeff()));
}

Eigen::Index ExtendedKernel::index_of(std::string_view name) const {
    const auto it = std::find(variables_.begin(), variables_.end(), name);
    if (it == variables_.end()) throw DomainError("unknown variable '" + std::string(name) + "'");
    return it - variables_.begin();
}

Complex ExtendedKernel::evaluate(const std::vector<Vec2>& values, const VectorXc& mu) const {
    const auto n = variable_count();
    if (static_cast<Eigen::Index>(values.size()) != n) {
        throw DomainError("wrong number of variable values");
    }
    if (mu.size() != source_count()) throw DomainError("wrong number of generating parameters");
    Complex quadratic = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            quadratic += coeff_(i, j) * values[i].dot(values[j]);
        }
    }
    Complex linear = 0.0;
    if (source_count() > 0) {
        const VectorXc driven = sources_ * mu;
        for (Eigen::Index v = 0; v < n; ++v) {
            linear += values[v].x() * driven(2 * v) + values[v].y() * driven(2 * v + 1);
        }
    }
    const Complex residual = source_count() > 0 ? Complex((mu.transpose() * source_quad_ * mu)(0, 0))
                                                : Complex(0.0);
    return prefactor_ * std::exp(-kPi * kPi * scale_ * scale_ * quadratic + linear + residual);
}

Complex ExtendedKernel::evaluate(const std::vector<Vec2>& values) const {
    return evaluate(values, VectorXc::Zero(source_count()));
}

DotProductKernel ExtendedKernel::to_dot_product() const {
    if (variable_count() != 4) throw DomainError("a dot-product kernel needs exactly four variables");
    if (sources_.size() > 0 && sources_.cwiseAbs().maxCoeff() > 0.0) {
        throw DomainError("kernel still carries linear sources");
    }
    return DotProductKernel(prefactor_, scale_, Matrix4c(coeff_));
}

ExtendedKernel gaussian_marginalize(const ExtendedKernel& extended,
                                    const std::vector<std::string>& variables) {
    std::vector<Eigen::Index> integrate;
    for (const auto& name : variables) {
        const auto idx = extended.index_of(name);
        if (std::find(integrate.begin(), integrate.end(), idx) != integrate.end()) {
            throw DomainError("variable '" + name + "' listed twice");
        }
        integrate.push_back(idx);
    }

    const MatrixXc& full = extended.coeff();
    MatrixXc block(integrate.size(), integrate.size());
    for (std::size_t i = 0; i < integrate.size(); ++i) {
        for (std::size_t j = 0; j < integrate.size(); ++j) {
            block(i, j) = full(integrate[i], integrate[j]);
        }
    }
    if (!real_part_positive_definite(block)) {
        // Blame the variable that dominates the least-definite direction.
        const Eigen::MatrixXd re = 0.5 * (block.real() + block.real().transpose());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(re);
        Eigen::Index worst = 0;
        solver.eigenvectors().col(0).cwiseAbs().maxCoeff(&worst);
        const auto& name = extended.variables()[integrate[worst]];
        throw IntegrabilityError("Gaussian block is not integrable in variable '" + name + "'", name);
    }

    MatrixXc m = full;
    MatrixXc s = extended.sources();
    MatrixXc b = extended.source_quad();
    Complex prefactor = extended.prefactor();
    const double w2 = extended.scale() * extended.scale();
    std::vector<bool> alive(m.rows(), true);

    for (const auto v : integrate) {
        const Complex pivot = m(v, v);
        prefactor *= 1.0 / (kPi * w2 * pivot);
        if (s.cols() > 0) {
            const Eigen::Matrix<Complex, 1, Eigen::Dynamic> sx = s.row(2 * v);
            const Eigen::Matrix<Complex, 1, Eigen::Dynamic> sy = s.row(2 * v + 1);
            b += (sx.transpose() * sx + sy.transpose() * sy) / (4.0 * kPi * kPi * w2 * pivot);
            for (Eigen::Index k = 0; k < m.rows(); ++k) {
                if (!alive[k] || k == v) continue;
                const Complex ratio = m(k, v) / pivot;
                s.row(2 * k) -= ratio * sx;
                s.row(2 * k + 1) -= ratio * sy;
            }
        }
        const VectorXc column = m.col(v);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!alive[i] || i == v) continue;
            for (Eigen::Index j = 0; j < m.rows(); ++j) {
                if (!alive[j] || j == v) continue;
                m(i, j) -= column(i) * column(j) / pivot;
            }
        }
        alive[v] = false;
    }

    std::vector<std::string> names;
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (alive[i]) {
            kept.push_back(i);
            names.push_back(extended.variables()[i]);
        }
    }
    const auto n = static_cast<Eigen::Index>(kept.size());
    MatrixXc coeff(n, n);
    MatrixXc sources(2 * n, s.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) coeff(i, j) = m(kept[i], kept[j]);
        sources.row(2 * i) = s.row(2 * kept[i]);
        sources.row(2 * i + 1) = s.row(2 * kept[i] + 1);
    }
    b = 0.5 * (b + b.transpose()).eval();
    return ExtendedKernel(prefactor, extended.scale(), std::move(names), std::move(coeff),
                          std::move(sources), std::move(b));
}

}  // namespace oamturb::kernel
