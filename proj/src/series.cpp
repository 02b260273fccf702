#include "oamturb/series.hpp"

#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "oamturb/errors.hpp"

namespace oamturb::series {

namespace {

constexpr std::size_t kUnused = std::numeric_limits<std::size_t>::max();

// All exponent vectors of the given degree in lexicographic order (first
// variable descending).
void enumerate_degree(int variables, int degree, std::vector<int>& out) {
    std::vector<int> e(variables, 0);
    const auto recurse = [&](auto&& self, int position, int remaining) -> void {
        if (position == variables - 1) {
            e[position] = remaining;
            out.insert(out.end(), e.begin(), e.end());
            return;
        }
        for (int k = remaining; k >= 0; --k) {
            e[position] = k;
            self(self, position + 1, remaining - k);
        }
    };
    recurse(recurse, 0, degree);
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

MonomialIndex::MonomialIndex(int variables, int order) : variables_(variables), order_(order) {
    if (variables < 1) throw DomainError("series needs at least one variable");
    if (order < 0) throw DomainError("series order must be non-negative");
    for (int d = 0; d <= order; ++d) {
        degree_begin_.push_back(exponents_.size() / variables);
        enumerate_degree(variables, d, exponents_);
    }
    degree_begin_.push_back(exponents_.size() / variables);

    std::size_t span = 1;
    for (int v = 0; v < variables; ++v) span *= static_cast<std::size_t>(order + 1);
    lookup_.assign(span, kUnused);
    keys_.resize(size());
    for (std::size_t m = 0; m < size(); ++m) {
        keys_[m] = key(exponents(m));
        lookup_[keys_[m]] = m;
    }
}

std::span<const int> MonomialIndex::exponents(std::size_t monomial) const {
    return {exponents_.data() + monomial * variables_, static_cast<std::size_t>(variables_)};
}

std::size_t MonomialIndex::key(std::span<const int> exponents) const {
    std::size_t k = 0;
    for (int v = variables_ - 1; v >= 0; --v) k = k * (order_ + 1) + exponents[v];
    return k;
}

std::size_t MonomialIndex::find(std::span<const int> exponents) const {
    if (static_cast<int>(exponents.size()) != variables_) {
        throw DomainError("exponent vector has the wrong length");
    }
    int degree = 0;
    for (const int e : exponents) {
        if (e < 0) throw DomainError("negative exponent");
        degree += e;
    }
    if (degree > order_) {
        throw CapacityError("degree " + std::to_string(degree) + " exceeds series order " +
                            std::to_string(order_));
    }
    return lookup_[key(exponents)];
}

std::size_t MonomialIndex::product(std::size_t lhs, std::size_t rhs) const {
    // Keys add without carry as long as the product degree fits the order.
    return lookup_[keys_[lhs] + keys_[rhs]];
}

std::shared_ptr<const MonomialIndex> MonomialIndex::shared(int variables, int order) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const MonomialIndex>> cache;
    const std::lock_guard lock(mutex);
    auto& slot = cache[{variables, order}];
    if (!slot) slot = std::make_shared<const MonomialIndex>(variables, order);
    return slot;
}

TruncatedSeries::TruncatedSeries(int variables, int order)
    : index_(MonomialIndex::shared(variables, order)), coeffs_(index_->size(), Complex(0.0)) {}

TruncatedSeries TruncatedSeries::constant(int variables, int order, Complex value) {
    TruncatedSeries s(variables, order);
    s.coeffs_[0] = value;
    return s;
}

TruncatedSeries TruncatedSeries::variable(int variables, int order, int which) {
    if (which < 0 || which >= variables) throw DomainError("variable index out of range");
    TruncatedSeries s(variables, order);
    if (order >= 1) {
        std::vector<int> e(variables, 0);
        e[which] = 1;
        s.coeffs_[s.index_->find(e)] = 1.0;
    }
    return s;
}

Complex TruncatedSeries::coefficient(std::span<const int> exponents) const {
    return coeffs_[index_->find(exponents)];
}

void TruncatedSeries::set_coefficient(std::span<const int> exponents, Complex value) {
    coeffs_[index_->find(exponents)] = value;
}

Complex TruncatedSeries::derivative_at_zero(std::span<const int> exponents) const {
    double scale = 1.0;
    for (const int e : exponents) scale *= factorial(e);
    return coefficient(exponents) * scale;
}

void TruncatedSeries::require_compatible(const TruncatedSeries& other) const {
    if (index_ != other.index_) throw DomainError("series with different shapes");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(Complex scalar) {
    for (auto& c : coeffs_) c *= scalar;
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs) {
    lhs.require_compatible(rhs);
    const auto& index = *lhs.index_;
    TruncatedSeries out(lhs.variables(), lhs.order());
    for (int dl = 0; dl <= index.order(); ++dl) {
        for (int dr = 0; dl + dr <= index.order(); ++dr) {
            for (auto i = index.degree_begin(dl); i < index.degree_begin(dl + 1); ++i) {
                if (lhs.coeffs_[i] == Complex(0.0)) continue;
                for (auto j = index.degree_begin(dr); j < index.degree_begin(dr + 1); ++j) {
                    out.coeffs_[index.product(i, j)] += lhs.coeffs_[i] * rhs.coeffs_[j];
                }
            }
        }
    }
    return out;
}

TruncatedSeries exp(const TruncatedSeries& s) {
    const auto& index = *s.index_;
    const int order = index.order();
    TruncatedSeries e(s.variables(), order);
    e.coeffs_[0] = 1.0;
    // E_d = (1/d) sum_{k=1}^{d} k P_k E_{d-k}; every term is homogeneous of degree d.
    for (int d = 1; d <= order; ++d) {
        for (int k = 1; k <= d; ++k) {
            for (auto i = index.degree_begin(k); i < index.degree_begin(k + 1); ++i) {
                const Complex p = s.coeffs_[i];
                if (p == Complex(0.0)) continue;
                const Complex weight = p * (static_cast<double>(k) / d);
                for (auto j = index.degree_begin(d - k); j < index.degree_begin(d - k + 1); ++j) {
                    e.coeffs_[index.product(i, j)] += weight * e.coeffs_[j];
                }
            }
        }
    }
    if (s.coeffs_[0] != Complex(0.0)) e *= std::exp(s.coeffs_[0]);
    return e;
}

TruncatedSeries quadratic_form(const MatrixXc& b, int order) {
    if (b.rows() != b.cols()) throw DomainError("quadratic form must be square");
    const int n = static_cast<int>(b.rows());
    TruncatedSeries s(n, order);
    if (order < 2) return s;
    std::vector<int> e(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::fill(e.begin(), e.end(), 0);
            ++e[i];
            ++e[j];
            s.set_coefficient(e, s.coefficient(e) + b(i, j));
        }
    }
    return s;
}

}  // namespace oamturb::series
