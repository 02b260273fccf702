#pragma once

#include <memory>
#include <span>
#include <vector>

#include "oamturb/linalg.hpp"

namespace oamturb::series {

// Enumeration of the monomials in `variables` unknowns with total degree at
// most `order`, graded by degree and lexicographic inside each degree. The
// ordering inside a degree does not depend on `order`.
class MonomialIndex {
public:
    MonomialIndex(int variables, int order);

    int variables() const noexcept { return variables_; }
    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return exponents_.size() / variables_; }
    std::span<const int> exponents(std::size_t monomial) const;
    // First monomial of degree d; degree_begin(order + 1) == size().
    std::size_t degree_begin(int degree) const { return degree_begin_[degree]; }
    // Index of an exponent vector; throws CapacityError when its degree
    // exceeds the order.
    std::size_t find(std::span<const int> exponents) const;
    std::size_t product(std::size_t lhs, std::size_t rhs) const;

    static std::shared_ptr<const MonomialIndex> shared(int variables, int order);

private:
    std::size_t key(std::span<const int> exponents) const;

    int variables_;
    int order_;
    std::vector<int> exponents_;
    std::vector<std::size_t> keys_;
    std::vector<std::size_t> degree_begin_;
    std::vector<std::size_t> lookup_;  // key -> monomial, npos where unused
};

// Dense multivariate power series with complex coefficients truncated at a
// fixed total degree.
class TruncatedSeries {
public:
    TruncatedSeries(int variables, int order);

    static TruncatedSeries constant(int variables, int order, Complex value);
    static TruncatedSeries variable(int variables, int order, int which);

    int variables() const noexcept { return index_->variables(); }
    int order() const noexcept { return index_->order(); }
    const MonomialIndex& index() const noexcept { return *index_; }

    Complex coefficient(std::span<const int> exponents) const;
    void set_coefficient(std::span<const int> exponents, Complex value);
    Complex coefficient(std::size_t monomial) const { return coeffs_[monomial]; }

    // d^{e_1}...d^{e_n} f at zero: the coefficient times prod e_i!.
    Complex derivative_at_zero(std::span<const int> exponents) const;

    TruncatedSeries& operator+=(const TruncatedSeries& other);
    TruncatedSeries& operator-=(const TruncatedSeries& other);
    TruncatedSeries& operator*=(Complex scalar);
    friend TruncatedSeries operator+(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs += rhs; }
    friend TruncatedSeries operator-(TruncatedSeries lhs, const TruncatedSeries& rhs) { return lhs -= rhs; }
    friend TruncatedSeries operator*(TruncatedSeries lhs, Complex s) { return lhs *= s; }
    friend TruncatedSeries operator*(Complex s, TruncatedSeries rhs) { return rhs *= s; }
    friend TruncatedSeries operator*(const TruncatedSeries& lhs, const TruncatedSeries& rhs);

private:
    void require_compatible(const TruncatedSeries& other) const;

    std::shared_ptr<const MonomialIndex> index_;
    std::vector<Complex> coeffs_;

    friend TruncatedSeries exp(const TruncatedSeries& s);
};

// exp(s) through the degree recurrence d E_d = sum_k k P_k E_{d-k}, exact to
// the truncation order.
TruncatedSeries exp(const TruncatedSeries& s);

// sum_ij B_ij mu_i mu_j as a series.
TruncatedSeries quadratic_form(const MatrixXc& b, int order);

}  // namespace oamturb::series
