#pragma once

#include <vector>

namespace oamturb {

// Fixed-order Gaussian rules built with the Golub-Welsch eigenvalue method.
class GaussLegendre {
public:
    explicit GaussLegendre(int nodes);

    // int_a^b f(x) dx
    template <typename F>
    auto integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        decltype(f(mid)) sum{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            sum += weights_[i] * f(mid + half * nodes_[i]);
        }
        return sum * half;
    }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Nodes and weights for int f(x) exp(-x^2) dx.
class GaussHermite {
public:
    explicit GaussHermite(int nodes);

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

}  // namespace oamturb
