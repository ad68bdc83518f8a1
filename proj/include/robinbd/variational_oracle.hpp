#pragma once

/**
 * @file variational_oracle.hpp
 * @brief Discrete Rayleigh-quotient minimisation over radial profiles.
 *
 * The quotient
 *
 *   Q(u) = ( int |u'|^p zeta^{n-1} dr + beta sum_{boundary} u^p zeta^{n-1} )
 *          / int |u|^p zeta^{n-1} dr
 *
 * is discretised with one difference quotient per cell (centred at the cell
 * midpoint, weight zeta^{n-1} there) and trapezoidal weights for the mass
 * term. The common factor n w_n cancels and is omitted.
 *
 * Minimisation is projected descent (clamp at zero, rescale to max 1) along
 * the gradient taken in a metric built from the Hessian of the numerator
 * at the current iterate. That metric is tridiagonal, so each step costs
 * O(M); for p = 2 a unit step reduces to inverse iteration.
 */

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "robinbd/errors.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/radial_solver.hpp"

namespace robinbd {

/// Nonnegative nodal values on a strictly increasing radial grid.
struct DiscreteProfile {
    std::vector<double> grid;
    std::vector<double> values;

    void validate() const
    {
        if (grid.size() != values.size()) {
            throw DomainError("DiscreteProfile: grid and values differ in length");
        }
        if (grid.size() < 33) {
            throw DomainError("DiscreteProfile: at least 32 intervals are required");
        }
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (!(grid[i + 1] > grid[i])) {
                throw DomainError("DiscreteProfile: grid must be strictly increasing");
            }
        }
        if (std::any_of(values.begin(), values.end(), [](double x) { return !(x >= 0.0); })) {
            throw DomainError("DiscreteProfile: values must be nonnegative");
        }
    }
};

/// Uniform grid spanning the radial domain with `intervals` cells.
[[nodiscard]] inline std::vector<double> uniform_grid(const RadialDomain& dom, int intervals)
{
    std::vector<double> grid(static_cast<std::size_t>(intervals) + 1);
    const double a = dom.inner_radius();
    const double h = dom.width() / intervals;
    for (int i = 0; i <= intervals; ++i) {
        grid[static_cast<std::size_t>(i)] = (i == intervals) ? dom.outer_radius() : a + i * h;
    }
    return grid;
}

namespace detail {

/// Quadrature weights of the discrete quotient on a fixed grid.
class RayleighWeights {
public:
    RayleighWeights(const SpaceForm& sf, const RobinParams& params, const RadialDomain& dom,
                    const std::vector<double>& grid)
        : p_(params.p), beta_(params.beta)
    {
        const int n = sf.dimension;
        const std::size_t nodes = grid.size();
        inv_h_.resize(nodes - 1);
        cell_.resize(nodes - 1);
        mass_.assign(nodes, 0.0);
        boundary_.assign(nodes, 0.0);
        for (std::size_t j = 0; j + 1 < nodes; ++j) {
            const double h = grid[j + 1] - grid[j];
            inv_h_[j] = 1.0 / h;
            cell_[j] = h * ipow(warp(sf, 0.5 * (grid[j] + grid[j + 1])), n - 1);
            const double left = ipow(warp(sf, grid[j]), n - 1);
            const double right = ipow(warp(sf, grid[j + 1]), n - 1);
            mass_[j] += 0.5 * h * left;
            mass_[j + 1] += 0.5 * h * right;
        }
        boundary_.back() = ipow(warp(sf, grid.back()), n - 1);
        if (!dom.is_ball()) {
            boundary_.front() = ipow(warp(sf, grid.front()), n - 1);
        }
    }

    struct Parts {
        double numerator;
        double denominator;
    };

    [[nodiscard]] Parts evaluate(const std::vector<double>& u) const
    {
        double num = 0.0;
        for (std::size_t j = 0; j < cell_.size(); ++j) {
            num += cell_[j] * std::pow(std::fabs((u[j + 1] - u[j]) * inv_h_[j]), p_);
        }
        double den = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double up = std::pow(std::fabs(u[i]), p_);
            den += mass_[i] * up;
            num += beta_ * boundary_[i] * up;
        }
        return {num, den};
    }

    /// Gradient of the quotient and the tridiagonal metric at u.
    void linearize(const std::vector<double>& u, double quotient, double denominator,
                   std::vector<double>& grad, std::vector<double>& diag,
                   std::vector<double>& off) const
    {
        const std::size_t nodes = u.size();
        grad.assign(nodes, 0.0);
        diag.assign(nodes, 0.0);
        off.assign(nodes - 1, 0.0);
        double max_slope = 0.0;
        for (std::size_t j = 0; j < cell_.size(); ++j) {
            max_slope = std::max(max_slope, std::fabs((u[j + 1] - u[j]) * inv_h_[j]));
        }
        const double delta2 = std::pow(1e-3 * std::max(max_slope, 1e-6), 2);
        const double umax = *std::max_element(u.begin(), u.end());
        const double floor2 = std::pow(1e-3 * umax, 2);
        for (std::size_t j = 0; j < cell_.size(); ++j) {
            const double d = (u[j + 1] - u[j]) * inv_h_[j];
            const double g = p_ * cell_[j] * std::pow(std::fabs(d), p_ - 1.0) *
                             (d < 0.0 ? -1.0 : 1.0) * inv_h_[j];
            grad[j] -= g;
            grad[j + 1] += g;
            const double a = p_ * (p_ - 1.0) * cell_[j] * std::pow(d * d + delta2, 0.5 * (p_ - 2.0)) *
                             inv_h_[j] * inv_h_[j];
            diag[j] += a;
            diag[j + 1] += a;
            off[j] -= a;
        }
        for (std::size_t i = 0; i < nodes; ++i) {
            const double ui = std::fabs(u[i]);
            const double dpow = p_ * std::pow(ui, p_ - 1.0);
            grad[i] += beta_ * boundary_[i] * dpow - quotient * mass_[i] * dpow;
            const double curv = p_ * (p_ - 1.0) * std::pow(ui * ui + floor2, 0.5 * (p_ - 2.0));
            diag[i] += beta_ * boundary_[i] * curv + 1e-2 * quotient * mass_[i] * curv;
        }
        for (std::size_t i = 0; i < nodes; ++i) {
            grad[i] /= denominator;
            diag[i] /= denominator;
        }
        for (double& o : off) {
            o /= denominator;
        }
    }

private:
    double p_;
    double beta_;
    std::vector<double> inv_h_;
    std::vector<double> cell_;
    std::vector<double> mass_;
    std::vector<double> boundary_;
};

/// Solve the symmetric tridiagonal system (diag, off) x = rhs.
inline std::vector<double> solve_tridiagonal(std::vector<double> diag, const std::vector<double>& off,
                                             std::vector<double> rhs)
{
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double m = off[i - 1] / diag[i - 1];
        diag[i] -= m * off[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
    }
    return rhs;
}

inline void normalize_sup(std::vector<double>& u)
{
    for (double& x : u) {
        x = std::max(x, 0.0);
    }
    const double m = *std::max_element(u.begin(), u.end());
    if (!(m > 0.0)) {
        throw NumericalError("variational oracle: iterate collapsed to zero");
    }
    for (double& x : u) {
        x /= m;
    }
}

} // namespace detail

/// Discrete Rayleigh quotient of a radial profile.
[[nodiscard]] inline double rayleigh(const SpaceForm& sf, const RobinParams& params,
                                     const RadialDomain& dom, const DiscreteProfile& prof)
{
    sf.validate();
    params.validate();
    dom.validate(sf);
    prof.validate();
    const detail::RayleighWeights weights(sf, params, dom, prof.grid);
    const auto parts = weights.evaluate(prof.values);
    if (!(parts.denominator > 0.0)) {
        throw DomainError("rayleigh: profile has zero weighted p-norm");
    }
    return parts.numerator / parts.denominator;
}

struct OracleOptions {
    int max_iterations = 20000;
    int stall_window = 50;
    double stall_tolerance = 1e-12;
};

struct OracleResult {
    double lambda_est;
    DiscreteProfile profile;
    int iterations;
};

/// Minimise the discrete quotient from u = 1 on a uniform grid of M cells.
[[nodiscard]] inline OracleResult minimize(const SpaceForm& sf, const RobinParams& params,
                                           const RadialDomain& dom, int intervals = 2048,
                                           const OracleOptions& opts = {})
{
    sf.validate();
    params.validate();
    dom.validate(sf);
    if (intervals < 32) {
        throw DomainError("minimize: at least 32 intervals are required");
    }
    DiscreteProfile prof{uniform_grid(dom, intervals), {}};
    prof.values.assign(prof.grid.size(), 1.0);
    const detail::RayleighWeights weights(sf, params, dom, prof.grid);

    std::vector<double>& u = prof.values;
    auto parts = weights.evaluate(u);
    double q = parts.numerator / parts.denominator;
    std::vector<double> history{q};
    std::vector<double> grad, diag, off, trial(u.size());
    double step = 1.0;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        weights.linearize(u, q, parts.denominator, grad, diag, off);
        const std::vector<double> dir = detail::solve_tridiagonal(diag, off, grad);
        const double slope = -std::inner_product(grad.begin(), grad.end(), dir.begin(), 0.0);

        bool accepted = false;
        step = std::min(1.0, 2.0 * step);
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < u.size(); ++i) {
                trial[i] = u[i] - step * dir[i];
            }
            detail::normalize_sup(trial);
            const auto tparts = weights.evaluate(trial);
            const double tq = tparts.numerator / tparts.denominator;
            if (tq <= q + 1e-4 * step * slope) {
                u.swap(trial);
                parts = tparts;
                q = tq;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        history.push_back(q);
        const auto window = static_cast<std::size_t>(opts.stall_window);
        if (!accepted ||
            (history.size() > window &&
             history[history.size() - 1 - window] - q <= opts.stall_tolerance * q)) {
            return {q, prof, iter};
        }
    }
    throw NumericalError("minimize: iteration cap reached", q);
}

} // namespace robinbd
