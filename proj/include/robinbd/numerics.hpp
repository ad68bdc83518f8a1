#pragma once

// Small numerical building blocks shared by the geometry, solver and
// verification headers: adaptive quadrature, bracketed root finding,
// fixed Gauss-Legendre panels and cubic Hermite interpolation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "robinbd/errors.hpp"

namespace robinbd::numerics {

inline constexpr double kQuadratureTolerance = 1e-13;

/// Adaptive 15-point Gauss-Kronrod integral of a smooth integrand over [a, b].
template <class F>
[[nodiscard]] double integrate(F&& f, double a, double b, double tol = kQuadratureTolerance,
                               unsigned max_depth = 20)
{
    if (a == b) {
        return 0.0;
    }
    // Boost compares the error of each panel, measured on [-1, 1], against a
    // tolerance scaled by the panel width, so short intervals never meet it.
    // Integrating over [0, 1] keeps the two on the same footing.
    const double width = b - a;
    auto unit = [&f, a, width](double x) { return width * f(a + width * x); };
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(unit, 0.0, 1.0,
                                                                         max_depth, tol);
}

/// Root of a continuous f with a sign change on [lo, hi], by bisection to a
/// relative bracket width `rel_tol`.
template <class F>
[[nodiscard]] double bisect_root(F&& f, double lo, double hi, double rel_tol = 1e-14)
{
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NumericalError("bisect_root: no sign change on bracket");
    }
    std::uintmax_t max_iter = 400;
    const auto tol = [rel_tol](double x, double y) {
        return std::fabs(y - x) <= rel_tol * std::max(std::fabs(x), std::fabs(y)) ||
               std::fabs(y - x) <= std::numeric_limits<double>::min();
    };
    const auto bracket = boost::math::tools::bisect(std::forward<F>(f), lo, hi, tol, max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

/// Root of f on a sign-changing bracket by TOMS 748, for repeated root
/// refinement where bisection would dominate the cost.
template <class F>
[[nodiscard]] double bracket_root(const F& f, double lo, double hi)
{
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) {
        return lo;
    }
    if (fhi == 0.0) {
        return hi;
    }
    if ((flo < 0.0) == (fhi < 0.0)) {
        throw NumericalError("bracket_root: no sign change on bracket");
    }
    std::uintmax_t max_iter = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

/// Five-point Gauss-Legendre rule on [a, b].
template <class F>
[[nodiscard]] double gauss_legendre5(F&& f, double a, double b)
{
    static constexpr std::array<double, 5> x{0.0, -0.5384693101056831, 0.5384693101056831,
                                             -0.9061798459386640, 0.9061798459386640};
    static constexpr std::array<double, 5> w{0.5688888888888889, 0.4786286704993665,
                                             0.4786286704993665, 0.2369268850561891,
                                             0.2369268850561891};
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += w[i] * f(mid + half * x[i]);
    }
    return half * sum;
}

/// Cubic Hermite segment through (x0, y0, d0) and (x1, y1, d1).
struct HermiteSegment {
    double x0, x1, y0, y1, d0, d1;

    [[nodiscard]] double operator()(double x) const noexcept
    {
        const double h = x1 - x0;
        const double s = (x - x0) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
               (s3 - s2) * h * d1;
    }

    [[nodiscard]] double derivative(double x) const noexcept
    {
        const double h = x1 - x0;
        const double s = (x - x0) / h;
        const double s2 = s * s;
        return ((6 * s2 - 6 * s) * y0 + (6 * s - 6 * s2) * y1) / h + (3 * s2 - 4 * s + 1) * d0 +
               (3 * s2 - 2 * s) * d1;
    }

    /// Clamp the end slopes into the Fritsch-Carlson region so the segment is
    /// monotone whenever the data are.
    [[nodiscard]] HermiteSegment monotone() const noexcept
    {
        HermiteSegment out = *this;
        const double secant = (y1 - y0) / (x1 - x0);
        if (secant == 0.0) {
            out.d0 = out.d1 = 0.0;
            return out;
        }
        if (d0 * secant < 0.0) {
            out.d0 = 0.0;
        }
        if (d1 * secant < 0.0) {
            out.d1 = 0.0;
        }
        const double a = out.d0 / secant;
        const double b = out.d1 / secant;
        const double norm = a * a + b * b;
        if (norm > 9.0) {
            const double tau = 3.0 / std::sqrt(norm);
            out.d0 = tau * a * secant;
            out.d1 = tau * b * secant;
        }
        return out;
    }
};

} // namespace robinbd::numerics
