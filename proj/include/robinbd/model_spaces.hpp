#pragma once

/**
 * @file model_spaces.hpp
 * @brief Geometry of the rotationally symmetric model spaces.
 *
 * A model space is R^n, H^n, or a round sphere S^n(R). Geodesic balls are
 * described through the warp function zeta(r):
 *
 *   zeta(r) = r,  sin r,  sinh r          (sn_kappa, non-compact forms)
 *   zeta(r) = R sin(r / R)                (compact sphere model of radius R)
 *
 * with ball volume I(r) = n w_n int_0^r zeta^{n-1} and sphere area
 * I'(r) = n w_n zeta^{n-1}(r), where w_n is the volume of the Euclidean unit
 * n-ball.
 */

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "robinbd/errors.hpp"
#include "robinbd/numerics.hpp"

namespace robinbd {

inline constexpr double kPi = std::numbers::pi;

/// Model geometry: curvature sign, dimension, and (for the compact model)
/// the sphere radius. With a radius present the warp is R sin(r/R)
/// regardless of the sign; without one it is sn_kappa.
struct SpaceForm {
    int curvature_sign = 0;
    int dimension = 2;
    std::optional<double> sphere_radius;

    [[nodiscard]] static SpaceForm euclidean(int n) { return make(0, n, std::nullopt); }
    [[nodiscard]] static SpaceForm hyperbolic(int n) { return make(-1, n, std::nullopt); }
    [[nodiscard]] static SpaceForm sphere(int n, double radius = 1.0)
    {
        return make(1, n, radius);
    }
    /// Compact model S^n(R_kappa) attached to a lower Ricci bound of sign kappa.
    [[nodiscard]] static SpaceForm compact(int kappa, int n, double radius)
    {
        return make(kappa, n, radius);
    }
    /// Default model for a curvature sign: R^n, H^n, or the unit sphere.
    [[nodiscard]] static SpaceForm model(int kappa, int n)
    {
        return kappa == 1 ? sphere(n, 1.0) : make(kappa, n, std::nullopt);
    }

    [[nodiscard]] static SpaceForm make(int kappa, int n, std::optional<double> radius)
    {
        SpaceForm sf{kappa, n, radius};
        sf.validate();
        return sf;
    }

    void validate() const
    {
        if (curvature_sign < -1 || curvature_sign > 1) {
            throw DomainError("curvature sign must be -1, 0 or 1");
        }
        if (dimension < 2) {
            throw DomainError("dimension must be at least 2");
        }
        if (sphere_radius && !(*sphere_radius > 0.0 && std::isfinite(*sphere_radius))) {
            throw DomainError("sphere radius must be positive");
        }
    }

    [[nodiscard]] bool is_compact() const noexcept { return sphere_radius.has_value(); }

    /// Supremum of admissible radii: pi R for the sphere model, pi for the
    /// bare sin warp, infinity otherwise.
    [[nodiscard]] double max_radius() const noexcept
    {
        if (sphere_radius) {
            return kPi * *sphere_radius;
        }
        return curvature_sign == 1 ? kPi : std::numeric_limits<double>::infinity();
    }

    [[nodiscard]] std::string label() const
    {
        std::string s = curvature_sign == 0 ? "euclidean" : curvature_sign < 0 ? "hyperbolic"
                                                                              : "spherical";
        if (sphere_radius) {
            s += "-compact";
        }
        return s;
    }
};

namespace detail {

inline void check_radius(const SpaceForm& sf, double r)
{
    if (!(r >= 0.0) || !(r < sf.max_radius())) {
        throw DomainError("radius " + std::to_string(r) + " outside the model domain");
    }
}

// Unchecked warp and its derivative; callers have validated r.
[[nodiscard]] inline double warp(const SpaceForm& sf, double r) noexcept
{
    if (sf.sphere_radius) {
        const double R = *sf.sphere_radius;
        return R * std::sin(r / R);
    }
    switch (sf.curvature_sign) {
    case 1:
        return std::sin(r);
    case -1:
        return std::sinh(r);
    default:
        return r;
    }
}

[[nodiscard]] inline double warp_prime(const SpaceForm& sf, double r) noexcept
{
    if (sf.sphere_radius) {
        return std::cos(r / *sf.sphere_radius);
    }
    switch (sf.curvature_sign) {
    case 1:
        return std::cos(r);
    case -1:
        return std::cosh(r);
    default:
        return 1.0;
    }
}

/// zeta'/zeta, the mean-curvature coefficient of geodesic spheres.
[[nodiscard]] inline double warp_log_derivative(const SpaceForm& sf, double r) noexcept
{
    if (sf.sphere_radius) {
        const double R = *sf.sphere_radius;
        return 1.0 / (R * std::tan(r / R));
    }
    switch (sf.curvature_sign) {
    case 1:
        return 1.0 / std::tan(r);
    case -1:
        return 1.0 / std::tanh(r);
    default:
        return 1.0 / r;
    }
}

[[nodiscard]] inline double ipow(double x, int k) noexcept
{
    double out = 1.0;
    for (int i = 0; i < k; ++i) {
        out *= x;
    }
    return out;
}

} // namespace detail

/// Warp function zeta_kappa(r).
[[nodiscard]] inline double zeta(const SpaceForm& sf, double r)
{
    detail::check_radius(sf, r);
    return detail::warp(sf, r);
}

/// Derivative zeta_kappa'(r).
[[nodiscard]] inline double zeta_prime(const SpaceForm& sf, double r)
{
    detail::check_radius(sf, r);
    return detail::warp_prime(sf, r);
}

/// Gamma(k/2) for a positive integer k, by Gamma(x+1) = x Gamma(x) from
/// Gamma(1) = 1 and Gamma(1/2) = sqrt(pi).
[[nodiscard]] inline double gamma_half_integer(int k)
{
    if (k < 1) {
        throw DomainError("gamma_half_integer: argument must be positive");
    }
    double x = (k % 2 == 0) ? 1.0 : 0.5;
    double g = (k % 2 == 0) ? 1.0 : std::sqrt(kPi);
    while (2.0 * x < k) {
        g *= x;
        x += 1.0;
    }
    return g;
}

/// Volume of the Euclidean unit n-ball, pi^{n/2} / Gamma(n/2 + 1).
[[nodiscard]] inline double unit_ball_volume(int n)
{
    if (n < 0) {
        throw DomainError("unit_ball_volume: negative dimension");
    }
    if (n == 0) {
        return 1.0;
    }
    return std::pow(kPi, 0.5 * n) / gamma_half_integer(n + 2);
}

/// int_0^pi sin^{n-1}(theta) dtheta by W_n = W_{n-2} (n-2)/(n-1).
[[nodiscard]] inline double wallis(int n)
{
    if (n < 1) {
        throw DomainError("wallis: n must be at least 1");
    }
    double w = (n % 2 == 1) ? kPi : 2.0;
    for (int k = (n % 2 == 1) ? 3 : 4; k <= n; k += 2) {
        w *= static_cast<double>(k - 2) / static_cast<double>(k - 1);
    }
    return w;
}

/// Volume I_kappa(r) of the geodesic ball of radius r.
[[nodiscard]] inline double ball_volume(const SpaceForm& sf, double r)
{
    detail::check_radius(sf, r);
    const int n = sf.dimension;
    const double omega = unit_ball_volume(n);
    if (sf.curvature_sign == 0 && !sf.sphere_radius) {
        return omega * detail::ipow(r, n);
    }
    const double integral = numerics::integrate(
        [&](double s) { return detail::ipow(detail::warp(sf, s), n - 1); }, 0.0, r);
    return n * omega * integral;
}

/// Area I_kappa'(r) of the geodesic sphere of radius r.
[[nodiscard]] inline double sphere_area(const SpaceForm& sf, double r)
{
    detail::check_radius(sf, r);
    const int n = sf.dimension;
    return n * unit_ball_volume(n) * detail::ipow(detail::warp(sf, r), n - 1);
}

/// Total volume of the compact model, |S^n(R)| = (n+1) w_{n+1} R^n.
[[nodiscard]] inline double total_volume(const SpaceForm& sf)
{
    if (!sf.is_compact()) {
        return std::numeric_limits<double>::infinity();
    }
    const int n = sf.dimension;
    return (n + 1) * unit_ball_volume(n + 1) * detail::ipow(*sf.sphere_radius, n);
}

/// Inverse of I_kappa: the radius whose geodesic ball has the given volume,
/// to 1e-12 absolute on volume (bracketed Newton with bisection fallback).
[[nodiscard]] inline double ball_radius_for_volume(const SpaceForm& sf, double volume)
{
    if (!(volume >= 0.0)) {
        throw DomainError("ball_radius_for_volume: negative volume");
    }
    if (volume == 0.0) {
        return 0.0;
    }
    if (sf.curvature_sign == 0 && !sf.sphere_radius) {
        return std::pow(volume / unit_ball_volume(sf.dimension), 1.0 / sf.dimension);
    }
    double hi;
    if (sf.sphere_radius || sf.curvature_sign == 1) {
        if (volume >= total_volume(sf.is_compact() ? sf : SpaceForm::sphere(sf.dimension))) {
            throw DomainError("volume exceeds the total volume of the compact model");
        }
        hi = std::nextafter(sf.max_radius(), 0.0);
    } else {
        hi = 1.0;
        while (ball_volume(sf, hi) < volume) {
            hi *= 2.0;
        }
    }
    double lo = 0.0;
    double r = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double residual = ball_volume(sf, r) - volume;
        if (std::fabs(residual) <= 4e-15 * volume || hi - lo < 1e-15 * hi) {
            return r;
        }
        if (residual > 0.0) {
            hi = r;
        } else {
            lo = r;
        }
        const double area = sphere_area(sf, r);
        double next = area > 0.0 ? r - residual / area : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::fabs(next - r) <= 1e-15 * r) {
            return next;
        }
        r = next;
    }
    throw NumericalError("ball_radius_for_volume did not converge");
}

// ---------------------------------------------------------------------------
// Model constants
// ---------------------------------------------------------------------------

/// Radius R_kappa of the comparison sphere for a compact manifold with
/// Ric >= (n-1) kappa and diameter d.
///
/// kappa = 1 gives 1; kappa = 0 gives d / ((1 + n W_n)^{1/n} - 1);
/// kappa = -1 gives 1 / C(d), with C(d) the positive root of
/// x int_0^d (cosh t + x sinh t)^{n-1} dt = W_n.
[[nodiscard]] inline double solve_R_kappa(int kappa, int n, double d = 0.0)
{
    if (n < 1) {
        throw DomainError("solve_R_kappa: n must be at least 1");
    }
    if (kappa == 1) {
        return 1.0;
    }
    if (kappa != 0 && kappa != -1) {
        throw DomainError("solve_R_kappa: kappa must be -1, 0 or 1");
    }
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw DomainError("solve_R_kappa: diameter must be positive");
    }
    const double wn = wallis(n);
    if (kappa == 0) {
        return d / (std::pow(1.0 + n * wn, 1.0 / n) - 1.0);
    }
    const auto lhs = [&](double x) {
        return x * numerics::integrate(
                       [&](double t) {
                           return detail::ipow(std::cosh(t) + x * std::sinh(t), n - 1);
                       },
                       0.0, d);
    };
    const auto residual = [&](double x) { return lhs(x) - wn; };
    const double lo = 1e-8;
    double hi = 1.0;
    while (residual(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e300) {
            throw NumericalError("solve_R_kappa: could not bracket C(d)", residual(hi));
        }
    }
    const double c = numerics::bisect_root(residual, lo, hi, 1e-13);
    const double res = residual(c);
    if (!(std::fabs(res) < 1e-10)) {
        throw NumericalError("solve_R_kappa: C(d) bisection did not converge", res);
    }
    return 1.0 / c;
}

/// Residual x int_0^d (cosh t + x sinh t)^{n-1} dt - W_n, for plug-back checks.
[[nodiscard]] inline double c_equation_residual(int n, double d, double x)
{
    const double integral = numerics::integrate(
        [&](double t) { return detail::ipow(std::cosh(t) + x * std::sinh(t), n - 1); }, 0.0, d);
    return x * integral - wallis(n);
}

/// Volume-ratio constant theta_{m,n} for n-dimensional minimal submanifolds
/// of an (n+m)-dimensional manifold with asymptotic volume ratio `avr`.
[[nodiscard]] inline double theta_mn(double avr, int n, int m)
{
    if (!(avr > 0.0 && avr <= 1.0)) {
        throw DomainError("theta_mn: asymptotic volume ratio must lie in (0, 1]");
    }
    if (n < 1 || m < 1) {
        throw DomainError("theta_mn: n and m must be at least 1");
    }
    if (m <= 2) {
        return avr;
    }
    return avr * (n + m) * unit_ball_volume(n + m) /
           (m * unit_ball_volume(m) * unit_ball_volume(n));
}

/// Which comparison setting a manifold falls under.
enum class Assumption {
    NonnegativeRicci, ///< complete non-compact, Ric >= 0, AVR > 0
    Hyperbolic,       ///< H^n itself
    CompactRicci,     ///< compact, Ric >= (n-1) kappa
};

/// alpha_kappa: AVR(g), 1, or |M| / |M_kappa| depending on the setting.
/// `ratio` is the AVR or the volume ratio; ignored for H^n.
[[nodiscard]] inline double alpha_kappa(Assumption a, double ratio = 1.0)
{
    if (a == Assumption::Hyperbolic) {
        return 1.0;
    }
    if (!(ratio > 0.0 && ratio <= 1.0)) {
        throw DomainError("alpha_kappa: ratio must lie in (0, 1]");
    }
    return ratio;
}

struct ModelConstants {
    double alpha_kappa = 1.0;
    double theta_mn = 1.0;
    double avr = 1.0;
    std::optional<double> diameter;
};

} // namespace robinbd
