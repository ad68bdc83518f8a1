#pragma once

/**
 * @file radial_solver.hpp
 * @brief First Robin eigenvalue of the radial p-Laplacian by shooting.
 *
 * For a radial profile v(r) with flux w = |v'|^{p-2} v' the eigenproblem
 *
 *   -Delta_p v = lambda |v|^{p-2} v,    |v'|^{p-2} dv/dN + beta |v|^{p-2} v = 0
 *
 * becomes the first-order system
 *
 *   v' = sign(w) |w|^{1/(p-1)}
 *   w' = -lambda |v|^{p-2} v - (n-1) (zeta'/zeta) w
 *
 * which stays regular where v' = 0. Balls start from the series expansion at
 * r = eps R; annuli start at the inner sphere with v = 1, w = beta.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "robinbd/errors.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/numerics.hpp"

namespace robinbd {

/// Exponent p and Robin parameter beta.
struct RobinParams {
    double p = 2.0;
    double beta = 1.0;

    void validate() const
    {
        if (!(p > 1.0) || !std::isfinite(p)) {
            throw DomainError("Robin exponent p must exceed 1");
        }
        if (!(beta > 0.0) || !std::isfinite(beta)) {
            throw DomainError("Robin parameter beta must be positive");
        }
    }

    /// beta^{1/(p-1)}, the boundary value of |v'|/v.
    [[nodiscard]] double boundary_log_gradient() const { return std::pow(beta, 1.0 / (p - 1.0)); }
};

struct Ball {
    double radius;
};

struct Annulus {
    double inner;
    double outer;
};

/// Geodesic ball B_R or annulus B_{R2} \ B_{R1} centred at the pole.
class RadialDomain {
public:
    [[nodiscard]] static RadialDomain ball(double radius) { return RadialDomain(Ball{radius}); }
    [[nodiscard]] static RadialDomain annulus(double inner, double outer)
    {
        return RadialDomain(Annulus{inner, outer});
    }

    [[nodiscard]] bool is_ball() const noexcept { return std::holds_alternative<Ball>(kind_); }
    [[nodiscard]] double inner_radius() const noexcept
    {
        return is_ball() ? 0.0 : std::get<Annulus>(kind_).inner;
    }
    [[nodiscard]] double outer_radius() const noexcept
    {
        return is_ball() ? std::get<Ball>(kind_).radius : std::get<Annulus>(kind_).outer;
    }
    [[nodiscard]] double width() const noexcept { return outer_radius() - inner_radius(); }

    void validate(const SpaceForm& sf) const
    {
        if (is_ball()) {
            if (!(outer_radius() > 0.0)) {
                throw DomainError("ball radius must be positive");
            }
        } else if (!(inner_radius() > 0.0 && inner_radius() < outer_radius())) {
            throw DomainError("annulus radii must satisfy 0 < R1 < R2");
        }
        if (!(outer_radius() < sf.max_radius())) {
            throw DomainError("outer radius must stay below the antipodal radius");
        }
    }

    [[nodiscard]] double volume(const SpaceForm& sf) const
    {
        const double outer = ball_volume(sf, outer_radius());
        return is_ball() ? outer : outer - ball_volume(sf, inner_radius());
    }

    /// Total area of the Robin boundary (one sphere for balls, two for annuli).
    [[nodiscard]] double boundary_area(const SpaceForm& sf) const
    {
        const double outer = sphere_area(sf, outer_radius());
        return is_ball() ? outer : outer + sphere_area(sf, inner_radius());
    }

    [[nodiscard]] std::string label() const;

    friend bool operator==(const RadialDomain& a, const RadialDomain& b)
    {
        return a.is_ball() == b.is_ball() && a.inner_radius() == b.inner_radius() &&
               a.outer_radius() == b.outer_radius();
    }

private:
    explicit RadialDomain(std::variant<Ball, Annulus> kind) : kind_(kind) {}
    std::variant<Ball, Annulus> kind_;
};

namespace detail {

inline std::string format_short(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace detail

inline std::string RadialDomain::label() const
{
    if (is_ball()) {
        return "ball(" + detail::format_short(outer_radius()) + ")";
    }
    return "annulus(" + detail::format_short(inner_radius()) + "," +
           detail::format_short(outer_radius()) + ")";
}

struct FluxState {
    double v;
    double w;
};

struct FluxRate {
    double dv;
    double dw;
};

namespace detail {

/// Right-hand side of the flux system with exponents precomputed.
class RadialSystem {
public:
    RadialSystem(const SpaceForm& sf, const RobinParams& params, double lambda)
        : sf_(sf), lambda_(lambda), inv_pm1_(1.0 / (params.p - 1.0)), pm2_(params.p - 2.0),
          nm1_(sf.dimension - 1.0)
    {
    }

    [[nodiscard]] FluxRate rate(double r, double v, double w) const noexcept
    {
        const double dv = w == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(w), inv_pm1_), w);
        const double source = v == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(v), pm2_ + 1.0), v);
        const double dw = -lambda_ * source - nm1_ * warp_log_derivative(sf_, r) * w;
        return {dv, dw};
    }

    /// Rate at the ball centre, where (n-1) zeta'/zeta w tends to -(n-1) lambda v^{p-1} / n.
    [[nodiscard]] FluxRate centre_rate(double v) const noexcept
    {
        return {0.0, -lambda_ * std::pow(v, pm2_ + 1.0) / (nm1_ + 1.0)};
    }

    void operator()(const std::array<double, 2>& x, std::array<double, 2>& dxdt, double r) const
    {
        const FluxRate f = rate(r, x[0], x[1]);
        dxdt[0] = f.dv;
        dxdt[1] = f.dw;
    }

    [[nodiscard]] double lambda() const noexcept { return lambda_; }

private:
    SpaceForm sf_;
    double lambda_;
    double inv_pm1_;
    double pm2_;
    double nm1_;
};

} // namespace detail

/// Flux-form right-hand side at r > 0.
[[nodiscard]] inline FluxRate flux_rhs(const SpaceForm& sf, const RobinParams& params,
                                       double lambda, double r, FluxState state)
{
    params.validate();
    detail::check_radius(sf, r);
    if (detail::warp(sf, r) == 0.0) {
        throw DomainError("flux_rhs: zeta vanishes; start integration at r = eps > 0");
    }
    return detail::RadialSystem(sf, params, lambda).rate(r, state.v, state.w);
}

/// Integration and search controls.
struct SolverOptions {
    int grid = 2048;                ///< output intervals (uniform grid)
    double tol = 1e-10;             ///< relative width of the final eigenvalue bracket
    double rtol = 1e-11;            ///< integrator relative tolerance
    double atol = 1e-13;            ///< integrator absolute tolerance
    double start_offset = 1e-6;     ///< series start radius as a fraction of R
    int max_scan_steps = 400;

    void validate() const
    {
        if (grid < 8) {
            throw DomainError("solver grid needs at least 8 intervals");
        }
        if (!(tol > 0.0) || !(rtol > 0.0) || !(atol > 0.0) || !(start_offset > 0.0)) {
            throw DomainError("solver tolerances must be positive");
        }
    }
};

struct ShootResult {
    double residual;  ///< w(R) + beta v(R)^{p-1} at the outer sphere
    bool positive;    ///< v > 0 on the whole integration range
};

namespace detail {

struct Trajectory {
    ShootResult result;
    std::vector<FluxState> samples;  // one per output node when requested
};

/// Integrate from the domain's starting data to its outer sphere, landing on
/// every node of the uniform output grid. With `stop_on_sign_loss` the
/// integration ends as soon as v <= 0.
inline Trajectory integrate_profile(const SpaceForm& sf, const RobinParams& params,
                                    const RadialDomain& dom, double lambda,
                                    const SolverOptions& opts, bool keep_samples,
                                    bool stop_on_sign_loss)
{
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;

    const RadialSystem system(sf, params, lambda);
    const double r_in = dom.inner_radius();
    const double r_out = dom.outer_radius();
    const int m = opts.grid;
    const double h = (r_out - r_in) / m;

    State x{};
    double t = 0.0;
    Trajectory out{{0.0, true}, {}};
    if (keep_samples) {
        out.samples.reserve(static_cast<std::size_t>(m) + 1);
    }

    if (dom.is_ball()) {
        const double eps = opts.start_offset * r_out;
        const double p = params.p;
        const double n = sf.dimension;
        x[0] = 1.0 - ((p - 1.0) / p) * std::pow(lambda / n, 1.0 / (p - 1.0)) *
                         std::pow(eps, p / (p - 1.0));
        x[1] = -lambda * eps / n;
        t = eps;
        if (keep_samples) {
            out.samples.push_back({1.0, 0.0});
        }
    } else {
        x[0] = 1.0;
        x[1] = params.beta;
        t = r_in;
        if (keep_samples) {
            out.samples.push_back({x[0], x[1]});
        }
    }

    auto stepper = odeint::make_controlled(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());
    double dt = std::min(h, 1e-3 * (r_out - r_in));
    const double min_dt = 1e-15 * r_out;

    for (int k = 1; k <= m; ++k) {
        const double target = (k == m) ? r_out : r_in + k * h;
        int attempts = 0;
        while (t < target) {
            double step = std::min(dt, target - t);
            const bool clipped = step == target - t;
            const double t_before = t;
            const auto res = stepper.try_step(system, x, t, step);
            if (res == odeint::success) {
                if (clipped) {
                    t = target;
                }
                // only let a clipped step shrink the suggestion if it was rejected earlier
                dt = clipped ? std::max(dt, step) : step;
                if (!(x[0] > 0.0)) {
                    out.result.positive = false;
                    if (stop_on_sign_loss) {
                        out.result.residual = std::numeric_limits<double>::quiet_NaN();
                        return out;
                    }
                }
                if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
                    throw NumericalError("radial integration produced a non-finite state");
                }
            } else {
                dt = step;
                t = t_before;
                if (dt < min_dt || ++attempts > 10000) {
                    throw NumericalError("radial integration step underflow at r = " +
                                         std::to_string(t));
                }
            }
        }
        if (keep_samples) {
            out.samples.push_back({x[0], x[1]});
        }
    }
    const double vr = x[0];
    const double pow_v = vr == 0.0 ? 0.0 : std::copysign(std::pow(std::fabs(vr), params.p - 1.0), vr);
    out.result.residual = x[1] + params.beta * pow_v;
    return out;
}

} // namespace detail

/// Shoot on the ball B_R at trial eigenvalue lambda.
[[nodiscard]] inline ShootResult shoot_ball(const SpaceForm& sf, const RobinParams& params,
                                            double R, double lambda,
                                            const SolverOptions& opts = {})
{
    params.validate();
    opts.validate();
    const RadialDomain dom = RadialDomain::ball(R);
    dom.validate(sf);
    if (!(lambda > 0.0)) {
        throw DomainError("shoot_ball: lambda must be positive");
    }
    return detail::integrate_profile(sf, params, dom, lambda, opts, false, false).result;
}

/// Shoot on a general radial domain (ball or annulus).
[[nodiscard]] inline ShootResult shoot(const SpaceForm& sf, const RobinParams& params,
                                       const RadialDomain& dom, double lambda,
                                       const SolverOptions& opts = {})
{
    params.validate();
    opts.validate();
    dom.validate(sf);
    if (!(lambda > 0.0)) {
        throw DomainError("shoot: lambda must be positive");
    }
    return detail::integrate_profile(sf, params, dom, lambda, opts, false, false).result;
}

/**
 * Eigenvalue plus sampled profiles on a uniform grid, normalised so that
 * max v = 1. Between nodes v and w are evaluated by cubic Hermite
 * interpolation with slopes taken from the flux system itself.
 */
class RadialEigenSolution {
public:
    double lambda = 0.0;
    double residual = 0.0;       ///< Robin residual at the outer sphere, after normalisation
    double bracket_width = 0.0;  ///< relative width of the final eigenvalue bracket
    std::vector<double> grid;
    std::vector<double> v;
    std::vector<double> w;
    std::vector<double> f;

    RadialEigenSolution(SpaceForm sf, RobinParams params, RadialDomain dom)
        : sf_(sf), params_(params), dom_(dom)
    {
    }

    [[nodiscard]] const SpaceForm& space() const noexcept { return sf_; }
    [[nodiscard]] const RobinParams& params() const noexcept { return params_; }
    [[nodiscard]] const RadialDomain& domain() const noexcept { return dom_; }

    /// Radius of the maximum of v (0 for balls).
    [[nodiscard]] double max_location() const noexcept { return max_location_; }

    [[nodiscard]] double v_at(double r) const { return segment_v(locate(r))(clamp(r)); }
    [[nodiscard]] double w_at(double r) const { return segment_w(locate(r))(clamp(r)); }

    /// |v'|/v = |w|^{1/(p-1)} / v.
    [[nodiscard]] double f_at(double r) const
    {
        const double wr = w_at(r);
        return std::pow(std::fabs(wr), 1.0 / (params_.p - 1.0)) / v_at(r);
    }

    /// Cubic piece of v on cell k; monotone-limited unless the cell holds the maximum.
    [[nodiscard]] numerics::HermiteSegment segment_v(std::size_t k) const
    {
        const numerics::HermiteSegment seg{grid[k], grid[k + 1], v[k], v[k + 1], dv_[k], dv_[k + 1]};
        return dv_[k] * dv_[k + 1] < 0.0 ? seg : seg.monotone();
    }

    [[nodiscard]] numerics::HermiteSegment segment_w(std::size_t k) const
    {
        return numerics::HermiteSegment{grid[k], grid[k + 1], w[k], w[k + 1], dw_[k], dw_[k + 1]};
    }

    /// Index k with grid[k] <= r <= grid[k+1].
    [[nodiscard]] std::size_t locate(double r) const
    {
        const auto it = std::upper_bound(grid.begin(), grid.end(), r);
        const auto idx = static_cast<std::ptrdiff_t>(it - grid.begin()) - 1;
        return static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(grid.size()) - 2));
    }

    [[nodiscard]] std::size_t intervals() const noexcept { return grid.size() - 1; }

    // Populates slopes, normalisation and the log-gradient profile.
    void finalize(double lambda_value)
    {
        lambda = lambda_value;
        const detail::RadialSystem system(sf_, params_, lambda);
        const std::size_t count = grid.size();
        dv_.assign(count, 0.0);
        dw_.assign(count, 0.0);
        auto fill_slopes = [&] {
            for (std::size_t k = 0; k < count; ++k) {
                const FluxRate rate = (dom_.is_ball() && k == 0) ? system.centre_rate(v[k])
                                                                 : system.rate(grid[k], v[k], w[k]);
                dv_[k] = rate.dv;
                dw_[k] = rate.dw;
            }
        };
        fill_slopes();

        double peak = 1.0;
        max_location_ = 0.0;
        if (!dom_.is_ball()) {
            // The maximum is taken on the interpolant of v itself, so that the
            // normalised v_at never exceeds 1.
            std::size_t k = 0;
            while (k + 1 < count && dv_[k + 1] > 0.0) {
                ++k;
            }
            if (k + 1 >= count) {
                max_location_ = grid.back();
                peak = v.back();
            } else if (dv_[k + 1] == 0.0) {
                max_location_ = grid[k + 1];
                peak = v[k + 1];
            } else {
                const numerics::HermiteSegment vseg{grid[k], grid[k + 1], v[k], v[k + 1],
                                                    dv_[k], dv_[k + 1]};
                max_location_ = numerics::bisect_root([&](double r) { return vseg.derivative(r); },
                                                      grid[k], grid[k + 1], 1e-15);
                peak = vseg(max_location_);
            }
        }
        const double flux_scale = std::pow(peak, params_.p - 1.0);
        for (std::size_t k = 0; k < count; ++k) {
            v[k] /= peak;
            w[k] /= flux_scale;
        }
        fill_slopes();

        f.resize(count);
        const double inv = 1.0 / (params_.p - 1.0);
        for (std::size_t k = 0; k < count; ++k) {
            f[k] = std::pow(std::fabs(w[k]), inv) / v[k];
        }
        residual = w.back() + params_.beta * std::pow(v.back(), params_.p - 1.0);
    }

private:
    [[nodiscard]] double clamp(double r) const noexcept
    {
        return std::clamp(r, grid.front(), grid.back());
    }

    SpaceForm sf_;
    RobinParams params_;
    RadialDomain dom_;
    std::vector<double> dv_;
    std::vector<double> dw_;
    double max_location_ = 0.0;
};

namespace detail {

/// Upper-estimate scale for the eigenvalue: the 1D Dirichlet-type (pi / width)^p.
[[nodiscard]] inline double dirichlet_scale(const RobinParams& params, const RadialDomain& dom)
{
    return std::pow(kPi / dom.width(), params.p);
}

} // namespace detail

/**
 * Smallest lambda > 0 at which the Robin residual changes sign while the
 * profile stays positive.
 *
 * The predicate "residual > 0 and v > 0" holds exactly on (0, lambda_1):
 * below lambda_1 the profile is positive with positive residual, above it
 * either the residual is negative or v has a zero. A geometric scan brackets
 * the transition and bisection refines it; the lower end is reported, so the
 * returned profile satisfies f(R) <= beta^{1/(p-1)}.
 */
[[nodiscard]] inline RadialEigenSolution first_eigenvalue(const SpaceForm& sf,
                                                          const RobinParams& params,
                                                          const RadialDomain& dom,
                                                          const SolverOptions& opts = {})
{
    sf.validate();
    params.validate();
    opts.validate();
    dom.validate(sf);

    const auto admissible = [&](double lambda) {
        const auto traj = detail::integrate_profile(sf, params, dom, lambda, opts, false, true);
        return traj.result.positive && traj.result.residual > 0.0;
    };

    const double rayleigh_const = params.beta * dom.boundary_area(sf) / dom.volume(sf);
    const double scale = detail::dirichlet_scale(params, dom);
    const double lambda_max = 1e4 * scale;
    double lo = 0.1 * std::min(rayleigh_const, scale);
    for (int i = 0; i < 200 && !admissible(lo); ++i) {
        lo *= 0.5;
    }
    if (!admissible(lo)) {
        throw NumericalError("first_eigenvalue: no admissible starting eigenvalue");
    }
    const double scan_start = lo;
    double hi = 2.0 * lo;
    int steps = 0;
    while (admissible(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > lambda_max || ++steps > opts.max_scan_steps) {
            throw SearchExhausted("first_eigenvalue: no sign change in the scanned range",
                                  scan_start, lambda_max);
        }
    }
    while (hi - lo > opts.tol * lo) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;
        }
        (admissible(mid) ? lo : hi) = mid;
    }

    const auto upper = detail::integrate_profile(sf, params, dom, hi, opts, false, false);
    if (!upper.result.positive) {
        throw NumericalError("first_eigenvalue: positivity lost before the residual changed sign; "
                             "first eigenvalue not bracketed",
                             upper.result.residual);
    }
    const double width = (hi - lo) / lo;

    // Illinois-type regula falsi inside the final bracket. The residual is
    // smooth in lambda, so this drives it to integrator noise while lo stays
    // admissible.
    double r_lo = detail::integrate_profile(sf, params, dom, lo, opts, false, false).result.residual;
    double r_hi = upper.result.residual;
    int side = 0;
    for (int i = 0; i < 8 && r_lo > 0.0 && r_hi < 0.0; ++i) {
        const double cand = lo + (hi - lo) * r_lo / (r_lo - r_hi);
        if (!(cand > lo && cand < hi)) {
            break;
        }
        const auto probe = detail::integrate_profile(sf, params, dom, cand, opts, false, false);
        if (probe.result.positive && probe.result.residual > 0.0) {
            lo = cand;
            r_lo = probe.result.residual;
            if (side == -1) {
                r_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = cand;
            r_hi = probe.result.residual;
            if (side == 1) {
                r_lo *= 0.5;
            }
            side = 1;
        }
        if (r_lo < 1e-3 * std::fabs(r_hi) || (hi - lo) < 1e-15 * lo) {
            break;
        }
    }

    auto traj = detail::integrate_profile(sf, params, dom, lo, opts, true, false);
    RadialEigenSolution sol(sf, params, dom);
    const int m = opts.grid;
    const double r_in = dom.inner_radius();
    const double h = dom.width() / m;
    sol.grid.resize(static_cast<std::size_t>(m) + 1);
    sol.v.resize(sol.grid.size());
    sol.w.resize(sol.grid.size());
    for (int k = 0; k <= m; ++k) {
        sol.grid[static_cast<std::size_t>(k)] = (k == m) ? dom.outer_radius() : r_in + k * h;
        sol.v[static_cast<std::size_t>(k)] = traj.samples[static_cast<std::size_t>(k)].v;
        sol.w[static_cast<std::size_t>(k)] = traj.samples[static_cast<std::size_t>(k)].w;
    }
    sol.bracket_width = width;
    sol.finalize(lo);
    return sol;
}

/// Log-gradient profile f = |v'|/v on the solution grid.
[[nodiscard]] inline std::vector<double> log_gradient(const RadialEigenSolution& sol)
{
    return sol.f;
}

} // namespace robinbd
