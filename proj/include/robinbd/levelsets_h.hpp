#pragma once

/**
 * @file levelsets_h.hpp
 * @brief Superlevel sets of radial eigenfunctions and the H-functional.
 *
 * For a level t in (0, 1) the superlevel set U_t = {v > t} of a radial
 * profile is a ball or a shell. Its boundary splits into the part inside the
 * domain (crossing spheres, ∂U_t^i) and the part on the Robin boundary
 * (∂U_t^e). For a bounded radial test function phi,
 *
 *   H(t, phi) = ( int_{∂U_t^i} |phi|^{p-1} + beta |∂U_t^e|
 *                 - (p-1) int_{U_t} |phi|^p ) / |U_t|.
 *
 * With phi = |v'|/v this equals the eigenvalue for every t, and for any
 * bounded phi some level satisfies H(t, phi) <= lambda.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "robinbd/errors.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/numerics.hpp"
#include "robinbd/radial_solver.hpp"

namespace robinbd {

/// Geometry of U_t = {v > t}: the shell [inner_radius, outer_radius] with
/// each bounding sphere either a level crossing (interior) or part of the
/// Robin boundary (exterior). For balls the inner radius is 0 and has no
/// bounding sphere.
struct LevelSetData {
    double t = 0.0;
    double volume = 0.0;
    double interior_area = 0.0;
    double exterior_area = 0.0;
    double inner_radius = 0.0;
    double outer_radius = 0.0;
    bool inner_is_crossing = false;
    bool outer_is_crossing = false;
};

namespace detail {

/// Radius in [lo, hi] where the solution profile crosses level t.
inline double crossing_radius(const RadialEigenSolution& sol, double t, double lo, double hi)
{
    return numerics::bisect_root([&](double r) { return sol.v_at(r) - t; }, lo, hi, 1e-15);
}

} // namespace detail

/// Superlevel set of the normalised eigenfunction at level t.
[[nodiscard]] inline LevelSetData level_sets(const RadialEigenSolution& sol, double t)
{
    if (!(t > 0.0)) {
        throw DomainError("level_sets: level must be positive");
    }
    // Rounding can leave the interpolated peak an ulp below 1.
    if (!(t < 1.0) || !(t < sol.v_at(sol.max_location()))) {
        throw EmptyLevelSet("level_sets: level at or above max v gives an empty set");
    }
    const SpaceForm& sf = sol.space();
    const RadialDomain& dom = sol.domain();
    LevelSetData out;
    out.t = t;

    const double r_out = dom.outer_radius();
    if (t < sol.v.back()) {
        out.outer_radius = r_out;
        out.exterior_area += sphere_area(sf, r_out);
    } else {
        out.outer_radius = detail::crossing_radius(sol, t, sol.max_location(), r_out);
        out.outer_is_crossing = true;
        out.interior_area += sphere_area(sf, out.outer_radius);
    }

    if (dom.is_ball()) {
        out.inner_radius = 0.0;
    } else {
        const double r_in = dom.inner_radius();
        if (t < sol.v.front()) {
            out.inner_radius = r_in;
            out.exterior_area += sphere_area(sf, r_in);
        } else {
            out.inner_radius = detail::crossing_radius(sol, t, r_in, sol.max_location());
            out.inner_is_crossing = true;
            out.interior_area += sphere_area(sf, out.inner_radius);
        }
    }

    out.volume = ball_volume(sf, out.outer_radius) -
                 (out.inner_radius > 0.0 ? ball_volume(sf, out.inner_radius) : 0.0);
    return out;
}

/// H(t, phi) together with the level-set data it was built from.
struct HEvaluation {
    LevelSetData level;
    double value;
};

/**
 * H-functional of a fixed radial test function phi on a solved domain.
 *
 * The volume term int_{U_t} |phi|^p is taken from a cumulative table of
 * five-point Gauss-Legendre panels over the solution grid, so repeated level
 * evaluations cost one partial panel each.
 */
template <class Phi>
class HFunctional {
public:
    HFunctional(const RadialEigenSolution& sol, Phi phi) : sol_(&sol), phi_(std::move(phi))
    {
        const std::size_t cells = sol.intervals();
        cumulative_.assign(cells + 1, 0.0);
        for (std::size_t k = 0; k < cells; ++k) {
            cumulative_[k + 1] = cumulative_[k] + panel(sol.grid[k], sol.grid[k + 1]);
        }
    }

    [[nodiscard]] HEvaluation evaluate(double t) const
    {
        const RadialEigenSolution& sol = *sol_;
        const LevelSetData ls = level_sets(sol, t);
        const double p = sol.params().p;
        if (!(ls.volume > 0.0)) {
            throw DomainError("h_functional: superlevel set has zero volume");
        }
        double surface = 0.0;
        if (ls.outer_is_crossing) {
            surface += std::pow(std::fabs(phi_(ls.outer_radius)), p - 1.0) *
                       sphere_area(sol.space(), ls.outer_radius);
        }
        if (ls.inner_is_crossing) {
            surface += std::pow(std::fabs(phi_(ls.inner_radius)), p - 1.0) *
                       sphere_area(sol.space(), ls.inner_radius);
        }
        const double bulk = volume_integral(ls.inner_radius, ls.outer_radius);
        const double value =
            (surface + sol.params().beta * ls.exterior_area - (p - 1.0) * bulk) / ls.volume;
        return {ls, value};
    }

    [[nodiscard]] double operator()(double t) const { return evaluate(t).value; }

    /// int_{a <= r <= b} |phi|^p dV over the radial shell.
    [[nodiscard]] double volume_integral(double a, double b) const
    {
        return prefix(b) - prefix(a);
    }

private:
    [[nodiscard]] double panel(double a, double b) const
    {
        const SpaceForm& sf = sol_->space();
        const double p = sol_->params().p;
        const int n = sf.dimension;
        const double scale = n * unit_ball_volume(n);
        return scale * numerics::gauss_legendre5(
                           [&](double r) {
                               return std::pow(std::fabs(phi_(r)), p) *
                                      detail::ipow(detail::warp(sf, r), n - 1);
                           },
                           a, b);
    }

    [[nodiscard]] double prefix(double r) const
    {
        const RadialEigenSolution& sol = *sol_;
        if (r <= sol.grid.front()) {
            return 0.0;
        }
        const std::size_t k = sol.locate(r);
        return cumulative_[k] + panel(sol.grid[k], r);
    }

    const RadialEigenSolution* sol_;
    Phi phi_;
    std::vector<double> cumulative_;
};

template <class Phi>
HFunctional(const RadialEigenSolution&, Phi) -> HFunctional<Phi>;

/// Convenience: single evaluation of H(t, phi).
template <class Phi>
[[nodiscard]] double h_functional(const RadialEigenSolution& sol, Phi phi, double t)
{
    return HFunctional(sol, std::move(phi))(t);
}

/// The solution's own log-gradient |v'|/v as a callable test function.
[[nodiscard]] inline auto log_gradient_phi(const RadialEigenSolution& sol)
{
    return [&sol](double r) { return sol.f_at(r); };
}

/// 199 equispaced levels k/200, nudged off the boundary values of v.
[[nodiscard]] inline std::vector<double> default_level_grid(const RadialEigenSolution& sol,
                                                            int count = 199)
{
    std::vector<double> boundary_values{sol.v.back()};
    if (!sol.domain().is_ball()) {
        boundary_values.push_back(sol.v.front());
    }
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) {
        double t = static_cast<double>(k) / (count + 1);
        for (const double b : boundary_values) {
            if (std::fabs(t - b) < 1e-9) {
                t = b + 2e-9;
            }
        }
        levels.push_back(t);
    }
    return levels;
}

/// default_level_grid plus `count` equispaced levels in (min boundary value, 1).
/// Below the smallest boundary value U_t is the whole domain, so nearly flat
/// profiles leave the default grid with almost no informative levels.
[[nodiscard]] inline std::vector<double> range_level_grid(const RadialEigenSolution& sol,
                                                          int count = 199)
{
    std::vector<double> levels = default_level_grid(sol, count);
    const double floor = std::min(sol.v.front(), sol.v.back());
    const std::vector<double> boundary_values{sol.v.front(), sol.v.back()};
    for (int k = 1; k <= count; ++k) {
        double t = floor + (1.0 - floor) * k / (count + 1);
        for (const double b : boundary_values) {
            if (std::fabs(t - b) < 1e-9) {
                t = b + 2e-9;
            }
        }
        if (t < 1.0) {
            levels.push_back(t);
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

/// max over the level grid of |H(t, |v'|/v) - lambda|; empty levels are skipped.
[[nodiscard]] inline double verify_log_gradient_identity(const RadialEigenSolution& sol,
                                                         const std::vector<double>& levels)
{
    const HFunctional h(sol, log_gradient_phi(sol));
    double worst = 0.0;
    for (const double t : levels) {
        if (!(t > 0.0 && t < 1.0)) {
            continue;
        }
        worst = std::max(worst, std::fabs(h(t) - sol.lambda));
    }
    return worst;
}

struct HMinimum {
    double t_star = std::numeric_limits<double>::quiet_NaN();
    double h_min = std::numeric_limits<double>::infinity();
};

/// Grid minimiser of H(., phi); some level should satisfy H <= lambda.
template <class Phi>
[[nodiscard]] HMinimum search_h_minimum(const RadialEigenSolution& sol, Phi phi,
                                       const std::vector<double>& levels)
{
    const HFunctional h(sol, std::move(phi));
    HMinimum best;
    for (const double t : levels) {
        if (!(t > 0.0 && t < 1.0)) {
            continue;
        }
        const double value = h(t);
        if (value < best.h_min) {
            best = {t, value};
        }
    }
    return best;
}

/// One row of an H scan.
struct HScanRow {
    double t;
    double volume;
    double interior_area;
    double exterior_area;
    double h;
};

template <class Phi>
[[nodiscard]] std::vector<HScanRow> h_scan(const RadialEigenSolution& sol, Phi phi,
                                           const std::vector<double>& levels)
{
    const HFunctional h(sol, std::move(phi));
    std::vector<HScanRow> rows;
    rows.reserve(levels.size());
    for (const double t : levels) {
        if (!(t > 0.0 && t < 1.0)) {
            continue;
        }
        const HEvaluation e = h.evaluate(t);
        rows.push_back({t, e.level.volume, e.level.interior_area, e.level.exterior_area, e.value});
    }
    return rows;
}

} // namespace robinbd
