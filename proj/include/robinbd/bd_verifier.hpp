#pragma once

/**
 * @file bd_verifier.hpp
 * @brief Comparison of Robin eigenvalues against volume-matched model balls.
 *
 * For a radial domain Omega in a model space and a volume ratio alpha in
 * (0, 1], the comparison ball has radius R# with alpha |B_{R#}| = |Omega|.
 * The harness solves both eigenvalue problems, records the gap
 * lambda(Omega) - lambda(B_{R#}) and the perimeter gap
 * |∂Omega| - alpha |∂B_{R#}|, and aggregates over parameter grids.
 * Rectangles with p = 2 are handled by separation of variables.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "robinbd/errors.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/numerics.hpp"
#include "robinbd/radial_solver.hpp"

namespace robinbd {

/// Eigenvalue gaps above this fraction of lambda_ball (negated) count as failures.
inline constexpr double kGapTolerance = 1e-6;
inline constexpr double kPerimeterTolerance = 1e-10;

struct ComparisonRecord {
    SpaceForm space;
    RobinParams params;
    std::string domain;  ///< label, e.g. "annulus(0.5,2)" or "rect(2,1)"
    double alpha = 1.0;

    double lambda_domain = std::numeric_limits<double>::quiet_NaN();
    double sharp_radius = std::numeric_limits<double>::quiet_NaN();
    double lambda_ball = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
    double perimeter = std::numeric_limits<double>::quiet_NaN();
    double sharp_perimeter = std::numeric_limits<double>::quiet_NaN();
    double isoperimetric_gap = std::numeric_limits<double>::quiet_NaN();

    /// Set for compact-model domains reaching past the equator, where the
    /// radial first eigenfunction is least certain. Flagged cells are still
    /// checked.
    bool flagged = false;
    bool passed = false;
    std::string error;  ///< non-empty if the cell could not be computed
};

struct PerimeterPair {
    double perimeter;
    double sharp_perimeter;
};

/// Radius of the model ball with alpha |B| = |dom|.
[[nodiscard]] inline double sharp_radius(const SpaceForm& sf, const RadialDomain& dom,
                                         double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("alpha must lie in (0, 1]");
    }
    return ball_radius_for_volume(sf, dom.volume(sf) / alpha);
}

/// |∂dom| against alpha |∂B_{R#}|.
[[nodiscard]] inline PerimeterPair isoperimetric_check(const SpaceForm& sf,
                                                       const RadialDomain& dom, double alpha)
{
    sf.validate();
    dom.validate(sf);
    const double r = sharp_radius(sf, dom, alpha);
    return {dom.boundary_area(sf), alpha * sphere_area(sf, r)};
}

namespace detail {

inline bool beyond_equator(const SpaceForm& sf, const RadialDomain& dom)
{
    return sf.is_compact() && dom.outer_radius() > 0.5 * sf.max_radius();
}

inline void finish_record(ComparisonRecord& rec)
{
    rec.gap = rec.lambda_domain - rec.lambda_ball;
    rec.isoperimetric_gap = rec.perimeter - rec.sharp_perimeter;
    rec.passed = rec.gap >= -kGapTolerance * rec.lambda_ball &&
                 rec.isoperimetric_gap >= -kPerimeterTolerance;
}

} // namespace detail

/// Solve on dom and on its volume-matched ball and record both.
[[nodiscard]] inline ComparisonRecord compare(const SpaceForm& sf, const RobinParams& params,
                                              const RadialDomain& dom, double alpha = 1.0,
                                              const SolverOptions& opts = {})
{
    ComparisonRecord rec{sf, params, dom.label(), alpha};
    rec.flagged = detail::beyond_equator(sf, dom);
    rec.lambda_domain = first_eigenvalue(sf, params, dom, opts).lambda;
    rec.sharp_radius = sharp_radius(sf, dom, alpha);
    rec.lambda_ball = first_eigenvalue(sf, params, RadialDomain::ball(rec.sharp_radius), opts).lambda;
    const PerimeterPair per = isoperimetric_check(sf, dom, alpha);
    rec.perimeter = per.perimeter;
    rec.sharp_perimeter = per.sharp_perimeter;
    detail::finish_record(rec);
    return rec;
}

/// Even-mode Robin eigenvalue of -u'' on an interval of length L:
/// mu^2 with mu tan(mu L / 2) = beta, mu in (0, pi / L).
[[nodiscard]] inline double robin_interval_eigenvalue(double length, double beta)
{
    if (!(length > 0.0) || !(beta > 0.0)) {
        throw DomainError("robin_interval_eigenvalue: length and beta must be positive");
    }
    const double half = 0.5 * length;
    const double top = kPi / length;
    // g increases from -beta to +inf on the open bracket.
    const auto g = [&](double mu) { return mu * std::tan(mu * half) - beta; };
    double hi = std::nextafter(top, 0.0);
    while (!(g(hi) > 0.0)) {
        hi = std::nextafter(hi, 0.0);
    }
    const double mu = numerics::bisect_root(g, 0.0, hi, 1e-15);
    return mu * mu;
}

/// p = 2 Robin eigenvalue of the Lx x Ly rectangle against the disk of equal area.
[[nodiscard]] inline ComparisonRecord rectangle_check(const RobinParams& params, double lx,
                                                      double ly, const SolverOptions& opts = {})
{
    params.validate();
    if (params.p != 2.0) {
        throw Unsupported("rectangle_check: separation of variables needs p = 2");
    }
    if (!(lx > 0.0) || !(ly > 0.0)) {
        throw DomainError("rectangle_check: side lengths must be positive");
    }
    const SpaceForm plane = SpaceForm::euclidean(2);
    ComparisonRecord rec{plane, params,
                         "rect(" + detail::format_short(lx) + "," + detail::format_short(ly) + ")",
                         1.0};
    rec.lambda_domain = robin_interval_eigenvalue(lx, params.beta) +
                        robin_interval_eigenvalue(ly, params.beta);
    rec.sharp_radius = std::sqrt(lx * ly / kPi);
    rec.lambda_ball =
        first_eigenvalue(plane, params, RadialDomain::ball(rec.sharp_radius), opts).lambda;
    rec.perimeter = 2.0 * (lx + ly);
    rec.sharp_perimeter = 2.0 * kPi * rec.sharp_radius;
    detail::finish_record(rec);
    return rec;
}

struct FlatDiskModel {
    double theta;
    double lambda_disk;
};

/// theta_{m,n}(avr) and the Robin eigenvalue of the flat n-disk of radius R.
[[nodiscard]] inline FlatDiskModel flat_disk_model(int n, int m, double avr,
                                                   const RobinParams& params, double radius,
                                                   const SolverOptions& opts = {})
{
    const double theta = theta_mn(avr, n, m);
    const double lambda =
        first_eigenvalue(SpaceForm::euclidean(n), params, RadialDomain::ball(radius), opts).lambda;
    return {theta, lambda};
}

struct SweepGrid {
    std::vector<int> kappas;
    std::vector<int> dims;
    std::vector<double> ps;
    std::vector<double> betas;
    std::vector<RadialDomain> domains;
    double alpha = 1.0;

    /// kappa in {-1, 0, 1}, n in {2, 3}, p in {1.5, 2, 3}, beta in {0.1, 1, 10},
    /// annuli with R2/R1 in {2, 4}: 108 cells.
    [[nodiscard]] static SweepGrid standard()
    {
        return {{-1, 0, 1},
                {2, 3},
                {1.5, 2.0, 3.0},
                {0.1, 1.0, 10.0},
                {RadialDomain::annulus(0.5, 1.0), RadialDomain::annulus(0.5, 2.0)},
                1.0};
    }

    [[nodiscard]] std::size_t size() const noexcept
    {
        return kappas.size() * dims.size() * ps.size() * betas.size() * domains.size();
    }
};

struct SweepCell {
    SpaceForm space;
    RobinParams params;
    RadialDomain domain;
};

/// Cells in row-major order over (kappa, n, p, beta, domain).
[[nodiscard]] inline std::vector<SweepCell> sweep_cells(const SweepGrid& grid)
{
    std::vector<SweepCell> cells;
    cells.reserve(grid.size());
    for (const int kappa : grid.kappas) {
        for (const int n : grid.dims) {
            for (const double p : grid.ps) {
                for (const double beta : grid.betas) {
                    for (const RadialDomain& dom : grid.domains) {
                        cells.push_back({SpaceForm::model(kappa, n), {p, beta}, dom});
                    }
                }
            }
        }
    }
    return cells;
}

struct SweepSummary {
    std::size_t cells = 0;
    std::size_t failures = 0;
    double min_gap = std::numeric_limits<double>::quiet_NaN();
};

struct SweepReport {
    std::vector<ComparisonRecord> records;
    SweepSummary summary;
};

/// compare() over every cell; per-cell errors are recorded, not thrown.
/// Cells may run on `threads` workers; records keep cell order.
[[nodiscard]] inline SweepReport sweep(const SweepGrid& grid, const SolverOptions& opts = {},
                                       unsigned threads = 1)
{
    const std::vector<SweepCell> cells = sweep_cells(grid);
    SweepReport report;
    report.records.resize(cells.size());

    const auto run_cell = [&](std::size_t i) {
        const SweepCell& c = cells[i];
        try {
            report.records[i] = compare(c.space, c.params, c.domain, grid.alpha, opts);
        } catch (const std::exception& e) {
            ComparisonRecord rec{c.space, c.params, c.domain.label(), grid.alpha};
            rec.flagged = detail::beyond_equator(c.space, c.domain);
            rec.error = e.what();
            report.records[i] = rec;
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    if (threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            run_cell(i);
        }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < cells.size(); i += threads) {
                    run_cell(i);
                }
            });
        }
    }

    report.summary.cells = report.records.size();
    for (const ComparisonRecord& rec : report.records) {
        if (!rec.error.empty() || !rec.passed) {
            ++report.summary.failures;
        }
        if (rec.error.empty() &&
            (std::isnan(report.summary.min_gap) || rec.gap < report.summary.min_gap)) {
            report.summary.min_gap = rec.gap;
        }
    }
    return report;
}

} // namespace robinbd
