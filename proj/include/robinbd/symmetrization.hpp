#pragma once

/**
 * @file symmetrization.hpp
 * @brief Level-set transplant of a radial eigenfunction onto a model ball.
 *
 * Given the normalised profile u of a radial domain and a radial function
 * psi on the model space, the transplant is phi(s) = psi(r(u(s))) where
 * r(t) is the radius of the model ball, scaled by alpha, whose volume
 * matches the superlevel set:
 *
 *   alpha |B_{r(t)}| = |U_t|.
 *
 * Superlevel sets of u then correspond to balls, and sets {phi > l} inside
 * U_t have the same volume as alpha |B_{r(t)} ∩ {psi > l}|. Both sides are
 * computed here independently: the left side from roots of phi - l along the
 * source profile, the right side from roots of psi - l on the model radius.
 */

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "robinbd/errors.hpp"
#include "robinbd/levelsets_h.hpp"
#include "robinbd/model_spaces.hpp"
#include "robinbd/numerics.hpp"
#include "robinbd/radial_solver.hpp"

namespace robinbd {

struct VolumePair {
    double lhs;
    double rhs;
};

/// Both sides of the L^q identity, each by direct radial quadrature and by
/// the layer-cake formula int_0^inf |{|g| > l}| d(l^q).
struct NormIdentity {
    double lhs;
    double rhs;
    double lhs_layer_cake;
    double rhs_layer_cake;
};

namespace detail {

/// Sorted roots of g on [a, b], located from sign changes of the samples
/// g(x_k) on the given nodes and refined by TOMS 748.
template <class G>
std::vector<double> sampled_roots(const G& g, const std::vector<double>& nodes,
                                  const std::vector<double>& samples)
{
    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double g0 = samples[k];
        const double g1 = samples[k + 1];
        if (g0 == 0.0) {
            roots.push_back(nodes[k]);
        } else if ((g0 < 0.0) != (g1 < 0.0) && g1 != 0.0) {
            roots.push_back(numerics::bracket_root(g, nodes[k], nodes[k + 1]));
        }
    }
    if (!samples.empty() && samples.back() == 0.0) {
        roots.push_back(nodes.back());
    }
    return roots;
}

/// Total length, in the measure `mass(a, b)`, of {x in [a, b] : g(x) > 0},
/// given the sorted roots of g.
template <class G, class Mass>
double positive_measure(const G& g, const std::vector<double>& roots, double a, double b,
                        const Mass& mass)
{
    if (!(b > a)) {
        return 0.0;
    }
    std::vector<double> cuts{a};
    for (const double r : roots) {
        if (r > a && r < b) {
            cuts.push_back(r);
        }
    }
    cuts.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (g(0.5 * (cuts[k] + cuts[k + 1])) > 0.0) {
            total += mass(cuts[k], cuts[k + 1]);
        }
    }
    return total;
}

} // namespace detail

/**
 * Transplant of a solved radial profile onto a model space.
 *
 * The source solution must outlive the transplant. `psi` is any callable on
 * [0, sharp_radius()] of the target model.
 */
template <class Psi>
class Transplant {
public:
    Transplant(const RadialEigenSolution& source, SpaceForm target, Psi psi, double alpha = 1.0,
               int model_cells = 4096)
        : src_(&source), target_(std::move(target)), psi_(std::move(psi)), alpha_(alpha)
    {
        target_.validate();
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw DomainError("Transplant: alpha must lie in (0, 1]");
        }
        source_volume_ = source.domain().volume(source.space());
        sharp_radius_ = ball_radius_for_volume(target_, source_volume_ / alpha_);

        sigma_.resize(static_cast<std::size_t>(model_cells) + 1);
        psi_nodes_.resize(sigma_.size());
        for (std::size_t k = 0; k < sigma_.size(); ++k) {
            sigma_[k] = (k + 1 == sigma_.size()) ? sharp_radius_ : sharp_radius_ * k / model_cells;
            psi_nodes_[k] = psi_(sigma_[k]);
        }

        // Ties in v would make phi ambiguous on a plateau; v is analytic, so
        // any tie on the grid means the profile is unusable.
        const double peak_r = source.max_location();
        for (std::size_t k = 0; k + 1 < source.grid.size(); ++k) {
            const bool rising = source.grid[k + 1] <= peak_r;
            const bool falling = source.grid[k] >= peak_r;
            if ((rising && !(source.v[k + 1] > source.v[k])) ||
                (falling && !(source.v[k + 1] < source.v[k]))) {
                throw NumericalError("Transplant: source profile is not strictly monotone per segment",
                                     source.v[k + 1] - source.v[k]);
            }
        }

        split_points_.push_back(source.max_location());
        if (!source.domain().is_ball()) {
            const double b_in = source.v.front();
            const double b_out = source.v.back();
            const double peak = source.max_location();
            if (b_in > b_out && peak < source.grid.back()) {
                split_points_.push_back(detail::crossing_radius(source, b_in, peak, source.grid.back()));
            } else if (b_out > b_in && peak > source.grid.front()) {
                split_points_.push_back(detail::crossing_radius(source, b_out, source.grid.front(), peak));
            }
        }
        std::sort(split_points_.begin(), split_points_.end());

        // Roots of phi - l can pair up inside the cell holding the peak, so
        // the scan nodes include the peak and the kink radii.
        scan_nodes_ = source.grid;
        scan_nodes_.insert(scan_nodes_.end(), split_points_.begin(), split_points_.end());
        std::sort(scan_nodes_.begin(), scan_nodes_.end());
        scan_nodes_.erase(std::unique(scan_nodes_.begin(), scan_nodes_.end()), scan_nodes_.end());
        phi_nodes_.reserve(scan_nodes_.size());
        for (const double s : scan_nodes_) {
            phi_nodes_.push_back(phi(s));
        }
        phi_abs_ = abs_copy(phi_nodes_);
        psi_abs_ = abs_copy(psi_nodes_);
    }

    [[nodiscard]] const RadialEigenSolution& source() const noexcept { return *src_; }
    [[nodiscard]] const SpaceForm& target() const noexcept { return target_; }
    [[nodiscard]] double alpha() const noexcept { return alpha_; }
    [[nodiscard]] double source_volume() const noexcept { return source_volume_; }

    /// Radius of the volume-matched model ball, r(0+).
    [[nodiscard]] double sharp_radius() const noexcept { return sharp_radius_; }

    /// |U_t|, extended by |Omega| for t <= 0 and by 0 for t >= 1.
    [[nodiscard]] double superlevel_volume(double t) const
    {
        if (t <= 0.0) {
            return source_volume_;
        }
        if (t >= 1.0) {
            return 0.0;
        }
        try {
            return level_sets(*src_, t).volume;
        } catch (const EmptyLevelSet&) {
            return 0.0;
        }
    }

    /// Model radius r(t) with alpha |B_{r(t)}| = |U_t|.
    [[nodiscard]] double r_kappa(double t) const
    {
        if (t <= 0.0) {
            return sharp_radius_;
        }
        return ball_radius_for_volume(target_, superlevel_volume(t) / alpha_);
    }

    /// Transplanted function at source radius s.
    [[nodiscard]] double phi(double s) const { return psi_(r_kappa(src_->v_at(s))); }

    [[nodiscard]] double psi(double sigma) const { return psi_(sigma); }

    /// |U_t ∩ {phi > l}| against alpha |B_{r(t)} ∩ {psi > l}|.
    [[nodiscard]] VolumePair check_equimeasurable(double t, double l) const
    {
        const auto [a, b] = source_range(t);
        const double rt = r_kappa(t);
        return {source_measure(l, a, b), model_measure(l, rt)};
    }

    /// int_{U_t} |phi|^q against alpha int_{B_{r(t)}} |psi|^q, q > 0.
    [[nodiscard]] NormIdentity lp_norm_identity(double t, double q) const
    {
        if (!(q > 0.0)) {
            throw DomainError("lp_norm_identity: exponent must be positive");
        }
        const auto [a, b] = source_range(t);
        const double rt = r_kappa(t);
        NormIdentity out{};
        if (!(b > a)) {
            return out;
        }
        const std::vector<double> cuts = source_cuts(a, b);
        const SpaceForm& src_sf = src_->space();
        const auto source_integrand = [&](double s) {
            return std::pow(std::fabs(phi(s)), q) * volume_density(src_sf, s);
        };
        const auto model_integrand = [&](double sigma) {
            return std::pow(std::fabs(psi_(sigma)), q) * volume_density(target_, sigma);
        };
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            out.lhs += numerics::integrate(source_integrand, cuts[k], cuts[k + 1], kTol, kDepth);
        }
        out.rhs = alpha_ * numerics::integrate(model_integrand, 0.0, rt, kTol, kDepth);

        // Layer cake in y = l^q, which removes the l^{q-1} endpoint weight.
        std::vector<double> src_kinks;
        for (const double c : cuts) {
            src_kinks.push_back(std::fabs(phi(c)));
        }
        double src_top = *std::max_element(src_kinks.begin(), src_kinks.end());
        for (std::size_t k = 0; k < scan_nodes_.size(); ++k) {
            if (scan_nodes_[k] >= a && scan_nodes_[k] <= b) {
                src_top = std::max(src_top, phi_abs_[k]);
            }
        }
        std::vector<double> model_kinks{std::fabs(psi_(0.0)), std::fabs(psi_(rt))};
        double model_top = std::max(model_kinks[0], model_kinks[1]);
        for (std::size_t k = 0; k < sigma_.size() && sigma_[k] <= rt; ++k) {
            model_top = std::max(model_top, psi_abs_[k]);
        }
        // Slack above the sampled maximum covers peaks between nodes.
        out.lhs_layer_cake = layer_cake([&](double l) { return source_measure_abs(l, a, b); },
                                        src_kinks, src_top * (1.0 + 1e-6), q);
        out.rhs_layer_cake = layer_cake([&](double l) { return model_measure_abs(l, rt); },
                                        model_kinks, model_top * (1.0 + 1e-6), q);
        return out;
    }

private:
    // The profiles are C^1 piecewise cubics, so adaptive quadrature converges
    // only algebraically; this tolerance leaves two digits of margin below
    // the 1e-6 targets at a bounded cost.
    static constexpr double kTol = 1e-9;
    static constexpr unsigned kDepth = 10;
    // Each layer-cake sample costs a root search, so that route runs coarser.
    static constexpr double kLayerTol = 1e-8;
    static constexpr unsigned kLayerDepth = 8;

    static double volume_density(const SpaceForm& sf, double r)
    {
        const int n = sf.dimension;
        return n * unit_ball_volume(n) * detail::ipow(detail::warp(sf, r), n - 1);
    }

    /// Radial interval [a, b] of U_t in the source.
    [[nodiscard]] std::pair<double, double> source_range(double t) const
    {
        if (t <= 0.0) {
            return {src_->grid.front(), src_->grid.back()};
        }
        if (t >= 1.0 || !(t < src_->v_at(src_->max_location()))) {
            return {src_->max_location(), src_->max_location()};
        }
        const LevelSetData ls = level_sets(*src_, t);
        return {ls.inner_radius, ls.outer_radius};
    }

    [[nodiscard]] std::vector<double> source_cuts(double a, double b) const
    {
        std::vector<double> cuts{a};
        for (const double c : split_points_) {
            if (c > a && c < b) {
                cuts.push_back(c);
            }
        }
        cuts.push_back(b);
        return cuts;
    }

    [[nodiscard]] double source_shell(double a, double b) const
    {
        const SpaceForm& sf = src_->space();
        return ball_volume(sf, b) - (a > 0.0 ? ball_volume(sf, a) : 0.0);
    }

    [[nodiscard]] double model_shell(double a, double b) const
    {
        return alpha_ * (ball_volume(target_, b) - (a > 0.0 ? ball_volume(target_, a) : 0.0));
    }

    template <class Value>
    [[nodiscard]] double source_measure_of(const Value& value, const std::vector<double>& samples,
                                           double l, double a, double b) const
    {
        const auto g = [&](double s) { return value(s) - l; };
        std::vector<double> shifted(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) {
            shifted[k] = samples[k] - l;
        }
        const auto roots = detail::sampled_roots(g, scan_nodes_, shifted);
        return detail::positive_measure(g, roots, a, b,
                                        [&](double x, double y) { return source_shell(x, y); });
    }

    template <class Value>
    [[nodiscard]] double model_measure_of(const Value& value, const std::vector<double>& samples,
                                          double l, double rt) const
    {
        const auto g = [&](double sigma) { return value(sigma) - l; };
        std::vector<double> shifted(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) {
            shifted[k] = samples[k] - l;
        }
        const auto roots = detail::sampled_roots(g, sigma_, shifted);
        return detail::positive_measure(g, roots, 0.0, rt,
                                        [&](double x, double y) { return model_shell(x, y); });
    }

    [[nodiscard]] double source_measure(double l, double a, double b) const
    {
        return source_measure_of([&](double s) { return phi(s); }, phi_nodes_, l, a, b);
    }

    [[nodiscard]] double model_measure(double l, double rt) const
    {
        return model_measure_of([&](double sigma) { return psi_(sigma); }, psi_nodes_, l, rt);
    }

    [[nodiscard]] double source_measure_abs(double l, double a, double b) const
    {
        return source_measure_of([&](double s) { return std::fabs(phi(s)); }, phi_abs_, l, a, b);
    }

    [[nodiscard]] double model_measure_abs(double l, double rt) const
    {
        return model_measure_of([&](double sigma) { return std::fabs(psi_(sigma)); }, psi_abs_, l,
                                rt);
    }

    static std::vector<double> abs_copy(const std::vector<double>& x)
    {
        std::vector<double> out(x.size());
        std::transform(x.begin(), x.end(), out.begin(), [](double y) { return std::fabs(y); });
        return out;
    }

    /// int_0^{top^q} measure(y^{1/q}) dy, split at the kink levels.
    template <class Measure>
    static double layer_cake(const Measure& measure, std::vector<double> kinks, double top, double q)
    {
        if (!(top > 0.0)) {
            return 0.0;
        }
        kinks.push_back(0.0);
        kinks.push_back(top);
        std::sort(kinks.begin(), kinks.end());
        kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
        const auto integrand = [&](double y) { return measure(std::pow(y, 1.0 / q)); };
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
            total += numerics::integrate(integrand, std::pow(kinks[k], q), std::pow(kinks[k + 1], q),
                                         kLayerTol, kLayerDepth);
        }
        return total;
    }

    const RadialEigenSolution* src_;
    SpaceForm target_;
    Psi psi_;
    double alpha_;
    double source_volume_ = 0.0;
    double sharp_radius_ = 0.0;
    std::vector<double> scan_nodes_;
    std::vector<double> phi_nodes_;
    std::vector<double> phi_abs_;
    std::vector<double> psi_abs_;
    std::vector<double> sigma_;
    std::vector<double> psi_nodes_;
    std::vector<double> split_points_;
};

template <class Psi>
Transplant(const RadialEigenSolution&, SpaceForm, Psi, double) -> Transplant<Psi>;
template <class Psi>
Transplant(const RadialEigenSolution&, SpaceForm, Psi) -> Transplant<Psi>;

} // namespace robinbd
