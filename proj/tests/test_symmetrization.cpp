#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "robinbd/symmetrization.hpp"

using namespace robinbd;

TEST(Transplant, DiskOntoItselfFollowsBesselLevels)
{
    const double mu = oracle::disk_robin_mu(1.0);
    const SpaceForm plane = SpaceForm::euclidean(2);
    const auto sol = first_eigenvalue(plane, {2.0, 1.0}, RadialDomain::ball(1.0));
    const Transplant tr(sol, plane, [](double s) { return s; });
    EXPECT_NEAR(tr.sharp_radius(), 1.0, 1e-14);
    const double rho =
        oracle::bisect([&](double r) { return oracle::bessel_j(0, mu * r) - 0.9; }, 0.0, 1.0);
    EXPECT_NEAR(tr.r_kappa(0.9), rho, 1e-7);
    EXPECT_NEAR(tr.r_kappa(0.5 * sol.v.back()), 1.0, 1e-12);
    // Radial decreasing source: phi(s) = psi(s).
    for (const double s : {0.1, 0.4, 0.77}) {
        EXPECT_NEAR(tr.phi(s), s, 1e-9);
    }
}

TEST(Transplant, RadiusShrinksWithLevel)
{
    const auto sol = first_eigenvalue(SpaceForm::hyperbolic(3), {3.0, 1.0}, RadialDomain::annulus(0.5, 1.0));
    const Transplant tr(sol, SpaceForm::hyperbolic(3), [](double) { return 1.0; });
    double previous = tr.r_kappa(0.0);
    EXPECT_DOUBLE_EQ(previous, tr.sharp_radius());
    for (int k = 1; k < 100; ++k) {
        const double r = tr.r_kappa(0.01 * k);
        EXPECT_LE(r, previous);
        previous = r;
    }
    EXPECT_EQ(tr.superlevel_volume(1.0), 0.0);
    EXPECT_NEAR(tr.superlevel_volume(-1.0), tr.source_volume(), 0.0);
}

TEST(Transplant, TrivialLevels)
{
    const SpaceForm sf = SpaceForm::sphere(3);
    const auto sol = first_eigenvalue(sf, {2.0, 1.0}, RadialDomain::annulus(0.5, 1.0));
    const Transplant tr(sol, sf, [](double s) { return std::exp(-s); });
    for (const double t : {0.2, 0.6, 0.95}) {
        const VolumePair all = tr.check_equimeasurable(t, 0.0);
        EXPECT_NEAR(all.lhs, tr.superlevel_volume(t), 1e-12);
        EXPECT_NEAR(all.rhs, ball_volume(sf, tr.r_kappa(t)), 1e-12);
        const VolumePair none = tr.check_equimeasurable(t, 2.0);
        EXPECT_EQ(none.lhs, 0.0);
        EXPECT_EQ(none.rhs, 0.0);
    }
}

TEST(Transplant, ConstantPsiNorms)
{
    const SpaceForm sf = SpaceForm::euclidean(3);
    const auto sol = first_eigenvalue(sf, {2.0, 1.0}, RadialDomain::annulus(0.5, 2.0));
    const double c = 1.7;
    const Transplant tr(sol, sf, [c](double) { return c; });
    for (const double t : {0.3, 0.8}) {
        const NormIdentity id = tr.lp_norm_identity(t, 2.0);
        const double ref = c * c * tr.superlevel_volume(t);
        EXPECT_NEAR(id.lhs, ref, 1e-8 * ref);
        EXPECT_NEAR(id.rhs, ref, 1e-8 * ref);
    }
    EXPECT_THROW((void)tr.lp_norm_identity(0.5, 0.0), DomainError);
}

TEST(Transplant, AnnulusToBallInAllGeometries)
{
    for (const int kappa : {-1, 0, 1}) {
        const SpaceForm sf = SpaceForm::model(kappa, 3);
        const RobinParams params{3.0, 1.0};
        const auto sol = first_eigenvalue(sf, params, RadialDomain::annulus(0.5, 1.0));
        const Transplant tr(sol, sf, [](double s) { return 1.0 + std::cos(2.0 * s); });
        const double omega = tr.source_volume();
        for (const double t : {0.1, 0.5, 0.9}) {
            for (const double l : {0.3, 1.0, 1.6}) {
                const VolumePair m = tr.check_equimeasurable(t, l);
                EXPECT_NEAR(m.lhs, m.rhs, 1e-7 * omega) << kappa << " t = " << t << " l = " << l;
            }
            for (const double q : {params.p - 1.0, params.p}) {
                const NormIdentity id = tr.lp_norm_identity(t, q);
                EXPECT_NEAR(id.lhs, id.rhs, 1e-6 * id.rhs);
                EXPECT_NEAR(id.lhs_layer_cake, id.lhs, 1e-6 * id.lhs);
                EXPECT_NEAR(id.rhs_layer_cake, id.rhs, 1e-6 * id.rhs);
            }
        }
    }
}

TEST(Transplant, VolumeRatioEnlargesTarget)
{
    const SpaceForm sf = SpaceForm::euclidean(2);
    const auto sol = first_eigenvalue(sf, {2.0, 1.0}, RadialDomain::annulus(0.5, 1.0));
    const Transplant full(sol, sf, [](double s) { return s; }, 1.0);
    const Transplant part(sol, sf, [](double s) { return s; }, 0.8);
    EXPECT_GT(part.sharp_radius(), full.sharp_radius());
    EXPECT_NEAR(0.8 * ball_volume(sf, part.sharp_radius()), full.source_volume(), 1e-12);
    const VolumePair m = part.check_equimeasurable(0.5, 0.4);
    EXPECT_NEAR(m.lhs, 0.8 * ball_volume(sf, part.r_kappa(0.5)) -
                           0.8 * ball_volume(sf, 0.4), 1e-7);
    EXPECT_NEAR(m.lhs, m.rhs, 1e-7);
}

TEST(Transplant, RejectsOversizedTarget)
{
    const SpaceForm sphere = SpaceForm::sphere(3);
    const auto sol = first_eigenvalue(sphere, {2.0, 1.0}, RadialDomain::annulus(0.5, 2.5));
    EXPECT_THROW((void)Transplant(sol, sphere, [](double) { return 1.0; }, 0.2), DomainError);
    EXPECT_THROW((void)Transplant(sol, sphere, [](double) { return 1.0; }, 1.5), DomainError);
}

TEST(Transplant, SourceProfilesAreStrictlyMonotone)
{
    // Every transplant source solved here passes the plateau check.
    for (const int kappa : {-1, 0, 1}) {
        for (const double beta : {0.1, 10.0}) {
            const SpaceForm sf = SpaceForm::model(kappa, 2);
            const auto sol = first_eigenvalue(sf, {1.5, beta}, RadialDomain::annulus(0.5, 2.0));
            EXPECT_NO_THROW((void)Transplant(sol, sf, [](double) { return 1.0; }));
        }
    }
}
