// Solves the Robin problem on a planar disk and on an annulus of the same
// volume in each model space, and prints the comparison against the ball.

#include <cstdio>

#include "robinbd/robinbd.hpp"

int main()
{
    using namespace robinbd;

    const RobinParams params{2.0, 1.0};
    const auto disk = first_eigenvalue(SpaceForm::euclidean(2), params, RadialDomain::ball(1.0));
    std::printf("unit disk, p=2, beta=1: lambda = %.12g\n", disk.lambda);

    const RadialDomain shell = RadialDomain::annulus(0.5, 1.0);
    for (const int kappa : {-1, 0, 1}) {
        const SpaceForm sf = SpaceForm::model(kappa, 3);
        const ComparisonRecord rec = compare(sf, {3.0, 1.0}, shell);
        std::printf("%-10s %s p=3: lambda = %.10g, ball(%.6g) = %.10g, gap = %.4g\n",
                    sf.label().c_str(), rec.domain.c_str(), rec.lambda_domain, rec.sharp_radius,
                    rec.lambda_ball, rec.gap);
    }
    return 0;
}
